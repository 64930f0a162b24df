"""Diagnostic measures and witness searches over vertex sequences.

Rank functions read connection profiles directly. Witness searches are
backtracking enumerations over candidate masks; each found witness is
re-validated entry by entry before it is returned, and every report says
whether the search ran to completion or stopped at its node budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, InternalInvariantError
from .formulas import Atom, EvalContext, PhiType, eval_atom
from .graphcore import Graph

EXHAUSTIVE = "exhaustive"
BUDGET = "budget"


@dataclass(frozen=True)
class AlternationWitness:
    vertex: int
    indices: tuple[int, ...]


@dataclass(frozen=True)
class ExceptionWitness:
    vertex: int
    minority_indices: tuple[int, ...]


@dataclass(frozen=True)
class TypeDecomposition:
    ex: int
    tau_lt: PhiType | None
    tau_gt: PhiType | None


@dataclass(frozen=True)
class TypeFalsifier:
    indices: tuple[int, ...]
    types: tuple[PhiType, ...]


@dataclass(frozen=True)
class Witness:
    kind: str
    a_seq: tuple[int, ...]
    b_seq: tuple[int, ...]


@dataclass(frozen=True)
class OracleReport:
    witness: object | None
    search: str


def alternation_rank(
    g: Graph, seq,
) -> tuple[int, AlternationWitness | None]:
    """Most sign changes any vertex profile makes along the sequence.

    The witness holds the profiling vertex and one index per block of its
    profile, so the indices alternate in truth value and there are
    rank + 1 of them.
    """
    seq = list(seq)
    for v in seq:
        g.check_vertex(v)
    if not seq:
        return 0, None
    best = -1
    wit = None
    for b in range(g.n):
        idxs = [0]
        prev = g.adj(b, seq[0])
        for i in range(1, len(seq)):
            cur = g.adj(b, seq[i])
            if cur != prev:
                idxs.append(i)
                prev = cur
        if len(idxs) - 1 > best:
            best = len(idxs) - 1
            wit = AlternationWitness(b, tuple(idxs))
    return best, wit


def exception_rank(
    g: Graph, seq,
) -> tuple[int, ExceptionWitness | None]:
    """Largest minority block: max over vertices of min(#true, #false)."""
    seq = list(seq)
    for v in seq:
        g.check_vertex(v)
    if not seq:
        return 0, None
    best = -1
    wit = None
    for b in range(g.n):
        prof = [g.adj(b, v) for v in seq]
        t = sum(prof)
        minority = not (t * 2 > len(seq))
        mins = tuple(i for i, p in enumerate(prof) if p == minority)
        if min(t, len(seq) - t) > best:
            best = min(t, len(seq) - t)
            wit = ExceptionWitness(b, mins)
    return best, wit


def decompose_sequence_types(
    ctx: EvalContext, phi: tuple[Atom, ...], seq, a: int, mode: str = "nip",
) -> tuple[TypeDecomposition | None, TypeFalsifier | None]:
    """Split a sequence around one position by the types vertex a realizes.

    nip mode wants the types constant strictly before and strictly after
    the exceptional index; stable mode wants one constant covering all
    positions but the exception. The smallest workable index wins. On
    failure the falsifier indices reproduce the failure on their own.
    """
    if mode not in ("nip", "stable"):
        raise InputError(f"mode must be 'nip' or 'stable', got {mode!r}")
    seq = list(seq)
    types = [tuple(eval_atom(ctx, atom, a, b) for atom in phi) for b in seq]
    n = len(seq)
    if n == 0:
        return TypeDecomposition(0, None, None), None
    changes = [i for i in range(n - 1) if types[i] != types[i + 1]]
    if mode == "nip":
        if not changes:
            return TypeDecomposition(
                0, None, types[1] if n > 1 else None), None
        cmin, cmax = changes[0], changes[-1]
        if cmax > cmin + 1:
            idxs = (cmin, cmin + 1, cmax, cmax + 1)
            return None, TypeFalsifier(idxs, tuple(types[i] for i in idxs))
        e = cmax
        return TypeDecomposition(
            e,
            types[0] if e > 0 else None,
            types[n - 1] if e < n - 1 else None), None
    for e in range(n):
        rest = types[:e] + types[e + 1:]
        if all(t == rest[0] for t in rest):
            tau = rest[0] if rest else types[0]
            return TypeDecomposition(e, tau, tau), None
    cmin, cmax = changes[0], changes[-1]
    idxs = tuple(dict.fromkeys((cmin, cmin + 1, cmax, cmax + 1)))
    return None, TypeFalsifier(idxs, tuple(types[i] for i in idxs))


def _validate_matrix(g: Graph, a_seq, b_seq, want) -> None:
    for i, a in enumerate(a_seq):
        for j, b in enumerate(b_seq):
            if g.adj(a, b) != want(i, j):
                raise InternalInvariantError(
                    f"witness fails at pair ({a}, {b})")
    if len(set(a_seq)) != len(a_seq) or len(set(b_seq)) != len(b_seq):
        raise InternalInvariantError("witness has repeated vertices")


def order_property_witness(
    g: Graph, k: int, max_nodes: int = 200_000,
) -> OracleReport:
    """Half-graph of order k: E(a_i, b_j) exactly when i <= j.

    Backtracks over the b side, narrowing one candidate mask per a-row;
    the masks end up pairwise disjoint, so any leftover bits give
    distinct a vertices for free.
    """
    if k < 1:
        raise InputError("k must be positive")
    full = g.full_mask()
    nodes = 0
    capped = False

    def dfs(j: int, rows: list[int]) -> Witness | None:
        nonlocal nodes, capped
        if j == k:
            a_seq = tuple((m & -m).bit_length() - 1 for m in rows)
            return Witness("order", a_seq, ())
        for b in range(g.n):
            nodes += 1
            if nodes > max_nodes:
                capped = True
                return None
            nbr = g.rows[b]
            nxt = []
            for i in range(k):
                m = rows[i] & (nbr if i <= j else ~nbr & full)
                if not m:
                    break
                nxt.append(m)
            else:
                found = dfs(j + 1, nxt)
                if found is not None:
                    return Witness(found.kind, found.a_seq,
                                   (b,) + found.b_seq)
            if capped:
                return None
        return None

    wit = dfs(0, [full] * k)
    if wit is not None:
        _validate_matrix(g, wit.a_seq, wit.b_seq, lambda i, j: i <= j)
        return OracleReport(wit, EXHAUSTIVE)
    return OracleReport(None, BUDGET if capped else EXHAUSTIVE)


def shattering_witness(
    g: Graph, k: int, max_nodes: int = 5_000_000,
) -> OracleReport:
    """A k-set whose every subset is some vertex's exact neighborhood trace.

    b_seq lists the tracing vertices by subset value: entry t covers the
    subset with bit i set iff a_seq[i] is in it.
    """
    if k < 1:
        raise InputError("k must be positive")
    want = 1 << k
    nodes = 0
    for combo in combinations(range(g.n), k):
        amask = 0
        for v in combo:
            amask |= 1 << v
        seen: dict[int, int] = {}
        for v in range(g.n):
            nodes += 1
            tr = g.rows[v] & amask
            if tr not in seen:
                seen[tr] = v
        if nodes > max_nodes:
            return OracleReport(None, BUDGET)
        if len(seen) == want:
            b_seq = []
            for t in range(want):
                sub = 0
                for i, v in enumerate(combo):
                    if t >> i & 1:
                        sub |= 1 << v
                b_seq.append(seen[sub])
            wit = Witness("shattering", combo, tuple(b_seq))
            for t, b in enumerate(wit.b_seq):
                sub = 0
                for i, v in enumerate(combo):
                    if t >> i & 1:
                        sub |= 1 << v
                if g.rows[b] & amask != sub:
                    raise InternalInvariantError(
                        f"trace vertex {b} misses subset {t}")
            return OracleReport(wit, EXHAUSTIVE)
    return OracleReport(None, EXHAUSTIVE)


def pairing_index_witness(
    g: Graph, k: int, max_nodes: int = 500_000,
) -> OracleReport:
    """Vertices a_ij adjacent among b_1..b_k to exactly b_i and b_j.

    a_seq follows the lexicographic pair order of combinations(range(k), 2).
    """
    if k < 2:
        raise InputError("k must be at least 2")
    pairs = list(combinations(range(k), 2))
    full = g.full_mask()
    nodes = 0
    capped = False

    def dfs(pos: int, masks: list[int], used: set[int]) -> Witness | None:
        nonlocal nodes, capped
        if pos == k:
            a_seq = tuple((m & -m).bit_length() - 1 for m in masks)
            return Witness("pairing", a_seq, ())
        for b in range(g.n):
            if b in used:
                continue
            nodes += 1
            if nodes > max_nodes:
                capped = True
                return None
            nbr = g.rows[b]
            nxt = []
            for (i, j), m in zip(pairs, masks):
                m2 = m & (nbr if pos in (i, j) else ~nbr & full)
                if not m2:
                    break
                nxt.append(m2)
            else:
                used.add(b)
                found = dfs(pos + 1, nxt, used)
                used.discard(b)
                if found is not None:
                    return Witness(found.kind, found.a_seq,
                                   (b,) + found.b_seq)
            if capped:
                return None
        return None

    wit = dfs(0, [full] * len(pairs), set())
    if wit is not None:
        _validate_matrix(
            g, wit.a_seq, wit.b_seq,
            lambda p, l: l in pairs[p])
        return OracleReport(wit, EXHAUSTIVE)
    return OracleReport(None, BUDGET if capped else EXHAUSTIVE)


@dataclass(frozen=True)
class BipartitePattern:
    kind: str
    left_seq: tuple[int, ...]
    right_seq: tuple[int, ...]


_PATTERN_TESTS = {
    "matching": lambda p, q: p == q,
    "co_matching": lambda p, q: p != q,
    "ladder": lambda p, q: p <= q,
}


def bipartite_canonical_pattern(
    g: Graph, left, right, length: int, max_nodes: int = 500_000,
) -> OracleReport:
    """First of matching, co-matching, ladder found across the two sides.

    The left side must be twin-free with respect to the right side.
    Matching and co-matching searches fix the left vertices in ascending
    order (the pattern is symmetric under position swaps); the ladder
    search is positional and tries every left order.
    """
    left = list(left)
    right = list(right)
    if length < 1:
        raise InputError("length must be positive")
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise InputError("side sequences must be pairwise distinct")
    for v in left + right:
        g.check_vertex(v)
    rmask = 0
    for v in right:
        rmask |= 1 << v
    traces: dict[int, int] = {}
    for v in left:
        tr = g.rows[v] & rmask
        if tr in traces:
            raise InputError(
                f"left vertices {traces[tr]} and {v} are twins over the "
                f"right side")
        traces[tr] = v

    nodes = 0
    capped = False

    def dfs(kind: str, ascending: bool, lefts: list[int],
            rights: list[int]) -> BipartitePattern | None:
        nonlocal nodes, capped
        p = len(lefts)
        if p == length:
            return BipartitePattern(kind, tuple(lefts), tuple(rights))
        test = _PATTERN_TESTS[kind]
        lo = (left.index(lefts[-1]) + 1) if (ascending and lefts) else 0
        for li in range(lo, len(left)):
            l = left[li]
            if not ascending and l in lefts:
                continue
            if any(g.adj(l, rights[q]) != test(p, q) for q in range(p)):
                continue
            for r in right:
                if r in rights:
                    continue
                nodes += 1
                if nodes > max_nodes:
                    capped = True
                    return None
                if g.adj(l, r) != test(p, p):
                    continue
                if any(g.adj(lefts[q], r) != test(q, p) for q in range(p)):
                    continue
                found = dfs(kind, ascending, lefts + [l], rights + [r])
                if found is not None:
                    return found
                if capped:
                    return None
        return None

    for kind in ("matching", "co_matching", "ladder"):
        found = dfs(kind, kind != "ladder", [], [])
        if found is not None:
            test = _PATTERN_TESTS[kind]
            for p, l in enumerate(found.left_seq):
                for q, r in enumerate(found.right_seq):
                    if g.adj(l, r) != test(p, q):
                        raise InternalInvariantError(
                            f"{kind} witness fails at ({l}, {r})")
            return OracleReport(found, EXHAUSTIVE)
        if capped:
            return OracleReport(None, BUDGET)
    return OracleReport(None, EXHAUSTIVE)
