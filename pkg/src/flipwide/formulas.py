"""Restricted formula evaluation over graphs: atomic connections (edge,
bounded distance), neighborhood-equivalence over a third vertex's ball,
complete types over a formula set, and the existential pattern formulas
used for indiscernibility.

Evaluation is mask-based: for a fixed second argument y, each atom has a
bitmask of satisfying first arguments, computed once and cached on the
EvalContext. Pattern evaluation then reduces to AND/OR over masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError
from .graphcore import Graph, ball_mask

EDGE = "edge"
DIST_LEQ = "dist_leq"
EQ_NBHD = "eq_nbhd"


@dataclass(frozen=True)
class Atom:
    """One binary atomic formula phi(x, y).

    kind "edge": adjacency. kind "dist_leq": dist(x, y) <= the context's
    ball radius. kind "eq_nbhd": x is edge-equivalent to constant
    ``const`` over the ball of y (see eval_eq_nbhd).
    """

    kind: str
    const: int | None = None

    def __post_init__(self):
        if self.kind not in (EDGE, DIST_LEQ, EQ_NBHD):
            raise InputError(f"unknown atom kind {self.kind!r}")
        if self.kind == EQ_NBHD and self.const is None:
            raise InputError("eq_nbhd atom needs a constant index")
        if self.kind != EQ_NBHD and self.const is not None:
            raise InputError(f"{self.kind} atom takes no constant index")


def edge_atom() -> Atom:
    return Atom(EDGE)


def dist_atom() -> Atom:
    return Atom(DIST_LEQ)


def eq_atom(const_index: int) -> Atom:
    return Atom(EQ_NBHD, const_index)


# A complete type over a formula list: one polarity per formula, aligned
# by position. Exactly one type holds for any fixed argument pair.
PhiType = tuple[bool, ...]


def all_phi_types(phi_count: int) -> tuple[PhiType, ...]:
    if phi_count < 1:
        raise InputError(f"need at least one formula, got {phi_count}")
    return tuple(product((True, False), repeat=phi_count))


@dataclass(frozen=True)
class Pattern:
    """Sequence of entries, each a nonempty set of types (a disjunction).

    The existential reading: gamma(y_1..y_k) holds iff some single vertex
    z satisfies entry_i(z, y_i) for every i.
    """

    entries: tuple[frozenset, ...]

    def __init__(self, entries: Iterable[Iterable[PhiType]]):
        norm = tuple(frozenset(e) for e in entries)
        if not norm:
            raise InputError("pattern needs at least one entry")
        if any(not e for e in norm):
            raise InputError("pattern entries must be nonempty type sets")
        object.__setattr__(self, "entries", norm)

    def __len__(self) -> int:
        return len(self.entries)


def type_pattern(types: Iterable[PhiType]) -> Pattern:
    """Pattern whose entries are single types (the canonical generators)."""
    return Pattern(tuple((t,) for t in types))


class EvalContext:
    """Graph plus marked constants and per-radius ball caches.

    Immutable after construction apart from internal memo tables; safe to
    share across threads for read-only evaluation.
    """

    __slots__ = ("graph", "constants", "ball_radius", "balls",
                 "constant_rows", "_atom_masks", "_type_masks")

    def __init__(self, graph: Graph, constants: Sequence[int] = (),
                 ball_radius: int = 1):
        if ball_radius < 0:
            raise InputError(f"ball radius must be nonnegative, got {ball_radius}")
        for c in constants:
            graph.check_vertex(c)
        self.graph = graph
        self.constants = tuple(constants)
        self.ball_radius = ball_radius
        self.balls = tuple(ball_mask(graph, v, ball_radius)
                           for v in range(graph.n))
        self.constant_rows = tuple(graph.rows[c] for c in self.constants)
        self._atom_masks: dict = {}
        self._type_masks: dict = {}

    def constant(self, index: int) -> int:
        if not 0 <= index < len(self.constants):
            raise InputError(f"constant index {index} out of range "
                             f"(have {len(self.constants)})")
        return self.constants[index]


def eval_eq_nbhd(ctx: EvalContext, const_index: int, x: int, y: int) -> bool:
    """x and the constant agree over the ball of y.

    True iff x and constants[const_index] have the same membership status
    in ball(y, ball_radius) and identical edge-neighborhoods inside it.
    Row masks make each call O(n/wordsize).
    """
    c = ctx.constant(const_index)
    ctx.graph.check_vertex(x)
    b = ctx.balls[y]
    if (b >> x & 1) != (b >> c & 1):
        return False
    return (ctx.graph.rows[x] & b) == (ctx.constant_rows[const_index] & b)


def atom_mask(ctx: EvalContext, atom: Atom, y: int) -> int:
    """Bitmask of all x with atom(x, y), cached per (atom, y)."""
    key = (atom, y)
    got = ctx._atom_masks.get(key)
    if got is not None:
        return got
    g = ctx.graph
    if atom.kind == EDGE:
        m = g.rows[y]
    elif atom.kind == DIST_LEQ:
        m = ctx.balls[y]
    else:
        c = ctx.constant(atom.const)
        b = ctx.balls[y]
        target = ctx.constant_rows[atom.const] & b
        c_in = b >> c & 1
        m = 0
        for x in range(g.n):
            if (b >> x & 1) == c_in and (g.rows[x] & b) == target:
                m |= 1 << x
    ctx._atom_masks[key] = m
    return m


def eval_atom(ctx: EvalContext, atom: Atom, x: int, y: int) -> bool:
    if atom.kind == EQ_NBHD:
        return eval_eq_nbhd(ctx, atom.const, x, y)
    return bool(atom_mask(ctx, atom, y) >> x & 1)


def type_mask(ctx: EvalContext, phi: tuple[Atom, ...], tau: PhiType,
              y: int) -> int:
    """Bitmask of all x whose complete type over ``phi`` at y is ``tau``."""
    if len(tau) != len(phi):
        raise InputError(f"type arity {len(tau)} does not match |phi|={len(phi)}")
    key = (phi, tau, y)
    got = ctx._type_masks.get(key)
    if got is not None:
        return got
    full = ctx.graph.full_mask()
    m = full
    for atom, positive in zip(phi, tau):
        am = atom_mask(ctx, atom, y)
        m &= am if positive else full & ~am
        if not m:
            break
    ctx._type_masks[key] = m
    return m


def eval_type(ctx: EvalContext, phi: tuple[Atom, ...], tau: PhiType,
              x: int, y: int) -> bool:
    return bool(type_mask(ctx, phi, tau, y) >> x & 1)


def entry_mask(ctx: EvalContext, phi: tuple[Atom, ...], entry: frozenset,
               y: int) -> int:
    m = 0
    for tau in entry:
        m |= type_mask(ctx, phi, tau, y)
    return m


def eval_gamma(ctx: EvalContext, phi: tuple[Atom, ...], pattern: Pattern,
               vertices: Sequence[int]) -> tuple[bool, int | None]:
    """Existential pattern evaluation.

    True iff a single witness z satisfies entry_i(z, vertices[i]) for all
    i; the smallest such z is returned. Witnesses range over the whole
    vertex set, the tuple's own members included.
    """
    if len(vertices) != len(pattern):
        raise InputError(f"tuple length {len(vertices)} does not match "
                         f"pattern length {len(pattern)}")
    m = ctx.graph.full_mask()
    for entry, y in zip(pattern.entries, vertices):
        m &= entry_mask(ctx, phi, entry, y)
        if not m:
            return False, None
    return True, (m & -m).bit_length() - 1


def enumerate_type_patterns(phi_count: int, k: int,
                            cap: int = 100_000) -> list[Pattern]:
    """All patterns of length 1..k with single-type entries.

    These generate indiscernibility for arbitrary boolean-combination
    patterns: types partition witnesses, so the existential over a
    combination entry is the OR over its type choices. Count is
    sum over l of (2^phi_count)^l; exceeding ``cap`` raises.
    """
    if k < 1:
        raise InputError(f"max pattern length must be >= 1, got {k}")
    types = all_phi_types(phi_count)
    t = len(types)
    total = sum(t ** length for length in range(1, k + 1))
    if total > cap:
        raise BudgetExceeded(
            f"{total} type patterns exceed the cap of {cap}; "
            f"lower k or |phi|")
    out = []
    for length in range(1, k + 1):
        for combo in product(types, repeat=length):
            out.append(type_pattern(combo))
    return out
