"""Indiscernibility checking, EM-type computation, and greedy extraction.

A sequence is indiscernible for a pattern when the pattern's existential
truth is the same on every increasing tuple of matching length. The
checker is exact: it either proves constancy or returns two concrete
tuples with different truth.

The cost model rides on witness masks. For a pattern entry e and a
sequence element y, mask(e, y) is the bitmask of witnesses z satisfying
e(z, y); the truth of a tuple is "the AND of its entry masks is nonzero".
Masks are keyed by vertex, so they are shared across every refinement
round of the extractor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence as Seq

from .errors import ExtractionShortfall, InputError
from .formulas import Atom, EvalContext, Pattern, entry_mask
from .graphcore import iter_bits

_NODE_CAP = 50_000


@dataclass(frozen=True)
class Counterexample:
    """Two increasing tuples on which the pattern's truth differs."""

    pattern: Pattern
    true_tuple: tuple[int, ...]
    false_tuple: tuple[int, ...]


@dataclass(frozen=True)
class ExtractionConfig:
    target_length: int
    max_pattern_length: int = 4
    pattern_cap: int = 100_000
    window: int | None = 48
    strategy: str = "greedy_ramsey"

    def __post_init__(self):
        if self.target_length < 1:
            raise InputError(f"target length must be >= 1, got {self.target_length}")
        if self.max_pattern_length < 1:
            raise InputError(
                f"max pattern length must be >= 1, got {self.max_pattern_length}")
        if self.window is not None and self.window < 1:
            raise InputError(f"window must be >= 1 or None, got {self.window}")
        if self.strategy != "greedy_ramsey":
            raise InputError(f"unknown extraction strategy {self.strategy!r}")


def _check_items(items: Seq[int]) -> None:
    if len(set(items)) != len(items):
        raise InputError("sequence items must be pairwise distinct")


def _entry_masks(ctx: EvalContext, phi: tuple[Atom, ...], entries,
                 items: Seq[int]) -> list[list[int]]:
    return [[entry_mask(ctx, phi, e, y) for y in items] for e in entries]


def _find_true_tuple(masks: list[list[int]], alive0: int) -> tuple[int, ...] | None:
    """Smallest-witness search for one increasing tuple with truth True.

    Per witness z, the positions usable at entry j are a bitmask; a greedy
    lowest-bit walk either builds an increasing tuple or rules z out.
    """
    depth = len(masks)
    s = len(masks[0])
    for z in iter_bits(alive0):
        prev = -1
        picks = []
        ok = True
        for j in range(depth):
            row = 0
            for idx in range(prev + 1, s):
                if masks[j][idx] >> z & 1:
                    row = idx
                    break
            else:
                ok = False
                break
            picks.append(row)
            prev = row
        if ok:
            return tuple(picks)
    return None


class _NodeBudget(Exception):
    pass


def _find_false_tuple(masks: list[list[int]], alive0: int) -> tuple[int, ...] | None:
    """Search for one increasing tuple whose witness intersection is empty.

    Depth-first over positions with three sound prunes (a witness no
    remaining entry can remove, an upper bound on removable witnesses,
    and a dominance memo on (depth, alive) states). Falls back to plain
    tuple enumeration if the node budget runs out, so the answer is
    always exact.
    """
    depth = len(masks)
    s = len(masks[0])

    surviving_all = []
    maxkill = []
    for j in range(depth):
        surv = alive0
        kill = 0
        for m in masks[j]:
            surv &= m
            kill = max(kill, (alive0 & ~m).bit_count())
        surviving_all.append(surv)
        maxkill.append(kill)
    unkillable = [0] * (depth + 1)
    killbudget = [0] * (depth + 1)
    unkillable[depth] = alive0
    for j in range(depth - 1, -1, -1):
        unkillable[j] = unkillable[j + 1] & surviving_all[j]
        killbudget[j] = killbudget[j + 1] + maxkill[j]

    memo: list[dict[int, int]] = [{} for _ in range(depth)]
    nodes = 0

    def dfs(j: int, prev: int, alive: int) -> tuple[int, ...] | None:
        nonlocal nodes
        nodes += 1
        if nodes > _NODE_CAP:
            raise _NodeBudget
        if alive & unkillable[j]:
            return None
        if alive.bit_count() > killbudget[j]:
            return None
        best = memo[j].get(alive)
        if best is not None and best <= prev:
            return None
        memo[j][alive] = prev
        for idx in range(prev + 1, s - (depth - 1 - j)):
            new = alive & masks[j][idx]
            if not new:
                tail = range(idx + 1, idx + depth - j)
                return (idx, *tail)
            if j < depth - 1:
                found = dfs(j + 1, idx, new)
                if found is not None:
                    return (idx, *found)
        return None

    try:
        return dfs(0, -1, alive0)
    except _NodeBudget:
        pass
    for combo in combinations(range(s), depth):
        inter = alive0
        for j, idx in enumerate(combo):
            inter &= masks[j][idx]
            if not inter:
                return combo
    return None


def _scan(ctx: EvalContext, phi: tuple[Atom, ...], entries,
          items: Seq[int], alive0: int) -> tuple[bool, tuple[int, ...] | None]:
    """Truth of the first tuple, plus one tuple with the other truth if any.

    Requires len(items) >= len(entries). Returned tuples contain sequence
    items, not positions.
    """
    depth = len(entries)
    masks = _entry_masks(ctx, phi, entries, items)
    first = alive0
    for j in range(depth):
        first &= masks[j][j]
    t0 = bool(first)
    if t0:
        bad = _find_false_tuple(masks, alive0)
    else:
        bad = _find_true_tuple(masks, alive0)
    if bad is None:
        return t0, None
    return t0, tuple(items[idx] for idx in bad)


def is_delta_indiscernible(
    ctx: EvalContext, phi: tuple[Atom, ...], patterns: Seq[Pattern],
    items: Seq[int],
) -> tuple[bool, Counterexample | None]:
    """Exact check: every pattern constant on all increasing tuples.

    Patterns longer than the sequence hold vacuously. On failure the
    returned counterexample carries one true and one false tuple for the
    offending pattern.
    """
    _check_items(items)
    full = ctx.graph.full_mask()
    for pattern in patterns:
        depth = len(pattern)
        if len(items) < depth:
            continue
        t0, other = _scan(ctx, phi, pattern.entries, items, full)
        if other is None:
            continue
        head = tuple(items[:depth])
        if t0:
            return False, Counterexample(pattern, head, other)
        return False, Counterexample(pattern, other, head)
    return True, None


def em_type(ctx: EvalContext, phi: tuple[Atom, ...], patterns: Seq[Pattern],
            items: Seq[int]) -> list[Pattern]:
    """Patterns true on every increasing tuple, vacuous truth included.

    Taking a subsequence never removes a pattern from the result, because
    the subsequence's tuples are a subset of the original's.
    """
    _check_items(items)
    full = ctx.graph.full_mask()
    out = []
    for pattern in patterns:
        if len(items) < len(pattern):
            out.append(pattern)
            continue
        t0, other = _scan(ctx, phi, pattern.entries, items, full)
        if t0 and other is None:
            out.append(pattern)
    return out


def _majority(colors: list[bool]) -> bool:
    trues = sum(colors)
    falses = len(colors) - trues
    if trues != falses:
        return trues > falses
    return colors[0]


def _make_homogeneous(ctx: EvalContext, phi: tuple[Atom, ...], entries,
                      items: list[int], alive0: int,
                      ) -> tuple[list[int], bool | None]:
    """Greedy Ramsey refinement for one pattern suffix.

    Returns a subsequence on which the pattern (with witnesses restricted
    to alive0) has constant truth, plus that truth, or None when the
    result is too short to carry any tuple.
    """
    depth = len(entries)
    if len(items) < depth:
        return items, None
    t0, other = _scan(ctx, phi, entries, items, alive0)
    if other is None:
        return items, t0

    if depth == 1:
        truths = [bool(alive0 & entry_mask(ctx, phi, entries[0], y))
                  for y in items]
        keep = _majority(truths)
        return [y for y, t in zip(items, truths) if t is keep], keep

    heads: list[tuple[int, bool | None]] = []
    work = list(items)
    while work:
        h = work[0]
        alive_h = alive0 & entry_mask(ctx, phi, entries[0], h)
        refined, value = _make_homogeneous(ctx, phi, entries[1:], work[1:],
                                           alive_h)
        heads.append((h, value))
        work = refined
    colored = [c for _, c in heads if c is not None]
    if not colored:
        return [h for h, _ in heads], None
    keep = _majority(colored)
    # uncolored heads sit at the chain's end; too few elements follow them
    # to start a tuple, so keeping them never breaks constancy.
    return [h for h, c in heads if c is None or c is keep], keep


def extract_indiscernible(
    ctx: EvalContext, phi: tuple[Atom, ...], patterns: Seq[Pattern],
    items: Seq[int], cfg: ExtractionConfig,
) -> list[int]:
    """Order-preserving subsequence that is indiscernible for ``patterns``.

    Already-indiscernible input is returned unchanged. Otherwise the
    input is cropped to ``cfg.window`` and refined one pattern at a time,
    shortest patterns first; constancy under refinement survives later
    rounds because it is closed under subsequences. The full surviving
    subsequence is returned, which may exceed ``cfg.target_length``; if
    it falls short, the raised error carries the result and the pattern
    that first pushed it under the target.
    """
    _check_items(items)
    if len(items) < cfg.target_length:
        raise InputError(
            f"input length {len(items)} is below the target "
            f"{cfg.target_length}")
    ok, _ = is_delta_indiscernible(ctx, phi, patterns, items)
    if ok:
        return list(items)

    survivors = list(items)
    if cfg.window is not None and len(survivors) > cfg.window:
        survivors = survivors[:cfg.window]
    full = ctx.graph.full_mask()
    blocking: Pattern | None = None
    for pattern in sorted(patterns, key=len):
        before = len(survivors)
        survivors, _ = _make_homogeneous(ctx, phi, pattern.entries,
                                         survivors, full)
        if blocking is None and before >= cfg.target_length > len(survivors):
            blocking = pattern
    if len(survivors) < cfg.target_length:
        raise ExtractionShortfall(
            f"extraction reached length {len(survivors)} of the requested "
            f"{cfg.target_length}",
            achieved=survivors, blocking_pattern=blocking)
    return survivors
