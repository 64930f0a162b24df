"""Flip-wideness: spreading a vertex set to pairwise distance > r.

The induction lifts distance-r' independence to r'+1 one level at a time,
alternating two constructions. At even levels the exact-distance-i layer
around the surviving set is colored by (assigned sample, sample-adjacency
trace) and same-level edges are removed by flipping the realized color
pairs related by trace membership. At odd levels each sample contributes
one flip between its far assigned vertices and its near neighbors.

Flips accumulate with xor cancellation, so an exact duplicate introduced
at two levels disappears from the final set without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import BudgetExceeded, InputError, InternalInvariantError
from .graphcore import (
    Flip,
    FlipSet,
    Graph,
    apply_flips,
    ball_mask,
    distances_from,
    exact_distance_layer,
    is_distance_r_independent,
    iter_bits,
)
from .indiscernibles import ExtractionConfig
from .sampleset import DisjointFamilyInput, SampleBudget, build_sample_set


@dataclass(frozen=True)
class LevelTrace:
    level: int
    parity: str
    samples: tuple[int, ...]
    flips_added: tuple[Flip, ...]
    surviving: tuple[int, ...]


@dataclass(frozen=True)
class FlipWideRequest:
    graph: Graph
    a_set: tuple[int, ...]
    radius: int
    target_size: int
    budget: SampleBudget = field(default_factory=SampleBudget)
    extraction: ExtractionConfig | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise InputError(f"radius must be nonnegative, got {self.radius}")
        if self.target_size < 1:
            raise InputError("target size must be positive")
        if len(set(self.a_set)) != len(self.a_set):
            raise InputError("a_set must be pairwise distinct")
        for v in self.a_set:
            self.graph.check_vertex(v)


@dataclass(frozen=True)
class FlipWideResult:
    b_set: tuple[int, ...]
    flip_set: FlipSet
    radius: int
    trace: tuple[LevelTrace, ...]
    verified: bool
    shortfall: bool


def _sample_color(g: Graph, v: int, samples: tuple[int, ...],
                  assigned: int) -> tuple[int, int]:
    # sample 0 owns the most significant trace bit
    width = len(samples)
    trace = 0
    for j, s in enumerate(samples):
        if g.adj(v, s):
            trace |= 1 << (width - 1 - j)
    return assigned, trace


def _in_related(c1: tuple[int, int], c2: tuple[int, int],
                width: int) -> bool:
    s1, _ = c1
    _, trace2 = c2
    return bool(trace2 >> (width - 1 - s1) & 1)


def _even_level_flips(g: Graph, nxt: tuple[int, ...], samples, s_of,
                      i: int) -> list[Flip]:
    layer = sorted(exact_distance_layer(g, nxt, i))
    if not layer or not samples:
        return []
    anchor: dict[int, int] = {}
    for a in nxt:
        reach = ball_mask(g, a, i)
        for x in layer:
            if reach >> x & 1:
                if x in anchor:
                    raise InternalInvariantError(
                        f"vertex {x} in the distance-{i} layer has two "
                        f"anchors {anchor[x]} and {a}")
                anchor[x] = a
    width = len(samples)
    colors = {x: _sample_color(g, x, samples, s_of[x]) for x in layer}
    groups: dict[tuple[int, int], list[int]] = {}
    for x in layer:
        groups.setdefault(colors[x], []).append(x)

    for idx, x in enumerate(layer):
        for y in layer[idx + 1:]:
            if not g.adj(x, y) or anchor[x] == anchor[y]:
                continue
            fwd = _in_related(colors[x], colors[y], width)
            bwd = _in_related(colors[y], colors[x], width)
            if not (fwd and bwd):
                raise InternalInvariantError(
                    f"adjacent layer vertices {x}, {y} with distinct anchors "
                    f"have asymmetric color relation")

    flips = []
    ordered = sorted(groups)
    for idx, c1 in enumerate(ordered):
        for c2 in ordered[idx:]:
            if _in_related(c1, c2, width):
                flips.append(Flip(groups[c1], groups[c2]))
    return flips


def _odd_level_flips(g: Graph, nxt: tuple[int, ...], samples, s_of,
                     i: int) -> list[Flip]:
    dist = distances_from(g, nxt)
    flips = []
    for j, s in enumerate(samples):
        far = [a for a in range(g.n) if s_of[a] == j and dist[a] >= i + 1]
        near = [v for v in iter_bits(g.rows[s]) if dist[v] == i]
        if far and near:
            flips.append(Flip(far, near))
    return flips


def _xor_accumulate(acc: list[Flip], fresh: list[Flip]) -> None:
    for f in fresh:
        try:
            acc.remove(f)
        except ValueError:
            acc.append(f)


def flip_widen(req: FlipWideRequest) -> FlipWideResult:
    """Grow flips level by level until a_set spreads to distance > radius.

    The per-level sample sets are built in stable mode with extraction
    target 1, so the construction never depends on the requested target
    size; a final set smaller than it only raises the shortfall flag.
    Every level re-checks independence of the survivors in the flipped
    graph before moving on.
    """
    g_cur = req.graph
    current = tuple(req.a_set)
    acc: list[Flip] = []
    trace: list[LevelTrace] = [LevelTrace(0, "base", (), (), current)]
    if req.extraction is None:
        ext = ExtractionConfig(target_length=1)
    else:
        ext = replace(req.extraction, target_length=1)

    for level in range(req.radius):
        i = level // 2
        inp = DisjointFamilyInput(current, i, "stable")
        try:
            built = build_sample_set(g_cur, inp, req.budget, ext)
        except BudgetExceeded as exc:
            raise BudgetExceeded(
                f"level {level}: {exc}",
                partial={"level": level, "flips": tuple(acc),
                         "trace": tuple(trace), "build": exc.partial},
                diagnostic=exc.diagnostic) from exc
        nxt = built.subseq
        if level % 2 == 0:
            fresh = _even_level_flips(g_cur, nxt, built.samples, built.s_lt, i)
            parity = "even"
        else:
            fresh = _odd_level_flips(g_cur, nxt, built.samples, built.s_lt, i)
            parity = "odd"
        g_next = apply_flips(g_cur, fresh)
        ok, pair = is_distance_r_independent(g_next, nxt, level + 1)
        if not ok:
            raise InternalInvariantError(
                f"level {level} left vertices {pair} within distance "
                f"{level + 1}")
        _xor_accumulate(acc, fresh)
        trace.append(LevelTrace(level + 1, parity, built.samples,
                                tuple(fresh), nxt))
        g_cur = g_next
        current = nxt

    b_set = tuple(sorted(current))
    flip_set = tuple(acc)
    final = apply_flips(req.graph, flip_set)
    if final != g_cur:
        raise InternalInvariantError(
            "accumulated flips disagree with the level-by-level graphs")
    ok, pair = is_distance_r_independent(final, b_set, req.radius)
    if not ok:
        raise InternalInvariantError(
            f"final set leaves vertices {pair} within distance {req.radius}")
    return FlipWideResult(b_set, flip_set, req.radius, tuple(trace),
                          verified=True,
                          shortfall=len(b_set) < req.target_size)


def verify_flip_wide(g: Graph, result: FlipWideResult,
                     r: int) -> tuple[bool, tuple[int, int] | None]:
    """Independent re-check: apply the flips fresh and measure distances."""
    for v in result.b_set:
        g.check_vertex(v)
    flipped = apply_flips(g, result.flip_set)
    return is_distance_r_independent(flipped, result.b_set, r)
