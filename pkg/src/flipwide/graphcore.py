"""Immutable simple graphs with bitset adjacency, flips, and BFS utilities.

Vertices are 0..n-1. Adjacency is stored as one int bitmask per vertex,
which keeps flip application and ball computations cheap at the sizes this
package targets (a few hundred vertices).

A flip (A, B) toggles exactly the unordered pairs {u, v}, u != v, with
(u, v) in (A x B) union (B x A). Membership is a predicate on the pair, so
a pair covered by both orderings is still toggled only once, and A == B
toggles every pair inside A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputError

INF = math.inf


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int] | None = None):
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        self.n = n
        if rows is None:
            self.rows = (0,) * n
        else:
            if len(rows) != n:
                raise InputError(f"expected {n} adjacency rows, got {len(rows)}")
            self.rows = tuple(rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u} is not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    def adj(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.rows[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InputError(f"vertex {v} out of range for n={self.n}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count()})"


# ---------------------------------------------------------------------------
# BFS and distance helpers


def _bfs_levels(g: Graph, start_mask: int, limit: float = INF) -> list[int]:
    """Frontier masks per distance, starting at distance 0.

    Stops when the frontier empties or ``limit`` levels were produced, so a
    huge radius costs nothing beyond the graph's true eccentricity.
    """
    rows = g.rows
    seen = start_mask
    frontier = start_mask
    levels = [start_mask]
    dist = 0
    while frontier and dist < limit:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= rows[low.bit_length() - 1]
            f ^= low
        nxt &= ~seen
        if not nxt:
            break
        seen |= nxt
        levels.append(nxt)
        frontier = nxt
        dist += 1
    return levels


def ball_mask(g: Graph, v: int, radius: int) -> int:
    """Bitmask of the closed distance-``radius`` ball around ``v``."""
    g.check_vertex(v)
    if radius < 0:
        raise InputError(f"radius must be nonnegative, got {radius}")
    m = 0
    for lv in _bfs_levels(g, 1 << v, radius):
        m |= lv
    return m


def ball(g: Graph, v: int, radius: int) -> frozenset[int]:
    return frozenset(iter_bits(ball_mask(g, v, radius)))


def distances_from(g: Graph, sources: Iterable[int]) -> list[float]:
    """Multi-source BFS distances; unreachable vertices get math.inf."""
    start = mask_of(sources)
    dist: list[float] = [INF] * g.n
    for d, level in enumerate(_bfs_levels(g, start)):
        for v in iter_bits(level):
            dist[v] = d
    return dist


def exact_distance_layer(g: Graph, sources: Iterable[int], i: int) -> frozenset[int]:
    """Vertices at distance exactly ``i`` from the source set."""
    if i < 0:
        raise InputError(f"layer index must be nonnegative, got {i}")
    levels = _bfs_levels(g, mask_of(sources), i)
    if i < len(levels):
        return frozenset(iter_bits(levels[i]))
    return frozenset()


def all_pairs_distance(g: Graph) -> list[list[float]]:
    """Dense distance table via n BFS runs. Rows follow vertex order."""
    return [distances_from(g, (v,)) for v in range(g.n)]


def is_distance_r_independent(
    g: Graph, members: Iterable[int], r: float
) -> tuple[bool, tuple[int, int] | None]:
    """Check pairwise distance > r over all distinct members.

    Returns (True, None) or (False, (u, v)) with a concrete violating pair.
    ``r`` may be arbitrarily large; BFS stops at the graph's eccentricity.
    """
    vs = sorted(set(members))
    for v in vs:
        g.check_vertex(v)
    member_mask = mask_of(vs)
    for u in vs:
        reach = 0
        for level in _bfs_levels(g, 1 << u, r):
            reach |= level
        hit = reach & member_mask & ~(1 << u)
        if hit:
            v = (hit & -hit).bit_length() - 1
            return False, (u, v)
    return True, None


# ---------------------------------------------------------------------------
# Flips


@dataclass(frozen=True)
class Flip:
    """One flip, stored as sorted vertex tuples. (A, B) and (B, A) are
    distinct values but act identically on any graph."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __init__(self, a: Iterable[int], b: Iterable[int]):
        object.__setattr__(self, "a", tuple(sorted(set(a))))
        object.__setattr__(self, "b", tuple(sorted(set(b))))
        for v in self.a + self.b:
            if v < 0:
                raise InputError(f"negative vertex id {v} in flip")

    def mirror(self) -> "Flip":
        return Flip(self.b, self.a)


FlipSet = tuple[Flip, ...]


def make_flip_set(flips: Iterable[Flip]) -> FlipSet:
    """Validate pairwise distinctness and freeze the application order."""
    out: list[Flip] = []
    seen = set()
    for f in flips:
        key = (f.a, f.b)
        if key in seen:
            raise InputError(f"duplicate flip {key} in flip set")
        seen.add(key)
        out.append(f)
    return tuple(out)


def apply_flips(g: Graph, flips: Iterable[Flip]) -> Graph:
    """Apply flips by toggle parity; order never matters.

    Each flip (A, B) xors the pair set (A x B) union (B x A), minus the
    diagonal, into the edge set. The per-vertex toggle mask is built with
    OR across the two orderings so a pair inside A intersect B still
    toggles exactly once.
    """
    rows = list(g.rows)
    n = g.n
    for f in flips:
        if (f.a and f.a[-1] >= n) or (f.b and f.b[-1] >= n):
            raise InputError(f"flip touches vertices outside 0..{n - 1}")
        amask = mask_of(f.a)
        bmask = mask_of(f.b)
        for u in iter_bits(amask | bmask):
            t = 0
            if amask >> u & 1:
                t |= bmask
            if bmask >> u & 1:
                t |= amask
            rows[u] ^= t & ~(1 << u)
    return Graph(n, rows)


# ---------------------------------------------------------------------------
# Edge list text format: first line "n m", then one "u v" line per edge.
# Blank lines and lines starting with '#' are ignored.


def parse_edge_list(text: str) -> Graph:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if not lines:
        raise InputError("empty edge list input")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"header must be 'n m', got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != m:
        raise InputError(f"header promises {m} edges, found {len(body)}")
    edges = []
    for line in body:
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"edge line must be 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"edge line must be 'u v', got {line!r}") from None
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.edge_count()}"]
    for u, v in g.edges():
        out.append(f"{u} {v}")
    return "\n".join(out) + "\n"
