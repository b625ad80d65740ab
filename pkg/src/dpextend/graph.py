"""Dataset-neighborhood graphs with a binary true coloring.

Vertices are datasets, edges join neighboring datasets, and every vertex
carries the true (non-private) answer of the binary query as a color.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping


class Color(str, enum.Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def other(self) -> "Color":
        return Color.RED if self is Color.BLUE else Color.BLUE

    def __str__(self) -> str:
        return self.value


class GraphError(ValueError):
    """Invalid graph structure or query."""


class GraphFormatError(GraphError):
    """Graph file that cannot be parsed; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class HittingSetError(GraphError):
    """A vertex set misses at least one boundary edge."""

    def __init__(self, uncovered: tuple[tuple[str, str], ...]):
        self.uncovered = uncovered
        listed = ", ".join(f"({u},{v})" for u, v in uncovered)
        super().__init__(f"not a boundary-hitting set; uncovered boundary edges: {listed}")


Edge = tuple[str, str]


def _edge(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


def _check_id(token: str) -> str:
    if not token or any(ch.isspace() for ch in token):
        raise GraphError(f"invalid vertex id {token!r}")
    return token


class DatasetGraph:
    """Immutable undirected graph with a total true coloring.

    Duplicate edges are collapsed; self-loops and edges touching undeclared
    vertices are rejected.
    """

    def __init__(self, colors: Mapping[str, Color | str], edges: Iterable[tuple[str, str]] = ()):
        self._color: dict[str, Color] = {_check_id(v): Color(c) for v, c in colors.items()}
        adj: dict[str, set[str]] = {v: set() for v in self._color}
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u!r}")
            for x in (u, v):
                if x not in adj:
                    raise GraphError(f"edge ({u},{v}) references unknown vertex {x!r}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._vertices = tuple(sorted(self._color))
        self._edges = tuple(sorted({_edge(u, v) for u in self._adj for v in self._adj[u]}))
        self._bfs_cache: dict[str, dict[str, int]] = {}
        self._component: dict[str, int] | None = None

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def true_color(self) -> Mapping[str, Color]:
        return dict(self._color)

    def color(self, v: str) -> Color:
        self._require(v)
        return self._color[v]

    def neighbors(self, v: str) -> frozenset[str]:
        self._require(v)
        return self._adj[v]

    def __contains__(self, v: object) -> bool:
        return v in self._color

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DatasetGraph):
            return NotImplemented
        return self._color == other._color and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((tuple(sorted(self._color.items())), self._edges))

    def __repr__(self) -> str:
        return f"DatasetGraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

    def _require(self, v: str) -> None:
        if v not in self._color:
            raise GraphError(f"unknown vertex {v!r}")

    def bfs(self, source: str) -> dict[str, int]:
        """Hop distances from ``source`` to every vertex reachable from it."""
        self._require(source)
        cached = self._bfs_cache.get(source)
        if cached is None:
            cached = {source: 0}
            queue = deque([source])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in cached:
                        cached[y] = cached[x] + 1
                        queue.append(y)
            self._bfs_cache[source] = cached
        return cached

    def component_of(self, v: str) -> int:
        """Index of the connected component containing ``v``."""
        self._require(v)
        if self._component is None:
            comp: dict[str, int] = {}
            index = 0
            for root in self._vertices:
                if root in comp:
                    continue
                for x in self.bfs(root):
                    comp[x] = index
                index += 1
            self._component = comp
        return self._component[v]

    def components(self) -> list[tuple[str, ...]]:
        groups: dict[int, list[str]] = {}
        for v in self._vertices:
            groups.setdefault(self.component_of(v), []).append(v)
        return [tuple(g) for _, g in sorted(groups.items())]

    def is_connected(self) -> bool:
        return len(self._vertices) <= 1 or len(self.bfs(self._vertices[0])) == len(self._vertices)


def distance(g: DatasetGraph, u: str, v: str) -> int | None:
    """Shortest-path length between ``u`` and ``v``; ``None`` if unreachable."""
    g._require(v)
    return g.bfs(u).get(v)


def distances_from(g: DatasetGraph, sources: Iterable[str]) -> dict[str, tuple[int, str]]:
    """Multi-source BFS.

    Maps every vertex reachable from ``sources`` to ``(distance, nearest
    source)``; among equally near sources the lexicographically smallest id
    wins.
    """
    srcs = sorted(set(sources))
    if not srcs:
        raise GraphError("distances_from needs at least one source")
    for s in srcs:
        g._require(s)
    # Seeding the queue in sorted order makes every vertex inherit the
    # smallest source among those at minimal distance.
    best: dict[str, tuple[int, str]] = {s: (0, s) for s in srcs}
    frontier = srcs
    while frontier:
        nxt: dict[str, tuple[int, str]] = {}
        for x in frontier:
            d, s = best[x]
            for y in g.neighbors(x):
                if y in best:
                    continue
                cand = (d + 1, s)
                if y not in nxt or cand < nxt[y]:
                    nxt[y] = cand
        best.update(nxt)
        frontier = sorted(nxt)
    return best


def bfs_until(g: DatasetGraph, source: str, targets: Iterable[str]) -> dict[str, int]:
    """Distances from ``source`` to each target, exploring only as far as needed.

    The search stops once every reachable target has been seen, so only the
    ball around ``source`` whose radius is the largest target distance is
    visited. Unreachable targets are absent from the result.
    """
    g._require(source)
    wanted = set(targets)
    for t in wanted:
        g._require(t)
    found: dict[str, int] = {}
    seen = {source: 0}
    queue = deque([source])
    if source in wanted:
        found[source] = 0
    while queue and len(found) < len(wanted):
        x = queue.popleft()
        for y in g.neighbors(x):
            if y not in seen:
                seen[y] = seen[x] + 1
                if y in wanted:
                    found[y] = seen[y]
                queue.append(y)
    return found


@dataclass(frozen=True)
class BoundaryStructure:
    boundary_edges: frozenset[Edge]
    boundary_vertices: frozenset[str]
    boundary_of_color: Mapping[Color, frozenset[str]]


def boundary(g: DatasetGraph) -> BoundaryStructure:
    """Edges whose endpoints disagree on the true color, and their endpoints."""
    edges = frozenset(e for e in g.edges if g.color(e[0]) is not g.color(e[1]))
    verts = frozenset(itertools.chain.from_iterable(edges))
    by_color = {c: frozenset(v for v in verts if g.color(v) is c) for c in Color}
    return BoundaryStructure(edges, verts, by_color)


@dataclass(frozen=True)
class HittingSet:
    members: frozenset[str]

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def uncovered_boundary_edges(g: DatasetGraph, h: Iterable[str]) -> tuple[Edge, ...]:
    members = set(h)
    for v in members:
        g._require(v)
    return tuple(sorted(e for e in boundary(g).boundary_edges
                        if e[0] not in members and e[1] not in members))


def validate_hitting_set(g: DatasetGraph, h: Iterable[str]) -> HittingSet:
    """Return ``h`` as a :class:`HittingSet` or raise :class:`HittingSetError`.

    Members outside the boundary are allowed.
    """
    members = frozenset(h)
    missing = uncovered_boundary_edges(g, members)
    if missing:
        raise HittingSetError(missing)
    return HittingSet(members)


def default_hitting_set(g: DatasetGraph, strategy: str = "all-boundary") -> HittingSet:
    bs = boundary(g)
    if strategy == "all-boundary":
        return HittingSet(bs.boundary_vertices)
    if strategy != "greedy-cover":
        raise ValueError(f"unknown hitting-set strategy {strategy!r}")
    uncovered = set(bs.boundary_edges)
    chosen: set[str] = set()
    while uncovered:
        counts: dict[str, int] = {}
        for u, v in uncovered:
            counts[u] = counts.get(u, 0) + 1
            counts[v] = counts.get(v, 0) + 1
        pick = min(counts, key=lambda x: (-counts[x], x))
        chosen.add(pick)
        uncovered = {e for e in uncovered if pick not in e}
    return HittingSet(frozenset(chosen))


def load_graph(text: str) -> DatasetGraph:
    """Parse the line-oriented graph format.

    ``v <id> <blue|red>`` declares a vertex, ``e <id> <id>`` an edge and
    lines starting with ``#`` are comments. A vertex must be declared before
    any edge uses it.
    """
    colors: dict[str, Color] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) == 2:
                raise GraphFormatError(f"missing color for vertex {parts[1]!r}", lineno)
            if len(parts) != 3:
                raise GraphFormatError(f"malformed vertex line {line!r}", lineno)
            _, vid, col = parts
            if vid in colors:
                raise GraphFormatError(f"duplicate vertex id {vid!r}", lineno)
            try:
                colors[vid] = Color(col)
            except ValueError:
                raise GraphFormatError(f"unknown color {col!r}", lineno) from None
        elif kind == "e":
            if len(parts) != 3:
                raise GraphFormatError(f"malformed edge line {line!r}", lineno)
            _, u, v = parts
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u!r}", lineno)
            for x in (u, v):
                if x not in colors:
                    raise GraphFormatError(f"edge references unknown vertex {x!r}", lineno)
            edges.append((u, v))
        else:
            raise GraphFormatError(f"malformed line {line!r}", lineno)
    return DatasetGraph(colors, edges)


def dump_graph(g: DatasetGraph) -> str:
    lines = [f"v {v} {g.color(v)}" for v in g.vertices]
    lines += [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
