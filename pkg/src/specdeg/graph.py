"""Simple undirected graphs on dense integer vertex ids, plus edge-list I/O."""

from __future__ import annotations

import hashlib
import math
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised for malformed edge-list documents."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``adj[v]`` is the strictly increasing tuple of neighbours of ``v``.
    ``duplicates`` counts edge lines collapsed at construction time.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    m: int
    duplicates: int = field(default=0, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        seen = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
            seen += 1
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        m = sum(len(a) for a in adj) // 2
        return cls(n, adj, m, seen - m)

    def edges(self) -> list[Edge]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            return False
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def check(self) -> None:
        """Assert the structural invariants (used by tests and loaders)."""
        total = 0
        for v, a in enumerate(self.adj):
            assert all(a[i] < a[i + 1] for i in range(len(a) - 1)), v
            assert v not in a
            for u in a:
                assert 0 <= u < self.n and v in self.adj[u]
            total += len(a)
        assert total == 2 * self.m

    def adjacency_matrix(self, dtype=float):
        import numpy as np

        A = np.zeros((self.n, self.n), dtype=dtype)
        for v, a in enumerate(self.adj):
            if a:
                A[v, list(a)] = 1
        return A


@dataclass(frozen=True)
class Subgraph:
    """A graph together with the parent id of each of its vertices."""

    graph: Graph
    parent_ids: tuple[int, ...]

    def edges_in_parent(self) -> list[Edge]:
        p = self.parent_ids
        return sorted(tuple(sorted((p[u], p[v]))) for u, v in self.graph.edges())


def vertex_set(g: Graph, vertices: Iterable[int]) -> tuple[int, ...]:
    """Validate and normalise a vertex selection (sorted, no duplicates)."""
    s = sorted(set(int(v) for v in vertices))
    if s and (s[0] < 0 or s[-1] >= g.n):
        raise ValueError(f"vertex set not within 0..{g.n - 1}")
    return tuple(s)


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines edge-list format.

    Duplicate edge lines collapse; their count ends up in ``Graph.duplicates``.
    The header edge count is informational and not enforced.
    """
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError(f"line {lineno}: negative header value")
            header = (a, b)
            continue
        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(f"line {lineno}: vertex id out of range for n={n}")
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {a}")
        edges.append((a, b))
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    return Graph.from_edges(header[0], edges)


def write_graph(g: Graph) -> str:
    """Canonical serialisation: header, then edges sorted lexicographically."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(write_graph(g).encode("ascii")).hexdigest()


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    """Subgraph induced on ``vertices``; new id i is the i-th smallest selected id."""
    s = vertex_set(g, vertices)
    index = {v: i for i, v in enumerate(s)}
    edges = [(index[u], index[v]) for u in s for v in g.adj[u] if u < v and v in index]
    return Subgraph(Graph.from_edges(len(s), edges), s)


def edge_subgraph(g: Graph, edges: Iterable[Sequence[int]]) -> Graph:
    """Spanning subgraph of ``g`` with exactly the given edges."""
    chosen = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not g.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge of the graph")
        chosen.append((u, v))
    return Graph.from_edges(g.n, chosen)


def degree_stats(g: Graph) -> tuple[int, int, list[int]]:
    """``(max degree, min degree, degree sequence)``; zeros for the empty graph."""
    degs = g.degrees()
    if not degs:
        return 0, 0, []
    return max(degs), min(degs), degs


def components(g: Graph) -> list[tuple[int, ...]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        block = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    block.append(u)
                    queue.append(u)
        out.append(tuple(sorted(block)))
    return out


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(components(g)) == 1


def bfs_distances(g: Graph, source: int) -> list[float]:
    dist = [math.inf] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.adj[v]:
            if dist[u] == math.inf:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def diameter(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("diameter of the empty graph is undefined")
    best = 0
    for v in range(g.n):
        dist = bfs_distances(g, v)
        far = max(dist)
        if far == math.inf:
            raise ValueError("diameter requires a connected graph")
        best = max(best, int(far))
    return best


def non_isolated(g: Graph) -> Subgraph:
    """Drop isolated vertices, keeping a map back to ``g``."""
    return induced_subgraph(g, [v for v in range(g.n) if g.adj[v]])
