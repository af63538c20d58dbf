"""Peeling orders, core numbers, bounded-indegree orientations and degeneracy bounds."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Edge, Graph


@dataclass(frozen=True)
class PeelingResult:
    degeneracy: int
    order: tuple[int, ...]
    core_numbers: tuple[int, ...]

    def position(self) -> list[int]:
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos


def peel(g: Graph) -> PeelingResult:
    """Minimum-degree peeling with bucket queues; ties go to the smallest id.

    Each bucket is a small heap of vertex ids with lazy deletion, and the
    current minimum degree only drops by one after a removal, so the scan
    pointer moves O(n + m) times overall.
    """
    n = g.n
    deg = g.degrees()
    maxd = max(deg, default=0)
    buckets: list[list[int]] = [[] for _ in range(maxd + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    for b in buckets:
        heapq.heapify(b)
    removed = [False] * n
    order: list[int] = []
    core = [0] * n
    k = 0
    cur = 0
    while len(order) < n:
        while True:
            b = buckets[cur]
            while b and (removed[b[0]] or deg[b[0]] != cur):
                heapq.heappop(b)
            if b:
                break
            cur += 1
        v = heapq.heappop(buckets[cur])
        removed[v] = True
        k = max(k, cur)
        core[v] = k
        order.append(v)
        for u in g.adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(buckets[deg[u]], u)
        cur = max(cur - 1, 0)
    return PeelingResult(k, tuple(order), tuple(core))


def degeneracy(g: Graph) -> int:
    return peel(g).degeneracy


def is_degenerate(g: Graph, d: int) -> bool:
    return peel(g).degeneracy <= d


def orient_bounded_indegree(g: Graph, result: PeelingResult | None = None) -> list[Edge]:
    """Orient every edge towards its endpoint peeled first.

    Returns arcs ``(tail, head)``. A vertex's in-neighbours are exactly its
    neighbours still present when it was peeled, so indegrees never exceed the
    degeneracy.
    """
    result = result or peel(g)
    pos = result.position()
    return [(v, u) if pos[u] < pos[v] else (u, v) for u, v in g.edges()]


def indegrees(n: int, arcs: list[Edge]) -> list[int]:
    ind = [0] * n
    for _, head in arcs:
        ind[head] += 1
    return ind


@dataclass(frozen=True)
class DegeneracyBound:
    degeneracy: int
    rho_upper: float
    sdeg_upper: int
    hayes_branch: bool


def spectral_upper_from_degeneracy(g: Graph) -> DegeneracyBound:
    """Spectral radius bound implied by the degeneracy ``k``.

    ``2*sqrt(k*(maxdeg-k))`` (capped at ``maxdeg``) when ``maxdeg >= 2k``,
    otherwise ``maxdeg``. Every subgraph inherits degeneracy ``<= k``, giving the
    spectral degeneracy bound ``4k`` (or ``2k`` when ``maxdeg < 2k``).
    """
    if g.m == 0:
        return DegeneracyBound(0, 0.0, 0, False)
    k = degeneracy(g)
    delta = g.max_degree
    if delta >= 2 * k:
        return DegeneracyBound(k, min(float(delta), 2 * math.sqrt(k * (delta - k))), 4 * k, True)
    return DegeneracyBound(k, float(delta), 2 * k, False)


def hayes_rho_sq_bound(k: int, cap: int) -> int:
    """Integer bound on ``rho(H)**2`` for ``H`` with degeneracy ``<= k``, maxdeg ``<= cap``."""
    if cap >= 2 * k:
        return min(cap * cap, 4 * k * (cap - k))
    return cap * cap


def _le_log2(x: Fraction, y: Fraction) -> bool:
    # x = a/b: 2**(a/b) <= y  <=>  2**a <= y**b (b > 0)
    a, b = x.numerator, x.denominator
    if a >= 0:
        return Fraction(2) ** a <= y**b
    return 1 <= y**b * Fraction(2) ** (-a)


def converse_bound(d, max_degree: int) -> float:
    """``max(4d, 4d*log2(maxdeg/d))``: a spectrally d-degenerate graph has a vertex of at most this degree."""
    d = Fraction(d)
    if d <= 0:
        raise ValueError("d must be positive")
    if max_degree < 1:
        raise ValueError("maximum degree must be at least 1")
    df = float(d)
    return max(4 * df, 4 * df * math.log2(max_degree / df))


def satisfies_converse(min_degree: int, d, max_degree: int) -> bool:
    """Exactly decide ``min_degree <= max(4d, 4d*log2(maxdeg/d))``."""
    d = Fraction(d)
    if min_degree <= 4 * d:
        return True
    return _le_log2(Fraction(min_degree) / (4 * d), Fraction(max_degree) / d)
