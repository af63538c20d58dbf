"""The regular-subgraph reduction: gadget graphs, d-regular subgraph search, thresholds.

Every edge ``uv`` of the input is replaced by a block: a clique on ``d + 1`` new
vertices minus one edge ``xy``, joined to the endpoints by ``ux`` and ``vy``. The
input has a d-regular subgraph exactly when the gadget graph has spectral
degeneracy at least ``d``; otherwise every subgraph sits below a rational
threshold ``b < d`` (see :func:`reduction_threshold`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .decider import (
    DEFAULT_BUDGET,
    DEGENERATE,
    BudgetExceeded,
    decide,
    format_rational,
    sdeg_at_least,
)
from .graph import Edge, Graph, components, induced_subgraph
from .spectra import _cube_root_below, check_distance3_property, near_regular_bound

__all__ = [
    "GadgetBlock",
    "GadgetGraph",
    "build_gadget",
    "gadget_map_document",
    "lift_regular_subgraph",
    "blocks_fully_contained",
    "find_regular_subgraph",
    "reduction_threshold",
    "near_regular_bound",
    "check_distance3_property",
    "ReductionReport",
    "reduction_end_to_end",
]


@dataclass(frozen=True)
class GadgetBlock:
    ids: tuple[int, ...]
    x: int
    y: int


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    d: int
    n_original: int
    edge_map: dict[Edge, GadgetBlock]


def build_gadget(g: Graph, d: int) -> GadgetGraph:
    """Replace each edge by a ``K_{d+1}``-minus-an-edge block.

    Original vertices keep their ids. The block of the ``j``-th edge (in
    lexicographic order) uses ids ``n + j(d+1) .. n + (j+1)(d+1) - 1``; its two
    lowest ids are ``x`` (joined to the smaller endpoint) and ``y``.
    """
    if d < 3:
        raise ValueError("the reduction needs d >= 3 (d-regular subgraph search is "
                         "NP-complete only for fixed d >= 3)")
    if g.max_degree > d + 1:
        raise ValueError(f"maximum degree {g.max_degree} exceeds d + 1 = {d + 1}")
    edges: list[Edge] = []
    blocks: dict[Edge, GadgetBlock] = {}
    nxt = g.n
    for u, v in g.edges():
        ids = tuple(range(nxt, nxt + d + 1))
        nxt += d + 1
        x, y = ids[0], ids[1]
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                if (a, b) != (x, y):
                    edges.append((a, b))
        edges.append((u, x))
        edges.append((v, y))
        blocks[(u, v)] = GadgetBlock(ids, x, y)
    return GadgetGraph(Graph.from_edges(nxt, edges), d, g.n, blocks)


def gadget_map_document(gadget: GadgetGraph) -> dict:
    """Sidecar ``{"u-v": {"block": [...], "x": .., "y": ..}}`` for a written gadget."""
    return {
        "d": gadget.d,
        "n_original": gadget.n_original,
        "edges": {f"{u}-{v}": {"block": list(b.ids), "x": b.x, "y": b.y}
                  for (u, v), b in gadget.edge_map.items()},
    }


def lift_regular_subgraph(gadget: GadgetGraph, edges: list[Edge]) -> list[Edge]:
    """The gadget subgraph made of the blocks of ``edges`` and their endpoints."""
    out: list[Edge] = []
    for u, v in edges:
        key = (min(u, v), max(u, v))
        b = gadget.edge_map[key]
        out.extend((a, c) for i, a in enumerate(b.ids) for c in b.ids[i + 1:] if (a, c) != (b.x, b.y))
        out.extend([(key[0], b.x), (key[1], b.y)])
    return sorted(out)


def blocks_fully_contained(gadget: GadgetGraph, edges: list[Edge]) -> bool:
    """Does every block touched at an internal vertex lie entirely in ``edges``?"""
    chosen = {(min(u, v), max(u, v)) for u, v in edges}
    touched = {w for e in chosen for w in e if w >= gadget.n_original}
    for (u, v), b in gadget.edge_map.items():
        if touched.isdisjoint(b.ids):
            continue
        block_edges = set(lift_regular_subgraph(gadget, [(u, v)]))
        if not block_edges <= chosen:
            return False
    return True


# -- d-regular subgraph search ---------------------------------------------------------


def _peel_below(g: Graph, d: int) -> list[int]:
    """Vertices surviving repeated deletion of vertices of degree ``< d``."""
    deg = g.degrees()
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] < d]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] < d:
                    alive[u] = False
                    stack.append(u)
    return [v for v in range(g.n) if alive[v]]


class _RegularSearch:
    """Edge-branching search for a nonempty subgraph with all degrees exactly ``d``.

    Per vertex: ``sel`` selected edges and ``und`` undecided ones. A vertex with
    ``sel > 0`` needs ``sel + und >= d``; a vertex with ``sel == 0`` and
    ``und < d`` can never join, so its edges go; ``sel == d`` closes the vertex;
    ``sel + und == d`` with ``sel > 0`` forces the rest in.
    """

    def __init__(self, g: Graph, d: int, budget: int):
        self.g, self.d, self.budget = g, d, budget
        self.edges = g.edges()
        self.status = [0] * len(self.edges)
        self.sel = [0] * g.n
        self.und = g.degrees()
        self.at: list[list[int]] = [[] for _ in range(g.n)]
        for i, (u, v) in enumerate(self.edges):
            self.at[u].append(i)
            self.at[v].append(i)
        self.trail: list[int] = []
        self.nodes = 0

    def _set(self, i: int, s: int) -> None:
        self.status[i] = s
        for w in self.edges[i]:
            self.und[w] -= 1
            if s > 0:
                self.sel[w] += 1
        self.trail.append(i)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            i = self.trail.pop()
            for w in self.edges[i]:
                self.und[w] += 1
                if self.status[i] > 0:
                    self.sel[w] -= 1
            self.status[i] = 0

    def _propagate(self, touched) -> bool:
        d, sel, und, status = self.d, self.sel, self.und, self.status
        queue = list(touched)
        while queue:
            v = queue.pop()
            s, u = sel[v], und[v]
            if s > d or (s > 0 and s + u < d):
                return False
            if u == 0:
                continue
            if s == d or (s == 0 and u < d):
                mode = -1
            elif s > 0 and s + u == d:
                mode = 1
            else:
                continue
            for i in self.at[v]:
                if status[i] == 0:
                    self._set(i, mode)
                    queue.extend(self.edges[i])
        return True

    def run(self) -> Optional[list[Edge]]:
        if not self._propagate(range(self.g.n)):
            return None
        return self._dfs(0)

    def _dfs(self, ptr: int) -> Optional[list[Edge]]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted")
        status = self.status
        while ptr < len(status) and status[ptr] != 0:
            ptr += 1
        if ptr == len(status):
            chosen = [e for e, s in zip(self.edges, status) if s > 0]
            return chosen or None
        u, v = self.edges[ptr]
        for mode in (1, -1):
            mark = len(self.trail)
            self._set(ptr, mode)
            if self._propagate((u, v)):
                found = self._dfs(ptr + 1)
                if found:
                    return found
            self._undo(mark)
        return None


def find_regular_subgraph(g: Graph, d: int, budget: int = DEFAULT_BUDGET) -> Optional[list[Edge]]:
    """Edges of a nonempty d-regular subgraph of ``g`` (parent ids), or ``None``.

    Vertices of degree below ``d`` are peeled first; each surviving component is
    searched on its own. Raises ``BudgetExceeded`` when the node budget runs out.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    core = induced_subgraph(g, _peel_below(g, d))
    for block in components(core.graph):
        if len(block) <= d:
            continue
        sub = induced_subgraph(core.graph, block)
        found = _RegularSearch(sub.graph, d, budget).run()
        if found:
            ids = [core.parent_ids[i] for i in sub.parent_ids]
            return sorted((ids[a], ids[b]) for a, b in found)
    return None


# -- threshold --------------------------------------------------------------------------


def _threshold_floor(d: int, n: int) -> tuple[Fraction, Fraction]:
    """Exact rational terms of the lower end and the cube-root radicand."""
    return max(Fraction(d - 1), d - Fraction(1, n * n)), Fraction((d * d + 1) ** 2, d + 1)


def _in_interval(b: Fraction, d: int, n: int) -> bool:
    rational_lo, radicand = _threshold_floor(d, n)
    return rational_lo <= b < d and b**3 >= radicand


def reduction_threshold(d: int, n: int) -> Fraction:
    """A rational ``b`` with ``max(cbrt((d^2+1)^2/(d+1)), d-1, d-1/n^2) <= b < d``.

    The midpoint of that interval rounded to denominator ``4n^2``; if rounding
    leaves the interval the denominator doubles until it does not.
    """
    if d < 3:
        raise ValueError("the threshold interval needs d >= 3")
    if n < 2:
        raise ValueError("n must be at least 2")
    rational_lo, radicand = _threshold_floor(d, n)
    cube_lo = _cube_root_below(radicand, 64) + Fraction(1, 1 << 64)
    lo = max(rational_lo, cube_lo)
    if lo >= d:
        raise ValueError("threshold interval is empty")
    mid = (lo + d) / 2
    den = 4 * n * n
    for _ in range(64):
        b = Fraction(round(mid * den), den)
        if _in_interval(b, d, n):
            return b
        den *= 2
    raise AssertionError("could not round into the threshold interval")


# -- end-to-end check --------------------------------------------------------------------


@dataclass
class ReductionReport:
    d: int
    b: Fraction
    gadget_n: int
    gadget_m: int
    regular_subgraph: Optional[list[Edge]]
    sdeg_at_least_d: bool
    degenerate_at_b: bool
    violated_just_below_d: bool
    lift_is_regular: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    @property
    def biconditional_holds(self) -> bool:
        has = self.regular_subgraph is not None
        return has == self.sdeg_at_least_d == self.violated_just_below_d

    @property
    def dichotomy_holds(self) -> bool:
        # exactly one of sdeg >= d and sdeg <= b
        return self.sdeg_at_least_d != self.degenerate_at_b

    @property
    def ok(self) -> bool:
        return self.biconditional_holds and self.dichotomy_holds and self.lift_is_regular is not False

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "b": format_rational(self.b),
            "gadget_n": self.gadget_n,
            "gadget_m": self.gadget_m,
            "regular_subgraph": self.regular_subgraph,
            "sdeg_at_least_d": self.sdeg_at_least_d,
            "degenerate_at_b": self.degenerate_at_b,
            "violated_just_below_d": self.violated_just_below_d,
            "lift_is_regular": self.lift_is_regular,
            "biconditional_holds": self.biconditional_holds,
            "dichotomy_holds": self.dichotomy_holds,
            "notes": self.notes,
        }


def reduction_end_to_end(g: Graph, d: int = 3, budget: int = DEFAULT_BUDGET) -> ReductionReport:
    """Compute both sides of the reduction independently and compare them.

    The combinatorial side is :func:`find_regular_subgraph` on ``g``. The spectral
    side runs the decider on the gadget graph three times: a non-strict search for
    ``sdeg >= d``, the decision at ``d - 10**-6``, and the decision at the
    threshold ``b`` (with ``n`` the gadget's vertex count). Raises
    ``BudgetExceeded`` if any search runs out.
    """
    regular = find_regular_subgraph(g, d, budget)
    gadget = build_gadget(g, d)
    gg = gadget.graph
    b = reduction_threshold(d, gg.n)
    high = sdeg_at_least(gg, d, budget) is not None
    below = decide(gg, Fraction(d) - Fraction(1, 10**6), budget)
    at_b = decide(gg, b, budget)
    for res in (below, at_b):
        if res.degenerate is None:
            raise BudgetExceeded(f"decider budget exhausted at d={res.d}")
    report = ReductionReport(d, b, gg.n, gg.m, regular, high, at_b.verdict == DEGENERATE,
                             not below.degenerate)
    if regular is not None:
        lifted = lift_regular_subgraph(gadget, regular)
        sub = Graph.from_edges(gg.n, lifted)
        report.lift_is_regular = all(k in (0, d) for k in sub.degrees())
    if check_distance3_property(gg, d):
        report.notes.append("degree-(d+1) vertices pairwise at distance >= 3")
    return report
