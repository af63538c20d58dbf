"""Exact decision of spectral d-degeneracy, certificates, and the sdeg number.

A graph is spectrally d-degenerate when every subgraph ``H`` with an edge has
``rho(H)**2 <= d * maxdeg(H)``. For a degree cap ``D`` it suffices to examine
subgraphs that are maximal subject to ``maxdeg <= D``: a violator with maximum
degree ``D`` extends to such a maximal subgraph without lowering its spectral
radius. The search enumerates those maximal subgraphs by branch-and-bound over
edges (lexicographic order, include-branch first) and tests the connected
components of each one exactly.
"""

from __future__ import annotations

import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .degeneracy import degeneracy, hayes_rho_sq_bound, peel, spectral_upper_from_degeneracy
from .exact import (
    QuadraticValue,
    bisect_root_above,
    char_poly,
    poly_digest,
    sturm_count_above,
)
from .graph import Edge, Graph, bfs_distances, components, graph_hash, induced_subgraph
from .spectra import EnclosureNotNarrowed, compare_rho_sq, spectral_radius_enclosure

CERTIFICATE_VERSION = 1
DEFAULT_BUDGET = 10**6

_EPS = 2.0**-52

DEGENERATE = "spectrally-d-degenerate"
NOT_DEGENERATE = "not-spectrally-d-degenerate"
BUDGET_EXCEEDED = "budget-exceeded"


class BudgetExceeded(RuntimeError):
    """The node budget of one cap search ran out."""


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, an integer, or a decimal string into an exact rational."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- certificates -------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Witness that a graph is not spectrally d-degenerate.

    ``x**2 > d * delta_H`` and ``p_H(x) < 0`` together put the spectral radius of
    ``H`` strictly above ``x``, hence above ``sqrt(d * delta_H)``.
    """

    graph_hash: str
    d: Fraction
    edges: tuple[Edge, ...]
    delta_H: int
    x: Fraction
    char_poly_hash: str
    version: int = CERTIFICATE_VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "graph_hash": self.graph_hash,
            "d": format_rational(self.d),
            "edges": [[u, v] for u, v in self.edges],
            "delta_H": self.delta_H,
            "x": format_rational(self.x),
            "char_poly_hash": self.char_poly_hash,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def certificate_from_dict(doc) -> Certificate:
    """Parse a certificate document; raises ``ValueError`` on malformed input."""
    if not isinstance(doc, dict):
        raise ValueError("certificate must be an object")
    missing = {"version", "graph_hash", "d", "edges", "delta_H", "x"} - doc.keys()
    if missing:
        raise ValueError(f"missing fields: {sorted(missing)}")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise ValueError("edges must be a list")
    parsed = []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(type(a) is int for a in e)):
            raise ValueError(f"malformed edge {e!r}")
        parsed.append((e[0], e[1]))
    for key in ("version", "delta_H"):
        if type(doc[key]) is not int:
            raise ValueError(f"{key} must be an integer")
    if not isinstance(doc["d"], str) or not isinstance(doc["x"], str):
        raise ValueError("d and x must be 'num/den' strings")
    return Certificate(
        graph_hash=str(doc["graph_hash"]),
        d=parse_rational(doc["d"]),
        edges=tuple(parsed),
        delta_H=doc["delta_H"],
        x=parse_rational(doc["x"]),
        char_poly_hash=str(doc.get("char_poly_hash", "")),
        version=doc["version"],
    )


def certificate_from_json(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"certificate is not valid JSON: {exc}") from None
    return certificate_from_dict(doc)


def _witness_graph(g: Graph, edges: Sequence[Edge]):
    """Relabel an edge set onto its spanned vertices."""
    verts = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    return Graph.from_edges(len(verts), [(index[u], index[v]) for u, v in edges])


def make_certificate(g: Graph, edges: Sequence[Edge], d) -> Certificate:
    """Certificate for the violating connected subgraph spanned by ``edges``."""
    d = Fraction(d)
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    h = _witness_graph(g, edges)
    if len(components(h)) != 1:
        raise ValueError("witness subgraph must be connected")
    p = char_poly(h)
    delta = h.max_degree
    t = QuadraticValue.sqrt(d * delta)
    if sturm_count_above(p, t) < 1:
        raise ValueError("subgraph does not violate the spectral bound")
    x = bisect_root_above(p, t)
    return Certificate(graph_hash(g), d, edges, delta, x, poly_digest(p))


def _bareiss_det_sign(M: list[list[int]]) -> int:
    """Sign of the determinant of an integer matrix (fraction-free elimination)."""
    a = [row[:] for row in M]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = a[n - 1][n - 1] if n else 1
    return sign * ((det > 0) - (det < 0))


@dataclass(frozen=True)
class Verification:
    accepted: bool
    reason: str

    def __bool__(self) -> bool:
        return self.accepted


def verify_certificate(g: Graph, cert) -> Verification:
    """Check a certificate against ``g`` without trusting any of its claims.

    The sign of ``p_H(x) = det(xI - A_H)`` is recomputed by Bareiss elimination,
    independently of the Faddeev-LeVerrier code that produced the certificate.
    """
    if isinstance(cert, (str, bytes)):
        try:
            cert = certificate_from_json(cert)
        except ValueError as exc:
            return Verification(False, f"malformed certificate: {exc}")
    elif isinstance(cert, dict):
        try:
            cert = certificate_from_dict(cert)
        except ValueError as exc:
            return Verification(False, f"malformed certificate: {exc}")
    if cert.version != CERTIFICATE_VERSION:
        return Verification(False, f"unsupported version {cert.version}")
    if cert.graph_hash != graph_hash(g):
        return Verification(False, "graph hash does not match the input graph")
    if cert.d <= 0:
        return Verification(False, "d must be positive")
    if not cert.edges:
        return Verification(False, "subgraph has no edges")
    seen = set()
    for u, v in cert.edges:
        e = (min(u, v), max(u, v))
        if e in seen:
            return Verification(False, f"duplicate edge {e}")
        seen.add(e)
        if not g.has_edge(u, v):
            return Verification(False, f"subgraph containment: ({u}, {v}) is not an edge")
    h = _witness_graph(g, sorted(seen))
    if len(components(h)) != 1:
        return Verification(False, "subgraph is not connected")
    if h.max_degree != cert.delta_H:
        return Verification(False, f"delta_H is {h.max_degree}, certificate claims {cert.delta_H}")
    x = cert.x
    if x <= 0 or x * x <= cert.d * cert.delta_H:
        return Verification(False, "threshold comparison fails: x**2 <= d * delta_H")
    # den**k * det(xI - A) = det(num*I - den*A), same sign
    num, den = x.numerator, x.denominator
    M = [[0] * h.n for _ in range(h.n)]
    for v in range(h.n):
        M[v][v] = num
        for u in h.adj[v]:
            M[v][u] = -den
    if _bareiss_det_sign(M) >= 0:
        return Verification(False, "characteristic polynomial is not negative at x")
    if cert.char_poly_hash and cert.char_poly_hash != poly_digest(char_poly(h)):
        return Verification(False, "characteristic polynomial hash audit failed")
    return Verification(True, "accepted")


# -- branch-and-bound over degree-capped subgraphs ------------------------------------


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    subgraphs_tested: int = 0
    caps_searched: int = 0
    caps_skipped: int = 0
    float_decisions: int = 0
    exact_decisions: int = 0
    witness_path: str = ""  # "exact" or "float": how the witness comparison was settled
    wall_time: float = 0.0

    def merge(self, other: SearchStats) -> None:
        self.witness_path = self.witness_path or other.witness_path
        for name in ("nodes", "leaves", "subgraphs_tested", "caps_searched", "caps_skipped",
                     "float_decisions", "exact_decisions"):
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def capped_cw_bound(M: np.ndarray, cap: int, goal: float = -math.inf, iters: int = 60) -> float:
    """Upper bound on ``rho(H)`` over subgraphs ``H`` of ``M`` with ``maxdeg(H) <= cap``.

    ``T(x)_v`` sums the ``cap`` largest ``x_u`` over neighbours ``u`` of ``v``; for
    positive ``x`` every such ``H`` has ``(A_H x)_v <= T(x)_v``, so
    ``max_v T(x)_v / x_v`` bounds ``rho(H)`` by Collatz-Wielandt. Iterating ``T``
    tightens the bound; iteration stops once it drops below ``goal``.
    """
    n = M.shape[0]
    if n == 0:
        return 0.0
    degs = M.sum(axis=1)
    capped = bool((degs > cap).any())
    best = float(min(cap, degs.max()))
    if best < goal:
        return best
    pad = 1.0 + (cap + 4) * _EPS
    x = np.ones(n)
    for _ in range(iters):
        if capped:
            W = M * x
            W.sort(axis=1)
            T = W[:, -cap:].sum(axis=1)
        else:
            T = M @ x
        ub = float((T / x).max()) * pad
        if ub < best:
            best = ub
        if best < goal:
            break
        x = T + x
        x /= x.max()
        np.maximum(x, 1e-300, out=x)
    return best


class _CapSearch:
    """Enumerate subgraphs of ``g`` maximal subject to ``maxdeg <= cap``.

    Propagation keeps three rules: undecided edges at a saturated vertex are
    excluded, undecided edges whose endpoints both have potential degree at most
    ``cap`` are included (every maximal subgraph below contains them), and an
    edge excluded by branching must end at a vertex whose potential degree stays
    at least ``cap`` (otherwise any completion could re-add it). A node becomes a
    leaf once every potential degree is at most ``cap``.
    """

    def __init__(self, g: Graph, cap: int, budget: int, stats: SearchStats,
                 prune: Callable[[float], bool], goal: Callable[[], float],
                 on_leaf: Callable[[list[Edge]], bool]):
        self.g = g
        self.cap = cap
        self.budget = budget
        self.stats = stats
        self.prune = prune
        self.goal = goal
        self.on_leaf = on_leaf
        self.edges = g.edges()
        self.status = [0] * len(self.edges)
        self.inc = [0] * g.n
        self.pot = g.degrees()
        self.at: list[list[int]] = [[] for _ in range(g.n)]
        for i, (u, v) in enumerate(self.edges):
            self.at[u].append(i)
            self.at[v].append(i)
        self.trail: list[int] = []
        self.branch_excluded: list[int] = []
        self.M = g.adjacency_matrix()
        self.nodes = 0

    def _set(self, i: int, s: int) -> None:
        u, v = self.edges[i]
        self.status[i] = s
        if s > 0:
            self.inc[u] += 1
            self.inc[v] += 1
        else:
            self.pot[u] -= 1
            self.pot[v] -= 1
            self.M[u, v] = self.M[v, u] = 0.0
        self.trail.append(i)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            i = self.trail.pop()
            u, v = self.edges[i]
            if self.status[i] > 0:
                self.inc[u] -= 1
                self.inc[v] -= 1
            else:
                self.pot[u] += 1
                self.pot[v] += 1
                self.M[u, v] = self.M[v, u] = 1.0
            self.status[i] = 0

    def _propagate(self, touched) -> bool:
        cap, inc, pot, status = self.cap, self.inc, self.pot, self.status
        queue = list(touched)
        while queue:
            v = queue.pop()
            if inc[v] > cap:
                return False
            if inc[v] == cap and pot[v] > cap:
                for i in self.at[v]:
                    if status[i] == 0:
                        self._set(i, -1)
                        queue.extend(self.edges[i])
            if pot[v] <= cap:
                for i in self.at[v]:
                    if status[i] == 0:
                        a, b = self.edges[i]
                        if pot[a] <= cap and pot[b] <= cap:
                            self._set(i, 1)
                            queue.extend(self.edges[i])
        for i in self.branch_excluded:
            u, v = self.edges[i]
            if pot[u] < cap and pot[v] < cap:
                return False
        return True

    def run(self) -> bool:
        """True when ``on_leaf`` asked to stop; raises ``BudgetExceeded``."""
        if not self._propagate(range(self.g.n)):
            return False
        return self._dfs(0)

    def _dfs(self, ptr: int) -> bool:
        self.nodes += 1
        self.stats.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted at cap {self.cap}")
        status = self.status
        while ptr < len(status) and status[ptr] != 0:
            ptr += 1
        if ptr == len(status):
            self.stats.leaves += 1
            return self.on_leaf([e for e, s in zip(self.edges, status) if s > 0])
        if self.prune(capped_cw_bound(self.M, self.cap, self.goal())):
            return False
        u, v = self.edges[ptr]
        mark = len(self.trail)
        self._set(ptr, 1)
        if self._propagate((u, v)) and self._dfs(ptr + 1):
            return True
        self._undo(mark)
        self._set(ptr, -1)
        self.branch_excluded.append(ptr)
        found = self._propagate((u, v)) and self._dfs(ptr + 1)
        self.branch_excluded.pop()
        if found:
            return True
        self._undo(mark)
        return False


def _edge_components(edges: list[Edge]) -> list[list[Edge]]:
    """Split an edge list into connected pieces, each sorted, ordered by first edge."""
    parent: dict[int, int] = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, list[Edge]] = {}
    for e in edges:
        groups.setdefault(find(e[0]), []).append(e)
    return sorted((sorted(es) for es in groups.values()), key=lambda es: es[0])


def _graph_components(g: Graph) -> list[tuple[Graph, tuple[int, ...]]]:
    out = []
    for block in components(g):
        if len(block) > 1:
            sub = induced_subgraph(g, block)
            out.append((sub.graph, sub.parent_ids))
    return out


def _to_parent(edges, ids) -> list[Edge]:
    return sorted((ids[u], ids[v]) for u, v in edges)


def _sync_counter(stats: SearchStats, counter: Counter) -> None:
    stats.float_decisions += counter["float"]
    stats.exact_decisions += counter["exact"]
    counter.clear()


def _search_cap(g: Graph, d: Fraction, cap: int, strict: bool, budget: int):
    """Look for a connected violator among maximal ``cap``-capped subgraphs.

    Returns ``(edges or None, exhausted, stats)`` with edges in ``g``'s ids.
    """
    counter: Counter = Counter()
    target = d * cap
    exhausted = False

    def prune(ub: float) -> bool:
        sq = Fraction(ub) ** 2
        return sq <= target if strict else sq < target

    goal = math.sqrt(float(target)) * (1 - 1e-9)
    stats = SearchStats(caps_skipped=1)
    for comp, ids in _graph_components(g):
        if comp.max_degree < cap:
            continue
        hayes = hayes_rho_sq_bound(degeneracy(comp), cap)
        if hayes < target or (strict and hayes == target):
            continue
        s = compare_rho_sq(comp, target, counter)
        if s < 0 or (strict and s == 0):
            continue
        stats.caps_skipped, stats.caps_searched = 0, 1
        tested: dict[tuple, bool] = {}
        hit: list[list[Edge]] = []

        def on_leaf(edges, comp=comp, tested=tested, hit=hit):
            for piece in _edge_components(edges):
                key = tuple(piece)
                if key not in tested:
                    h = _witness_graph(comp, piece)
                    exact_before = counter["exact"]
                    sign = compare_rho_sq(h, d * h.max_degree, counter)
                    stats.subgraphs_tested += 1
                    tested[key] = sign > 0 or (not strict and sign == 0)
                    if tested[key]:
                        stats.witness_path = "exact" if counter["exact"] > exact_before else "float"
                if tested[key]:
                    hit.append(piece)
                    return True
            return False

        search = _CapSearch(comp, cap, budget, stats, prune, lambda: goal, on_leaf)
        try:
            if search.run():
                _sync_counter(stats, counter)
                return _to_parent(hit[0], ids), exhausted, stats
        except BudgetExceeded:
            exhausted = True
    _sync_counter(stats, counter)
    return None, exhausted, stats


def _cap_plan(g: Graph, d: Fraction, strict: bool) -> list[int]:
    """Caps worth searching, descending. A cap ``D <= d`` cannot host a violator."""
    lowest = math.floor(d) + 1 if strict else math.ceil(d)
    return list(range(g.max_degree, max(lowest, 1) - 1, -1))


@dataclass
class DecisionResult:
    verdict: str
    d: Fraction
    certificate: Optional[Certificate] = None
    witness_cap: Optional[int] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def degenerate(self) -> Optional[bool]:
        if self.verdict == BUDGET_EXCEEDED:
            return None
        return self.verdict == DEGENERATE


def _cap_worker(args):
    g, d, cap, strict, budget = args
    return _search_cap(g, d, cap, strict, budget)


def find_violation(g: Graph, d, budget: int = DEFAULT_BUDGET, strict: bool = True,
                   jobs: int = 1):
    """Search for a connected subgraph with ``rho**2 > d*maxdeg`` (``>=`` if not strict).

    Returns ``(edges or None, cap, exhausted, stats)``. Caps run from the maximum
    degree downwards; the reported witness comes from the highest cap with a
    violation, which makes the answer independent of ``jobs``.
    """
    d = Fraction(d)
    if d <= 0:
        raise ValueError("d must be positive")
    if budget < 1:
        raise ValueError("budget must be positive")
    stats = SearchStats()
    caps = _cap_plan(g, d, strict)
    results = {}
    if jobs > 1 and len(caps) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for cap, res in zip(caps, pool.map(_cap_worker, [(g, d, c, strict, budget) for c in caps])):
                results[cap] = res
    exhausted_any = False
    for cap in caps:
        res = results.get(cap) or _search_cap(g, d, cap, strict, budget)
        edges, exhausted, st = res
        stats.merge(st)
        exhausted_any |= exhausted
        if edges is not None:
            return edges, cap, exhausted_any, stats
    return None, None, exhausted_any, stats


def decide(g: Graph, d, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> DecisionResult:
    """Exactly decide whether ``g`` is spectrally ``d``-degenerate.

    A negative verdict carries a certificate. When the node budget of some cap
    runs out before either a violation is found or every cap is cleared, the
    verdict is ``budget-exceeded``.
    """
    d = Fraction(d)
    start = time.perf_counter()
    edges, cap, exhausted, stats = find_violation(g, d, budget, strict=True, jobs=jobs)
    if edges is not None:
        result = DecisionResult(NOT_DEGENERATE, d, make_certificate(g, edges, d), cap, stats)
    elif exhausted:
        result = DecisionResult(BUDGET_EXCEEDED, d, None, None, stats)
    else:
        result = DecisionResult(DEGENERATE, d, None, None, stats)
    stats.wall_time = time.perf_counter() - start
    return result


def sdeg_at_least(g: Graph, d, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> Optional[list[Edge]]:
    """A connected subgraph with ``rho**2 >= d*maxdeg`` (so ``sdeg >= d``), else ``None``.

    Raises ``BudgetExceeded`` when the search could not finish.
    """
    edges, _, exhausted, _ = find_violation(g, d, budget, strict=False, jobs=jobs)
    if edges is None and exhausted:
        raise BudgetExceeded("budget exhausted while searching for a witness")
    return edges


# -- spectral degeneracy number ---------------------------------------------------------


@dataclass(frozen=True)
class SpectralDegeneracyNumber:
    """Enclosure ``[lo, hi]`` of sdeg, plus a witness subgraph attaining ``>= lo``.

    ``exact`` is set when the value was pinned down to a rational and checked
    exactly against the witness.
    """

    lo: float
    hi: float
    witness: tuple[Edge, ...]
    exact: Optional[Fraction] = None
    stats: SearchStats = field(default_factory=SearchStats, compare=False)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _ratio_enclosure(h: Graph, tol: float) -> tuple[float, float]:
    delta = h.max_degree
    rtol = tol * delta / (2 * delta + 2)
    try:
        enc = spectral_radius_enclosure(h, tol=rtol, max_iter=200000, warm_start=True)
    except EnclosureNotNarrowed as exc:
        enc = exc.enclosure
    return enc.lo**2 / delta, enc.hi**2 / delta


def _exact_ratio(h: Graph, lo: float, hi: float) -> Optional[Fraction]:
    """The rational in ``[lo, hi]`` equal to ``rho(h)**2/maxdeg(h)``, if a simple one exists."""
    mid = (lo + hi) / 2
    for den in (1, 2, 3, 4, 6, 12):
        r = Fraction(round(mid * den), den)
        if lo - 1e-12 <= r <= hi + 1e-12 and compare_rho_sq(h, r * h.max_degree) == 0:
            return r
    return None


def spectral_degeneracy_number(g: Graph, tol: float = 1e-9,
                               budget: int = DEFAULT_BUDGET) -> SpectralDegeneracyNumber:
    """Enclosure of ``sdeg(g) = max rho(H)**2 / maxdeg(H)`` over subgraphs with an edge.

    Each cap ``D`` runs a branch-and-bound over maximal ``D``-capped subgraphs that
    prunes every subtree whose capped Collatz-Wielandt bound cannot beat the
    incumbent by more than ``tol``. Raises ``BudgetExceeded`` if a cap runs out.
    """
    if g.m == 0:
        raise ValueError("sdeg is undefined for an edgeless graph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    start = time.perf_counter()
    stats = SearchStats()
    leaf_tol = tol / 2
    best = {"lo": 0.0, "hi": 0.0, "edges": ()}

    def offer(h: Graph, edges) -> None:
        lo, hi = _ratio_enclosure(h, leaf_tol)
        stats.subgraphs_tested += 1
        if lo > best["lo"] or not best["edges"]:
            best.update(lo=max(lo, best["lo"]), edges=tuple(edges))
        best["hi"] = max(best["hi"], hi)

    comps = _graph_components(g)
    # seed the incumbent with cheap candidates so that more caps get skipped
    for comp, ids in comps:
        offer(comp, _to_parent(comp.edges(), ids))
        core = _k_core_edges(comp, degeneracy(comp))
        for piece in _edge_components(core):
            offer(_witness_graph(comp, piece), _to_parent(piece, ids))

    for comp, ids in comps:
        k = degeneracy(comp)
        for cap in range(comp.max_degree, 0, -1):
            floor = best["lo"] + tol
            if cap <= floor or hayes_rho_sq_bound(k, cap) / cap <= floor:
                stats.caps_skipped += 1
                continue
            stats.caps_searched += 1
            seen: set[tuple] = set()

            def on_leaf(edges, comp=comp, ids=ids, seen=seen):
                for piece in _edge_components(edges):
                    key = tuple(piece)
                    if key not in seen:
                        seen.add(key)
                        offer(_witness_graph(comp, piece), _to_parent(piece, ids))
                return False

            def goal(cap=cap):
                return math.sqrt((best["lo"] + tol) * cap)

            def prune(ub, cap=cap):
                return ub * ub <= (best["lo"] + tol) * cap

            _CapSearch(comp, cap, budget, stats, prune, goal, on_leaf).run()
    # pruned subtrees stay below lo + tol; visited leaves below their own hi
    lo = best["lo"]
    hi = max(lo + tol, best["hi"]) if best["hi"] > lo + tol else lo + tol
    witness = best["edges"]
    exact = _exact_ratio(_witness_graph(g, witness), lo, hi)
    stats.wall_time = time.perf_counter() - start
    if exact is not None:
        return SpectralDegeneracyNumber(float(exact), float(exact), witness, exact, stats)
    return SpectralDegeneracyNumber(lo, hi, witness, None, stats)


def _k_core_edges(g: Graph, k: int) -> list[Edge]:
    core = peel(g).core_numbers
    return [(u, v) for u, v in g.edges() if core[u] >= k and core[v] >= k]


# -- heuristic interval -----------------------------------------------------------------


@dataclass(frozen=True)
class SdegInterval:
    """``d_lo <= sdeg <= d_hi``; ``certificate`` shows non-degeneracy below ``d_lo``.

    ``d_lo_attained`` means the witness attains ``d_lo`` exactly (no certificate is
    possible then, since the graph is d_lo-degenerate at the boundary).
    """

    d_lo: Fraction
    d_hi: Fraction
    witness: tuple[Edge, ...]
    d_lo_attained: bool
    certificate: Optional[Certificate]


def _greedy_capped(g: Graph, cap: int) -> list[Edge]:
    # heavy edges first: endpoints with large degree sum
    deg = g.degrees()
    order = sorted(g.edges(), key=lambda e: (-(deg[e[0]] + deg[e[1]]), e))
    load = [0] * g.n
    out = []
    for u, v in order:
        if load[u] < cap and load[v] < cap:
            load[u] += 1
            load[v] += 1
            out.append((u, v))
    return sorted(out)


def _ball_edges(g: Graph, center: int, radius: int) -> list[Edge]:
    dist = bfs_distances(g, center)
    keep = {v for v in range(g.n) if dist[v] <= radius}
    return [(u, v) for u, v in g.edges() if u in keep and v in keep]


def _candidate_edge_sets(g: Graph):
    yield g.edges()
    core = peel(g).core_numbers
    for k in sorted(set(core)):
        if k >= 1:
            yield [(u, v) for u, v in g.edges() if core[u] >= k and core[v] >= k]
    for cap in range(1, g.max_degree + 1):
        yield _greedy_capped(g, cap)
    deg = g.degrees()
    hubs = sorted(range(g.n), key=lambda v: (-deg[v], v))[:16]
    for c in hubs:
        if deg[c] == 0:
            break
        for radius in (1, 2):
            yield _ball_edges(g, c, radius)


def approximate_sdeg(g: Graph, eps: float = 0.0) -> SdegInterval:
    """Heuristic interval around sdeg; no approximation ratio is claimed.

    ``d_hi`` comes from the degeneracy bound. ``d_lo`` is the best ratio
    ``rho(H)**2/maxdeg(H)`` over a polynomial family of sampled subgraphs (the
    whole graph, cores, greedy degree-capped subgraphs, breadth-limited balls),
    rounded down to a rational that is proved to be at most the ratio.
    ``eps`` is accepted for interface symmetry and only loosens the rounding.
    """
    if g.m == 0:
        raise ValueError("sdeg is undefined for an edgeless graph")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    d_hi = Fraction(spectral_upper_from_degeneracy(g).sdeg_upper)
    best_lo, best_piece = -1.0, None
    seen: set[tuple] = set()
    for es in _candidate_edge_sets(g):
        for piece in _edge_components(es):
            key = tuple(piece)
            if key in seen:
                continue
            seen.add(key)
            lo, _ = _ratio_enclosure(_witness_graph(g, piece), 1e-9)
            if lo > best_lo:
                best_lo, best_piece = lo, key
    h = _witness_graph(g, best_piece)
    delta = h.max_degree
    # a small-denominator value may be attained exactly (regular pieces, stars)
    r = Fraction(best_lo).limit_denominator(1000)
    if compare_rho_sq(h, r * delta) == 0:
        return SdegInterval(r, max(d_hi, r), best_piece, True, None)
    # otherwise round down on a 10**-6 grid (coarser when eps allows)
    scale = 10**6 if eps == 0 else max(1, int(1 / eps))
    r = Fraction(math.floor(best_lo * scale), scale)
    while r > 0 and compare_rho_sq(h, r * delta) <= 0:
        r -= Fraction(1, scale)
    r = max(r, Fraction(0))
    cert = make_certificate(g, best_piece, r) if r > 0 else None
    return SdegInterval(r, max(d_hi, r), best_piece, False, cert)
