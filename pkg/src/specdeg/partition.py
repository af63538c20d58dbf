"""Vertex partitions, quotient (sub-)adjacency matrices and the degree-bucket machinery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .graph import Graph, induced_subgraph
from .spectra import spectral_radius_enclosure
from .degeneracy import _le_log2, converse_bound, satisfies_converse

Block = tuple[int, ...]


def _check_partition(g: Graph, blocks: Sequence[Sequence[int]], allow_empty: bool = False) -> list[Block]:
    out = []
    seen = [False] * g.n
    for b in blocks:
        b = tuple(sorted(b))
        if not b and not allow_empty:
            raise ValueError("partition has an empty block")
        for v in b:
            if not 0 <= v < g.n:
                raise ValueError(f"vertex {v} out of range")
            if seen[v]:
                raise ValueError(f"vertex {v} appears in two blocks")
            seen[v] = True
        out.append(b)
    if not all(seen):
        raise ValueError("partition does not cover every vertex")
    return out


def refine_equitable(g: Graph, initial: Sequence[Sequence[int]]) -> list[Block]:
    """Coarsest equitable refinement of ``initial`` (colour refinement to a fixpoint).

    Blocks come back ordered by their smallest member.
    """
    blocks = _check_partition(g, initial)
    colour = [0] * g.n
    for i, b in enumerate(blocks):
        for v in b:
            colour[v] = i
    ncol = len(blocks)
    while True:
        sigs = {}
        new = [0] * g.n
        for v in range(g.n):
            counts = {}
            for u in g.adj[v]:
                counts[colour[u]] = counts.get(colour[u], 0) + 1
            key = (colour[v], tuple(sorted(counts.items())))
            new[v] = sigs.setdefault(key, len(sigs))
        if len(sigs) == ncol:
            break
        colour, ncol = new, len(sigs)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(colour[v], []).append(v)
    return sorted((tuple(b) for b in groups.values()), key=lambda b: b[0])


@dataclass(frozen=True)
class QuotientMatrix:
    """``b[i][j] = e[i][j] / n[i]`` where ``e`` counts ordered adjacent pairs."""

    b: tuple[tuple[Fraction, ...], ...]
    sizes: tuple[int, ...]
    edge_counts: tuple[tuple[int, ...], ...]
    equitable: bool

    @property
    def k(self) -> int:
        return len(self.sizes)

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.b], dtype=float).reshape(self.k, self.k)


def quotient(g: Graph, blocks: Sequence[Sequence[int]], allow_empty: bool = False) -> QuotientMatrix:
    """Quotient adjacency matrix of an arbitrary partition.

    Empty blocks (only allowed for bucket partitions) get an all-zero row.
    """
    blocks = _check_partition(g, blocks, allow_empty)
    k = len(blocks)
    where = [0] * g.n
    for i, b in enumerate(blocks):
        for v in b:
            where[v] = i
    e = [[0] * k for _ in range(k)]
    equitable = True
    for i, b in enumerate(blocks):
        first: Optional[list[int]] = None
        for v in b:
            row = [0] * k
            for u in g.adj[v]:
                row[where[u]] += 1
            for j in range(k):
                e[i][j] += row[j]
            if first is None:
                first = row
            elif row != first:
                equitable = False
    sizes = tuple(len(b) for b in blocks)
    bmat = tuple(
        tuple(Fraction(e[i][j], sizes[i]) if sizes[i] else Fraction(0) for j in range(k))
        for i in range(k)
    )
    return QuotientMatrix(bmat, sizes, tuple(tuple(r) for r in e), equitable)


def matrix_spectral_radius(M) -> float:
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(M))))


@dataclass
class QuotientReport:
    rho_b: float
    rho_g_lo: float
    rho_g_hi: float
    equitable: bool
    lower_bound_ok: bool
    equality_ok: Optional[bool]
    sub_rho: Optional[float] = None
    sub_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.lower_bound_ok and self.equality_ok is not False and self.sub_ok is not False


def quotient_rho_checks(g: Graph, blocks: Sequence[Sequence[int]], sub_matrix=None,
                        tol: float = 1e-9) -> QuotientReport:
    """Compare the quotient's spectral radius with the graph's.

    Always ``rho(B) <= rho(G)``; equality when the partition is equitable; and
    ``rho(B') <= rho(G)`` for an entrywise-dominated ``B'`` when one is given.
    """
    qm = quotient(g, blocks)
    B = qm.as_float()
    rho_b = matrix_spectral_radius(B)
    enc = spectral_radius_enclosure(g, tol=tol, warm_start=True)
    lower_ok = rho_b <= enc.hi + 2 * tol
    equality = None
    if qm.equitable:
        equality = enc.lo - 2 * tol <= rho_b <= enc.hi + 2 * tol
    report = QuotientReport(rho_b, enc.lo, enc.hi, qm.equitable, lower_ok, equality)
    if sub_matrix is not None:
        S = [[Fraction(x) for x in row] for row in sub_matrix]
        if len(S) != qm.k or any(len(row) != qm.k for row in S):
            raise ValueError("sub-adjacency matrix has the wrong shape")
        for i in range(qm.k):
            for j in range(qm.k):
                if S[i][j] < 0 or S[i][j] > qm.b[i][j]:
                    raise ValueError(f"entry ({i}, {j}) is not within [0, b_ij]")
        report.sub_rho = matrix_spectral_radius([[float(x) for x in row] for row in S])
        report.sub_ok = report.sub_rho <= enc.hi + 2 * tol
    return report


# -- degree buckets -------------------------------------------------------------------


def preprocess_for_buckets(g: Graph) -> tuple[Graph, int]:
    """Delete edges whose endpoints both have degree above ``r = mindeg(g)``.

    Edges are scanned in lexicographic order against current degrees. Degrees
    only decrease, so an edge that is not deletable stays that way, and one
    pass gives the same result as rescanning from the start after every
    deletion. Returns the reduced graph and ``r``.
    """
    if g.m == 0:
        raise ValueError("graph has no edges")
    deg = g.degrees()
    r = min(deg)
    kept = []
    for u, v in g.edges():
        if deg[u] > r and deg[v] > r:
            deg[u] -= 1
            deg[v] -= 1
        else:
            kept.append((u, v))
    return Graph.from_edges(g.n, kept), r


@dataclass(frozen=True)
class BucketPartition:
    r: int
    levels: int
    blocks: tuple[Block, ...]
    quotient: QuotientMatrix
    extended: bool


def bucket_levels(max_degree: int, r: int) -> int:
    """Smallest ``l >= 0`` with ``r * 2**l >= max_degree``."""
    l = 0
    while r << l < max_degree:
        l += 1
    return l


def bucket_partition(g: Graph, r: Optional[int] = None, extended: bool = False) -> BucketPartition:
    """Blocks ``V_0 = {deg = r}`` and ``V_i = {2**(i-1) r < deg <= 2**i r}``.

    ``r`` defaults to the minimum degree. With ``extended=True`` a graph with
    vertices of degree below ``r`` is accepted and those vertices join ``V_0``.
    """
    deg = g.degrees()
    if not deg:
        raise ValueError("graph has no vertices")
    delta, mindeg = max(deg), min(deg)
    r = mindeg if r is None else int(r)
    if r <= 0:
        raise ValueError("buckets need a positive reference degree")
    if mindeg < r and not extended:
        raise ValueError(f"minimum degree {mindeg} is below the reference degree {r}")
    levels = bucket_levels(delta, r)
    blocks: list[list[int]] = [[] for _ in range(levels + 1)]
    for v, dv in enumerate(deg):
        if dv <= r:
            blocks[0].append(v)
        else:
            blocks[bucket_levels(dv, r)].append(v)
    qm = quotient(g, blocks, allow_empty=True)
    return BucketPartition(r, levels, tuple(tuple(b) for b in blocks), qm, mindeg < r)


def arrow_matrix(first_row: Sequence, r: int) -> list[list[Fraction]]:
    """``[[0, b_01..b_0t], [r, 0..], [2r, 0..], ..., [2**(t-1) r, 0..]]``."""
    t = len(first_row)
    M = [[Fraction(0)] * (t + 1) for _ in range(t + 1)]
    for i in range(1, t + 1):
        M[0][i] = Fraction(first_row[i - 1])
        M[i][0] = Fraction(r * 2 ** (i - 1))
    return M


def bt_closed_form(B: Sequence[Sequence], r: int) -> Fraction:
    """Squared spectral radius of an arrow matrix: ``sum_i 2**(i-1) r b_0i``.

    The characteristic polynomial of the arrow matrix is
    ``lambda**(t-1) * (lambda**2 - sum_i b_0i c_i)`` with ``c_i`` the first
    column, and the entries are non-negative.
    """
    M = [[Fraction(x) for x in row] for row in B]
    t = len(M) - 1
    if any(len(row) != t + 1 for row in M):
        raise ValueError("matrix is not square")
    for i in range(t + 1):
        for j in range(t + 1):
            if i == 0 and j > 0:
                continue
            if j == 0 and i > 0:
                if M[i][0] != r * 2 ** (i - 1):
                    raise ValueError(f"entry ({i}, 0) should be {r * 2 ** (i - 1)}")
                continue
            if M[i][j] != 0:
                raise ValueError(f"entry ({i}, {j}) should be zero in an arrow matrix")
    return sum((r * 2 ** (i - 1) * M[0][i] for i in range(1, t + 1)), Fraction(0))


@dataclass
class Inequality:
    name: str
    lhs: Fraction
    rhs: Union[Fraction, float]
    holds: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": _fmt(self.lhs), "rhs": _fmt(self.rhs), "holds": self.holds}


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


@dataclass
class BucketDiagnostic:
    d: Fraction
    r: int
    max_degree: int
    levels: int
    deleted_edges: int
    extended: bool
    checks: list[Inequality] = field(default_factory=list)
    final_bound: float = 0.0
    final_holds: bool = True

    @property
    def violations(self) -> list[Inequality]:
        return [c for c in self.checks if not c.holds]

    @property
    def ok(self) -> bool:
        return not self.violations and self.final_holds


def bucket_diagnostic(g0: Graph, d) -> BucketDiagnostic:
    """Run the bucket construction on ``g0`` and check its inequalities.

    ``d`` must be a certified spectral-degeneracy upper bound for ``g0``; every
    reported violation then points at a software defect. Checked: the internal
    average degree of ``V_0`` is at most ``r/2`` (when ``r >= 4d``), the
    weighted prefix sums ``sum_{i<=t} 2**(i-1) b_0i <= 2**t d``, the plain
    prefix sums ``sum_{i<=s} b_0i <= (s+1) d``, their total against
    ``2d log2(maxdeg/d)`` (when ``r > 4d``), and ``mindeg(g0) <= max(4d, 4d
    log2(maxdeg/d))``.
    """
    d = Fraction(d)
    if d <= 0:
        raise ValueError("d must be positive")
    delta0 = g0.max_degree
    if g0.m == 0 or min(g0.degrees()) == 0:
        # r = 0: no buckets, only the final degree bound is meaningful
        diag = BucketDiagnostic(d, 0, delta0, 0, 0, False)
        diag.final_bound = converse_bound(d, max(delta0, 1))
        return diag
    g, r = preprocess_for_buckets(g0)
    bp = bucket_partition(g, r, extended=True)
    B = bp.quotient.b
    l = bp.levels
    diag = BucketDiagnostic(d, r, delta0, l, g0.m - g.m, bp.extended)
    if r >= 4 * d:
        diag.checks.append(Inequality("b00<=r/2", B[0][0], Fraction(r, 2), B[0][0] <= Fraction(r, 2)))
    for t in range(1, l + 1):
        lhs = sum((2 ** (i - 1) * B[0][i] for i in range(1, t + 1)), Fraction(0))
        rhs = 2**t * d
        diag.checks.append(Inequality(f"weighted-prefix[t={t}]", lhs, rhs, lhs <= rhs))
    for s in range(1, l + 1):
        lhs = sum((B[0][i] for i in range(1, s + 1)), Fraction(0))
        rhs = (s + 1) * d
        diag.checks.append(Inequality(f"prefix[s={s}]", lhs, rhs, lhs <= rhs))
    if r > 4 * d and l >= 1:
        total = sum((B[0][i] for i in range(1, l + 1)), Fraction(0))
        # total <= 2d log2(maxdeg/d)  <=>  2**(total / 2d) <= maxdeg/d
        holds = _le_log2(total / (2 * d), Fraction(g.max_degree) / d)
        rhs = 2 * float(d) * math.log2(g.max_degree / float(d))
        diag.checks.append(Inequality("prefix-total<=2d*log2(maxdeg/d)", total, rhs, holds))
    diag.final_bound = converse_bound(d, max(delta0, 1))
    diag.final_holds = satisfies_converse(min(g0.degrees()), d, max(delta0, 1))
    return diag
