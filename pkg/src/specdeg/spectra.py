"""Certified spectral radius enclosures and exact threshold comparisons."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import sparse

from .exact import (
    IntPoly,
    QuadraticValue,
    Threshold,
    as_quadratic,
    char_poly,
    sign_at,
    sign_of,
    sturm_chain,
    sturm_count_above,
)
from .graph import Graph, components, degree_stats, diameter, induced_subgraph

_EPS = 2.0**-52

# Relative distance to a threshold below which float enclosures are not trusted
# to decide; such comparisons go through the Sturm path.
BOUNDARY_RTOL = Fraction(1, 10**5)


class EnclosureNotNarrowed(RuntimeError):
    """Power iteration hit its cap before reaching the requested width."""

    def __init__(self, msg: str, enclosure: "SpectralEnclosure"):
        super().__init__(msg)
        self.enclosure = enclosure


@dataclass(frozen=True)
class SpectralEnclosure:
    lo: float
    hi: float
    iterations: int = 0

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi


def _component_enclosure(A, max_deg: int, min_deg: int, tol: float, max_iter: int,
                         x0: Optional[np.ndarray]) -> SpectralEnclosure:
    n = A.shape[0]
    # Collatz-Wielandt with the all-ones vector gives the row-sum bounds exactly
    best_hi, best_lo = float(max_deg), float(min_deg)
    if best_hi - best_lo <= tol:
        return SpectralEnclosure(best_lo, best_hi, 0)
    x = np.ones(n) if x0 is None else x0
    hi_pad = 1.0 + (max_deg + 4) * _EPS
    lo_pad = 1.0 - (n + 4) * _EPS
    last_improved, last_width = 0, math.inf
    for it in range(1, max_iter + 1):
        y = A @ x
        ratios = y / x
        best_hi = min(best_hi, float(ratios.max()) * hi_pad)
        ray = float(x @ y) / float(x @ x)
        best_lo = max(best_lo, max(ray, float(ratios.min())) * lo_pad)
        width = best_hi - best_lo
        if width <= tol:
            return SpectralEnclosure(best_lo, best_hi, it)
        if width < last_width * (1 - 1e-12):
            last_width, last_improved = width, it
        elif it - last_improved > 500:
            break
        # shifted iteration: A + I is primitive on a connected component
        x = y + x
        x /= x.max()
        if x.min() <= 0.0:
            x = np.maximum(x, 1e-300)
    enc = SpectralEnclosure(best_lo, best_hi, it)
    raise EnclosureNotNarrowed(f"width {enc.width:.3g} > tol {tol:.3g} after {it} iterations", enc)


def _warm_vector(A) -> np.ndarray:
    dense = A.toarray() if sparse.issparse(A) else A
    w, V = np.linalg.eigh(dense)
    x = np.abs(V[:, -1])
    floor = x.max() * 1e-12
    return np.maximum(x, floor)


def spectral_radius_enclosure(g: Graph, tol: float = 1e-9, max_iter: int = 10**6,
                              warm_start: bool = False) -> SpectralEnclosure:
    """Certified interval containing the spectral radius of ``g``.

    Each connected component is iterated separately (shifted power iteration
    from the all-ones vector). The upper end is a Collatz-Wielandt bound
    ``max_v (Ax)_v / x_v``, the lower end the larger of the Rayleigh quotient
    and ``min_v (Ax)_v / x_v``; both are padded for floating point rounding.
    ``warm_start`` starts from a dense eigensolver's Perron vector instead,
    which only changes how fast the same certified bounds tighten.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if g.m == 0:
        return SpectralEnclosure(0.0, 0.0, 0)
    lo = hi = 0.0
    iters = 0
    for block in components(g):
        if len(block) < 2:
            continue
        sub = induced_subgraph(g, block).graph
        degs = sub.degrees()
        if sub.m == 1:
            lo, hi = max(lo, 1.0), max(hi, 1.0)
            continue
        rows = np.repeat(np.arange(sub.n), degs)
        cols = np.fromiter((u for a in sub.adj for u in a), dtype=np.int64, count=2 * sub.m)
        A = sparse.csr_matrix((np.ones(2 * sub.m), (rows, cols)), shape=(sub.n, sub.n))
        x0 = _warm_vector(A) if warm_start and sub.n <= 2000 else None
        enc = _component_enclosure(A, max(degs), min(degs), tol, max_iter, x0)
        lo, hi = max(lo, enc.lo), max(hi, enc.hi)
        iters += enc.iterations
    return SpectralEnclosure(lo, hi, iters)


# -- exact comparisons ------------------------------------------------------------


def _exact_compare(p: IntPoly, t: QuadraticValue) -> int:
    """sign(largest real root of p - t), for p with a real root >= 0."""
    chain = sturm_chain(p)
    if sturm_count_above(p, t, chain) >= 1:
        return 1
    if sign_at(p, t) == 0:
        return 0
    return -1


def compare_rho(g: Graph, threshold: Threshold, stats: Optional[Counter] = None,
                margin: Fraction = BOUNDARY_RTOL) -> int:
    """Exact ``sign(rho(g) - threshold)`` for a threshold ``>= 0``.

    A certified float enclosure decides when it clears the threshold by the
    relative ``margin``; everything closer is settled with a Sturm count on the
    characteristic polynomial (the spectral radius is its largest root).
    """
    t = as_quadratic(threshold)
    if sign_of(t) < 0:
        raise ValueError("threshold must be non-negative")
    stats = stats if stats is not None else Counter()
    if g.m == 0:
        return -sign_of(t)
    tf = float(t)
    tol = max(float(margin) * max(tf, 1e-3) / 4, 1e-12 * (1 + tf))
    best = -1
    for block in components(g):
        if len(block) < 2:
            continue
        sub = induced_subgraph(g, block).graph
        try:
            enc = spectral_radius_enclosure(sub, tol=tol, max_iter=20000, warm_start=True)
        except EnclosureNotNarrowed as exc:
            enc = exc.enclosure
        lo, hi = Fraction(enc.lo), Fraction(enc.hi)
        if sign_of(QuadraticValue(lo) - t * (1 + margin)) > 0:
            stats["float"] += 1
            return 1
        if sign_of(t * (1 - margin) - QuadraticValue(hi)) > 0:
            stats["float"] += 1
            continue
        stats["exact"] += 1
        s = _exact_compare(char_poly(sub), t)
        if s > 0:
            return 1
        best = max(best, s)
    return best


def compare_rho_sq(g: Graph, t, stats: Optional[Counter] = None) -> int:
    """Exact ``sign(rho(g)**2 - t)`` for rational ``t >= 0``."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be non-negative")
    return compare_rho(g, QuadraticValue.sqrt(t), stats)


def rho_exceeds_sqrt(g: Graph, d, stats: Optional[Counter] = None) -> bool:
    """Exactly decide ``rho(g) > sqrt(d * maxdeg(g))``."""
    d = Fraction(d)
    if d < 0:
        raise ValueError("d must be non-negative")
    if g.m == 0:
        raise ValueError("graph has no edges")
    return compare_rho_sq(g, d * g.max_degree, stats) > 0


def spectral_ratio(g: Graph, tol: float = 1e-9) -> SpectralEnclosure:
    """Enclosure of ``rho(g)**2 / maxdeg(g)``."""
    if g.m == 0:
        raise ValueError("graph has no edges")
    delta = g.max_degree
    tol_rho = tol * delta / (2 * delta + 1)
    enc = spectral_radius_enclosure(g, tol=tol_rho, warm_start=True)
    return SpectralEnclosure(enc.lo**2 / delta, enc.hi**2 / delta, enc.iterations)


# -- bound suite ------------------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    bound: float
    lo: float
    hi: float
    status: str  # satisfied | violated | indeterminate | hypothesis-unmet
    exact: bool = False
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "bound": repr(self.bound),
            "rho_lo": repr(self.lo),
            "rho_hi": repr(self.hi),
            "status": self.status,
            "exact": self.exact,
            "note": self.note,
        }


def _cube_root_below(x: Fraction, bits: int = 40) -> Fraction:
    """Rational lower bound for the real cube root of ``x >= 0``."""
    scale = 1 << bits
    n = x.numerator * scale**3 // x.denominator
    r = int(round(n ** (1 / 3)))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return Fraction(r, scale)


def check_bound_suite(g: Graph, planar: bool = False, hayes_d: Optional[int] = None,
                      near_regular_d: Optional[int] = None, cioaba: bool = False,
                      tol: float = 1e-9, refine_steps: int = 3,
                      exact_limit: int = 80) -> list[BoundCheck]:
    """Evaluate the requested spectral upper bounds against a certified enclosure.

    Planarity and orientation facts are caller-asserted. The two bounds
    ``sqrt(maxdeg) <= rho <= maxdeg`` are always checked. A straddling
    enclosure is refined (tol / 10 per step); if it still straddles and the
    bound is exactly representable, components up to ``exact_limit`` vertices
    are settled with the Sturm path.
    """
    delta, _, degs = degree_stats(g)
    n = g.n
    results: list[BoundCheck] = []
    if g.m == 0:
        return results

    state = {"tol": tol, "enc": spectral_radius_enclosure(g, tol=tol, warm_start=True)}

    def enclosure_for(value: float, strict_upper: bool):
        for _ in range(refine_steps):
            enc = state["enc"]
            if enc.hi < value or enc.lo > value or (not strict_upper and enc.hi <= value):
                break
            state["tol"] /= 10
            try:
                state["enc"] = spectral_radius_enclosure(g, tol=state["tol"], warm_start=True)
            except EnclosureNotNarrowed as exc:
                state["enc"] = exc.enclosure
                break
        return state["enc"]

    def exact_sign(threshold: Optional[QuadraticValue]) -> Optional[int]:
        if threshold is None:
            return None
        if any(len(b) > exact_limit for b in components(g) if len(b) > 1):
            return None
        return compare_rho(g, threshold, margin=Fraction(0))

    def upper(name: str, value: float, threshold: Optional[QuadraticValue],
              strict: bool = False, note: str = "") -> None:
        enc = enclosure_for(value, strict)
        ok = enc.hi < value if strict else enc.hi <= value
        if ok:
            status, exact = "satisfied", False
        elif enc.lo > value or (strict and enc.lo >= value):
            status, exact = "violated", False
        else:
            s = exact_sign(threshold)
            exact = s is not None
            if s is None:
                status = "indeterminate"
            elif s < 0 or (s == 0 and not strict):
                status = "satisfied"
            else:
                status = "violated"
        results.append(BoundCheck(name, value, enc.lo, enc.hi, status, exact, note))

    # sqrt(maxdeg) <= rho <= maxdeg always holds
    enc = enclosure_for(math.sqrt(delta), False)
    if enc.lo >= math.sqrt(delta):
        status, exact = "satisfied", False
    elif enc.hi < math.sqrt(delta):
        status, exact = "violated", False
    else:
        s = exact_sign(QuadraticValue.sqrt(delta))
        exact = s is not None
        status = "indeterminate" if s is None else ("satisfied" if s >= 0 else "violated")
    results.append(BoundCheck("degree-lower", math.sqrt(delta), enc.lo, enc.hi, status, exact))
    upper("degree-upper", float(delta), QuadraticValue(delta))

    if planar:
        value = math.sqrt(8 * delta) + 10
        upper("planar", value, QuadraticValue(10, 1, 8 * delta), note="planarity asserted by caller")

    if hayes_d is not None:
        d = int(hayes_d)
        if delta < 2 * d:
            results.append(BoundCheck("hayes", float("nan"), state["enc"].lo, state["enc"].hi,
                                      "hypothesis-unmet", note=f"maxdeg {delta} < 2d = {2 * d}"))
        else:
            value = 2 * math.sqrt(d * (delta - d))
            upper("hayes", value, QuadraticValue(0, 2, d * (delta - d)),
                  note=f"orientation with indegree <= {d} asserted by caller")

    if near_regular_d is not None:
        d = int(near_regular_d)
        value = ((d + 1) * (d * d + 1)) ** (1 / 3)
        if delta > d + 1 or not check_distance3_property(g, d):
            results.append(BoundCheck("near-regular", value, state["enc"].lo, state["enc"].hi,
                                      "hypothesis-unmet",
                                      note="needs maxdeg <= d+1 and degree-(d+1) vertices pairwise at distance >= 3"))
        else:
            below = _cube_root_below(Fraction((d + 1) * (d * d + 1)))
            upper("near-regular", value, None, note="")
            last = results[-1]
            if last.status == "indeterminate":
                s = exact_sign(QuadraticValue(below))
                if s is not None and s <= 0:
                    last.status, last.exact = "satisfied", True

    if cioaba:
        if len(components(g)) != 1 or min(degs) == delta:
            results.append(BoundCheck("cioaba", float("nan"), state["enc"].lo, state["enc"].hi,
                                      "hypothesis-unmet", note="needs a connected non-regular graph"))
        else:
            diam = diameter(g)
            gap = Fraction(1, diam * n)
            upper("cioaba", delta - float(gap), QuadraticValue(delta - gap), strict=True,
                  note=f"diameter {diam}, n {n}")
    return results


def check_distance3_property(g: Graph, d: int) -> bool:
    """Every two vertices of degree ``d + 1`` are at distance at least three."""
    heavy = [v for v in range(g.n) if g.degree(v) == d + 1]
    heavy_set = set(heavy)
    for v in heavy:
        # distance <= 2 means a shared neighbour or an edge
        for u in g.adj[v]:
            if u in heavy_set:
                return False
            for w in g.adj[u]:
                if w != v and w in heavy_set:
                    return False
    return True


def near_regular_bound(d: int) -> float:
    return ((d + 1) * (d * d + 1)) ** (1 / 3)
