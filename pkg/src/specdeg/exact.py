"""Exact arithmetic kernel.

Rationals are ``fractions.Fraction``. Polynomials have integer coefficients and
are stored low degree first. Thresholds of the form ``P + Q*sqrt(q)`` are
handled without ever forming a float, so every sign and every root count in
this module is exact.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial; ``coeffs[i]`` multiplies ``x**i``. Zero is ``()``."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __neg__(self) -> IntPoly:
        return IntPoly(-a for a in self.coeffs)

    def __mul__(self, other: IntPoly) -> IntPoly:
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def scale(self, k: int) -> IntPoly:
        return IntPoly(k * a for a in self.coeffs)

    def derivative(self) -> IntPoly:
        return IntPoly(i * a for i, a in enumerate(self.coeffs) if i)

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def primitive(self) -> IntPoly:
        """Divide by the (positive) content; the sign of every value is kept."""
        g = self.content()
        if g <= 1:
            return self
        return IntPoly(a // g for a in self.coeffs)

    def height(self) -> int:
        return max((abs(a) for a in self.coeffs), default=0)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = str(a) if (abs(a) != 1 or i == 0) else ("-" if a < 0 else "")
                terms.append(f"{coef}{'*' if mono and coef not in ('', '-') else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def poly_digest(p: IntPoly) -> str:
    return hashlib.sha256(",".join(map(str, p.coeffs)).encode("ascii")).hexdigest()


@dataclass(frozen=True)
class QuadraticValue:
    """The real number ``P + Q*sqrt(q)`` with rational ``P, Q`` and ``q >= 0``."""

    P: Fraction
    Q: Fraction = Fraction(0)
    q: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "P", Fraction(self.P))
        object.__setattr__(self, "Q", Fraction(self.Q))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q < 0:
            raise ValueError("radicand must be non-negative")

    @classmethod
    def sqrt(cls, q) -> QuadraticValue:
        return cls(Fraction(0), Fraction(1), Fraction(q))

    @property
    def is_rational(self) -> bool:
        return self.Q == 0 or self.q == 0

    def _check(self, other: QuadraticValue) -> Fraction:
        if self.is_rational:
            return other.q
        if other.is_rational or other.q == self.q:
            return self.q
        raise ValueError("values live in different quadratic fields")

    def __add__(self, other) -> QuadraticValue:
        other = as_quadratic(other)
        q = self._check(other)
        return QuadraticValue(self.P + other.P, self.Q + other.Q, q)

    def __sub__(self, other) -> QuadraticValue:
        other = as_quadratic(other)
        return self + QuadraticValue(-other.P, -other.Q, other.q)

    def __mul__(self, other) -> QuadraticValue:
        other = as_quadratic(other)
        q = self._check(other)
        return QuadraticValue(
            self.P * other.P + self.Q * other.Q * q,
            self.P * other.Q + self.Q * other.P,
            q,
        )

    def __float__(self) -> float:
        return float(self.P) + float(self.Q) * float(self.q) ** 0.5


Threshold = Union[int, Fraction, QuadraticValue]


def as_quadratic(v: Threshold) -> QuadraticValue:
    if isinstance(v, QuadraticValue):
        return v
    if isinstance(v, (int, Rational)):
        return QuadraticValue(Fraction(v))
    raise TypeError(f"cannot use {type(v).__name__} as an exact threshold")


def sign_of(v: QuadraticValue) -> int:
    """Exact sign of ``P + Q*sqrt(q)`` using rational comparisons only."""
    P, Q, q = v.P, v.Q, v.q
    if Q == 0 or q == 0:
        return (P > 0) - (P < 0)
    if P == 0:
        return (Q > 0) - (Q < 0)
    sp, sq = (1 if P > 0 else -1), (1 if Q > 0 else -1)
    if sp == sq:
        return sp
    # opposite signs: the larger of |P| and |Q|*sqrt(q) wins
    lhs, rhs = P * P, Q * Q * q
    if lhs == rhs:
        return 0
    return sp if lhs > rhs else sq


def eval_at_sqrt(p: IntPoly, q) -> QuadraticValue:
    """``p(sqrt(q)) = p_even(q) + p_odd(q)*sqrt(q)``."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("cannot evaluate at the square root of a negative number")
    even = IntPoly(p.coeffs[0::2])
    odd = IntPoly(p.coeffs[1::2])
    return QuadraticValue(Fraction(even(q)), Fraction(odd(q)), q)


def eval_at(p: IntPoly, v: Threshold) -> QuadraticValue:
    v = as_quadratic(v)
    if v.is_rational:
        return QuadraticValue(Fraction(p(v.P)))
    if v.P == 0 and v.Q == 1:
        return eval_at_sqrt(p, v.q)
    acc = QuadraticValue(Fraction(0), Fraction(0), v.q)
    for a in reversed(p.coeffs):
        acc = acc * v + a
    return acc


def sign_at(p: IntPoly, v: Threshold) -> int:
    v = as_quadratic(v)
    if v.is_rational:
        return _sign_int_poly_at_rational(p, v.P.numerator, v.P.denominator)
    return sign_of(eval_at(p, v))


def _sign_int_poly_at_rational(p: IntPoly, num: int, den: int) -> int:
    # den**k * p(num/den) is an integer with the sign of p(num/den)
    k = p.degree
    if k < 0:
        return 0
    total = 0
    dpow = 1
    npow = [1] * (k + 1)
    for i in range(1, k + 1):
        npow[i] = npow[i - 1] * num
    for i in range(k, -1, -1):
        total += p.coeffs[i] * npow[i] * dpow
        dpow *= den
    return (total > 0) - (total < 0)


# -- characteristic polynomial -------------------------------------------------


def char_poly(g: Graph) -> IntPoly:
    """``det(xI - A)`` by the Faddeev-LeVerrier recurrence over the integers.

    ``M_k = A M_{k-1} + c_{n-k+1} I`` and ``c_{n-k} = -tr(A M_k) / k``; the
    divisions are exact. The adjacency matrix is applied as row sums over
    neighbour lists, so one step costs O(n*m) big-integer additions.
    """
    n = g.n
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    if n == 0:
        return IntPoly(coeffs)
    nbrs = [list(a) for a in g.adj]
    zero_row = np.zeros(n, dtype=object)
    M = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        for v in range(n):
            M[v, v] += c_prev
        AM = np.empty((n, n), dtype=object)
        for v in range(n):
            AM[v] = M[nbrs[v]].sum(axis=0) if nbrs[v] else zero_row
        tr = sum(AM[v, v] for v in range(n))
        c, r = divmod(-int(tr), k)
        assert r == 0, "Faddeev-LeVerrier division must be exact"
        coeffs[n - k] = c
        M = AM
    return IntPoly(coeffs)


# -- polynomial remainder sequences ---------------------------------------------


def _prem_positive(a: IntPoly, b: IntPoly) -> IntPoly:
    """A positive multiple of ``a mod b`` (pseudo-remainder with ``|lc(b)|``)."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.coeffs)
    db, lb = b.degree, b.lead
    alb, sb = abs(lb), (1 if lb > 0 else -1)
    bc = b.coeffs
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [alb * x for x in r]
        f = sb * lr
        for i, c in enumerate(bc):
            r[i + shift] -= f * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return IntPoly(r)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        a, b = b, _prem_positive(a, b).primitive()
    if a.is_zero():
        return a
    return a if a.lead > 0 else -a


def exact_quotient(a: IntPoly, b: IntPoly) -> IntPoly:
    """``a / b`` when ``b`` divides ``a`` over the rationals, made primitive.

    The sign is normalised so that the leading coefficient has the sign of
    ``lc(a) * lc(b)``.
    """
    r = [Fraction(x) for x in a.coeffs]
    q = [Fraction(0)] * max(a.degree - b.degree + 1, 0)
    db, lb = b.degree, b.lead
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] / lb
        q[shift] = f
        for i, c in enumerate(b.coeffs):
            r[i + shift] -= f * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    if r:
        raise ValueError("divisor does not divide the polynomial")
    den = 1
    for f in q:
        den = den * f.denominator // gcd(den, f.denominator)
    return IntPoly(int(f * den) for f in q).primitive()


def squarefree_part(p: IntPoly) -> IntPoly:
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free part")
    if p.degree < 1:
        return IntPoly((1 if p.lead > 0 else -1,))
    g = poly_gcd(p, p.derivative())
    s = exact_quotient(p, g)
    return s if (s.lead > 0) == (p.lead > 0) else -s


def sturm_chain(p: IntPoly) -> list[IntPoly]:
    """Sturm sequence of the square-free part of ``p``, content-stripped."""
    s0 = squarefree_part(p)
    chain = [s0]
    if s0.degree < 1:
        return chain
    chain.append(s0.derivative().primitive())
    while True:
        r = _prem_positive(chain[-2], chain[-1])
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return chain


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_count_above(p: IntPoly, threshold: Threshold, chain: list[IntPoly] | None = None) -> int:
    """Number of distinct real roots of ``p`` strictly greater than ``threshold``."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    chain = chain if chain is not None else sturm_chain(p)
    t = as_quadratic(threshold)
    at_t = _variations([sign_at(s, t) for s in chain])
    at_inf = _variations([1 if s.lead > 0 else -1 for s in chain])
    return at_t - at_inf


def root_bound(p: IntPoly) -> Fraction:
    """Cauchy bound: every root has modulus strictly below the returned value."""
    lead = abs(p.lead)
    return 1 + Fraction(max((abs(a) for a in p.coeffs[:-1]), default=0), lead)


def root_separation_budget(p: IntPoly) -> Fraction:
    """Explicit lower bound on ``|u - v|`` over distinct roots of ``p``.

    Mahler's bound for a square-free integer polynomial ``s`` of degree ``k``
    reads ``sep(s) >= sqrt(3|disc(s)|) * k**(-(k+2)/2) * M(s)**(1-k)``.
    We apply it to the square-free part ``s`` of ``p`` but bound everything from
    ``p`` itself: ``|disc(s)| >= 1``, ``deg s <= deg p`` and, since the Mahler
    measure is multiplicative and at least 1 on integer polynomials,
    ``M(s) <= M(p) <= ||p||_2``. Dropping ``sqrt(3)`` and rounding the remaining
    irrational factors the safe way gives a rational bound.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("root separation needs a polynomial of degree >= 1")
    if squarefree_part(p).degree < 2:
        return Fraction(1)
    k = p.degree
    norm_up = isqrt(sum(a * a for a in p.coeffs)) + 1
    return Fraction(1, k ** (-(-(k + 2) // 2)) * norm_up ** (k - 1))


def quadratic_min_poly(t: QuadraticValue) -> IntPoly:
    """Integer polynomial vanishing at ``t`` (degree 1 or 2)."""
    if t.is_rational:
        return IntPoly((-t.P.numerator, t.P.denominator))
    # (x - P)^2 - Q^2 q
    c0 = t.P * t.P - t.Q * t.Q * t.q
    c1 = -2 * t.P
    den = 1
    for f in (c0, c1):
        den = den * f.denominator // gcd(den, f.denominator)
    return IntPoly((int(c0 * den), int(c1 * den), den))


def rational_above(t: QuadraticValue, bits: int) -> Fraction:
    """A rational ``>= t`` within about ``2**-bits * |Q|`` of it."""
    if t.is_rational:
        return t.P
    a, b = t.q.numerator, t.q.denominator
    scale = 1 << bits
    root = isqrt(a * b * scale * scale)
    if t.Q > 0:
        return t.P + t.Q * Fraction(root + 1, b * scale)
    return t.P + t.Q * Fraction(root, b * scale)


def bisect_root_above(p: IntPoly, threshold: Threshold) -> Fraction:
    """Rational ``x > threshold`` with ``p(x) < 0``.

    Requires a real root above the threshold and a positive leading
    coefficient; the largest root must have odd multiplicity (it is simple for
    the characteristic polynomial of a connected graph). Bisection keeps the
    largest root inside ``(lo, hi]`` using Sturm counts, so the number of steps
    is bounded by ``log2(width / sep)`` where ``sep`` bounds the gap between the
    largest root and both the threshold and the next root.
    """
    t = as_quadratic(threshold)
    if p.is_zero() or p.lead < 0:
        raise ValueError("need a nonzero polynomial with positive leading coefficient")
    chain = sturm_chain(p)
    if sturm_count_above(p, t, chain) < 1:
        raise ValueError("no root above the threshold")
    hi = root_bound(p)
    lo: QuadraticValue = t
    sep = root_separation_budget(p * quadratic_min_poly(t))
    width = hi - rational_above(t, 8) + 1
    depth_cap = max(int(width / sep).bit_length(), 1) + 64
    for depth in range(depth_cap):
        bits = depth + 16
        while True:
            mid = (rational_above(lo, bits) + hi) / 2
            if sign_of(as_quadratic(mid) - lo) > 0 and mid < hi:
                break
            bits *= 2
        if sturm_count_above(p, mid, chain) >= 1:
            if _sign_int_poly_at_rational(p, mid.numerator, mid.denominator) < 0:
                return mid
            lo = as_quadratic(mid)
        else:
            hi = mid
    raise RuntimeError("bisection exceeded the root-separation depth budget; "
                       "the largest root above the threshold has even multiplicity")
