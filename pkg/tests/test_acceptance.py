"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from oracles import (
    SubgraphOracle,
    complete,
    complete_bipartite,
    cycle,
    k4_pendant,
    named_graphs,
    path,
    petersen,
    random_corpus,
)
from specdeg.decider import (
    DEGENERATE,
    NOT_DEGENERATE,
    certificate_from_dict,
    decide,
    spectral_degeneracy_number,
    verify_certificate,
)
from specdeg.degeneracy import satisfies_converse
from specdeg.exact import IntPoly, QuadraticValue, char_poly, sturm_count_above
from specdeg.generators import FamilySpec, generate
from specdeg.graph import Graph, components, induced_subgraph, is_connected, non_isolated
from specdeg.hardness import reduction_end_to_end
from specdeg.partition import arrow_matrix, bt_closed_form, matrix_spectral_radius, quotient, refine_equitable
from specdeg.spectra import check_bound_suite, spectral_radius_enclosure

D_VALUES = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
TOL = 1e-9


def _line(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def exactness_run():
    """decide() on the full corpus at every d, with the brute-force verdicts."""
    corpus = [(f"random#{i}", g) for i, g in enumerate(random_corpus(300))]
    corpus += sorted(named_graphs().items())
    start = time.perf_counter()
    runs = []
    for name, g in corpus:
        oracle = SubgraphOracle(g)
        for d in D_VALUES:
            runs.append((name, g, d, decide(g, d), oracle.violated(d)))
    return runs, time.perf_counter() - start


# 1 ---------------------------------------------------------------------------------------


def test_criterion_1_exact_decision_matches_brute_force(exactness_run, capsys):
    runs, seconds = exactness_run
    mismatches = [(name, d) for name, _, d, res, violated in runs
                  if res.verdict != (NOT_DEGENERATE if violated else DEGENERATE)]
    graphs = len({name for name, *_ in runs})
    ok = not mismatches and seconds <= 600
    _line(capsys, 1, ok, f"{graphs} graphs x {len(D_VALUES)} thresholds, "
                         f"{len(mismatches)} mismatches, {seconds:.1f}s")
    assert not mismatches, mismatches[:10]
    assert seconds <= 600


# 2 ---------------------------------------------------------------------------------------


def _regular_connected(g: Graph):
    degs = g.degrees()
    if g.m and is_connected(g) and len(set(degs)) == 1:
        return degs[0]
    return None


def test_criterion_2_boundary_exactness(capsys):
    corpus = list(named_graphs().values()) + random_corpus(300) + [petersen()]
    regular = [(g, k) for g in corpus if (k := _regular_connected(g)) is not None]
    failures = []
    for g, k in regular:
        yes = decide(g, k)
        below = decide(g, Fraction(k) - Fraction(1, 10**6))
        if yes.verdict != DEGENERATE:
            failures.append((g.edges(), "positive side"))
        if below.verdict != NOT_DEGENERATE:
            failures.append((g.edges(), "negative side"))
            continue
        if below.stats.witness_path != "exact":
            failures.append((g.edges(), f"witness settled by {below.stats.witness_path!r}"))
        if list(below.certificate.edges) != g.edges():
            failures.append((g.edges(), "witness is not the whole graph"))
    ok = not failures and len(regular) >= 10
    _line(capsys, 2, ok, f"{len(regular)} regular graphs, {len(failures)} failures, "
                         "every negative witness settled on the Sturm path")
    assert len(regular) >= 10
    assert not failures, failures[:5]


# 3 ---------------------------------------------------------------------------------------


def _mutations(g: Graph, cert, rng: random.Random):
    """Single-field corruptions that make the certificate wrong."""
    doc = cert.to_dict()
    x, d, delta = cert.x, cert.d, cert.delta_H
    non_edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    out = []

    def with_field(key, value):
        new = json.loads(json.dumps(doc))
        new[key] = value
        out.append((key, new))

    with_field("version", doc["version"] + 1)
    h = doc["graph_hash"]
    with_field("graph_hash", ("0" if h[0] != "0" else "1") + h[1:])
    # d just large enough that x**2 <= d * delta_H
    bad_d = x * x / delta
    with_field("d", f"{bad_d.numerator}/{bad_d.denominator}")
    with_field("d", "0/1")
    with_field("delta_H", delta + 1)
    with_field("delta_H", delta - 1)
    with_field("x", "0/1")
    floor_sqrt = Fraction(math.isqrt(int(d * delta)))
    with_field("x", f"{floor_sqrt.numerator}/{floor_sqrt.denominator}")
    above = Fraction(delta + 1)  # beyond the largest eigenvalue, p_H > 0
    with_field("x", f"{above.numerator}/1")
    with_field("x", f"{-x.numerator}/{x.denominator}")
    edges = doc["edges"]
    if non_edges:
        u, v = rng.choice(non_edges)
        with_field("edges", edges + [[u, v]])
        with_field("edges", [[u, v]] + edges[1:])
    with_field("edges", edges + [edges[0]])
    with_field("edges", edges + [[0, g.n]])
    with_field("edges", [])
    if len(edges) > 1:
        with_field("edges", edges[:-1])
        with_field("edges", edges[1:])
    c = doc["char_poly_hash"]
    with_field("char_poly_hash", ("a" if c[0] != "a" else "b") + c[1:])
    with_field("delta_H", str(delta))
    return out


def test_criterion_3_certificate_round_trip(exactness_run, capsys):
    runs, _ = exactness_run
    start = time.perf_counter()
    negatives = [(g, res) for _, g, _, res, _ in runs if res.verdict == NOT_DEGENERATE]
    rejected_valid = [res.certificate for g, res in negatives
                      if not verify_certificate(g, res.certificate).accepted]
    # JSON round trip of every certificate, too
    round_trip = [res.certificate for g, res in negatives
                  if certificate_from_dict(json.loads(res.certificate.to_json())) != res.certificate]

    rng = random.Random(7)
    pool = []
    for g, res in negatives:
        pool.extend((g, field, doc) for field, doc in _mutations(g, res.certificate, rng))
    rng.shuffle(pool)
    mutated = pool[:1000]
    accepted = [(field, doc) for g, field, doc in mutated if verify_certificate(g, doc).accepted]
    seconds = time.perf_counter() - start
    ok = (not rejected_valid and not round_trip and len(mutated) == 1000 and not accepted
          and seconds <= 120)
    _line(capsys, 3, ok, f"{len(negatives)} certificates accepted={len(negatives) - len(rejected_valid)}, "
                         f"{len(mutated)} mutations, {len(accepted)} wrongly accepted, {seconds:.1f}s")
    assert negatives
    assert not rejected_valid
    assert not round_trip
    assert len(mutated) == 1000
    assert not accepted, accepted[:3]
    assert seconds <= 120


# 4 ---------------------------------------------------------------------------------------


def _random_graph(rng, n_lo=3, n_hi=12):
    n = rng.randint(n_lo, n_hi)
    p = rng.uniform(0.2, 0.8)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def _rho(g: Graph) -> float:
    return float(np.linalg.eigvalsh(g.adjacency_matrix())[-1]) if g.n else 0.0


def test_criterion_4_quotient_lemmas(capsys):
    rng = random.Random(4)
    lower_violations = 0
    for _ in range(500):
        g = _random_graph(rng)
        k = rng.randint(1, g.n)
        labels = list(range(k)) + [rng.randrange(k) for _ in range(g.n - k)]
        rng.shuffle(labels)
        blocks = [[v for v in range(g.n) if labels[v] == i] for i in range(k)]
        rho_b = matrix_spectral_radius(quotient(g, blocks).as_float())
        if rho_b > _rho(g) + 2 * TOL:
            lower_violations += 1

    equality_violations = 0
    checked = 0
    while checked < 200:
        g = _random_graph(rng, 4, 14)
        big = max(components(g), key=len)
        if len(big) < 2:
            continue
        g = induced_subgraph(g, big).graph
        blocks = refine_equitable(g, [list(range(g.n))])
        qm = quotient(g, blocks)
        assert qm.equitable
        if abs(matrix_spectral_radius(qm.as_float()) - _rho(g)) > 2 * TOL:
            equality_violations += 1
        checked += 1

    arrow_violations = 0
    for _ in range(200):
        r = rng.randint(1, 12)
        t = rng.randint(1, 7)
        row = [Fraction(rng.randint(0, 40), rng.randint(1, 9)) for _ in range(t)]
        if not any(row):
            row[0] = Fraction(1)
        B = arrow_matrix(row, r)
        closed = bt_closed_form(B, r)
        numeric = matrix_spectral_radius([[float(x) for x in rw] for rw in B]) ** 2
        if abs(numeric - float(closed)) > 1e-9 * float(closed):
            arrow_violations += 1

    total = lower_violations + equality_violations + arrow_violations
    _line(capsys, 4, total == 0, f"rho(B)<=rho(G): {lower_violations}/500, equitable equality: "
                                 f"{equality_violations}/200, arrow closed form: {arrow_violations}/200")
    assert total == 0


# 5 ---------------------------------------------------------------------------------------


def test_criterion_5_min_degree_bound_with_exact_sdeg(capsys):
    corpus = random_corpus(300) + list(named_graphs().values())
    violations = []
    checked = 0
    for g in corpus:
        h = non_isolated(g).graph
        if h.m == 0:
            continue
        s = spectral_degeneracy_number(h)
        # any d >= sdeg satisfies the hypothesis; use the certified upper end
        d_star = s.exact if s.exact is not None else Fraction(s.hi)
        assert decide(h, d_star).verdict == DEGENERATE
        oracle_sdeg = SubgraphOracle(h).sdeg()
        assert s.lo - 1e-8 <= oracle_sdeg <= s.hi + 1e-8
        if not satisfies_converse(min(h.degrees()), d_star, h.max_degree):
            violations.append(h.edges())
        checked += 1
    _line(capsys, 5, not violations, f"{checked} graphs with certified sdeg, {len(violations)} violations")
    assert not violations


# 6 ---------------------------------------------------------------------------------------


def _status(checks, name):
    return next(c.status for c in checks if c.name == name)


def test_criterion_6_bound_suites(capsys):
    start = time.perf_counter()
    hayes_bad, hayes_n = [], 0
    seed = 0
    while hayes_n < 100:
        d = 2 if hayes_n < 50 else 3
        n = 20 + (seed * 37) % 181
        g = generate(FamilySpec("random_d_degenerate", {"n": n, "d": d}, seed))
        seed += 1
        if g.max_degree < 2 * d:
            continue
        hayes_n += 1
        if _status(check_bound_suite(g, hayes_d=d), "hayes") != "satisfied":
            hayes_bad.append((n, d, seed - 1))

    planar_bad, planar_n = [], 0
    for fam in ("grid", "triangulated_grid"):
        for rows in range(2, 21, 3):
            for cols in (rows, min(20, rows + 5)):
                g = generate(FamilySpec(fam, {"rows": rows, "cols": cols}))
                planar_n += 1
                if _status(check_bound_suite(g, planar=True), "planar") != "satisfied":
                    planar_bad.append((fam, rows, cols))

    cioaba_bad, cioaba_n = [], 0
    seed = 0
    while cioaba_n < 100:
        n = 10 + seed % 50
        spec = FamilySpec("random_bounded_degree", {"n": n, "max_degree": 3 + seed % 3, "edges": 2 * n}, seed)
        seed += 1
        g = generate(spec)
        big = max(components(g), key=len)
        g = induced_subgraph(g, big).graph
        degs = g.degrees()
        if g.n < 3 or len(set(degs)) == 1:
            continue
        cioaba_n += 1
        if _status(check_bound_suite(g, cioaba=True), "cioaba") != "satisfied":
            cioaba_bad.append(spec)
    seconds = time.perf_counter() - start
    total = len(hayes_bad) + len(planar_bad) + len(cioaba_bad)
    _line(capsys, 6, total == 0 and seconds <= 300,
          f"hayes {hayes_n - len(hayes_bad)}/{hayes_n}, planar {planar_n - len(planar_bad)}/{planar_n}, "
          f"cioaba {cioaba_n - len(cioaba_bad)}/{cioaba_n}, {seconds:.1f}s")
    assert total == 0, (hayes_bad, planar_bad, cioaba_bad)
    assert seconds <= 300


# 7 ---------------------------------------------------------------------------------------


def test_criterion_7_reduction_end_to_end(capsys):
    wheel = Graph.from_edges(5, [(0, i) for i in range(1, 5)] + [(1, 2), (2, 3), (3, 4), (1, 4)])
    instances = {
        "K4": (complete(4), True),
        "K4+pendant": (k4_pendant(), True),
        "P4": (path(4), False),
        "C5": (cycle(5), False),
        "K3,3": (complete_bipartite(3, 3), True),
        "wheel W4": (wheel, False),
    }
    bad = []
    for name, (g, has_regular) in instances.items():
        report = reduction_end_to_end(g, 3, budget=10**7)
        if (report.regular_subgraph is not None) != has_regular or not report.ok:
            bad.append((name, report.as_dict()))
    _line(capsys, 7, not bad, f"{len(instances)} instances, {len(bad)} violations of the "
                              "biconditional or the dichotomy")
    assert not bad, bad


# 8 ---------------------------------------------------------------------------------------


def _cofactor_det(M):
    """Laplace expansion along the first row; entries are sympy expressions."""
    n = len(M)
    if n == 0:
        return sympy.Integer(1)
    if n == 1:
        return M[0][0]
    total = sympy.Integer(0)
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * _cofactor_det(minor)
    return total


def _cofactor_charpoly(g: Graph) -> list[int]:
    x = sympy.Symbol("x")
    M = [[(x if i == j else 0) - (1 if g.has_edge(i, j) else 0) for j in range(g.n)] for i in range(g.n)]
    p = sympy.Poly(sympy.expand(_cofactor_det(M)), x)
    return [int(c) for c in reversed(p.all_coeffs())]


def _numeric_count_above(coeffs_low_high, t: float):
    """Distinct real roots above t, or None when the float answer is not clear-cut."""
    p = np.polynomial.Polynomial(coeffs_low_high)
    roots = p.roots()
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-7)
    if any(abs(r.imag) < 1e-4 and abs(r.imag) >= 1e-7 for r in roots):
        return None
    if any(abs(r - t) < 1e-6 for r in real):
        return None
    distinct = []
    for r in real:
        if distinct and abs(r - distinct[-1]) < 1e-6:
            if abs(r - distinct[-1]) > 1e-9:
                return None
            continue
        distinct.append(r)
    return sum(r > t for r in distinct)


def _sympy_count_above(coeffs_low_high, t: Fraction) -> int:
    x = sympy.Symbol("x")
    p = sympy.Poly(list(reversed(coeffs_low_high)), x)
    tt = sympy.Rational(t.numerator, t.denominator)
    return p.count_roots(inf=tt) - (1 if p.eval(tt) == 0 else 0)


def test_criterion_8_exact_kernel(capsys):
    start = time.perf_counter()
    rng = random.Random(8)
    graphs = []
    for n in range(1, 6):
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in range(2 ** len(pairs)):
            graphs.append(Graph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1]))
    pairs6 = [(u, v) for u in range(6) for v in range(u + 1, 6)]
    for _ in range(300):
        graphs.append(Graph.from_edges(6, [e for e in pairs6 if rng.random() < 0.5]))
    poly_mismatch = sum(char_poly(g).coeffs != tuple(_cofactor_charpoly(g)) for g in graphs)

    sturm_mismatch = 0
    fallback = 0
    for i in range(1000):
        deg = rng.randint(1, 8)
        if i % 2:
            # product of random integer linear factors and a positive quadratic, with repeats
            coeffs = [rng.randint(1, 3)]
            for _ in range(deg):
                if rng.random() < 0.2:
                    factor = [rng.randint(1, 5), rng.randint(-2, 2), 1]  # b^2 < 4ac when a >= 1
                    if factor[1] ** 2 >= 4 * factor[0]:
                        factor = [1, 0, 1]
                else:
                    factor = [rng.randint(-6, 6), rng.choice([1, 2])]
                coeffs = list(np.polynomial.polynomial.polymul(coeffs, factor).astype(int))
        else:
            coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        coeffs = [int(c) for c in coeffs]
        p = IntPoly(tuple(coeffs))
        if rng.random() < 0.3:
            q = Fraction(rng.randint(0, 40), rng.randint(1, 4))
            threshold = QuadraticValue.sqrt(q)
            t_float = float(threshold)
            expected = _numeric_count_above(coeffs, t_float)
            if expected is None:
                # settle with an exact substitute: roots above sqrt(q) <=> y = x^2 roots of ...
                fallback += 1
                x = sympy.Symbol("x")
                poly = sympy.Poly(list(reversed(coeffs)), x)
                roots = [r for r in sympy.real_roots(poly)]
                expected = len({r for r in roots if r > 0 and r**2 > sympy.Rational(q.numerator, q.denominator)})
        else:
            t = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
            threshold = t
            expected = _numeric_count_above(coeffs, float(t))
            if expected is None:
                fallback += 1
                expected = _sympy_count_above(coeffs, t)
        if sturm_count_above(p, threshold) != expected:
            sturm_mismatch += 1
    seconds = time.perf_counter() - start
    ok = poly_mismatch == 0 and sturm_mismatch == 0 and seconds <= 60
    _line(capsys, 8, ok, f"char_poly vs cofactor: {poly_mismatch}/{len(graphs)} mismatches; Sturm vs "
                         f"numeric roots: {sturm_mismatch}/1000 mismatches ({fallback} settled exactly); "
                         f"{seconds:.1f}s")
    assert poly_mismatch == 0
    assert sturm_mismatch == 0
    assert seconds <= 60
