import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from oracles import complete, cycle, k4_pendant, petersen, star
from specdeg.decider import spectral_degeneracy_number
from specdeg.generators import FamilySpec, generate
from specdeg.graph import Graph
from specdeg.partition import (
    arrow_matrix,
    bt_closed_form,
    bucket_diagnostic,
    bucket_levels,
    bucket_partition,
    preprocess_for_buckets,
    quotient,
    quotient_rho_checks,
    refine_equitable,
)


def test_refine_equitable_examples():
    assert refine_equitable(star(4), [range(5)]) == [(0,), (1, 2, 3, 4)]
    assert refine_equitable(cycle(6), [range(6)]) == [tuple(range(6))]
    assert refine_equitable(petersen(), [range(10)]) == [tuple(range(10))]
    with pytest.raises(ValueError):
        refine_equitable(cycle(4), [[0, 1], [1, 2, 3]])
    with pytest.raises(ValueError):
        refine_equitable(cycle(4), [[0, 1]])


def test_refinement_is_equitable_and_refines_input():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(2, 12)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.4])
        labels = [rng.randrange(3) for _ in range(n)]
        initial = [[v for v in range(n) if labels[v] == i] for i in range(3)]
        initial = [b for b in initial if b]
        out = refine_equitable(g, initial)
        assert quotient(g, out).equitable
        for b in out:
            assert len({labels[v] for v in b}) == 1
        assert [b[0] for b in out] == sorted(b[0] for b in out)


def test_quotient_examples():
    assert quotient(star(4), [[0], [1, 2, 3, 4]]).b == ((0, 4), (1, 0))
    assert quotient(cycle(4), [[0, 2], [1, 3]]).b == ((0, 2), (2, 0))
    q = quotient(complete(3), [[0, 1, 2]])
    assert q.b == ((2,),) and q.edge_counts == ((6,),)


def test_quotient_invariants():
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randint(2, 10)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        k = rng.randint(1, n)
        labels = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
        blocks = [[v for v in range(n) if labels[v] == i] for i in range(k)]
        q = quotient(g, blocks)
        for i in range(k):
            for j in range(k):
                assert q.sizes[i] * q.b[i][j] == q.sizes[j] * q.b[j][i]
            avg = Fraction(sum(g.degree(v) for v in blocks[i]), len(blocks[i]))
            assert sum(q.b[i]) == avg
    whole = quotient(petersen(), [range(10)])
    assert whole.b[0][0] == 3


def test_quotient_rho_checks():
    rep = quotient_rho_checks(star(4), [[0], [1, 2, 3, 4]])
    assert rep.rho_b == pytest.approx(2.0) and rep.equitable and rep.ok
    zero = quotient_rho_checks(star(4), [[0], [1, 2, 3, 4]], sub_matrix=[[0, 0], [0, 0]])
    assert zero.sub_rho == 0 and zero.sub_ok
    with pytest.raises(ValueError):
        quotient_rho_checks(star(4), [[0], [1, 2, 3, 4]], sub_matrix=[[0, 5], [0, 0]])
    with pytest.raises(ValueError):
        quotient_rho_checks(star(4), [[0], [1, 2, 3, 4]], sub_matrix=[[0, -1], [0, 0]])


def test_preprocess_examples():
    g, r = preprocess_for_buckets(cycle(5))
    assert r == 2 and g == cycle(5)
    g, r = preprocess_for_buckets(star(4))
    assert r == 1 and g == star(4)
    g, r = preprocess_for_buckets(k4_pendant())
    assert r == 1
    assert g.edges() == [(0, 3), (1, 3), (2, 3), (3, 4)]
    with pytest.raises(ValueError):
        preprocess_for_buckets(Graph.from_edges(2, []))


def _rescan_preprocess(g):
    """Reference: restart the lexicographic scan after every deletion."""
    r = min(g.degrees())
    edges = g.edges()
    while True:
        deg = [0] * g.n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        for e in edges:
            if deg[e[0]] > r and deg[e[1]] > r:
                edges = [f for f in edges if f != e]
                break
        else:
            return Graph.from_edges(g.n, edges)


def test_single_pass_preprocess_equals_rescan():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(2, 10)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.6])
        if g.m == 0:
            continue
        out, r = preprocess_for_buckets(g)
        assert out == _rescan_preprocess(g)
        deg = out.degrees()
        high = [v for v in range(n) if deg[v] > r]
        assert all(not out.has_edge(u, v) for u, v in combinations(high, 2))


def test_bucket_partition_examples():
    bp = bucket_partition(cycle(6))
    assert bp.levels == 0 and bp.blocks == (tuple(range(6)),)
    bp = bucket_partition(star(9))
    assert bp.r == 1 and bp.levels == 4 and bp.blocks[4] == (0,)
    g = Graph.from_edges(5, [(0, 2), (1, 3), (2, 3), (2, 4), (3, 4), (0, 4), (1, 4)])
    assert sorted(g.degrees()) == [2, 2, 3, 3, 4]
    bp = bucket_partition(g)
    assert bp.r == 2 and set(bp.blocks[0]) == {0, 1} and set(bp.blocks[1]) == {2, 3, 4}
    assert bucket_levels(9, 1) == 4 and bucket_levels(8, 1) == 3
    with pytest.raises(ValueError):
        bucket_partition(g, r=3)
    assert bucket_partition(g, r=3, extended=True).extended


def test_arrow_closed_form_examples():
    assert bt_closed_form(arrow_matrix([3], 2), 2) == 6
    assert bt_closed_form(arrow_matrix([1, 1], 1), 1) == 3
    assert bt_closed_form(arrow_matrix([0, 0, 0], 4), 4) == 0
    B = arrow_matrix([1, 1], 1)
    rho = max(abs(np.linalg.eigvals(np.array(B, dtype=float))))
    assert rho**2 == pytest.approx(3)
    bad = arrow_matrix([1, 1], 1)
    bad[1][2] = Fraction(1)
    with pytest.raises(ValueError):
        bt_closed_form(bad, 1)


def test_bucket_diagnostic_examples():
    assert bucket_diagnostic(cycle(8), 2).ok
    star16 = bucket_diagnostic(star(16), 1)
    assert star16.ok and star16.final_bound == 16
    with pytest.raises(ValueError):
        bucket_diagnostic(cycle(4), 0)
    with_isolated = bucket_diagnostic(Graph.from_edges(3, [(0, 1)]), 1)
    assert with_isolated.ok and with_isolated.levels == 0


def test_bucket_diagnostic_with_certified_d_on_degenerate_graphs():
    for seed in range(6):
        g = generate(FamilySpec("random_d_degenerate", {"n": 10, "d": 2}, seed))
        s = spectral_degeneracy_number(g)
        d = s.exact if s.exact is not None else Fraction(s.hi)
        diag = bucket_diagnostic(g, d)
        assert diag.ok, [c for c in diag.checks if not c.holds]
