import pytest

from specdeg.degeneracy import degeneracy
from specdeg.generators import FAMILIES, FamilySpec, generate, parse_family_spec
from specdeg.graph import components, write_graph
from specdeg.spectra import check_bound_suite

RANDOM_SPECS = [
    "random_tree:n=25",
    "random_d_degenerate:n=30,d=3",
    "random_bipartite_biregular:a=6,b=9,da=3,db=2",
    "random_bounded_degree:n=20,max_degree=4,edges=30",
]


def test_parse_family_spec():
    spec = parse_family_spec("grid:rows=3,cols=4", seed=7)
    assert spec == FamilySpec("grid", {"rows": 3, "cols": 4}, 7)
    assert spec.label() == "grid:cols=4,rows=3"
    assert FamilySpec.from_dict(spec.as_dict()) == spec
    assert parse_family_spec("petersen").params == {}
    for bad in ("grid:rows", "grid:rows=x"):
        with pytest.raises(ValueError):
            parse_family_spec(bad)


def test_deterministic_families():
    g = generate(FamilySpec("grid", {"rows": 3, "cols": 3}))
    assert (g.n, g.m, degeneracy(g)) == (9, 12, 2)
    s = generate(FamilySpec("star", {"k": 5}))
    assert s.n == 6 and s.degree(0) == 5
    t = generate(FamilySpec("triangulated_grid", {"rows": 3, "cols": 3}))
    assert t.m == 16 and degeneracy(t) == 3
    assert generate(FamilySpec("petersen")).m == 15
    assert generate(FamilySpec("complete_bipartite", {"a": 2, "b": 3})).m == 6
    assert generate(FamilySpec("cycle", {"n": 5})).max_degree == 2


@pytest.mark.parametrize("text", RANDOM_SPECS)
def test_seeded_output_is_reproducible(text):
    a = generate(parse_family_spec(text, 12345))
    b = generate(parse_family_spec(text, 12345))
    assert write_graph(a) == write_graph(b)
    others = {write_graph(generate(parse_family_spec(text, s))) for s in range(5)}
    assert len(others) > 1


def test_family_invariants_over_seeds():
    for seed in range(100):
        tree = generate(FamilySpec("random_tree", {"n": 20}, seed))
        assert tree.m == 19 and len(components(tree)) == 1
        deg = generate(FamilySpec("random_d_degenerate", {"n": 25, "d": 3}, seed))
        assert degeneracy(deg) <= 3
        bi = generate(FamilySpec("random_bipartite_biregular", {"a": 6, "b": 9, "da": 3, "db": 2}, seed))
        assert bi.degrees() == [3] * 6 + [2] * 9
        assert all((u < 6) != (v < 6) for u, v in bi.edges())
        bd = generate(FamilySpec("random_bounded_degree", {"n": 15, "max_degree": 3, "edges": 20}, seed))
        assert bd.max_degree <= 3 and bd.m <= 20


def test_generator_errors():
    with pytest.raises(ValueError):
        generate(FamilySpec("moebius", {}))
    with pytest.raises(ValueError):
        generate(FamilySpec("grid", {"rows": 3}))
    with pytest.raises(ValueError):
        generate(FamilySpec("cycle", {"n": 2}))
    with pytest.raises(ValueError):
        generate(FamilySpec("random_tree", {"n": 5}, -1))
    with pytest.raises(ValueError):
        generate(FamilySpec("random_tree", {"n": 5}, 2**64))
    with pytest.raises(ValueError):
        generate(FamilySpec("random_bipartite_biregular", {"a": 2, "b": 3, "da": 2, "db": 2}))
    with pytest.raises(ValueError):
        generate(FamilySpec("path", {"n": -1}))
    assert len(FAMILIES) == 12


def test_degenerate_family_feeds_the_orientation_bound():
    for seed in range(20):
        g = generate(FamilySpec("random_d_degenerate", {"n": 60, "d": 2}, seed))
        res = {c.name: c for c in check_bound_suite(g, hayes_d=2)}
        assert res["hayes"].status in ("satisfied", "hypothesis-unmet")
        assert res["hayes"].status != "violated"
