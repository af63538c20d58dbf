"""Seeded graph families.

Random families draw from Python's ``random.Random(seed)`` (the Mersenne Twister
MT19937, seeded through ``random.seed(int)``), so a ``FamilySpec`` reproduces the same
graph on every platform running CPython. Each family's defining property is
checked after construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .degeneracy import degeneracy
from .graph import Edge, Graph

FAMILIES = (
    "path", "cycle", "star", "complete", "complete_bipartite", "grid",
    "triangulated_grid", "petersen", "random_tree", "random_d_degenerate",
    "random_bipartite_biregular", "random_bounded_degree",
)

_PARAMS = {
    "path": ("n",),
    "cycle": ("n",),
    "star": ("k",),
    "complete": ("n",),
    "complete_bipartite": ("a", "b"),
    "grid": ("rows", "cols"),
    "triangulated_grid": ("rows", "cols"),
    "petersen": (),
    "random_tree": ("n",),
    "random_d_degenerate": ("n", "d"),
    "random_bipartite_biregular": ("a", "b", "da", "db"),
    "random_bounded_degree": ("n", "max_degree", "edges"),
}

MAX_PAIRING_RETRIES = 1000


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{inner}" if inner else self.family

    def as_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, doc: dict) -> FamilySpec:
        return cls(doc["family"], dict(doc.get("params", {})), int(doc.get("seed", 0)))


def parse_family_spec(text: str, seed: int = 0) -> FamilySpec:
    """``"grid:rows=3,cols=4"`` -> ``FamilySpec("grid", {...}, seed)``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ValueError(f"parameter {key!r} must be an integer") from None
    return FamilySpec(name.strip(), params, seed)


def _grid_edges(rows: int, cols: int, diagonals: bool) -> list[Edge]:
    vid = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
            if diagonals and r + 1 < rows and c + 1 < cols:
                edges.append((vid(r, c), vid(r + 1, c + 1)))
    return edges


def _biregular(a: int, b: int, da: int, db: int, rng: random.Random) -> list[Edge]:
    if a * da != b * db:
        raise ValueError(f"infeasible degrees: a*da = {a * da} but b*db = {b * db}")
    if da > b or db > a:
        raise ValueError("a degree exceeds the size of the other side")
    left = [v for v in range(a) for _ in range(da)]
    right = [a + v for v in range(b) for _ in range(db)]
    for _ in range(MAX_PAIRING_RETRIES):
        rng.shuffle(right)
        pairs = set(zip(left, right))
        if len(pairs) == len(left):
            return sorted(pairs)
    raise ValueError(f"no simple pairing found in {MAX_PAIRING_RETRIES} attempts")


def _check_params(spec: FamilySpec) -> dict:
    if spec.family not in _PARAMS:
        raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    want = _PARAMS[spec.family]
    got = set(spec.params)
    if got != set(want):
        raise ValueError(f"{spec.family} takes parameters {list(want)}, got {sorted(got)}")
    if not 0 <= spec.seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    p = {k: int(v) for k, v in spec.params.items()}
    if any(v < 0 for v in p.values()):
        raise ValueError("parameters must be non-negative")
    return p


def generate(spec: FamilySpec) -> Graph:
    p = _check_params(spec)
    rng = random.Random(spec.seed)
    fam = spec.family
    if fam == "path":
        n = p["n"]
        g = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    elif fam == "cycle":
        n = p["n"]
        if n < 3:
            raise ValueError("a cycle needs n >= 3")
        g = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    elif fam == "star":
        g = Graph.from_edges(p["k"] + 1, [(0, i) for i in range(1, p["k"] + 1)])
    elif fam == "complete":
        g = Graph.from_edges(p["n"], combinations(range(p["n"]), 2))
    elif fam == "complete_bipartite":
        a, b = p["a"], p["b"]
        g = Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    elif fam in ("grid", "triangulated_grid"):
        rows, cols = p["rows"], p["cols"]
        g = Graph.from_edges(rows * cols, _grid_edges(rows, cols, fam == "triangulated_grid"))
    elif fam == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        g = Graph.from_edges(10, outer + inner + [(i, i + 5) for i in range(5)])
    elif fam == "random_tree":
        n = p["n"]
        g = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
    elif fam == "random_d_degenerate":
        n, d = p["n"], p["d"]
        if d < 1:
            raise ValueError("d must be at least 1")
        # each arriving vertex picks min(v, d) distinct earlier neighbours
        edges = [(u, v) for v in range(1, n) for u in rng.sample(range(v), min(v, d))]
        g = Graph.from_edges(n, edges)
        assert degeneracy(g) <= d
    elif fam == "random_bipartite_biregular":
        a, b, da, db = p["a"], p["b"], p["da"], p["db"]
        g = Graph.from_edges(a + b, _biregular(a, b, da, db, rng))
        degs = g.degrees()
        assert all(x == da for x in degs[:a]) and all(x == db for x in degs[a:])
    else:  # random_bounded_degree
        n, cap, target = p["n"], p["max_degree"], p["edges"]
        pairs = list(combinations(range(n), 2))
        rng.shuffle(pairs)
        load = [0] * n
        chosen = []
        for u, v in pairs:
            if len(chosen) == target:
                break
            if load[u] < cap and load[v] < cap:
                load[u] += 1
                load[v] += 1
                chosen.append((u, v))
        g = Graph.from_edges(n, chosen)
        assert g.max_degree <= cap
    return g
