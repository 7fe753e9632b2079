import itertools
import json

import numpy as np
import pytest

from pyramid_tda.complex import SimplicialComplex, VertexFunction, build_complex
from pyramid_tda.config import get_settings

CIRCLE_VALUES = {0: -1.0, 1: 0.0, 2: 1.0, 3: 0.0001}
CIRCLE_EDGES = [[0, 1], [1, 2], [2, 3], [0, 3]]


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def circle() -> tuple[SimplicialComplex, VertexFunction]:
    return build_complex(CIRCLE_EDGES), VertexFunction(dict(CIRCLE_VALUES))


@pytest.fixture
def circle_json() -> str:
    return json.dumps(
        {
            "vertices": [{"id": v, "value": x} for v, x in CIRCLE_VALUES.items()],
            "simplices": CIRCLE_EDGES,
        }
    )


@pytest.fixture
def square_json() -> str:
    coords = {0: [0.0, 0.0], 1: [1.0, 0.0], 2: [1.0, 1.0], 3: [0.0, 1.0]}
    return json.dumps(
        {
            "vertices": [{"id": v, "coordinates": c} for v, c in coords.items()],
            "simplices": [[0, 1], [1, 2], [2, 3], [0, 3]],
        }
    )


def random_graph(rng: np.random.Generator, max_vertices: int = 12, max_edges: int = 20):
    n = int(rng.integers(1, max_vertices + 1))
    pairs = list(itertools.combinations(range(n), 2))
    k = int(rng.integers(0, min(max_edges, len(pairs)) + 1))
    picked = [list(pairs[i]) for i in rng.choice(len(pairs), size=k, replace=False)] if k else []
    K = build_complex(picked + [[v] for v in range(n)])
    values = rng.choice(1000, size=n, replace=False) / 10.0
    return K, VertexFunction({v: float(values[v]) for v in range(n)})


@pytest.fixture(scope="session")
def graph_corpus():
    rng = np.random.default_rng(20240611)
    return [random_graph(rng) for _ in range(100)]


@pytest.fixture(scope="session")
def complex_corpus():
    """Random graphs with some of their triangles filled."""
    rng = np.random.default_rng(7)
    out = []
    for _ in range(30):
        K, f = random_graph(rng, max_vertices=7, max_edges=14)
        edges = set(K.simplices_of_dim(1))
        tris = [
            list(t)
            for t in itertools.combinations(K.vertices, 3)
            if all(e in edges for e in itertools.combinations(t, 2)) and rng.random() < 0.5
        ]
        out.append((build_complex([list(s) for s in K.simplices] + tris), f))
    return out
