import os
import random

import pytest

from graphcx.corpus import Corpus
from graphcx.graph import make_graph, product

THETA_EDGES = [(1, 2), (1, 2), (1, 2)]
K4_EDGES = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


@pytest.fixture
def theta():
    return make_graph(2, THETA_EDGES)


@pytest.fixture
def k4():
    return make_graph(4, K4_EDGES)


@pytest.fixture
def theta_squared(theta):
    return product(theta, theta)


@pytest.fixture
def doubled_triangle():
    return make_graph(3, [(1, 2), (1, 2), (2, 3), (2, 3), (1, 3), (1, 3)])


@pytest.fixture
def k4_contracted():
    """K4 with edge (1,2) contracted: merged vertex doubly joined to both others."""
    return make_graph(3, [(1, 2), (1, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def rng():
    return random.Random(int(os.environ.get('GRAPHCX_SEED', '0')))


@pytest.fixture(scope='session')
def small_corpus():
    return Corpus().generate(4, 6)


def random_graph(rng, max_vertices=5, max_edges=9):
    '''
    random loop-free multigraph with all valencies >= 3, built by joining deficient vertices.
    '''
    vertex_count = rng.randint(2, max_vertices)
    degree = {v: 0 for v in range(1, vertex_count + 1)}
    edges = []
    while any(d < 3 for d in degree.values()):
        v = min(degree, key=lambda u: (degree[u], rng.random()))
        w = rng.choice([u for u in degree if u != v])
        edges.append((v, w) if rng.random() < 0.5 else (w, v))
        degree[v] += 1
        degree[w] += 1
    while len(edges) < max_edges and rng.random() < 0.3:
        v, w = rng.sample(sorted(degree), 2)
        edges.append((v, w))
    return make_graph(vertex_count, edges)


@pytest.fixture
def make_random_graph(rng):
    return lambda **kwargs: random_graph(rng, **kwargs)
