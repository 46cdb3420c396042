import itertools

import pytest

from graphcx.errors import ArityError
from graphcx.flowcharts import (CLASSICAL_IDENTITIES, IDENTITIES, Flowchart, compose_along, enumerate_flowcharts,
                                named_identity, residual_by_flowchart, shlb_residual, staged_d_squared)
from graphcx.graph import make_graph
from graphcx.structure_maps import AlphaInput

THETA = make_graph(2, [(1, 2)] * 3)
K4 = make_graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
K4_CONTRACTED = make_graph(3, [(1, 2), (1, 3), (1, 2), (1, 3), (2, 3)])
# four vertices and seven edges, so the composites land in the nonzero two-vertex classes
G47 = make_graph(4, [(2, 1), (1, 3), (1, 3), (4, 1), (2, 3), (2, 4), (4, 3)])


@pytest.mark.parametrize('m, n', list(itertools.product(range(1, 5), repeat=2)))
def test_flowchart_count(m, n):
    flowcharts = enumerate_flowcharts(m, n)
    assert len(flowcharts) == (2 ** n - 1) * (2 ** m - 1)
    assert len(set(flowcharts)) == len(flowcharts)


# (I_s, O_t) -> arities (o_s, i_s, o_t, i_t) of the source and target corollas
T22 = [
    ({1}, {1}, (2, 1, 1, 2)),
    ({1}, {2}, (2, 1, 1, 2)),
    ({1}, {1, 2}, (1, 1, 2, 2)),
    ({2}, {1}, (2, 1, 1, 2)),
    ({2}, {2}, (2, 1, 1, 2)),
    ({2}, {1, 2}, (1, 1, 2, 2)),
    ({1, 2}, {1}, (2, 2, 1, 1)),
    ({1, 2}, {2}, (2, 2, 1, 1)),
    ({1, 2}, {1, 2}, (1, 2, 2, 1)),
]


def test_t22_elements():
    flowcharts = enumerate_flowcharts(2, 2)
    assert len(flowcharts) == 9
    for flowchart, (source_inputs, target_outputs, arities) in zip(flowcharts, T22):
        assert flowchart.source_inputs == frozenset(source_inputs)
        assert flowchart.target_outputs == frozenset(target_outputs)
        assert (flowchart.o_s, flowchart.i_s, flowchart.o_t, flowchart.i_t) == arities
        assert flowchart.max_arity == 2


def test_t11():
    assert enumerate_flowcharts(1, 1) == [Flowchart(1, 1, frozenset({1}), frozenset({1}))]


def test_t13_admissible():
    admissible = [f for f in enumerate_flowcharts(1, 3) if f.max_arity <= 2]
    assert len(admissible) == 3
    assert all(f.i_s == 2 and f.i_t == 2 for f in admissible)


def test_corolla_arities():
    flowchart = Flowchart(3, 2, frozenset({1}), frozenset({2, 3}))
    assert (flowchart.i_s, flowchart.o_s, flowchart.i_t, flowchart.o_t) == (1, 2, 2, 2)


def test_enumerate_rejects_zero_arity():
    with pytest.raises(ArityError):
        enumerate_flowcharts(0, 1)


def test_compose_along_theta_is_zero():
    flowchart, = enumerate_flowcharts(1, 1)
    assert compose_along(flowchart, AlphaInput.of([THETA])).is_zero()


@pytest.mark.parametrize('graph', [K4, K4_CONTRACTED, G47])
def test_d_squared_over_t11(graph):
    inputs = AlphaInput.of([graph])
    flowchart, = enumerate_flowcharts(1, 1)
    assert compose_along(flowchart, inputs).is_zero()
    assert compose_along(flowchart, inputs) == staged_d_squared(inputs)


def test_jacobi_on_theta_triples():
    assert shlb_residual(1, 3, AlphaInput.of([THETA, THETA, THETA])).is_zero()


def test_large_arity_is_structurally_zero():
    assert shlb_residual(4, 1, AlphaInput.of([K4])).is_zero()
    assert shlb_residual(1, 4, AlphaInput.of([THETA] * 4)).is_zero()
    grouped = residual_by_flowchart(4, 1, AlphaInput.of([K4]))
    assert len(grouped) == 15
    assert all(vector.is_zero() for vector in grouped.values())


def test_inadmissible_flowcharts_contribute_nothing():
    inputs = AlphaInput.of([THETA, THETA, THETA])
    for flowchart in enumerate_flowcharts(1, 3):
        if flowchart.max_arity > 2:
            assert compose_along(flowchart, inputs).is_zero()


@pytest.mark.parametrize('name', CLASSICAL_IDENTITIES)
def test_classical_identities_on_small_inputs(name):
    _, n = IDENTITIES[name]
    pool = [THETA, K4_CONTRACTED] if n < 3 else [THETA]
    for graphs in itertools.product(pool, repeat=n):
        assert named_identity(name, AlphaInput.of(graphs)).is_zero()


def test_named_identity_errors():
    with pytest.raises(ArityError):
        named_identity('leibniz', AlphaInput.of([THETA]))
    with pytest.raises(ArityError):
        named_identity('unknown', AlphaInput.of([THETA]))


@pytest.mark.slow
def test_bialgebra_on_theta_k4():
    assert shlb_residual(2, 2, AlphaInput.of([THETA, K4])).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize('m, n', list(itertools.product(range(1, 4), repeat=2)))
def test_shlb_on_small_inputs(m, n):
    for graphs in itertools.product([THETA, K4_CONTRACTED], repeat=n):
        assert shlb_residual(m, n, AlphaInput.of(graphs)).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize('name', ['d_squared', 'coderivation', 'cojacobi'])
def test_unary_identities_over_corpus(name, small_corpus):
    for graph in small_corpus.graphs():
        assert named_identity(name, AlphaInput.of([graph])).is_zero(), graph


@pytest.mark.slow
def test_leibniz_over_corpus_pairs(small_corpus):
    for x, y in itertools.product(small_corpus.graphs(), repeat=2):
        assert named_identity('leibniz', AlphaInput.of([x, y])).is_zero(), (x, y)


@pytest.mark.slow
def test_jacobi_over_corpus_triples(small_corpus):
    graphs = [graph for graph in small_corpus.graphs() if graph.edge_count <= 5]
    for triple in itertools.product(graphs, repeat=3):
        assert named_identity('jacobi', AlphaInput.of(triple)).is_zero(), triple


@pytest.mark.slow
@pytest.mark.parametrize('m, n', list(itertools.product(range(1, 4), range(1, 3))))
def test_shlb_over_corpus(m, n, small_corpus):
    graphs = [graph for graph in small_corpus.graphs() if graph.edge_count <= 5]
    for inputs in itertools.product(graphs, repeat=n):
        assert shlb_residual(m, n, AlphaInput.of(inputs)).is_zero(), inputs
