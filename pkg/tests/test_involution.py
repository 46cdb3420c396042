import pytest

from graphcx.algebra import TensorVector
from graphcx.errors import ArityError, GraphInputError, IdentityViolation
from graphcx.flowcharts import shlb_residual, staged_d_squared
from graphcx.graph import SRC, TGT, HalfEdge, OrientedGraph, make_graph
from graphcx.involution import (BLOCKS_COMPONENTS, BLOCKS_MIXED, BLOCKS_PARTITION, CONDITIONS, FIRST_DISTINCT_EDGES,
                                FIRST_SPLICE_LOOP_FREE, FRESH_H2, NOT_RETURNING, OUTSIDE_F, SECOND_DISTINCT_EDGES,
                                SECOND_SPLICE_LOOP_FREE, SELF_PARTNER, SOURCES_MIXED, SOURCES_PARTITION, FElement,
                                FSet, build_F, mu, t_of, term_of, verify_pairing)
from graphcx.structure_maps import AlphaInput

THETA = make_graph(2, [(1, 2)] * 3)
THETA_SQUARED = make_graph(4, [(1, 2)] * 3 + [(3, 4)] * 3)
K4 = make_graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
G47 = make_graph(4, [(2, 1), (1, 3), (1, 3), (4, 1), (2, 3), (2, 4), (4, 3)])

# in F(1,1,K4); flipping h1 turns e2 of the first splice into a loop
K4_WITNESS = (HalfEdge(0, SRC), HalfEdge(1, SRC), HalfEdge(2, SRC), HalfEdge(3, TGT))
ALL = [{1, 2, 3, 4}]


def test_f_is_empty_on_theta():
    assert build_F(1, 1, AlphaInput.of([THETA])) == []
    certificate = verify_pairing(1, 1, AlphaInput.of([THETA]))
    assert certificate.element_count == 0
    assert certificate.residual.is_zero()


def test_f_on_k4_has_full_sources():
    elements = build_F(1, 1, AlphaInput.of([K4]))
    assert elements
    for element in elements:
        assert element.sources == (frozenset({1, 2, 3, 4}),)
        assert element.blocks == (frozenset({1, 2, 3, 4}),)
        assert t_of(element).source_inputs == frozenset({1})
        assert t_of(element).target_outputs == frozenset({1})


def test_f_on_theta_pair_splits_sources():
    for element in build_F(2, 2, AlphaInput.of([THETA, THETA])):
        first, second = element.sources
        assert first and second
        assert first | second == {1, 2, 3, 4}
        assert not first & second


def test_t_of_reads_sources_and_blocks():
    h = HalfEdge(0, SRC)
    element = FElement(h, h, h, h, (frozenset({1, 3}), frozenset({2, 4})), (frozenset({1, 3}), frozenset({2, 4})),
                       1, THETA, (1, 1, 1, 1), None)
    flowchart = t_of(element)
    assert flowchart.source_inputs == {1, 2}
    assert flowchart.target_outputs == {1, 2}
    assert (flowchart.m, flowchart.n) == (2, 2)


def test_terms_of_k4_vanish():
    # the second surgery leaves two vertices and four edges
    for element in build_F(1, 1, AlphaInput.of([K4])):
        assert element.final.vertex_count == 2
        assert term_of(element).is_zero()


def test_fset_validation():
    with pytest.raises(ArityError):
        FSet(4, 1, AlphaInput.of([K4]))
    with pytest.raises(ArityError):
        FSet(1, 2, AlphaInput.of([K4]))
    with pytest.raises(GraphInputError):
        FSet(1, 1, AlphaInput.of([OrientedGraph(2, ((1, 1), (1, 2), (2, 2)))]))
    with pytest.raises(GraphInputError):
        FSet(1, 1, AlphaInput.of([K4]), relaxed={'no_such_condition'})


def test_fresh_half_edges_take_part():
    elements = build_F(1, 1, AlphaInput.of([K4]))
    assert any(FRESH_H2 in (element.h3, element.h4) for element in elements)


# the involution

@pytest.mark.parametrize('m, n, graphs', [(1, 1, [K4]), (1, 2, [THETA, THETA]), (1, 1, [G47])])
def test_mu_is_an_involution_on_f(m, n, graphs):
    fset = FSet(m, n, AlphaInput.of(graphs))
    elements = fset.build()
    members = {element.key for element in elements}
    assert elements
    for element in elements:
        partner = fset.mu(element)
        assert partner.key in members
        assert fset.mu(partner).key == element.key


def test_mu_follows_the_table_on_nonzero_terms():
    fset = FSet(1, 1, AlphaInput.of([G47]))
    nonzero = [element for element in fset.build() if not fset.term_of(element).is_zero()]
    assert nonzero
    for element in nonzero:
        partner = fset.mu(element)
        assert fset.fixed_point_reason(element) is None
        assert partner.key == fset.table_partner(element).key
        assert partner.key != element.key
        assert (fset.term_of(element) + fset.term_of(partner)).is_zero()


def test_table_partner_outside_f_is_a_fixed_point():
    fset = FSet(1, 1, AlphaInput.of([K4]))
    h1, h2, h3, h4 = K4_WITNESS
    element = fset.make_element(h1, h2, h3, h4, ALL)
    assert element is not None
    assert fset.table_data(element)[:4] == (h1.bar(), h2, h3, h4)
    assert fset.table_partner(element) is None
    assert fset.mu(element) == element
    assert fset.fixed_point_reason(element) == OUTSIDE_F
    assert fset.term_of(element).is_zero()


def test_case_i_swaps_the_surgeries():
    fset = FSet(1, 1, AlphaInput.of([K4]))
    found = 0
    for element in fset.build():
        h1, h2, h3, h4 = element.h1, element.h2, element.h3, element.h4
        if h3.edge < 0 or h4.edge < 0:
            continue
        if fset._connects(h1, h3, h4.bar()) or fset._connects(h2, h3, h4.bar()):
            continue
        found += 1
        assert fset.table_data(element)[:4] == (h3, h4, h1, h2)
    assert found


def test_case_i_first_subcase_pairs_the_flip_of_h1():
    # e(h1) = e2 joins v(h3) = 1 and v(~h4) = 3
    fset = FSet(1, 1, AlphaInput.of([G47]))
    h1, h2, h3, h4 = HalfEdge(1, SRC), HalfEdge(5, SRC), HalfEdge(0, TGT), HalfEdge(2, SRC)
    element = fset.make_element(h1, h2, h3, h4, ALL)
    assert element is not None
    assert fset._connects(h1, h3, h4.bar())
    partner = mu(element)
    assert partner.key == (h1.bar(), h2, h3, h4, element.blocks)
    assert mu(partner) == element
    assert fset.fixed_point_reason(element) is None


def test_certificate_on_k4():
    certificate = verify_pairing(1, 1, AlphaInput.of([K4]))
    assert certificate.ok
    assert certificate.violations == []
    assert certificate.element_count == 2 * len(certificate.pairs) + len(certificate.fixed_points)
    assert {record['reason'] for record in certificate.fixed_points} <= {OUTSIDE_F, SELF_PARTNER, NOT_RETURNING}
    assert all(record['term'] == [] for record in certificate.fixed_points)
    data = certificate.to_json()
    assert data['m'] == 1 and data['n'] == 1
    assert data['residual'] == []
    assert all(pair['sum'] == [] for pair in data['pairs'])


def test_nonzero_pairs_carry_their_sum():
    certificate = verify_pairing(1, 1, AlphaInput.of([G47]))
    nonzero = [pair for pair in certificate.pairs if pair['term']]
    assert nonzero
    for pair in nonzero:
        assert pair['sum'] == []
        assert [item['coeff'] for item in pair['term']] == [-item['coeff'] for item in pair['mu_term']]


def test_certificate_residual_matches_staged_oracle():
    inputs = AlphaInput.of([G47])
    certificate = verify_pairing(1, 1, inputs)
    assert certificate.pairs
    assert certificate.residual == staged_d_squared(inputs)
    assert certificate.residual == shlb_residual(1, 1, inputs)


def test_fixed_points_with_zero_terms_are_admissible(monkeypatch):
    monkeypatch.setattr(FSet, 'mu', lambda self, element: element)
    certificate = verify_pairing(1, 1, AlphaInput.of([K4]))
    assert len(certificate.fixed_points) == certificate.element_count
    assert certificate.pairs == []
    assert certificate.ok


def test_fixed_points_with_nonzero_terms_are_violations(monkeypatch):
    monkeypatch.setattr(FSet, 'mu', lambda self, element: element)
    with pytest.raises(IdentityViolation) as info:
        verify_pairing(1, 1, AlphaInput.of([G47]))
    assert info.value.witness is not None
    certificate = verify_pairing(1, 1, AlphaInput.of([G47]), strict=False)
    assert certificate.violations
    assert not certificate.ok
    assert all(record['term'] for record in certificate.violations)


def test_pairs_that_do_not_cancel_are_violations(monkeypatch):
    original = FSet.term_of

    def lopsided(self, element):
        term = original(self, element)
        return term + term if element.key[:4] < self.mu(element).key[:4] else term

    monkeypatch.setattr(FSet, 'term_of', lopsided)
    certificate = verify_pairing(1, 1, AlphaInput.of([G47]), strict=False)
    assert any('do not cancel' in record['problem'] for record in certificate.violations)


def test_mu_module_function_uses_owner():
    element = build_F(1, 1, AlphaInput.of([G47]))[0]
    assert mu(element) == element.owner.mu(element)


# every condition of F matters

@pytest.mark.parametrize('condition', [FIRST_DISTINCT_EDGES, FIRST_SPLICE_LOOP_FREE, SECOND_DISTINCT_EDGES,
                                       SECOND_SPLICE_LOOP_FREE])
def test_dropping_a_surgery_condition_enlarges_f(condition):
    inputs = AlphaInput.of([K4])
    assert len(FSet(1, 1, inputs, relaxed={condition}).build()) > len(FSet(1, 1, inputs).build())


@pytest.mark.parametrize('condition', [SOURCES_PARTITION, SOURCES_MIXED, BLOCKS_PARTITION, BLOCKS_MIXED,
                                       BLOCKS_COMPONENTS])
def test_sources_and_blocks_conditions_hold_trivially_for_one_graph_one_slot(condition):
    inputs = AlphaInput.of([K4])
    assert len(FSet(1, 1, inputs, relaxed={condition}).build()) == len(FSet(1, 1, inputs).build())


@pytest.mark.parametrize('condition, m, graphs, halves, blocks', [
    (SOURCES_PARTITION, 1, [K4, THETA], K4_WITNESS, ALL),
    (SOURCES_MIXED, 1, [K4, K4], (HalfEdge(0, SRC), HalfEdge(1, SRC), HalfEdge(6, SRC), HalfEdge(7, SRC)), ALL),
    (BLOCKS_PARTITION, 2, [K4], K4_WITNESS, [{1, 2, 3, 4}, set()]),
    (BLOCKS_MIXED, 2, [THETA_SQUARED], (HalfEdge(0, SRC), HalfEdge(1, SRC), HalfEdge(3, SRC), HalfEdge(4, SRC)),
     [{1, 2}, {3, 4}]),
    (BLOCKS_COMPONENTS, 2, [K4], K4_WITNESS, [{1, 3}, {2, 4}]),
])
def test_dropping_a_sources_or_blocks_condition_admits_a_witness(condition, m, graphs, halves, blocks):
    inputs = AlphaInput.of(graphs)
    assert FSet(m, len(graphs), inputs).make_element(*halves, blocks) is None
    assert FSet(m, len(graphs), inputs, relaxed={condition}).make_element(*halves, blocks) is not None


def test_conditions_are_named_once():
    assert len(set(CONDITIONS)) == len(CONDITIONS) == 9


@pytest.mark.slow
@pytest.mark.parametrize('m, n, graphs', [
    (1, 1, [K4]), (2, 1, [K4]), (1, 2, [THETA, THETA]), (2, 2, [THETA, THETA]),
    (1, 2, [THETA, K4]), (2, 2, [THETA, K4]),
])
def test_certificates(m, n, graphs):
    inputs = AlphaInput.of(graphs)
    certificate = verify_pairing(m, n, inputs)
    assert certificate.ok
    assert certificate.residual == shlb_residual(m, n, inputs)
    assert certificate.residual == TensorVector(m)
