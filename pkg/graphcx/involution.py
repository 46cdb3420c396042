"""
The cancellation argument behind the strong homotopy identity, made executable.

F collects the data (h1, h2, h3, h4, U_1..U_m): a first surgery at (h1, h2) on the product
P = X_1...X_n, a second surgery at (h3, h4) on P1 = P_{h1,h2}, and an assignment U of the four
marked vertices of P2 = (P1)_{h3,h4} to the m output slots. mu pairs the elements of F so
that paired terms cancel.

Half-edges h3, h4 of P1 are recorded by where they come from: a half-edge of P, or one of the
two halves of the new edge e2, written FRESH_H2 (h2', the source end) and FRESH_H2_BAR.

Membership in F is the conjunction of the conditions named in CONDITIONS. FSet(...,
relaxed={...}) drops the named ones. mu reads the case table as a candidate partner and keeps
f fixed when that candidate is outside F or does not map back to f.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from graphcx.algebra import TensorVector, split_with_marks, splits_to_vector
from graphcx.combinatorics import ordered_set_partitions
from graphcx.errors import ArityError, GraphInputError, IdentityViolation
from graphcx.flowcharts import MAX_IDENTITY_ARITY, Flowchart
from graphcx.graph import SRC, TGT, HalfEdge, OrientedGraph, Provenance, connected_components, surgery
from graphcx.structure_maps import AlphaInput

logger = logging.getLogger(__name__)

FRESH_EDGE = -1
FRESH_H2 = HalfEdge(FRESH_EDGE, SRC)
FRESH_H2_BAR = HalfEdge(FRESH_EDGE, TGT)
POSITIONS = (1, 2, 3, 4)
IDENTITY = {1: 1, 2: 2, 3: 3, 4: 4}
SWAP_PAIRS = {1: 3, 2: 4, 3: 1, 4: 2}

FIRST_DISTINCT_EDGES = 'first_distinct_edges'
FIRST_SPLICE_LOOP_FREE = 'first_splice_loop_free'
SECOND_DISTINCT_EDGES = 'second_distinct_edges'
SECOND_SPLICE_LOOP_FREE = 'second_splice_loop_free'
SOURCES_PARTITION = 'sources_partition'
SOURCES_MIXED = 'sources_mixed'
BLOCKS_PARTITION = 'blocks_partition'
BLOCKS_MIXED = 'blocks_mixed'
BLOCKS_COMPONENTS = 'blocks_components'
CONDITIONS = (FIRST_DISTINCT_EDGES, FIRST_SPLICE_LOOP_FREE, SECOND_DISTINCT_EDGES, SECOND_SPLICE_LOOP_FREE,
              SOURCES_PARTITION, SOURCES_MIXED, BLOCKS_PARTITION, BLOCKS_MIXED, BLOCKS_COMPONENTS)

OUTSIDE_F = 'table partner outside F'
SELF_PARTNER = 'table partner is f itself'
NOT_RETURNING = 'table partner maps elsewhere'


def describe_half(h: HalfEdge) -> str:
    if h == FRESH_H2:
        return "h2'"
    if h == FRESH_H2_BAR:
        return "~h2'"
    return str(h)


class _FirstStage(NamedTuple):
    sign: int
    graph: OrientedGraph
    provenance: Provenance
    origin: Dict[HalfEdge, HalfEdge]

    def resolve(self, h: HalfEdge) -> Optional[HalfEdge]:
        if h.edge == FRESH_EDGE:
            return self.provenance.fresh_halves[h.end]
        return self.provenance.half_edge_map.get(h)


class _SecondStage(NamedTuple):
    sign: int
    graph: OrientedGraph
    marks: Tuple[int, int, int, int]
    mark_components: Tuple[int, int, int, int]
    sources: Tuple[frozenset, ...]


@dataclass(frozen=True)
class FElement:
    h1: HalfEdge
    h2: HalfEdge
    h3: HalfEdge
    h4: HalfEdge
    blocks: Tuple[frozenset, ...]
    sources: Tuple[frozenset, ...]
    sign: int
    final: OrientedGraph
    marks: Tuple[int, int, int, int]
    owner: 'FSet' = field(compare=False, repr=False, hash=False)

    @property
    def key(self):
        return (self.h1, self.h2, self.h3, self.h4, self.blocks)

    @property
    def m(self):
        return len(self.blocks)

    def __str__(self):
        blocks = ' '.join('{' + ','.join(map(str, sorted(block))) + '}' for block in self.blocks)
        return (f'h1={self.h1} h2={self.h2} h3={describe_half(self.h3)} h4={describe_half(self.h4)} '
                f'U=[{blocks}]')


class FSet:
    '''
    the set F for fixed (m, n) and inputs, with the surgeries it needs cached.

    :param m: int, output arity, at most 3
    :param n: int, input arity, at most 3
    :param inputs: AlphaInput whose product has no loops
    :param relaxed: names from CONDITIONS that are not enforced
    '''

    def __init__(self, m: int, n: int, inputs: AlphaInput, relaxed: Iterable[str] = ()):
        if not (1 <= m <= MAX_IDENTITY_ARITY and 1 <= n <= MAX_IDENTITY_ARITY):
            raise ArityError(f'F is defined for 1 <= m, n <= {MAX_IDENTITY_ARITY}, got ({m},{n})')
        if inputs.arity != n:
            raise ArityError(f'F({m},{n}) built on {inputs.arity} graphs')
        if inputs.product.has_loop():
            raise GraphInputError(f'input {inputs.product} contains a loop')
        self.relaxed: FrozenSet[str] = frozenset(relaxed)
        unknown = self.relaxed.difference(CONDITIONS)
        if unknown:
            raise GraphInputError(f'unknown conditions of F: {", ".join(sorted(unknown))}')
        self.m, self.n, self.inputs = m, n, inputs
        if BLOCKS_PARTITION in self.relaxed:
            self.partitions = [tuple(frozenset(j for j, slot in zip(POSITIONS, assignment) if slot == i)
                                     for i in range(m))
                               for assignment in itertools.product(range(m), repeat=len(POSITIONS))]
        else:
            self.partitions = list(ordered_set_partitions(POSITIONS, m))
        self._first = {}
        self._second = {}

    def _enforces(self, condition: str, holds: bool) -> bool:
        return holds or condition in self.relaxed

    # the conditions

    def _vertex(self, h: HalfEdge) -> int:
        return self.inputs.product.vertex(h)

    @staticmethod
    def first_distinct_edges(h1: HalfEdge, h2: HalfEdge) -> bool:
        return h1.edge != h2.edge

    def first_splice_loop_free(self, h1: HalfEdge, h2: HalfEdge) -> bool:
        '''neither e1 nor e2 of the first splice is a loop.'''
        v = self._vertex
        return v(h1) != v(h2.bar()) and v(h2) != v(h1.bar())

    @staticmethod
    def second_distinct_edges(h3: HalfEdge, h4: HalfEdge) -> bool:
        return h3.edge != h4.edge

    @staticmethod
    def second_splice_loop_free(p1: OrientedGraph, r3: HalfEdge, r4: HalfEdge) -> bool:
        '''e(h3), e(h4) are no loops of P1, and neither are e1, e2 of the second splice.'''
        if p1.is_loop(r3.edge) or p1.is_loop(r4.edge):
            return False
        return p1.vertex(r3) != p1.vertex(r4.bar()) and p1.vertex(r4) != p1.vertex(r3.bar())

    @staticmethod
    def sources_partition(sources: Tuple[frozenset, ...]) -> bool:
        # disjoint and covering by construction, every position has exactly one factor
        return all(sources)

    @staticmethod
    def sources_mixed(sources: Tuple[frozenset, ...]) -> bool:
        return any(source & {1, 2} and source & {3, 4} for source in sources)

    def blocks_partition(self, blocks: Tuple[frozenset, ...]) -> bool:
        if len(blocks) != self.m or not all(blocks):
            return False
        return sum(map(len, blocks)) == len(POSITIONS) and frozenset().union(*blocks) == set(POSITIONS)

    @staticmethod
    def blocks_mixed(blocks: Tuple[frozenset, ...]) -> bool:
        return any(block & {3, 4} and block & {1, 2} for block in blocks)

    @staticmethod
    def blocks_components(second: _SecondStage, blocks: Tuple[frozenset, ...]) -> bool:
        '''marks in one component of P2 go to one block.'''
        for block in blocks:
            for j in block:
                for k in POSITIONS:
                    if second.mark_components[j - 1] == second.mark_components[k - 1] and k not in block:
                        return False
        return True

    # surgeries

    def first_stage(self, h1: HalfEdge, h2: HalfEdge) -> Optional[_FirstStage]:
        '''
        P1 = P_{h1,h2}, or None when one of the first two conditions fails or the surgery is zero.
        '''
        if (h1, h2) not in self._first:
            self._first[(h1, h2)] = self._compute_first(h1, h2)
        return self._first[(h1, h2)]

    def _compute_first(self, h1, h2):
        if h1.edge < 0 or h2.edge < 0:
            return None
        if not self._enforces(FIRST_DISTINCT_EDGES, self.first_distinct_edges(h1, h2)):
            return None
        if not self._enforces(FIRST_SPLICE_LOOP_FREE, self.first_splice_loop_free(h1, h2)):
            return None
        result, provenance = surgery(self.inputs.product, h1, h2, allow_same_edge=True)
        if provenance is None:
            return None
        origin = {image: h for h, image in provenance.half_edge_map.items()}
        origin[provenance.fresh_halves[0]] = FRESH_H2
        origin[provenance.fresh_halves[1]] = FRESH_H2_BAR
        return _FirstStage(result.sign, result.graph, provenance, origin)

    def _factor(self, j_half: HalfEdge, h1: HalfEdge, h2: HalfEdge) -> int:
        if j_half == FRESH_H2:
            return self.inputs.factor_of(h2)
        if j_half == FRESH_H2_BAR:
            return self.inputs.factor_of(h1)
        return self.inputs.factor_of(j_half)

    def sources(self, h1, h2, h3, h4) -> Tuple[frozenset, ...]:
        '''
        S_1..S_n: the positions j whose half-edge h_j comes from the factor X_i.
        '''
        factors = [self._factor(h, h1, h2) for h in (h1, h2, h3, h4)]
        return tuple(frozenset(j for j, factor in zip(POSITIONS, factors) if factor == i) for i in range(self.n))

    def second_stage(self, h1, h2, h3, h4) -> Optional[_SecondStage]:
        key = (h1, h2, h3, h4)
        if key not in self._second:
            self._second[key] = self._compute_second(h1, h2, h3, h4)
        return self._second[key]

    def _compute_second(self, h1, h2, h3, h4):
        first = self.first_stage(h1, h2)
        if first is None:
            return None
        if not self._enforces(SECOND_DISTINCT_EDGES, self.second_distinct_edges(h3, h4)):
            return None
        sources = self.sources(h1, h2, h3, h4)
        if not self._enforces(SOURCES_PARTITION, self.sources_partition(sources)):
            return None
        if not self._enforces(SOURCES_MIXED, self.sources_mixed(sources)):
            return None
        r3, r4 = first.resolve(h3), first.resolve(h4)
        if r3 is None or r4 is None:
            return None
        p1 = first.graph
        if not self._enforces(SECOND_SPLICE_LOOP_FREE, self.second_splice_loop_free(p1, r3, r4)):
            return None
        result, provenance = surgery(p1, r3, r4, allow_same_edge=True)
        if provenance is None:
            return None
        p2 = result.graph
        first_marks = (first.provenance.merged_vertex, p1.vertex(first.provenance.fresh_halves[0]))
        marks = (provenance.vertex_map[first_marks[0]], provenance.vertex_map[first_marks[1]],
                 provenance.merged_vertex, p2.vertex(provenance.fresh_halves[0]))
        component_of = {v: c for c, component in enumerate(connected_components(p2)) for v in component}
        mark_components = tuple(component_of[mark] for mark in marks)
        return _SecondStage(first.sign * result.sign, p2, marks, mark_components, sources)

    # membership

    def _blocks_valid(self, second: _SecondStage, blocks) -> bool:
        return (self._enforces(BLOCKS_PARTITION, self.blocks_partition(blocks))
                and self._enforces(BLOCKS_MIXED, self.blocks_mixed(blocks))
                and self._enforces(BLOCKS_COMPONENTS, self.blocks_components(second, blocks)))

    def make_element(self, h1, h2, h3, h4, blocks) -> Optional[FElement]:
        '''
        the element of F with these data, or None if one of the defining conditions fails.
        '''
        blocks = tuple(frozenset(block) for block in blocks)
        if h1.edge < 0 or h2.edge < 0:
            return None
        second = self.second_stage(h1, h2, h3, h4)
        if second is None or not self._blocks_valid(second, blocks):
            return None
        return FElement(h1, h2, h3, h4, blocks, second.sources, second.sign, second.graph, second.marks, self)

    def build(self) -> List[FElement]:
        product = self.inputs.product
        halves = list(product.half_edges())
        elements = []
        for h1 in halves:
            for h2 in halves:
                first = self.first_stage(h1, h2)
                if first is None:
                    continue
                p1_halves = [first.origin[h] for h in first.graph.half_edges()]
                for h3 in p1_halves:
                    for h4 in p1_halves:
                        second = self.second_stage(h1, h2, h3, h4)
                        if second is None:
                            continue
                        for blocks in self.partitions:
                            if self._blocks_valid(second, blocks):
                                elements.append(FElement(h1, h2, h3, h4, blocks, second.sources, second.sign,
                                                         second.graph, second.marks, self))
        logger.info('F(%d,%d) on %s: %d elements', self.m, self.n, product, len(elements))
        return elements

    # the involution

    def table_data(self, element: FElement):
        '''
        (h1, h2, h3, h4, U) that the case table assigns to f, whether or not they describe an element of F.
        '''
        h1, h2, h3, h4 = element.h1, element.h2, element.h3, element.h4
        if h3 == FRESH_H2:
            return self._case_ii(h1, h2, h4, element.blocks)
        if h4 == FRESH_H2:
            return self._case_iii(h1, h2, h3, element.blocks)
        if h3 == FRESH_H2_BAR:
            # reduces to case (iii) through (h1, h2, ~h4, ~h3)
            a, b, c, d, blocks = self._case_iii(h1, h2, h4.bar(), element.blocks)
            return a, b, d.bar(), c.bar(), blocks
        if h4 == FRESH_H2_BAR:
            # reduces to case (ii) through (h1, h2, ~h4, ~h3)
            a, b, c, d, blocks = self._case_ii(h1, h2, h3.bar(), element.blocks)
            return a, b, d.bar(), c.bar(), blocks
        return self._case_i(h1, h2, h3, h4, element.blocks)

    def table_partner(self, element: FElement) -> Optional[FElement]:
        return self.make_element(*self.table_data(element))

    def _settle(self, element: FElement) -> Tuple[FElement, Optional[str]]:
        partner = self.table_partner(element)
        if partner is None:
            return element, OUTSIDE_F
        if partner.key == element.key:
            return element, SELF_PARTNER
        back = self.table_partner(partner)
        if back is None or back.key != element.key:
            return element, NOT_RETURNING
        return partner, None

    def mu(self, element: FElement) -> FElement:
        '''
        the table partner of f when the table pairs f with it both ways, otherwise f itself.

        with this completion mu maps F into F and mu(mu(f)) = f for every f.
        '''
        return self._settle(element)[0]

    def fixed_point_reason(self, element: FElement) -> Optional[str]:
        '''
        why mu fixes f (OUTSIDE_F, SELF_PARTNER or NOT_RETURNING), None when f is paired.
        '''
        return self._settle(element)[1]

    def _connects(self, edge_half, a, b) -> bool:
        ends = {self._vertex(edge_half), self._vertex(edge_half.bar())}
        return ends == {self._vertex(a), self._vertex(b)} and len(ends) == 2

    def _case_i(self, h1, h2, h3, h4, blocks):
        if self._connects(h1, h3, h4.bar()):
            return h1.bar(), h2, h3, h4, _pull_back(blocks, IDENTITY)
        if self._connects(h2, h3, h4.bar()):
            return h1, h2.bar(), h3, h4, _pull_back(blocks, IDENTITY)
        return h3, h4, h1, h2, _pull_back(blocks, SWAP_PAIRS)

    def _case_ii(self, h1, h2, h4, blocks):
        v = self._vertex
        if v(h1) == v(h2) and v(h1.bar()) == v(h4.bar()):
            return h1, h4, h2.bar(), FRESH_H2, _pull_back(blocks, IDENTITY)
        if v(h2.bar()) == v(h4) and v(h1) == v(h2):
            return h4.bar(), h2, h1, FRESH_H2, _pull_back(blocks, IDENTITY)
        if v(h2.bar()) == v(h4) and v(h1.bar()) == v(h4.bar()):
            return h1.bar(), h2.bar(), h4, FRESH_H2, _pull_back(blocks, IDENTITY)
        if v(h2.bar()) == v(h4) and v(h1) != v(h2) and v(h1.bar()) != v(h4.bar()):
            return h4, h1.bar(), h2, FRESH_H2, _pull_back(blocks, {1: 1, 2: 1, 3: 3, 4: 4})
        return h2, h4, h1, FRESH_H2, _pull_back(blocks, {1: 2, 2: 4, 3: 1, 4: 4})

    def _case_iii(self, h1, h2, h3, blocks):
        v = self._vertex
        if v(h2) == v(h3) and v(h2.bar()) == v(h1.bar()):
            return h3, h2, FRESH_H2, h1.bar(), _pull_back(blocks, IDENTITY)
        if v(h3.bar()) == v(h1) and v(h2.bar()) == v(h1.bar()):
            return h1, h3.bar(), FRESH_H2, h2, _pull_back(blocks, IDENTITY)
        if v(h3.bar()) == v(h1) and v(h2) == v(h3):
            return h1.bar(), h2.bar(), FRESH_H2, h3, _pull_back(blocks, IDENTITY)
        if v(h3.bar()) == v(h1) and v(h2.bar()) != v(h1.bar()) and v(h2) != v(h3):
            return h2.bar(), h3, FRESH_H2, h1, _pull_back(blocks, {1: 1, 2: 3, 3: 3, 4: 4})
        return h3, h1, FRESH_H2, h2, _pull_back(blocks, {1: 3, 2: 1, 3: 1, 4: 2})

    # terms

    def term_of(self, element: FElement) -> TensorVector:
        prescribed = [{j - 1 for j in block} for block in element.blocks]
        splits = split_with_marks(element.final, element.marks, self.m, prescribed)
        return splits_to_vector(splits, self.m, element.sign)


def _pull_back(blocks, xi) -> Tuple[frozenset, ...]:
    """U_i' = {j | xi(j) in U_i}."""
    return tuple(frozenset(j for j in POSITIONS if xi[j] in block) for block in blocks)


def build_F(m: int, n: int, inputs: AlphaInput) -> List[FElement]:
    return FSet(m, n, inputs).build()


def t_of(element: FElement) -> Flowchart:
    '''
    the flowchart T_f: input i enters s(T) iff S_i meets {1,2}, output i leaves t(T) iff U_i meets {3,4}.
    '''
    source_inputs = frozenset(i + 1 for i, source in enumerate(element.sources) if source & {1, 2})
    target_outputs = frozenset(i + 1 for i, block in enumerate(element.blocks) if block & {3, 4})
    return Flowchart(len(element.blocks), len(element.sources), source_inputs, target_outputs)


def term_of(element: FElement) -> TensorVector:
    return element.owner.term_of(element)


def mu(element: FElement) -> FElement:
    return element.owner.mu(element)


@dataclass
class PairingCertificate:
    m: int
    n: int
    inputs: Tuple[str, ...]
    pairs: List[dict] = field(default_factory=list)
    fixed_points: List[dict] = field(default_factory=list)
    violations: List[dict] = field(default_factory=list)
    element_count: int = 0
    residual: Optional[TensorVector] = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.residual is not None and self.residual.is_zero()

    def to_json(self) -> dict:
        return {
            'm': self.m,
            'n': self.n,
            'inputs': list(self.inputs),
            'element_count': self.element_count,
            'pairs': self.pairs,
            'fixed_points': self.fixed_points,
            'violations': self.violations,
            'residual': self.residual.to_json() if self.residual is not None else None,
        }


def verify_pairing(m: int, n: int, inputs: AlphaInput, strict: bool = True) -> PairingCertificate:
    '''
    checks that mu pairs the elements of F into cancelling terms.

    the checks do not trust mu: for every f, mu(f) must be one of the built elements and
    mu(mu(f)) = f; a pair must have term_of(f) + term_of(mu(f)) = 0 and a fixed point
    f = mu(f) must have a zero term.

    :param strict: bool, raise at the first failure; with False the failures are collected
                   in certificate.violations
    :return: PairingCertificate
    :raises IdentityViolation: on the first offending element, which is attached as witness
    '''
    fset = FSet(m, n, inputs)
    elements = fset.build()
    members = {element.key for element in elements}
    certificate = PairingCertificate(m, n, tuple(str(graph) for graph in inputs.factors), element_count=len(elements))
    terms = {}
    residual = TensorVector(m)
    for element in elements:
        terms[element.key] = fset.term_of(element)
        residual.iadd(terms[element.key])
    certificate.residual = residual

    seen = set()
    for element in elements:
        if element.key in seen:
            continue
        term = terms[element.key]
        partner = fset.mu(element)
        problem = None
        if partner.key not in members:
            problem = 'mu(f) is not in F'
        elif partner.key == element.key:
            reason = fset.fixed_point_reason(element) or 'mu fixes f'
            certificate.fixed_points.append({'f': str(element), 'reason': reason, 'term': term.to_json()})
            if not term.is_zero():
                problem = 'fixed point of mu with a nonzero term'
        elif fset.mu(partner).key != element.key:
            problem = 'mu(mu(f)) != f'
        else:
            partner_term = terms[partner.key]
            total = term + partner_term
            seen.add(partner.key)
            certificate.pairs.append({'f': str(element), 'mu': str(partner), 'term': term.to_json(),
                                      'mu_term': partner_term.to_json(), 'sum': total.to_json()})
            if not total.is_zero():
                problem = f'terms of f and mu(f) = {partner} do not cancel'
        seen.add(element.key)
        if problem is None:
            continue
        if strict:
            raise IdentityViolation(f'pairing fails at {element}: {problem}', element)
        certificate.violations.append({'f': str(element), 'problem': problem, 'term': term.to_json()})

    logger.info('pairing (%d,%d): %d elements, %d pairs, %d fixed points, %d violations', m, n, len(elements),
                len(certificate.pairs), len(certificate.fixed_points), len(certificate.violations))
    return certificate
