"""
The odd maps alpha_{m,n} from n-fold to m-fold tensors of the graph complex.

alpha(m, n) sums, over ordered pairs (h1, h2) of half-edges of the product X_1...X_n lying
on distinct edges and touching every factor, the surgery X_{h1,h2} split into m tensor
slots each holding v(h1') or v(h2'). It is the zero map when m > 2 or n > 2.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from graphcx.algebra import GraphVector, TensorVector, split_with_marks, splits_to_vector
from graphcx.canonical import decode_key
from graphcx.errors import ArityError
from graphcx.graph import HalfEdge, OrientedGraph, product_of, surgery

logger = logging.getLogger(__name__)

MAX_ARITY = 2


@dataclass(frozen=True)
class AlphaInput:
    factors: Tuple[OrientedGraph, ...]
    product: OrientedGraph
    edge_factor: Tuple[int, ...]

    @classmethod
    def of(cls, graphs: Sequence[OrientedGraph]) -> 'AlphaInput':
        '''
        :param graphs: the ordered factors X_1..X_n
        :return: AlphaInput with the product P = X_1...X_n and the 0-based factor of every edge of P
        '''
        graphs = tuple(graphs)
        if not graphs:
            raise ArityError('alpha needs at least one input graph')
        edge_factor = tuple(i for i, graph in enumerate(graphs) for _ in graph.edges)
        return cls(graphs, product_of(graphs), edge_factor)

    @classmethod
    def from_keys(cls, keys: Sequence[str]) -> 'AlphaInput':
        return cls.of([decode_key(key) for key in keys])

    @property
    def arity(self):
        return len(self.factors)

    def factor_of(self, h: HalfEdge) -> int:
        return self.edge_factor[h.edge]


def surgery_pairs(inputs: AlphaInput) -> Iterator[Tuple[HalfEdge, HalfEdge]]:
    '''
    ordered pairs of half-edges of the product on distinct edges such that every factor contains one of them.
    '''
    halves = list(inputs.product.half_edges())
    everyone = set(range(inputs.arity))
    for h1 in halves:
        for h2 in halves:
            if h1.edge == h2.edge:
                continue
            if everyone - {inputs.factor_of(h1), inputs.factor_of(h2)}:
                continue
            yield h1, h2


def surgery_term(inputs: AlphaInput, m: int, h1: HalfEdge, h2: HalfEdge) -> TensorVector:
    '''
    contribution of a single pair (h1, h2) to alpha(m, n).
    '''
    result, provenance = surgery(inputs.product, h1, h2)
    if result.is_zero:
        return TensorVector(m)
    marks = [provenance.merged_vertex, result.graph.vertex(provenance.fresh_halves[0])]
    return splits_to_vector(split_with_marks(result.graph, marks, m), m, result.sign)


def alpha(m: int, n: int, inputs: AlphaInput) -> TensorVector:
    '''
    alpha_{m,n} applied to X_1 (x) ... (x) X_n.

    :param m: int, output arity
    :param n: int, input arity, must match the number of input graphs
    :param inputs: AlphaInput
    :return: TensorVector of arity m
    '''
    if inputs.arity != n:
        raise ArityError(f'alpha({m},{n}) applied to {inputs.arity} graphs')
    result = TensorVector(m)
    if m > MAX_ARITY or n > MAX_ARITY:
        return result
    for h1, h2 in surgery_pairs(inputs):
        result.iadd(surgery_term(inputs, m, h1, h2))
    logger.debug('alpha(%d,%d) on %s: %d terms', m, n, inputs.product, len(result))
    return result


def differential(x: OrientedGraph) -> TensorVector:
    return alpha(1, 1, AlphaInput.of([x]))


def bracket(x: OrientedGraph, y: OrientedGraph) -> TensorVector:
    return alpha(1, 2, AlphaInput.of([x, y]))


def cobracket(x: OrientedGraph) -> TensorVector:
    return alpha(2, 1, AlphaInput.of([x]))


def alpha22(x: OrientedGraph, y: OrientedGraph) -> TensorVector:
    return alpha(2, 2, AlphaInput.of([x, y]))


def differential_of_vector(vector: TensorVector) -> GraphVector:
    '''
    alpha_{1,1} extended linearly to a vector of arity 1.
    '''
    result = GraphVector()
    for (key,), coefficient in vector.items():
        result.iadd(differential(decode_key(key)), coefficient)
    return result
