"""
Two-corolla flowcharts T(m,n) and the strong homotopy identity built from them.

A flowchart is identified by the inputs I_s entering the source corolla s(T) and the
outputs O_t leaving the target corolla t(T); the internal edge runs from s(T) to t(T).
The composite alpha o_T alpha is the sum of the F-terms whose flowchart is T (see
graphcx.involution), and the residual of the identity is the sum over all of T(m,n).
"""
import collections
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence

from graphcx.algebra import TensorVector
from graphcx.combinatorics import nonempty_subsets
from graphcx.errors import ArityError
from graphcx.structure_maps import MAX_ARITY, AlphaInput, differential, differential_of_vector

logger = logging.getLogger(__name__)

# F is only defined for m, n <= 3; beyond that every flowchart has a corolla of arity > 2
MAX_IDENTITY_ARITY = 3

IDENTITIES = collections.OrderedDict([
    ('d_squared', (1, 1)),
    ('leibniz', (1, 2)),
    ('jacobi', (1, 3)),
    ('coderivation', (2, 1)),
    ('cojacobi', (3, 1)),
    ('bialgebra22', (2, 2)),
    ('id23', (2, 3)),
    ('id32', (3, 2)),
    ('id33', (3, 3)),
])
CLASSICAL_IDENTITIES = ('d_squared', 'leibniz', 'jacobi', 'coderivation', 'cojacobi')


@dataclass(frozen=True)
class Flowchart:
    m: int
    n: int
    source_inputs: FrozenSet[int]
    target_outputs: FrozenSet[int]

    @property
    def i_s(self):
        return len(self.source_inputs)

    @property
    def o_s(self):
        return self.m - len(self.target_outputs) + 1

    @property
    def i_t(self):
        return self.n - len(self.source_inputs) + 1

    @property
    def o_t(self):
        return len(self.target_outputs)

    @property
    def max_arity(self):
        return max(self.i_s, self.o_s, self.i_t, self.o_t)

    def __str__(self):
        inputs = ','.join(map(str, sorted(self.source_inputs)))
        outputs = ','.join(map(str, sorted(self.target_outputs)))
        return (f'T(m={self.m},n={self.n}; s: in {{{inputs}}} alpha({self.o_s},{self.i_s}); '
                f't: out {{{outputs}}} alpha({self.o_t},{self.i_t}))')


def enumerate_flowcharts(m: int, n: int) -> List[Flowchart]:
    '''
    the set T(m,n), ordered by (I_s, O_t) with subsets listed by size then lexicographically.
    '''
    if m < 1 or n < 1:
        raise ArityError(f'T({m},{n}) needs positive arities')
    return [Flowchart(m, n, inputs, outputs)
            for inputs in nonempty_subsets(range(1, n + 1))
            for outputs in nonempty_subsets(range(1, m + 1))]


def compose_along(flowchart: Flowchart, inputs: AlphaInput, elements: Optional[Sequence] = None) -> TensorVector:
    '''
    alpha_{o(t),i(t)} o_T alpha_{o(s),i(s)} applied to the inputs, as the sum of term_of(f)
    over the F elements with t_of(f) = T.

    :param flowchart: Flowchart
    :param inputs: AlphaInput with n graphs
    :param elements: optional precomputed build_F(m, n, inputs)
    :return: TensorVector of arity m
    '''
    # involution imports Flowchart from this module
    from graphcx.involution import build_F, t_of, term_of

    result = TensorVector(flowchart.m)
    if flowchart.max_arity > MAX_ARITY:
        return result
    if elements is None:
        elements = build_F(flowchart.m, flowchart.n, inputs)
    for element in elements:
        if t_of(element) == flowchart:
            result.iadd(term_of(element))
    return result


def residual_by_flowchart(m: int, n: int, inputs: AlphaInput) -> Dict[Flowchart, TensorVector]:
    from graphcx.involution import build_F, t_of, term_of

    grouped = collections.OrderedDict((flowchart, TensorVector(m)) for flowchart in enumerate_flowcharts(m, n))
    if m > MAX_IDENTITY_ARITY or n > MAX_IDENTITY_ARITY:
        return grouped
    for element in build_F(m, n, inputs):
        grouped[t_of(element)].iadd(term_of(element))
    return grouped


def shlb_residual(m: int, n: int, inputs: AlphaInput) -> TensorVector:
    '''
    left hand side of the strong homotopy Lie bialgebra identity: sum over T(m,n) of the composites.

    :return: TensorVector of arity m, zero when the identity holds
    '''
    if inputs.arity != n:
        raise ArityError(f'identity ({m},{n}) applied to {inputs.arity} graphs')
    result = TensorVector(m)
    if m > MAX_IDENTITY_ARITY or n > MAX_IDENTITY_ARITY:
        return result
    for flowchart, vector in residual_by_flowchart(m, n, inputs).items():
        if not vector.is_zero():
            logger.debug('%s contributes %d terms', flowchart, len(vector))
        result.iadd(vector)
    return result


def named_identity(name: str, inputs: AlphaInput) -> TensorVector:
    if name not in IDENTITIES:
        raise ArityError(f'unknown identity {name!r}, choose from {", ".join(IDENTITIES)}')
    m, n = IDENTITIES[name]
    if inputs.arity != n:
        raise ArityError(f'identity {name} takes {n} graphs, got {inputs.arity}')
    return shlb_residual(m, n, inputs)


def staged_d_squared(inputs: AlphaInput) -> TensorVector:
    '''
    alpha_{1,1} applied twice in sequence; for (m,n) = (1,1) no reordering of factors occurs,
    so this is an independent evaluation of compose_along over T(1,1).
    '''
    if inputs.arity != 1:
        raise ArityError('d_squared takes one graph')
    return differential_of_vector(differential(inputs.factors[0]))
