"""
Integer linear combinations of canonical graphs and of tensors of canonical graphs,
and the splitting of a graph into tensor factors along marked components.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from graphcx.canonical import canonicalize_signed, key_size
from graphcx.combinatorics import block_shuffle
from graphcx.errors import ArityError
from graphcx.graph import OrientedGraph, SignedGraph, connected_components, induced_subgraph

logger = logging.getLogger(__name__)


class TensorVector:
    '''
    finitely supported map from m-tuples of canonical keys to nonzero integers.
    Tuples are kept in their literal order, no symmetrization happens.
    '''

    def __init__(self, arity: int, terms: Optional[Dict[Tuple[str, ...], int]] = None):
        self.arity = arity
        self.terms = {}
        for factors, coefficient in (terms or {}).items():
            self._accumulate(tuple(factors), coefficient)

    def _accumulate(self, factors, coefficient):
        if len(factors) != self.arity:
            raise ArityError(f'tensor of arity {len(factors)} added to a vector of arity {self.arity}')
        total = self.terms.get(factors, 0) + coefficient
        if total:
            self.terms[factors] = total
        else:
            self.terms.pop(factors, None)

    def add_term(self, factors: Sequence[str], coefficient: int):
        self._accumulate(tuple(factors), coefficient)

    def iadd(self, other: 'TensorVector', scale: int = 1):
        if other.arity != self.arity:
            raise ArityError(f'cannot add vectors of arity {self.arity} and {other.arity}')
        for factors, coefficient in other.terms.items():
            self._accumulate(factors, scale * coefficient)
        return self

    def coefficient(self, factors: Sequence[str]) -> int:
        return self.terms.get(tuple(factors), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __eq__(self, other):
        return isinstance(other, TensorVector) and self.arity == other.arity and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return f'TensorVector({self.arity}, 0)'
        return ' '.join(f'{coefficient:+d}*[{" ⊗ ".join(factors)}]' for factors, coefficient in self.items())

    def to_json(self) -> List[dict]:
        return [{'coeff': coefficient, 'factors': list(factors)} for factors, coefficient in self.items()]

    @classmethod
    def from_json(cls, arity: int, data: Iterable[dict]) -> 'TensorVector':
        return cls(arity, {tuple(item['factors']): item['coeff'] for item in data})


class GraphVector(TensorVector):
    """An element of the graph complex: a TensorVector of arity 1."""

    def __init__(self, terms: Optional[Dict[str, int]] = None):
        super().__init__(1, {(key,): coefficient for key, coefficient in (terms or {}).items()})


def zero_vector(arity: int) -> TensorVector:
    return TensorVector(arity)


def add(a: TensorVector, b: TensorVector) -> TensorVector:
    return TensorVector(a.arity, a.terms).iadd(b)


def scale(c: int, a: TensorVector) -> TensorVector:
    if c == 0:
        return TensorVector(a.arity)
    return TensorVector(a.arity, {factors: c * coefficient for factors, coefficient in a.terms.items()})


def is_zero(a: TensorVector) -> bool:
    return a.is_zero()


def tensor_term(factors: Sequence[SignedGraph]) -> TensorVector:
    '''
    the tensor product of signed graphs, canonicalized factorwise.

    :param factors: sequence of SignedGraph
    :return: TensorVector with at most one term, the zero vector if any factor is zero
    '''
    result = TensorVector(len(factors))
    coefficient = 1
    keys = []
    for factor in factors:
        canonical = canonicalize_signed(factor)
        if canonical is None:
            return result
        coefficient *= canonical.sign
        keys.append(canonical.key)
    result.add_term(keys, coefficient)
    return result


def tensor_parity(factors: Sequence[str]) -> int:
    '''
    total parity of a tensor of basis graphs in the parity-shifted complex (a graph with V vertices has parity V + 1).
    '''
    return sum(key_size(key)[0] + 1 for key in factors) % 2


@dataclass(frozen=True)
class MarkedSplit:
    sign: int
    factors: Tuple[OrientedGraph, ...]
    assignment: Tuple[int, ...]


def split_with_marks(z: OrientedGraph, marks: Sequence[int], m: int,
                     prescribed: Optional[Sequence[Iterable[int]]] = None) -> List[MarkedSplit]:
    '''
    all ways of writing z as a product Y_1 ... Y_m of unions of its components.

    :param z: OrientedGraph
    :param marks: sequence of marked vertex labels M_1..M_k
    :param m: int, number of tensor slots
    :param prescribed: None for the free mode, where every slot must receive at least one marked
                       vertex; otherwise a sequence (U_1..U_m) of sets of 0-based mark indices and
                       slot i must receive exactly the components of the marks in U_i.
    :return: list of MarkedSplit; assignment[c] is the 0-based slot of the c-th component
             (components ordered by smallest label), sign is the sign of the block shuffle.
    '''
    components = connected_components(z)
    component_of = {v: c for c, component in enumerate(components) for v in component}
    marked_components = [component_of[mark] for mark in marks]

    if prescribed is None:
        candidates = (assignment for assignment in itertools.product(range(m), repeat=len(components))
                      if {assignment[c] for c in marked_components} == set(range(m)))
    else:
        fixed = {}
        for slot, indices in enumerate(prescribed):
            for index in indices:
                component = marked_components[index]
                if fixed.setdefault(component, slot) != slot:
                    return []
        free = [c for c in range(len(components)) if c not in fixed]
        candidates = []
        for choice in itertools.product(range(m), repeat=len(free)):
            assignment = dict(fixed)
            assignment.update(zip(free, choice))
            candidates.append(tuple(assignment[c] for c in range(len(components))))

    splits = []
    for assignment in candidates:
        blocks = [[] for _ in range(m)]
        for c, slot in enumerate(assignment):
            blocks[slot].extend(components[c])
        if not all(blocks):
            continue
        _, sign = block_shuffle(blocks)
        factors = tuple(induced_subgraph(z, block) for block in blocks)
        splits.append(MarkedSplit(sign, factors, tuple(assignment)))
    return splits


def splits_to_vector(splits: Iterable[MarkedSplit], m: int, sign: int = 1) -> TensorVector:
    result = TensorVector(m)
    for split in splits:
        term = tensor_term([SignedGraph(1, factor) for factor in split.factors])
        result.iadd(term, sign * split.sign)
    return result
