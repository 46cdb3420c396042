"""
Canonical form of an oriented graph modulo relabeling and edge reversal.

The reference semantics is exhaustive: for every vertex permutation, direct all edges
from the smaller to the larger label, sort the edge list, and keep the least edge list
together with the sign sgn(sigma) * (-1)^reversals. A graph whose least edge list comes
with both signs has an orientation-reversing automorphism and is zero, as is any graph
with a loop.
"""
import functools
import itertools
import logging
import re
from typing import NamedTuple, Optional, Tuple

from graphcx.combinatorics import minus_one_exp, permutation_sign
from graphcx.errors import GraphInputError
from graphcx.graph import OrientedGraph, SignedGraph

logger = logging.getLogger(__name__)

_KEY_RE = re.compile(r'^(\d+):(\d+):((?:\(\d+,\d+\))*)$')
_EDGE_RE = re.compile(r'\((\d+),(\d+)\)')
CACHE_SIZE = 2 ** 16


class SignedKey(NamedTuple):
    sign: int
    key: str


class Parity(NamedTuple):
    graded: str
    shifted: str


def encode_key(vertex_count: int, edges) -> str:
    return f'{vertex_count}:{len(edges)}:' + ''.join(f'({src},{tgt})' for src, tgt in edges)


def decode_key(key: str) -> OrientedGraph:
    '''
    the representative graph a key stands for; canonicalize(decode_key(k)) == (+1, k).
    '''
    match = _KEY_RE.match(key)
    if not match:
        raise GraphInputError(f'malformed canonical key {key!r}')
    edges = tuple((int(src), int(tgt)) for src, tgt in _EDGE_RE.findall(match.group(3)))
    if len(edges) != int(match.group(2)):
        raise GraphInputError(f'canonical key {key!r} announces {match.group(2)} edges')
    return OrientedGraph(int(match.group(1)), edges)


def key_size(key: str) -> Tuple[int, int]:
    vertex_count, edge_count, _ = key.split(':', 2)
    return int(vertex_count), int(edge_count)


def _normalize(edges):
    reversals = 0
    normalized = []
    for src, tgt in edges:
        if src > tgt:
            src, tgt = tgt, src
            reversals += 1
        normalized.append((src, tgt))
    normalized.sort()
    return tuple(normalized), reversals


@functools.lru_cache(maxsize=CACHE_SIZE)
def _least_form(vertex_count: int, edges: Tuple[Tuple[int, int], ...]) -> Optional[Tuple[int, tuple]]:
    best, signs = None, set()
    for sigma in itertools.permutations(range(1, vertex_count + 1)):
        mapped, reversals = _normalize((sigma[src - 1], sigma[tgt - 1]) for src, tgt in edges)
        if best is not None and mapped > best:
            continue
        sign = permutation_sign(sigma) * minus_one_exp(reversals)
        if best is None or mapped < best:
            best, signs = mapped, {sign}
        else:
            signs.add(sign)
    if len(signs) > 1:
        return None
    return signs.pop(), best


def canonicalize(g: OrientedGraph) -> Optional[SignedKey]:
    '''
    canonical class of g.

    :param g: OrientedGraph
    :return: None for the zero class, else SignedKey(sign, key) with g = sign * decode_key(key)
    '''
    if g.has_loop():
        return None
    normalized, reversals = _normalize(g.edges)
    least = _least_form(g.vertex_count, normalized)
    if least is None:
        return None
    sign, edges = least
    return SignedKey(sign * minus_one_exp(reversals), encode_key(g.vertex_count, edges))


def canonicalize_signed(signed: SignedGraph) -> Optional[SignedKey]:
    if signed.is_zero:
        return None
    canonical = canonicalize(signed.graph)
    if canonical is None:
        return None
    return SignedKey(signed.sign * canonical.sign, canonical.key)


def is_zero_graph(g: OrientedGraph) -> bool:
    return canonicalize(g) is None


def parity(key: str) -> Parity:
    '''
    parity of a basis graph in the graph complex (number of vertices mod 2) and in its parity shift.
    '''
    vertex_count, _ = key_size(key)
    graded = 'odd' if vertex_count % 2 else 'even'
    shifted = 'even' if vertex_count % 2 else 'odd'
    return Parity(graded, shifted)