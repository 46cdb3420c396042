"""
Exhaustive bases of the graph complex at fixed (V, E), the matrices of alpha_{1,1}
between them and rational Betti numbers.
"""
import json
import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import sympy
from tqdm import tqdm

from graphcx.canonical import canonicalize, decode_key
from graphcx.errors import ConsistencyError, GraphInputError
from graphcx.graph import MIN_VALENCY, OrientedGraph, connected_components, is_one_pi
from graphcx.structure_maps import differential

logger = logging.getLogger(__name__)


class Bidegree(NamedTuple):
    vertices: int
    edges: int

    @property
    def target(self) -> 'Bidegree':
        """alpha_{1,1} lowers both counts by one."""
        return Bidegree(self.vertices - 1, self.edges - 1)

    @property
    def source(self) -> 'Bidegree':
        return Bidegree(self.vertices + 1, self.edges + 1)

    @property
    def admissible(self) -> bool:
        return self.vertices >= 1 and 2 * self.edges >= MIN_VALENCY * self.vertices

    def __str__(self):
        return f'{self.vertices},{self.edges}'


@dataclass(frozen=True)
class Basis:
    bidegree: Bidegree
    keys: Tuple[str, ...]

    def __len__(self):
        return len(self.keys)

    def index(self) -> Dict[str, int]:
        return {key: i for i, key in enumerate(self.keys)}


@dataclass
class IntegerMatrix:
    '''
    sparse integer matrix; entries maps (row, col), 0-based, to nonzero integers.
    '''
    rows: int
    cols: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def to_sympy(self) -> sympy.SparseMatrix:
        return sympy.SparseMatrix(self.rows, self.cols, self.entries)

    def rank(self) -> int:
        if not self.entries:
            return 0
        return self.to_sympy().rank()

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: 'IntegerMatrix') -> 'IntegerMatrix':
        if self.cols != other.rows:
            raise ConsistencyError(f'cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}')
        if not self.entries or not other.entries:
            return IntegerMatrix(self.rows, other.cols)
        dense = self.to_sympy() * other.to_sympy()
        entries = {(i, j): int(dense[i, j]) for i in range(dense.rows) for j in range(dense.cols) if dense[i, j] != 0}
        return IntegerMatrix(self.rows, other.cols, entries)

    def to_text(self) -> str:
        '''
        header `rows cols`, then one `row col value` line per entry, 1-based, sorted.
        '''
        lines = [f'{self.rows} {self.cols}']
        lines += [f'{i + 1} {j + 1} {value}' for (i, j), value in sorted(self.entries.items())]
        return '\n'.join(lines) + '\n'


def labeled_multigraphs(vertex_count: int, edge_count: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    '''
    loop-free multigraphs on labels 1..V with E edges, all valencies >= 3 and valencies
    non-increasing in the label; every isomorphism class has such a representative.
    Edges come sorted and directed from the smaller to the larger label.
    '''
    if vertex_count < 2:
        return
    pairs = [(i, j) for i in range(1, vertex_count + 1) for j in range(i + 1, vertex_count + 1)]
    degree = [0] * (vertex_count + 1)
    chosen = []

    def settled(v):
        return degree[v] >= MIN_VALENCY and (v == 1 or degree[v] <= degree[v - 1])

    def deficit(first_open):
        return sum(max(0, MIN_VALENCY - degree[v]) for v in range(first_open, vertex_count + 1))

    def recurse(index, remaining):
        if index == len(pairs):
            if remaining == 0 and settled(vertex_count):
                yield tuple(chosen)
            return
        i, j = pairs[index]
        closes_i = j == vertex_count
        for multiplicity in range(remaining + 1):
            degree[i] += multiplicity
            degree[j] += multiplicity
            chosen.extend([(i, j)] * multiplicity)
            left = remaining - multiplicity
            if (not closes_i or settled(i)) and deficit(i + 1 if closes_i else i) <= 2 * left:
                yield from recurse(index + 1, left)
            del chosen[len(chosen) - multiplicity:]
            degree[i] -= multiplicity
            degree[j] -= multiplicity

    yield from recurse(0, edge_count)


def enumerate_graphs(vertex_count: int, edge_count: int, connected: bool = False, one_pi: bool = False) -> Basis:
    '''
    all nonzero classes of graphs with V vertices and E edges.

    :param connected: bool, keep only connected graphs
    :param one_pi: bool, keep only one-particle irreducible graphs
    :return: Basis, keys sorted
    '''
    bidegree = Bidegree(vertex_count, edge_count)
    if vertex_count < 1 or edge_count < 1:
        raise GraphInputError(f'bidegree ({bidegree}) must have V, E >= 1')
    keys = set()
    if bidegree.admissible:
        for edges in labeled_multigraphs(vertex_count, edge_count):
            graph = OrientedGraph(vertex_count, edges)
            if connected and len(connected_components(graph)) != 1:
                continue
            if one_pi and not is_one_pi(graph):
                continue
            canonical = canonicalize(graph)
            if canonical is not None:
                keys.add(canonical.key)
    logger.debug('basis (%s): %d graphs', bidegree, len(keys))
    return Basis(bidegree, tuple(sorted(keys)))


def _enumerate_star(args):
    return enumerate_graphs(*args)


def differential_matrix(source: Basis, target: Basis) -> IntegerMatrix:
    '''
    column j holds the coordinates of alpha_{1,1}(source_j) in the target basis.

    :raises ConsistencyError: if a term of the differential is missing from the target basis
    '''
    if target.bidegree != source.bidegree.target:
        raise ConsistencyError(f'differential maps ({source.bidegree}) to ({source.bidegree.target}), not ({target.bidegree})')
    row_of = target.index()
    matrix = IntegerMatrix(len(target), len(source))
    for j, key in enumerate(source.keys):
        for (image,), coefficient in differential(decode_key(key)).items():
            if image not in row_of:
                raise ConsistencyError(f'd({key}) contains {image}, which is not in the basis ({target.bidegree})')
            matrix.entries[(row_of[image], j)] = coefficient
    return matrix


class Corpus:
    def __init__(self, pretrained_corpus=False, corpus_file=None):
        '''
        initializes the Corpus class, imports bases and configuration if provided.

        :param pretrained_corpus: bool, whether to load previously enumerated bases from file.
        :param corpus_file: path to the corpus JSON file, if pretrained_corpus is True.
        '''
        self.bases = {}
        self.config = {}
        self._matrices = {}
        if pretrained_corpus:
            self.bases, self.config = self._load_corpus(corpus_file)
        else:
            logger.info('Corpus initiated; enumerate bases with generate() or load them with the corpus_file argument.')

    def generate(self, max_vertices: int, max_edges: int, connected=False, one_pi=False,
                 corpus_fname: Optional[str] = None, jobs=1, verbose=False):
        '''
        enumerates the bases of every bidegree up to the given bounds.

        :param max_vertices: int, largest vertex count
        :param max_edges: int, largest edge count
        :param connected: bool, keep only connected graphs
        :param one_pi: bool, keep only one-particle irreducible graphs
        :param corpus_fname: str, optional path of a JSON file receiving the configuration and bases
        :param jobs: int, number of worker processes
        :param verbose: bool, show a progress bar
        :return: self
        '''
        self.config = {'max_vertices': max_vertices, 'max_edges': max_edges, 'connected': connected, 'one_pi': one_pi}
        bidegrees = [Bidegree(v, e) for v in range(1, max_vertices + 1) for e in range(1, max_edges + 1)]
        arguments = [(b.vertices, b.edges, connected, one_pi) for b in bidegrees]
        if jobs > 1:
            with multiprocessing.Pool(jobs) as pool:
                bases = pool.map(_enumerate_star, arguments)
        else:
            if verbose:
                arguments = tqdm(arguments, desc='enumerate', dynamic_ncols=True, ascii=True)
            bases = [_enumerate_star(args) for args in arguments]
        self.bases = {basis.bidegree: basis for basis in bases}
        self._matrices = {}
        logger.info('enumerated %d graphs in %d bidegrees', sum(map(len, bases)), len(bases))
        if corpus_fname:
            self.save(corpus_fname)
        return self

    def save(self, corpus_fname: str):
        data = {'config': self.config,
                'bases': {str(b): list(basis.keys) for b, basis in sorted(self.bases.items())}}
        with open(corpus_fname, 'w') as corpus_file:
            json.dump(data, corpus_file, indent=4)

    def _load_corpus(self, corpus_fname):
        '''
        loads the bases and configuration from a JSON file
        :param corpus_fname: str, path to the corpus file
        :return bases: dict Bidegree -> Basis
        :return config: dict with the enumeration bounds and filters
        '''
        with open(corpus_fname, 'r') as corpus_file:
            data = json.load(corpus_file)
        bases = {}
        for name, keys in data['bases'].items():
            bidegree = Bidegree(*(int(x) for x in name.split(',')))
            bases[bidegree] = Basis(bidegree, tuple(keys))
        return bases, data['config']

    def basis(self, bidegree: Bidegree) -> Basis:
        bidegree = Bidegree(*bidegree)
        if bidegree not in self.bases:
            if bidegree.vertices < 1 or bidegree.edges < 1:
                return Basis(bidegree, ())
            self.bases[bidegree] = enumerate_graphs(bidegree.vertices, bidegree.edges,
                                                    self.config.get('connected', False), self.config.get('one_pi', False))
        return self.bases[bidegree]

    def keys(self) -> List[str]:
        return [key for _, basis in sorted(self.bases.items()) for key in basis.keys]

    def graphs(self) -> List[OrientedGraph]:
        return [decode_key(key) for key in self.keys()]

    def differential_matrix(self, bidegree: Bidegree) -> IntegerMatrix:
        bidegree = Bidegree(*bidegree)
        if bidegree not in self._matrices:
            source = self.basis(bidegree)
            self._matrices[bidegree] = differential_matrix(source, self.basis(bidegree.target))
            logger.info('computed %dx%d matrix d(%s)', self._matrices[bidegree].rows,
                        self._matrices[bidegree].cols, bidegree)
        return self._matrices[bidegree]

    def betti(self, bidegree: Bidegree) -> int:
        '''
        dim ker(d out of the bidegree) - rank(d into it), over the rationals.
        '''
        bidegree = Bidegree(*bidegree)
        dimension = len(self.basis(bidegree))
        outgoing = self.differential_matrix(bidegree).rank()
        incoming = self.differential_matrix(bidegree.source).rank()
        return dimension - outgoing - incoming

    def homology(self, verbose=False) -> Dict[Bidegree, dict]:
        '''
        ranks and Betti numbers at every bidegree whose incoming differential lies within the bounds.
        '''
        max_vertices, max_edges = self.config['max_vertices'], self.config['max_edges']
        bidegrees = [Bidegree(v, e) for v in range(1, max_vertices) for e in range(1, max_edges)]
        if verbose:
            bidegrees = tqdm(bidegrees, desc='homology', dynamic_ncols=True, ascii=True)
        report = {}
        for bidegree in bidegrees:
            dimension = len(self.basis(bidegree))
            outgoing = self.differential_matrix(bidegree).rank()
            incoming = self.differential_matrix(bidegree.source).rank()
            report[bidegree] = {'dim': dimension, 'rank_out': outgoing, 'rank_in': incoming,
                                'betti': dimension - outgoing - incoming}
        return report

    def check_d_squared(self) -> List[Bidegree]:
        '''
        bidegrees where the composite of two consecutive differential matrices is not zero.
        '''
        failures = []
        for bidegree in sorted(self.bases):
            if bidegree.vertices < 3:
                continue
            product = self.differential_matrix(bidegree.target) @ self.differential_matrix(bidegree)
            if not product.is_zero():
                failures.append(bidegree)
        return failures

    def write_basis(self, bidegree: Bidegree, basis_fname: str):
        with open(basis_fname, 'w') as basis_file:
            basis_file.writelines(key + '\n' for key in self.basis(bidegree).keys)

    def write_matrix(self, bidegree: Bidegree, matrix_fname: str):
        with open(matrix_fname, 'w') as matrix_file:
            matrix_file.write(self.differential_matrix(bidegree).to_text())
