#!/usr/bin/env python3
# coding=utf-8
"""
Oriented graphs and the elementary operations on them.

A graph is stored as a vertex count V (labels 1..V) and a sequence of directed edges.
The labeling together with the edge directions is the orientation; a graph never
stores a global sign, signs only live in SignedGraph and in vector coefficients.
"""
import collections
import logging
import os
import re
from dataclasses import dataclass, field, replace
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from graphcx.combinatorics import is_permutation, permutation_sign
from graphcx.errors import GraphInputError, ValencyError

logger = logging.getLogger(__name__)

SRC, TGT = 0, 1
MIN_VALENCY = 3

_HALF_EDGE_RE = re.compile(r'^e(\d+)\.([st])$')


class HalfEdge(NamedTuple):
    """One end of an edge: `edge` is the 0-based edge index, `end` is SRC or TGT."""
    edge: int
    end: int

    def bar(self):
        return HalfEdge(self.edge, 1 - self.end)

    def __str__(self):
        return f"e{self.edge + 1}.{'s' if self.end == SRC else 't'}"


@dataclass(frozen=True)
class OrientedGraph:
    vertex_count: int
    edges: Tuple[Tuple[int, int], ...]

    @property
    def edge_count(self):
        return len(self.edges)

    def vertex(self, h: HalfEdge) -> int:
        '''
        v(h), the vertex the half-edge is attached to.
        '''
        return self.edges[h.edge][h.end]

    def half_edges(self):
        for e in range(len(self.edges)):
            yield HalfEdge(e, SRC)
            yield HalfEdge(e, TGT)

    def is_loop(self, e: int) -> bool:
        src, tgt = self.edges[e]
        return src == tgt

    def has_loop(self) -> bool:
        return any(src == tgt for src, tgt in self.edges)

    def valency(self) -> Dict[int, int]:
        counts = collections.Counter({v: 0 for v in range(1, self.vertex_count + 1)})
        for src, tgt in self.edges:
            counts[src] += 1
            counts[tgt] += 1
        return dict(counts)

    def __str__(self):
        return format_graph_literal(self)


@dataclass(frozen=True)
class SignedGraph:
    """`sign * graph` as an element of the graph complex; sign 0 with no graph is the zero class."""
    sign: int
    graph: Optional[OrientedGraph]

    @property
    def is_zero(self):
        return self.graph is None or self.sign == 0

    def times(self, sign: int):
        if self.is_zero:
            return self
        return SignedGraph(self.sign * sign, self.graph)


ZERO = SignedGraph(0, None)


@dataclass(frozen=True)
class Provenance:
    '''
    how labels and half-edges of the input graph reappear in the output of an operation.

    :param vertex_map: dict, old vertex label -> new vertex label
    :param half_edge_map: dict, old HalfEdge -> new HalfEdge; consumed half-edges are absent
    :param fresh_halves: tuple of HalfEdge created by the operation
    :param merged_vertex: label of the vertex produced by a contraction, if any
    '''
    vertex_map: Dict[int, int] = field(default_factory=dict)
    half_edge_map: Dict[HalfEdge, HalfEdge] = field(default_factory=dict)
    fresh_halves: Tuple[HalfEdge, ...] = ()
    merged_vertex: Optional[int] = None

    def then(self, other: 'Provenance') -> 'Provenance':
        vertex_map = {u: other.vertex_map[v] for u, v in self.vertex_map.items() if v in other.vertex_map}
        half_edge_map = {h: other.half_edge_map[k] for h, k in self.half_edge_map.items() if k in other.half_edge_map}
        fresh = tuple(other.half_edge_map[h] for h in self.fresh_halves if h in other.half_edge_map)
        if other.merged_vertex is not None:
            merged = other.merged_vertex
        elif self.merged_vertex is not None:
            merged = other.vertex_map.get(self.merged_vertex)
        else:
            merged = None
        return Provenance(vertex_map, half_edge_map, fresh + other.fresh_halves, merged)


def make_graph(vertex_count: int, edges: Sequence[Tuple[int, int]]) -> OrientedGraph:
    '''
    builds a validated graph.

    :param vertex_count: int, number of vertices V, labels are 1..V
    :param edges: sequence of (src, tgt) pairs
    :return: OrientedGraph
    '''
    if not isinstance(vertex_count, int) or vertex_count < 1:
        raise GraphInputError(f'vertex count must be a positive integer, got {vertex_count!r}')
    edges = tuple((int(src), int(tgt)) for src, tgt in edges)
    for k, (src, tgt) in enumerate(edges):
        for label in (src, tgt):
            if not 1 <= label <= vertex_count:
                raise GraphInputError(f'edge {k + 1} ({src},{tgt}): vertex label {label} out of 1..{vertex_count}')
    graph = OrientedGraph(vertex_count, edges)
    for v, valency in sorted(graph.valency().items()):
        if valency < MIN_VALENCY:
            raise ValencyError(f'vertex {v} has valency {valency}')
    return graph


def product(g1: OrientedGraph, g2: OrientedGraph) -> OrientedGraph:
    '''
    disjoint union; the labels of g2 are shifted by the vertex count of g1.
    '''
    shift = g1.vertex_count
    shifted = tuple((src + shift, tgt + shift) for src, tgt in g2.edges)
    return OrientedGraph(g1.vertex_count + g2.vertex_count, g1.edges + shifted)


def product_of(graphs: Sequence[OrientedGraph]) -> OrientedGraph:
    result = graphs[0]
    for graph in graphs[1:]:
        result = product(result, graph)
    return result


def relabel(g: OrientedGraph, sigma: Sequence[int]) -> SignedGraph:
    '''
    relabels every vertex v by sigma(v).

    :param sigma: sequence of images, sigma[v - 1] is the new label of v
    :return: SignedGraph with sign sgn(sigma), so that g equals the returned class
    '''
    sigma = list(sigma)
    if not is_permutation(sigma, g.vertex_count):
        raise GraphInputError(f'{sigma} is not a permutation of 1..{g.vertex_count}')
    edges = tuple((sigma[src - 1], sigma[tgt - 1]) for src, tgt in g.edges)
    return SignedGraph(permutation_sign(sigma), OrientedGraph(g.vertex_count, edges))


def reverse_edge(g: OrientedGraph, e: int) -> SignedGraph:
    _check_edge(g, e)
    edges = list(g.edges)
    src, tgt = edges[e]
    edges[e] = (tgt, src)
    return SignedGraph(-1, OrientedGraph(g.vertex_count, tuple(edges)))


def contraction_permutation(g: OrientedGraph, src: int, tgt: int) -> Tuple[Dict[int, int], int]:
    '''
    the relabeling src -> 1, tgt -> 2 that keeps the order of all other labels, and its sign.
    '''
    rest = [v for v in range(1, g.vertex_count + 1) if v not in (src, tgt)]
    sigma = {src: 1, tgt: 2}
    sigma.update({v: k + 3 for k, v in enumerate(rest)})
    return sigma, permutation_sign([sigma[v] for v in range(1, g.vertex_count + 1)])


def contract(g: OrientedGraph, e: int) -> Tuple[SignedGraph, Optional[Provenance]]:
    '''
    contracts edge e.

    the source of e is moved to label 1 and its target to label 2 by the permutation that keeps
    the order of all other labels (this costs its sign), then 1 and 2 merge into vertex 1 and the
    labels 3..V drop by one. A loop contracts to zero.

    :param g: OrientedGraph
    :param e: int, 0-based edge index
    :return: (SignedGraph, Provenance), Provenance is None for the zero class
    '''
    _check_edge(g, e)
    src, tgt = g.edges[e]
    if src == tgt:
        return ZERO, None
    sigma, sign = contraction_permutation(g, src, tgt)

    vertex_map = {v: max(sigma[v] - 1, 1) for v in sigma}
    edges = []
    half_edge_map = {}
    for k, (a, b) in enumerate(g.edges):
        if k == e:
            continue
        new_index = len(edges)
        edges.append((vertex_map[a], vertex_map[b]))
        half_edge_map[HalfEdge(k, SRC)] = HalfEdge(new_index, SRC)
        half_edge_map[HalfEdge(k, TGT)] = HalfEdge(new_index, TGT)
    contracted = OrientedGraph(g.vertex_count - 1, tuple(edges))
    return SignedGraph(sign, contracted), Provenance(vertex_map, half_edge_map, (), 1)


def splice(g: OrientedGraph, h1: HalfEdge, h2: HalfEdge,
           allow_same_edge: bool = False) -> Tuple[SignedGraph, Provenance]:
    '''
    replaces e(h1), e(h2) by e1: v(h1) -> v(bar h2) and e2: v(h2) -> v(bar h1).

    the representative is first chosen so that v(h1), v(h2) are the sources of their edges,
    each reversal costing a sign. Surviving edges keep their order, e1 and e2 are appended.
    With allow_same_edge=True, h1 and h2 may lie on one edge, which is then removed once.

    :return: (SignedGraph, Provenance) with fresh_halves = (h1', h2'), the source ends of e1 and e2
    '''
    _check_half_edge(g, h1)
    _check_half_edge(g, h2)
    if h1.edge == h2.edge and not allow_same_edge:
        raise GraphInputError(f'{h1} and {h2} belong to the same edge')
    for h in (h1, h2):
        if g.is_loop(h.edge):
            raise GraphInputError(f'{h} lies on a loop')
    sign = 1
    for h in (h1, h2):
        if h.end == TGT:
            sign = -sign

    edges = []
    half_edge_map = {}
    for k, edge in enumerate(g.edges):
        if k in (h1.edge, h2.edge):
            continue
        half_edge_map[HalfEdge(k, SRC)] = HalfEdge(len(edges), SRC)
        half_edge_map[HalfEdge(k, TGT)] = HalfEdge(len(edges), TGT)
        edges.append(edge)
    e1 = len(edges)
    edges.append((g.vertex(h1), g.vertex(h2.bar())))
    edges.append((g.vertex(h2), g.vertex(h1.bar())))
    vertex_map = {v: v for v in range(1, g.vertex_count + 1)}
    provenance = Provenance(vertex_map, half_edge_map, (HalfEdge(e1, SRC), HalfEdge(e1 + 1, SRC)))
    return SignedGraph(sign, OrientedGraph(g.vertex_count, tuple(edges))), provenance


def surgery(g: OrientedGraph, h1: HalfEdge, h2: HalfEdge,
            allow_same_edge: bool = False) -> Tuple[SignedGraph, Optional[Provenance]]:
    '''
    X_{h1,h2}: splice, then contract e1.

    :return: (SignedGraph, Provenance). The provenance exposes fresh_halves = (h2', bar h2')
             in the result and merged_vertex = v(h1'); v(h2') is the vertex of fresh_halves[0].
             Zero (with Provenance None) when e(h1), e(h2) or e1 is a loop.
    '''
    _check_half_edge(g, h1)
    _check_half_edge(g, h2)
    if h1.edge == h2.edge and not allow_same_edge:
        raise GraphInputError(f'{h1} and {h2} belong to the same edge')
    if g.is_loop(h1.edge) or g.is_loop(h2.edge):
        return ZERO, None
    if g.vertex(h1) == g.vertex(h2.bar()):
        return ZERO, None
    spliced, spliced_provenance = splice(g, h1, h2, allow_same_edge)
    h1_fresh, h2_fresh = spliced_provenance.fresh_halves
    contracted, contract_provenance = contract(spliced.graph, h1_fresh.edge)
    provenance = spliced_provenance.then(contract_provenance)
    h2_image = contract_provenance.half_edge_map[h2_fresh]
    provenance = replace(provenance, fresh_halves=(h2_image, h2_image.bar()))
    return contracted.times(spliced.sign), provenance


def connected_components(g: OrientedGraph) -> List[List[int]]:
    '''
    vertex sets of the connected components, each sorted, ordered by smallest label.
    '''
    multigraph = nx.MultiGraph()
    multigraph.add_nodes_from(range(1, g.vertex_count + 1))
    multigraph.add_edges_from(g.edges)
    return sorted(sorted(component) for component in nx.connected_components(multigraph))


def is_one_pi(g: OrientedGraph) -> bool:
    '''
    one-particle irreducible: connected and without bridges. Loops and parallel edges are never bridges.
    '''
    if len(connected_components(g)) != 1:
        return False
    multiplicity = collections.Counter(frozenset(edge) for edge in g.edges if edge[0] != edge[1])
    simple = nx.Graph()
    simple.add_nodes_from(range(1, g.vertex_count + 1))
    simple.add_edges_from(tuple(pair) for pair in multiplicity)
    for u, v in nx.bridges(simple):
        if multiplicity[frozenset((u, v))] == 1:
            return False
    return True


def induced_subgraph(g: OrientedGraph, vertices: Sequence[int]) -> OrientedGraph:
    '''
    the subgraph on a union of components, labels compressed to 1..k keeping their order.
    '''
    new_label = {v: k + 1 for k, v in enumerate(sorted(vertices))}
    edges = tuple((new_label[src], new_label[tgt]) for src, tgt in g.edges if src in new_label)
    return OrientedGraph(len(new_label), edges)


def _check_edge(g, e):
    if not 0 <= e < g.edge_count:
        raise GraphInputError(f'edge index {e + 1} out of range 1..{g.edge_count}')


def _check_half_edge(g, h):
    _check_edge(g, h.edge)
    if h.end not in (SRC, TGT):
        raise GraphInputError(f'invalid half-edge end {h.end!r}')


# text formats

def format_graph_literal(g: OrientedGraph) -> str:
    return f"{g.vertex_count};" + ','.join(f'{src}>{tgt}' for src, tgt in g.edges)


def parse_graph_literal(literal: str) -> OrientedGraph:
    '''
    parses the inline syntax `V;s>t,s>t,...`.
    '''
    try:
        head, _, body = literal.strip().partition(';')
        vertex_count = int(head)
        edges = []
        for item in filter(None, body.split(',')):
            src, tgt = item.split('>')
            edges.append((int(src), int(tgt)))
    except ValueError as error:
        raise GraphInputError(f'malformed graph literal {literal!r}: {error}') from error
    return make_graph(vertex_count, edges)


def parse_graph_text(text: str) -> OrientedGraph:
    '''
    parses the file format: first line `V E`, then E lines `s t`.
    '''
    lines = [line.split() for line in text.splitlines() if line.strip()]
    try:
        vertex_count, edge_count = (int(x) for x in lines[0])
        edges = [(int(src), int(tgt)) for src, tgt in lines[1:]]
    except (ValueError, IndexError) as error:
        raise GraphInputError(f'malformed graph file: {error}') from error
    if len(edges) != edge_count:
        raise GraphInputError(f'header announces {edge_count} edges, found {len(edges)}')
    return make_graph(vertex_count, edges)


def format_graph_text(g: OrientedGraph) -> str:
    lines = [f'{g.vertex_count} {g.edge_count}'] + [f'{src} {tgt}' for src, tgt in g.edges]
    return '\n'.join(lines) + '\n'


def load_graph(argument: str) -> OrientedGraph:
    '''
    reads a graph given on the command line, either as a path to a graph file or as an inline literal.
    '''
    if os.path.isfile(argument):
        with open(argument, 'r') as fileobject:
            return parse_graph_text(fileobject.read())
    if ';' not in argument:
        raise GraphInputError(f'{argument!r} is neither a graph file nor a graph literal')
    return parse_graph_literal(argument)


def parse_half_edge(text: str) -> HalfEdge:
    match = _HALF_EDGE_RE.match(text.strip())
    if not match:
        raise GraphInputError(f'malformed half-edge {text!r}, expected e<k>.s or e<k>.t')
    index = int(match.group(1))
    if index < 1:
        raise GraphInputError(f'edge indices start at 1, got {text!r}')
    return HalfEdge(index - 1, SRC if match.group(2) == 's' else TGT)
