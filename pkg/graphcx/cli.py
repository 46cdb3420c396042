"""
Command-line front end: graph operations, the alpha maps, identity checks, the pairing
certificate, enumeration and homology. Reports go to stdout, logs to stderr.
"""
import argparse
import collections
import itertools
import json
import logging
import multiprocessing
import os
import sys

from tqdm import tqdm

from graphcx.algebra import TensorVector
from graphcx.canonical import canonicalize, canonicalize_signed
from graphcx.corpus import Bidegree, Corpus, enumerate_graphs
from graphcx.errors import EXIT_IDENTITY_VIOLATED, EXIT_INPUT_ERROR, EXIT_OK, GraphCxError
from graphcx.flowcharts import CLASSICAL_IDENTITIES, IDENTITIES, named_identity, shlb_residual
from graphcx.graph import (SignedGraph, contract, format_graph_literal, is_one_pi, load_graph,
                           parse_half_edge, product_of, splice, surgery)
from graphcx.involution import verify_pairing
from graphcx.structure_maps import AlphaInput, alpha, alpha22

logger = logging.getLogger(__name__)


def format_vector(vector: TensorVector) -> str:
    if vector.is_zero():
        return '0'
    return '\n'.join(f'{coefficient:+d} * ' + ' (x) '.join(factors) for factors, coefficient in vector.items())


def format_signed_graph(signed: SignedGraph) -> str:
    if signed.is_zero:
        return '0'
    return f'{signed.sign} * {format_graph_literal(signed.graph)}'


def signed_graph_json(signed: SignedGraph) -> dict:
    canonical = canonicalize_signed(signed)
    return {
        'sign': 0 if signed.is_zero else signed.sign,
        'graph': None if signed.is_zero else format_graph_literal(signed.graph),
        'canonical': None if canonical is None else {'sign': canonical.sign, 'key': canonical.key},
    }


def emit(args, text, data):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def run_jobs(function, jobs, workers=1, verbose=False, desc=None):
    '''
    maps function over jobs, in worker processes if workers > 1; results keep the order of jobs.
    '''
    jobs = list(jobs)
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.map(function, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
    if verbose:
        jobs = tqdm(jobs, desc=desc, dynamic_ncols=True, ascii=True, file=sys.stderr)
    return [function(job) for job in jobs]


# workers, module level so that they pickle

def _shlb_job(job):
    m, n, keys = job
    return shlb_residual(m, n, AlphaInput.from_keys(keys)).to_json()


def _identity_job(job):
    name, keys = job
    return named_identity(name, AlphaInput.from_keys(keys)).to_json()


def _onepi_job(keys):
    inputs = AlphaInput.from_keys(keys)
    if not any(is_one_pi(graph) for graph in inputs.factors):
        return None
    return alpha22(*inputs.factors).to_json()


# subcommands

def cmd_canon(args):
    graph = load_graph(args.graph)
    canonical = canonicalize(graph)
    if canonical is None:
        emit(args, '0', {'sign': 0, 'key': None})
    else:
        emit(args, f'{canonical.sign} * {canonical.key}', {'sign': canonical.sign, 'key': canonical.key})
    return EXIT_OK


def cmd_op(args):
    if args.operation == 'product':
        graphs = [load_graph(graph) for graph in args.graphs]
        result = SignedGraph(1, product_of(graphs))
    else:
        graph = load_graph(args.graph)
        if args.operation == 'contract':
            result, _ = contract(graph, args.edge - 1)
        elif args.operation == 'splice':
            result, _ = splice(graph, parse_half_edge(args.h1), parse_half_edge(args.h2))
        else:
            result, _ = surgery(graph, parse_half_edge(args.h1), parse_half_edge(args.h2))
    emit(args, format_signed_graph(result), signed_graph_json(result))
    return EXIT_OK


def cmd_alpha(args):
    inputs = AlphaInput.of([load_graph(graph) for graph in args.graphs])
    result = alpha(args.m, args.n, inputs)
    emit(args, format_vector(result), {'m': args.m, 'n': args.n, 'terms': result.to_json()})
    return EXIT_OK


def corpus_keys(args):
    if args.corpus_file:
        corpus = Corpus(pretrained_corpus=True, corpus_file=args.corpus_file)
    else:
        corpus = Corpus().generate(args.max_v, args.max_e, connected=args.connected,
                                   jobs=args.jobs, verbose=args.verbose > 0)
    return corpus.keys()


def input_tuples(args, n):
    '''
    the n-tuples to check: the given --inputs, or every n-tuple of corpus graphs.
    '''
    if args.inputs:
        graphs = [load_graph(graph) for graph in args.inputs]
        keys = []
        for graph in graphs:
            canonical = canonicalize(graph)
            if canonical is not None:
                keys.append(canonical.key)
        if len(keys) != len(graphs):
            logger.warning('an input graph is zero, nothing to check')
            return []
        return [tuple(keys)]
    return list(itertools.product(corpus_keys(args), repeat=n))


def report_violations(args, title, checked, failures):
    '''
    prints the summary and every nonzero residual; returns the exit code.
    '''
    if args.json:
        print(json.dumps({'check': title, 'checked': checked,
                          'violations': [{'inputs': list(keys), 'residual': residual} for keys, residual in failures]},
                         indent=2))
    else:
        print(f'{title}: {checked} inputs checked, {len(failures)} violations')
        for keys, residual in failures:
            print('inputs: ' + ' , '.join(keys))
            print(format_vector(TensorVector.from_json(len(residual[0]['factors']), residual)))
    return EXIT_IDENTITY_VIOLATED if failures else EXIT_OK


def cmd_verify_shlb(args):
    tuples = input_tuples(args, args.n)
    results = run_jobs(_shlb_job, [(args.m, args.n, keys) for keys in tuples], args.jobs, args.verbose > 0, 'shlb')
    failures = [(keys, residual) for keys, residual in zip(tuples, results) if residual]
    return report_violations(args, f'shlb ({args.m},{args.n})', len(tuples), failures)


def cmd_verify_classical(args):
    graphs = corpus_keys(args)
    counts = collections.OrderedDict()
    failures = []
    for name in CLASSICAL_IDENTITIES:
        _, n = IDENTITIES[name]
        tuples = list(itertools.product(graphs, repeat=n))
        results = run_jobs(_identity_job, [(name, keys) for keys in tuples], args.jobs, args.verbose > 0, name)
        counts[name] = len(tuples)
        failures.extend((keys, residual) for keys, residual in zip(tuples, results) if residual)
    if not args.json:
        for name, count in counts.items():
            print(f'{name}: {count} inputs')
    return report_violations(args, 'classical', sum(counts.values()), failures)


def cmd_verify_onepi(args):
    tuples = list(itertools.product(corpus_keys(args), repeat=2))
    results = run_jobs(_onepi_job, tuples, args.jobs, args.verbose > 0, 'onepi')
    checked = sum(1 for result in results if result is not None)
    failures = [(keys, result) for keys, result in zip(tuples, results) if result]
    return report_violations(args, 'alpha(2,2) on 1PI inputs', checked, failures)


def cmd_verify_involution(args):
    inputs = AlphaInput.of([load_graph(graph) for graph in args.inputs])
    certificate = verify_pairing(args.m, args.n, inputs, strict=not args.keep_going)
    if args.json:
        print(json.dumps(certificate.to_json(), indent=2))
    else:
        print(f'pairing ({args.m},{args.n}) on {" , ".join(certificate.inputs)}: '
              f'{certificate.element_count} elements, {len(certificate.pairs)} pairs, '
              f'{len(certificate.fixed_points)} fixed points, {len(certificate.violations)} violations')
        if args.list:
            for pair in certificate.pairs:
                print(f'{pair["f"]}  <->  {pair["mu"]}')
            for record in certificate.fixed_points:
                print(f'{record["f"]}  (fixed, {record["reason"]})')
        for record in certificate.violations:
            print(f'violation at {record["f"]}: {record["problem"]}')
        print('residual: ' + format_vector(certificate.residual))
    return EXIT_OK if certificate.ok else EXIT_IDENTITY_VIOLATED


def cmd_enumerate(args):
    basis = enumerate_graphs(args.v, args.e, connected=args.connected, one_pi=args.one_pi)
    if args.output:
        with open(args.output, 'w') as basis_file:
            basis_file.writelines(key + '\n' for key in basis.keys)
    emit(args, '\n'.join(basis.keys), {'bidegree': list(basis.bidegree), 'keys': list(basis.keys)})
    return EXIT_OK


def cmd_homology(args):
    if args.corpus_file:
        corpus = Corpus(pretrained_corpus=True, corpus_file=args.corpus_file)
    else:
        corpus = Corpus().generate(args.max_v, args.max_e, corpus_fname=args.save, jobs=args.jobs,
                                   verbose=args.verbose > 0)
    report = corpus.homology(verbose=args.verbose > 0)
    if args.matrices:
        os.makedirs(args.matrices, exist_ok=True)
        for bidegree in sorted(corpus.bases):
            stem = os.path.join(args.matrices, f'{bidegree.vertices}_{bidegree.edges}')
            corpus.write_basis(bidegree, stem + '.basis')
            if Bidegree(*bidegree).vertices > 1:
                corpus.write_matrix(bidegree, stem + '.matrix')
    failures = corpus.check_d_squared()
    if args.json:
        print(json.dumps({'homology': [dict(V=b.vertices, E=b.edges, **row) for b, row in sorted(report.items())],
                          'd_squared_failures': [list(b) for b in failures]}, indent=2))
    else:
        print('V E dim rank_out rank_in betti')
        for b, row in sorted(report.items()):
            print(f'{b.vertices} {b.edges} {row["dim"]} {row["rank_out"]} {row["rank_in"]} {row["betti"]}')
        for b in failures:
            print(f'd o d != 0 at ({b})')
    return EXIT_IDENTITY_VIOLATED if failures else EXIT_OK


# parser

def add_corpus_arguments(parser):
    parser.add_argument('--corpus', action='store_true', default=False, help='draw inputs from an enumerated corpus')
    parser.add_argument('--max-v', type=int, default=4, help='largest vertex count of the corpus')
    parser.add_argument('--max-e', type=int, default=6, help='largest edge count of the corpus')
    parser.add_argument('--connected', action='store_true', default=False, help='keep only connected corpus graphs')
    parser.add_argument('--corpus-file', type=str, default=None, help='load a saved corpus instead of enumerating')


def build_parser():
    argparser = argparse.ArgumentParser(prog='graphcx', description='graph complex surgery maps and their identities')
    argparser.add_argument('--json', action='store_true', default=False, help='machine readable output')
    argparser.add_argument('--jobs', type=int, default=1, help='number of worker processes')
    argparser.add_argument('-v', '--verbose', action='count', default=0, help='-v for progress and info logs, -vv for debug')
    subparsers = argparser.add_subparsers(dest='command', required=True)

    canon = subparsers.add_parser('canon', help='canonical key and sign of a graph')
    canon.add_argument('graph', help='graph file or literal V;s>t,...')
    canon.set_defaults(handler=cmd_canon)

    op = subparsers.add_parser('op', help='elementary graph operations')
    operations = op.add_subparsers(dest='operation', required=True)
    op_product = operations.add_parser('product')
    op_product.add_argument('graphs', nargs='+')
    op_contract = operations.add_parser('contract')
    op_contract.add_argument('graph')
    op_contract.add_argument('--edge', type=int, required=True, help='1-based edge index')
    for name in ('splice', 'surgery'):
        op_pair = operations.add_parser(name)
        op_pair.add_argument('graph')
        op_pair.add_argument('--h1', required=True, help='half-edge e<k>.s or e<k>.t')
        op_pair.add_argument('--h2', required=True, help='half-edge e<k>.s or e<k>.t')
    op.set_defaults(handler=cmd_op)

    alpha_parser = subparsers.add_parser('alpha', help='apply alpha(m,n) to n graphs')
    alpha_parser.add_argument('--m', type=int, required=True)
    alpha_parser.add_argument('--n', type=int, required=True)
    alpha_parser.add_argument('graphs', nargs='+')
    alpha_parser.set_defaults(handler=cmd_alpha)

    verify = subparsers.add_parser('verify', help='check identities')
    checks = verify.add_subparsers(dest='check', required=True)
    shlb = checks.add_parser('shlb', help='strong homotopy identity (m,n)')
    shlb.add_argument('--m', type=int, required=True)
    shlb.add_argument('--n', type=int, required=True)
    shlb.add_argument('--inputs', nargs='+', default=None)
    add_corpus_arguments(shlb)
    shlb.set_defaults(handler=cmd_verify_shlb)
    classical = checks.add_parser('classical', help=', '.join(CLASSICAL_IDENTITIES))
    add_corpus_arguments(classical)
    classical.set_defaults(handler=cmd_verify_classical)
    onepi = checks.add_parser('onepi', help='alpha(2,2) vanishes when a factor is 1PI')
    add_corpus_arguments(onepi)
    onepi.set_defaults(handler=cmd_verify_onepi)
    involution = checks.add_parser('involution', help='pairing certificate for F(m,n)')
    involution.add_argument('--m', type=int, required=True)
    involution.add_argument('--n', type=int, required=True)
    involution.add_argument('--inputs', nargs='+', required=True)
    involution.add_argument('--keep-going', action='store_true', default=False,
                            help='collect every failing element instead of stopping at the first')
    involution.add_argument('--list', action='store_true', default=False, help='list the pairs')
    involution.set_defaults(handler=cmd_verify_involution)

    enumerate_parser = subparsers.add_parser('enumerate', help='basis of the graph complex at (V,E)')
    enumerate_parser.add_argument('--v', type=int, required=True)
    enumerate_parser.add_argument('--e', type=int, required=True)
    enumerate_parser.add_argument('--connected', action='store_true', default=False)
    enumerate_parser.add_argument('--one-pi', action='store_true', default=False)
    enumerate_parser.add_argument('-o', '--output', type=str, default=None, help='write the basis file here')
    enumerate_parser.set_defaults(handler=cmd_enumerate)

    homology = subparsers.add_parser('homology', help='ranks and Betti numbers')
    homology.add_argument('--max-v', type=int, default=4)
    homology.add_argument('--max-e', type=int, default=6)
    homology.add_argument('--corpus-file', type=str, default=None, help='load a saved corpus')
    homology.add_argument('--save', type=str, default=None, help='save the enumerated corpus to this JSON file')
    homology.add_argument('--matrices', type=str, default=None, help='directory for basis and matrix files')
    homology.set_defaults(handler=cmd_homology)
    return argparser


def configure_logging(verbosity):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(asctime)s %(name)s %(levelname)s: %(message)s')


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    if getattr(args, 'check', None) == 'shlb' and not (args.inputs or args.corpus or args.corpus_file):
        print('error: give --inputs or --corpus', file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        return args.handler(args)
    except GraphCxError as error:
        print(f'error: {error}', file=sys.stderr)
        witness = getattr(error, 'witness', None)
        if witness is not None:
            print(f'witness: {witness}', file=sys.stderr)
        return error.exit_code
