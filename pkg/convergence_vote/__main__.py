"""Command-line interface for convergence voting."""

import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .ballots import (PreferenceProfile, complete_ballots, drop_candidates, pairwise_counts, parse_profile,
                      threshold_counts)
from .chain import closed_class_report
from .config import config
from .errors import InputError
from .graph import complement, condorcet_graph, export_graph
from .report import (chain_export, comparison_json, comparison_table, dumps, scoreboard_json,
                     scoreboard_table, seats_json, seats_table, trajectory_table, walk_table)
from .rules import compare_rules, convergence_matrix, convergence_scores
from .seats import LARGEST_REMAINDER, METHODS, allocate_seats
from .simulate import negotiate, random_walk
from .utils import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('file', help="ballot file, or '-' for stdin")
    common.add_argument('--json', dest='output', action='store_const', const='json',
                        help='Print JSON instead of a table')
    common.add_argument('--table', dest='output', action='store_const', const='table',
                        help='Print a table (default unless CONVOTE_FORMAT=json)')
    common.add_argument('--drop', action='append', default=[], metavar='NAME',
                        help='Remove a candidate before counting (repeatable)')
    common.add_argument('--unlisted-bottom', action='store_true',
                        help="Rank each ballot's unlisted candidates tied at the bottom")
    common.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose logging')

    parser = argparse.ArgumentParser(prog='convergence_vote',
                                     description='Convergence voting and classical rules')
    commands = parser.add_subparsers(dest='command', required=True)

    rank_cmd = commands.add_parser('rank', parents=[common], help='Convergence scores and ranking')
    rank_cmd.add_argument('--normalizer', type=int, help='Override the normalizing factor N')
    rank_cmd.add_argument('--pair-threshold', type=Fraction, metavar='PCT',
                         help='Ignore pairwise counts below PCT percent of the voters')

    commands.add_parser('compare', parents=[common], help='Winners and scores under every rule')

    graph_cmd = commands.add_parser('graph', parents=[common], help='Export a graph or the chain')
    graph_cmd.add_argument('--stage', choices=['condorcet', 'complemented', 'chain'],
                           default='complemented')
    graph_cmd.add_argument('--format', dest='graph_format', choices=['dot', 'json'], default='dot')
    graph_cmd.add_argument('--normalizer', type=int, help='Override the normalizing factor N')
    graph_cmd.add_argument('--pair-threshold', type=Fraction, metavar='PCT',
                         help='Ignore pairwise counts below PCT percent of the voters')

    seats_cmd = commands.add_parser('seats', parents=[common], help='Apportion seats by convergence scores')
    seats_cmd.add_argument('--total', type=int, required=True, help='Number of seats')
    seats_cmd.add_argument('--method', choices=METHODS, default=LARGEST_REMAINDER)
    seats_cmd.add_argument('--normalizer', type=int, help='Override the normalizing factor N')
    seats_cmd.add_argument('--pair-threshold', type=Fraction, metavar='PCT',
                         help='Ignore pairwise counts below PCT percent of the voters')

    sim_cmd = commands.add_parser('simulate', parents=[common], help='Run a negotiation or walk oracle')
    sim_cmd.add_argument('process', choices=['negotiate', 'walk'])
    sim_cmd.add_argument('--tol', type=float, default=None, help='Negotiation L1 tolerance')
    sim_cmd.add_argument('--max-rounds', type=int, default=None)
    sim_cmd.add_argument('--float', dest='exact', action='store_false',
                         help='Negotiate in floating point')
    sim_cmd.add_argument('--steps', type=int, default=None, help='Walk length')
    sim_cmd.add_argument('--seed', type=int, default=None, help='Walk seed')
    return parser


def load_profile(args: argparse.Namespace) -> PreferenceProfile:
    """Read, parse and transform the ballot file named on the command line."""
    if args.file == '-':
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding='utf-8') as handle:
                text = handle.read()
        except OSError as e:
            raise InputError(f"cannot read {args.file}: {e.strerror}") from None

    profile = parse_profile(text)
    if args.drop:
        profile = drop_candidates(profile, args.drop)
    if args.unlisted_bottom:
        profile = complete_ballots(profile)
    return profile


def cmd_rank(profile: PreferenceProfile, args: argparse.Namespace) -> str:
    board = convergence_scores(profile, args.normalizer, args.pair_threshold)
    if args.output == 'json':
        return dumps(scoreboard_json(board))

    notes = []
    classes = closed_class_report(convergence_matrix(profile, args.normalizer, args.pair_threshold))
    if sum(line.startswith('closed class') for line in classes) > 1:
        notes.append('note: some candidate groups were never compared with each other')
        notes.extend(f"  {line}" for line in classes)
    return scoreboard_table(board, notes)


def cmd_compare(profile: PreferenceProfile, args: argparse.Namespace) -> str:
    outcomes = compare_rules(profile)
    if args.output == 'json':
        return dumps(comparison_json(outcomes))
    return comparison_table(outcomes)


def cmd_graph(profile: PreferenceProfile, args: argparse.Namespace) -> str:
    if args.stage == 'chain':
        return chain_export(convergence_matrix(profile, args.normalizer, args.pair_threshold), args.graph_format)

    counts = pairwise_counts(profile)
    if args.pair_threshold is not None:
        counts = threshold_counts(counts, profile.voters, args.pair_threshold)
    graph = condorcet_graph(counts)
    if args.stage == 'complemented':
        graph = complement(graph, profile.voters, args.normalizer)
    return export_graph(graph, args.graph_format)


def cmd_seats(profile: PreferenceProfile, args: argparse.Namespace) -> str:
    board = convergence_scores(profile, args.normalizer, args.pair_threshold)
    allocation = allocate_seats(board, args.total, args.method)
    if args.output == 'json':
        return dumps(seats_json(allocation, board))
    return seats_table(allocation, board)


def cmd_simulate(profile: PreferenceProfile, args: argparse.Namespace) -> str:
    if args.process == 'negotiate':
        trajectory = negotiate(profile, args.max_rounds, args.tol, exact=args.exact)
        if args.output == 'json':
            return dumps(trajectory.to_json())
        return trajectory_table(trajectory)

    report = random_walk(profile, args.steps, args.seed)
    if args.output == 'json':
        return dumps(report.to_json())
    return walk_table(report)


COMMANDS = {
    'rank': cmd_rank,
    'compare': cmd_compare,
    'graph': cmd_graph,
    'seats': cmd_seats,
    'simulate': cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    args = build_parser().parse_args(argv)
    if args.output is None:
        args.output = 'json' if config.OUTPUT_FORMAT == 'json' else 'table'

    # Setup logging
    log_level = logging.DEBUG if args.verbose else logging.WARNING
    setup_logging(log_level)

    try:
        profile = load_profile(args)
        print(COMMANDS[args.command](profile, args))
        return EXIT_OK
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.exception(f"Internal error running {args.command}: {e}")
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
