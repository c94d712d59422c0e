"""Social choice functions: convergence voting and the classical comparison rules."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .ballots import CandidateRoster, PairwiseCounts, PreferenceProfile, pairwise_counts, threshold_counts
from .chain import Distribution, TransitionMatrix, limit_from, transition_matrix
from .errors import BallotShapeError, ConvergenceVoteError
from .graph import complement, condorcet_graph
from .utils import fraction_to_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scoreboard:
    """Per-candidate exact scores produced by one rule."""
    roster: CandidateRoster
    scores: Tuple[Fraction, ...]
    rule: str

    def __getitem__(self, name: str) -> Fraction:
        return self.scores[self.roster.index(name)]

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(zip(self.roster.names, self.scores))

    def as_distribution(self) -> Distribution:
        return Distribution(self.roster, self.scores)


@dataclass(frozen=True)
class Ranking:
    """Candidate tiers, best first; candidates in a tier have equal scores."""
    tiers: Tuple[Tuple[str, ...], ...]

    @property
    def winners(self) -> List[str]:
        return list(self.tiers[0]) if self.tiers else []


def rank(board: Scoreboard) -> Ranking:
    """Sort by exact score, grouping exactly equal scores into one tier."""
    order = sorted(range(len(board.roster)), key=lambda i: -board.scores[i])
    tiers: List[List[str]] = []
    previous = None
    for i in order:
        if tiers and board.scores[i] == previous:
            tiers[-1].append(board.roster.names[i])
        else:
            tiers.append([board.roster.names[i]])
        previous = board.scores[i]
    return Ranking(tuple(tuple(tier) for tier in tiers))


def _uniform_board(roster: CandidateRoster, rule: str) -> Scoreboard:
    return Scoreboard(roster, Distribution.uniform(roster).mass, rule)


def convergence_matrix(profile: PreferenceProfile, normalizer_override: Optional[int] = None,
                       pair_threshold: Optional[Fraction] = None) -> TransitionMatrix:
    """Transition matrix of the complemented Condorcet graph.

    With no voters or a single candidate the normalizer is 0; every
    candidate then keeps its support and the chain is the identity. A
    `pair_threshold` percentage drops pairwise counts below that share of
    the electorate before the graph is built.
    """
    roster = profile.roster
    if profile.voters == 0 or len(roster) == 1:
        size = len(roster)
        return TransitionMatrix(roster, tuple(tuple(Fraction(int(i == j)) for j in range(size))
                                              for i in range(size)))
    counts = pairwise_counts(profile)
    if pair_threshold is not None:
        counts = threshold_counts(counts, profile.voters, pair_threshold)
    graph = complement(condorcet_graph(counts), profile.voters, normalizer_override)
    return transition_matrix(graph)


def convergence_scores(profile: PreferenceProfile, normalizer_override: Optional[int] = None,
                       pair_threshold: Optional[Fraction] = None) -> Scoreboard:
    """Limit distribution from uniform of the complemented Condorcet chain."""
    roster = profile.roster
    if profile.voters == 0 or len(roster) == 1:
        if profile.voters == 0 and len(roster) > 1:
            logger.warning("Empty electorate: convergence scores default to uniform")
        return _uniform_board(roster, 'convergence')

    t = convergence_matrix(profile, normalizer_override, pair_threshold)
    limit = limit_from(t, Distribution.uniform(roster))
    return Scoreboard(roster, limit.mass, 'convergence')


def borda(profile: PreferenceProfile) -> Scoreboard:
    """Top of a chain scores |K|-1, each step down one less, unranked 0."""
    roster = profile.roster
    top = len(roster) - 1
    scores = [Fraction(0)] * len(roster)
    for ballot in profile.ballots:
        if not ballot.is_chain():
            raise BallotShapeError("Borda count needs chain ballots")
        for depth, name in enumerate(ballot.chain_order()):
            scores[roster.index(name)] += (top - depth) * ballot.weight
    return Scoreboard(roster, tuple(scores), 'borda')


def plurality(profile: PreferenceProfile) -> Scoreboard:
    """Each ballot's weight split equally over its maximal candidates."""
    roster = profile.roster
    scores = [Fraction(0)] * len(roster)
    for ballot in profile.ballots:
        top = ballot.maximal()
        for name in top:
            scores[roster.index(name)] += Fraction(ballot.weight, len(top))
    return Scoreboard(roster, tuple(scores), 'plurality')


def majority_winner(profile: PreferenceProfile) -> Optional[str]:
    """The candidate with more than half of all first preferences, if any."""
    board = plurality(profile)
    half = Fraction(profile.voters, 2)
    for name, score in board.as_dict().items():
        if score > half:
            return name
    return None


def condorcet_winner(counts: PairwiseCounts) -> Optional[str]:
    """Candidate beating every other in strict pairwise majority."""
    size = len(counts.roster)
    for x in range(size):
        if all(counts.n[y][x] > counts.n[x][y] for y in range(size) if y != x):
            return counts.roster.names[x]
    return None


def copeland(counts: PairwiseCounts) -> Scoreboard:
    """Pairwise wins minus pairwise losses."""
    size = len(counts.roster)
    scores = []
    for x in range(size):
        wins = sum(1 for y in range(size) if y != x and counts.n[y][x] > counts.n[x][y])
        losses = sum(1 for y in range(size) if y != x and counts.n[x][y] > counts.n[y][x])
        scores.append(Fraction(wins - losses))
    return Scoreboard(counts.roster, tuple(scores), 'copeland')


def mc3_matrix(counts: PairwiseCounts) -> TransitionMatrix:
    """MC3 / Rank Centrality chain: moves depend only on each pair's preference ratio."""
    size = len(counts.roster)
    rows = []
    for i in range(size):
        row = [Fraction(0)] * size
        for j in range(size):
            compared = counts.n[i][j] + counts.n[j][i]
            if j != i and compared:
                row[j] = Fraction(counts.n[i][j], compared * (size - 1))
        row[i] = 1 - sum(row)
        rows.append(tuple(row))
    return TransitionMatrix(counts.roster, tuple(rows))


def mc3_scores(counts: PairwiseCounts) -> Scoreboard:
    roster = counts.roster
    if len(roster) == 1:
        return _uniform_board(roster, 'mc3')
    limit = limit_from(mc3_matrix(counts), Distribution.uniform(roster))
    return Scoreboard(roster, limit.mass, 'mc3')


def naive_matrix(counts: PairwiseCounts) -> TransitionMatrix:
    """Out-weights normalised per row; rows without out-weight become absorbing."""
    size = len(counts.roster)
    rows = []
    for i in range(size):
        out = sum(counts.n[i][j] for j in range(size) if j != i)
        if out:
            rows.append(tuple(Fraction(counts.n[i][j], out) if j != i else Fraction(0) for j in range(size)))
        else:
            rows.append(tuple(Fraction(int(j == i)) for j in range(size)))
    return TransitionMatrix(counts.roster, tuple(rows))


def naive_normalized_scores(counts: PairwiseCounts) -> Scoreboard:
    limit = limit_from(naive_matrix(counts), Distribution.uniform(counts.roster))
    return Scoreboard(counts.roster, limit.mass, 'naive')


def _single_winner_board(roster: CandidateRoster, winner: Optional[str], rule: str) -> Scoreboard:
    return Scoreboard(roster, tuple(Fraction(int(name == winner)) for name in roster), rule)


@dataclass(frozen=True)
class RuleOutcome:
    """One row of a rule comparison."""
    rule: str
    board: Optional[Scoreboard] = None
    winners: Optional[Tuple[str, ...]] = None
    error: Optional[str] = None

    def to_json(self) -> Dict[str, object]:
        doc: Dict[str, object] = {'rule': self.rule}
        if self.error is not None:
            doc['error'] = self.error
            return doc
        if self.board is not None:
            doc['scores'] = {name: fraction_to_json(v) for name, v in self.board.as_dict().items()}
            doc['ranking'] = [list(tier) for tier in rank(self.board).tiers]
        doc['winner'] = list(self.winners) if self.winners else None
        return doc


def _scored(board: Scoreboard, zero_is_empty: bool = False) -> RuleOutcome:
    board_winners = rank(board).winners
    # a count with no support names nobody
    if zero_is_empty and all(score == 0 for score in board.scores):
        board_winners = []
    return RuleOutcome(board.rule, board, tuple(board_winners) or None)


def _majority(profile: PreferenceProfile) -> RuleOutcome:
    winner = majority_winner(profile)
    return RuleOutcome('majority', _single_winner_board(profile.roster, winner, 'majority'),
                       (winner,) if winner else None)


def _condorcet(profile: PreferenceProfile) -> RuleOutcome:
    winner = condorcet_winner(pairwise_counts(profile))
    return RuleOutcome('condorcet', _single_winner_board(profile.roster, winner, 'condorcet'),
                       (winner,) if winner else None)


# Rule registry, in comparison-table order
RULES: Dict[str, Callable[[PreferenceProfile], RuleOutcome]] = {
    'convergence': lambda profile: _scored(convergence_scores(profile)),
    'borda': lambda profile: _scored(borda(profile), zero_is_empty=True),
    'plurality': lambda profile: _scored(plurality(profile), zero_is_empty=True),
    'majority': _majority,
    'condorcet': _condorcet,
    'copeland': lambda profile: _scored(copeland(pairwise_counts(profile))),
    'mc3': lambda profile: _scored(mc3_scores(pairwise_counts(profile))),
    'naive': lambda profile: _scored(naive_normalized_scores(pairwise_counts(profile))),
}


def compare_rules(profile: PreferenceProfile) -> Dict[str, RuleOutcome]:
    """Run every registered rule; a failing rule is reported inline."""
    results: Dict[str, RuleOutcome] = {}
    for name, rule in RULES.items():
        try:
            results[name] = rule(profile)
        except ConvergenceVoteError as e:
            logger.info(f"Rule {name} not applicable: {e}")
            results[name] = RuleOutcome(name, error=str(e))
    return results
