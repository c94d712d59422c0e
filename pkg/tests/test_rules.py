"""Tests for convergence voting and the comparison rules."""

import logging
import random
from fractions import Fraction as F

import numpy as np
import pytest
from convergence_vote.ballots import (CandidateRoster, PreferenceProfile, chain_ballot, drop_candidates,
                                      pairwise_counts, parse_profile, reverse_ballot)
from convergence_vote.chain import Distribution, power_iterate
from convergence_vote.errors import BallotShapeError
from convergence_vote.rules import (Ranking, Scoreboard, borda, compare_rules, condorcet_winner,
                                    convergence_matrix, convergence_scores, copeland, majority_winner,
                                    mc3_matrix, mc3_scores, naive_normalized_scores, plurality, rank)

M = 1_000_000


def scores(board):
    return list(board.scores)


class TestConvergenceScores:
    """Test the convergence voting rule."""

    def test_presidential(self, p1):
        """Test (5/11, 4/11, 2/11) exactly."""
        assert scores(convergence_scores(p1)) == [F(5, 11), F(4, 11), F(2, 11)]

    def test_condorcet_winner_not_chosen(self, p2):
        """Test B overtakes the Condorcet winner C."""
        board = convergence_scores(p2)
        assert scores(board) == [F(39, 223), F(95, 223), F(89, 223)]
        assert rank(board).tiers == (('B',), ('C',), ('A',))

    def test_p3_regression(self, p3):
        """Test the exact P3 scores, which put B narrowly above C.

        The ranking published with this profile puts C first. The exact chain
        gives B, as power iteration here and both simulations in
        test_simulate.py confirm, so the computed scores are pinned.
        """
        board = convergence_scores(p3)
        assert scores(board) == [F(173, 893), F(363, 893), F(357, 893)]
        assert rank(board).winners == ['B']
        result = power_iterate(convergence_matrix(p3), Distribution.uniform(p3.roster))
        assert np.abs(result.mass - board.as_distribution().as_array()).sum() < 1e-9

    def test_p4(self, p4):
        """Test winner C with (9, 59, 66)/134."""
        board = convergence_scores(p4)
        assert scores(board) == [F(9, 134), F(59, 134), F(66, 134)]
        assert rank(board).winners == ['C']

    def test_p5(self, p5):
        """Test winner B with (27, 127, 123)/277."""
        board = convergence_scores(p5)
        assert scores(board) == [F(27, 277), F(127, 277), F(123, 277)]
        assert rank(board).winners == ['B']

    def test_partial_ballots(self, partial_orders):
        """Test the partial-ballot profile ranks C > B > A."""
        board = convergence_scores(partial_orders)
        assert scores(board) == [F(105, 469), F(176, 469), F(188, 469)]
        assert rank(board).tiers == (('C',), ('B',), ('A',))

    def test_two_party_law(self, two_party):
        """Test scores (n_BA, n_AB) / (n_AB + n_BA) for random pairs."""
        rng = random.Random(43)
        for _ in range(50):
            n_ab, n_ba = rng.randint(0, 1000), rng.randint(1, 1000)
            board = convergence_scores(two_party(n_ab, n_ba))
            assert scores(board) == [F(n_ba, n_ab + n_ba), F(n_ab, n_ab + n_ba)]

    def test_scores_form_distribution(self, random_profile):
        """Test scores are non-negative and sum to exactly 1."""
        rng = random.Random(47)
        for _ in range(50):
            board = convergence_scores(random_profile(rng, total=False))
            assert sum(board.scores) == 1
            assert all(score >= 0 for score in board.scores)

    def test_empty_electorate(self, caplog):
        """Test no voters gives uniform scores and a warning."""
        with caplog.at_level(logging.WARNING):
            board = convergence_scores(parse_profile("candidates: A, B, C"))
        assert scores(board) == [F(1, 3)] * 3
        assert 'Empty electorate' in caplog.text

    def test_single_candidate(self):
        """Test one candidate takes everything."""
        assert scores(convergence_scores(parse_profile("candidates: A\n2: A"))) == [F(1)]

    def test_one_voter_reducible(self, one_voter):
        """Test an uncompared candidate keeps its share."""
        assert scores(convergence_scores(one_voter)) == [F(2, 3), F(0), F(1, 3)]

    def test_pair_threshold_keeps_supported_pairs(self, one_voter):
        """Test a pair backed by every voter survives any threshold."""
        for percent in (F(0), F(50), F(100)):
            board = convergence_scores(one_voter, pair_threshold=percent)
            assert scores(board) == [F(2, 3), F(0), F(1, 3)]

    def test_pair_threshold_splits_weak_links(self):
        """Test a lone voter linking two groups is ignored below the threshold."""
        profile = parse_profile("candidates: A, B, C, D\n10: A > B\n10: C > D\n1: A > C\n")
        assert scores(convergence_scores(profile)) == [F(1), F(0), F(0), F(0)]
        board = convergence_scores(profile, pair_threshold=F(10))
        assert scores(board) == [F(1, 2), F(0), F(1, 2), F(0)]
        assert rank(board).tiers == (('A', 'C'), ('B', 'D'))


class TestSocialChoiceProperties:
    """Test the properties convergence voting does and does not have."""

    def test_pareto(self, strongly_connected):
        """Test A scores above B whenever every voter ranks A above B."""
        rng = random.Random(53)
        for _ in range(200):
            profile = strongly_connected(rng)
            ballots = []
            for ballot in profile.ballots:
                order = [name for name in ballot.chain_order() if name != 'A']
                order.insert(order.index('B'), 'A')
                ballots.append(chain_ballot(ballot.weight, *order))
            planted = PreferenceProfile(profile.roster, tuple(ballots))
            board = convergence_scores(planted)
            # strict unless both are transient
            assert board['A'] > board['B'] or board['A'] == board['B'] == 0

    def test_no_dictator(self):
        """Test two reversed voters overturn any single voter."""
        rng = random.Random(59)
        for _ in range(50):
            size = rng.randint(2, 6)
            names = list('ABCDEF'[:size])
            rng.shuffle(names)
            ballot = chain_ballot(1, *names)
            alone = PreferenceProfile(CandidateRoster(tuple(sorted(names))), (ballot,))
            assert rank(convergence_scores(alone)).winners == [names[0]]

            reversed_ballot = reverse_ballot(ballot)
            outvoted = PreferenceProfile(alone.roster, (ballot, chain_ballot(2, *reversed_ballot.chain_order())))
            counts = pairwise_counts(outvoted)
            for x, y in ballot.relation:
                assert counts.get(y, x) < counts.get(x, y)
            board = convergence_scores(outvoted)
            assert board[names[0]] == F(1, 2 * size - 1)
            assert board[names[-1]] == F(2, size + 1)

    def test_not_independent_of_irrelevant_alternatives(self, p2):
        """Test removing A turns the winner from B to C."""
        assert rank(convergence_scores(p2)).winners == ['B']
        board = convergence_scores(drop_candidates(p2, ['A']))
        assert scores(board) == [F(9, 20), F(11, 20)]
        assert rank(board).winners == ['C']

    def test_not_monotonic(self):
        """Test moving C up on eight ballots hands C the win."""
        profile = parse_profile(
            "candidates: A, B, C\n"
            "8: B > C > A\n0: B > A > C\n1: A > B > C\n8: C > B > A\n0: C > A > B\n3: A > C > B\n")
        board = convergence_scores(profile)
        assert scores(board) == [F(3, 27), F(11, 27), F(13, 27)]
        assert rank(board).winners == ['C']


class TestRank:
    """Test tier grouping."""

    def test_presidential_tiers(self, p1):
        """Test A > B > C."""
        assert rank(convergence_scores(p1)).tiers == (('A',), ('B',), ('C',))

    def test_exact_tie(self, two_party):
        """Test equal scores share one tier."""
        assert rank(convergence_scores(two_party(5, 5))) == Ranking((('A', 'B'),))

    def test_tie_keeps_roster_order(self):
        """Test tiers list candidates in roster order."""
        board = Scoreboard(CandidateRoster(('C', 'A', 'B')), (F(1, 4), F(1, 2), F(1, 4)), 'convergence')
        assert rank(board).tiers == (('A',), ('C', 'B'))


class TestCountingRules:
    """Test Borda, plurality, majority, Condorcet and Copeland."""

    def test_presidential_outcomes(self, p1):
        """Test Borda 6M/5M/4M, a plurality tie and no majority."""
        assert scores(borda(p1)) == [6 * M, 5 * M, 4 * M]
        assert scores(plurality(p1)) == [2 * M, 2 * M, M]
        assert rank(plurality(p1)).winners == ['A', 'B']
        assert majority_winner(p1) is None

    def test_borda_fixtures(self, p3, p4, p5):
        """Test Borda tallies and winners on the comparison profiles."""
        assert scores(borda(p3)) == [13, 24, 23]
        assert scores(borda(p4)) == [6, 35, 34]
        assert scores(borda(p5)) == [9, 35, 31]

    def test_borda_needs_chains(self, partial_orders):
        """Test a two-headed ballot cannot be Borda-counted."""
        with pytest.raises(BallotShapeError):
            borda(partial_orders)

    def test_plurality_single_ballot(self):
        """Test a single chain gives its top one point."""
        assert scores(plurality(parse_profile("candidates: A, B, C\n1: A > B > C"))) == [1, 0, 0]

    def test_plurality_splits_ties(self):
        """Test two maximal candidates share the ballot."""
        board = plurality(parse_profile("candidates: A, B, C\n1: A > C; B > C"))
        assert scores(board) == [F(1, 2), F(1, 2), 0]

    def test_plurality_ignores_indifferent(self):
        """Test an empty ballot supports nobody."""
        assert scores(plurality(parse_profile("candidates: A, B\n3: A"))) == [0, 0]

    def test_majority(self):
        """Test a strict majority is required."""
        assert majority_winner(parse_profile("candidates: A, B\n3: A > B\n1: B > A")) == 'A'
        assert majority_winner(parse_profile("candidates: A, B\n1: A > B\n1: B > A")) is None

    def test_condorcet_winner(self, p1, p2, p3):
        """Test C wins every pairwise contest in P2 and P3 but nobody does in P1."""
        assert condorcet_winner(pairwise_counts(p2)) == 'C'
        assert condorcet_winner(pairwise_counts(p3)) == 'C'
        assert condorcet_winner(pairwise_counts(p1)) is None

    def test_copeland(self, p1, p2):
        """Test C +2, B 0, A -2 on P2 and the P1 cycle."""
        assert scores(copeland(pairwise_counts(p2))) == [-2, 0, 2]
        assert scores(copeland(pairwise_counts(p1))) == [0, 0, 0]

    def test_copeland_single_ballot(self):
        """Test one ballot A > B."""
        assert scores(copeland(pairwise_counts(parse_profile("candidates: A, B\n1: A > B")))) == [1, -1]


class TestMarkovRules:
    """Test the MC3 and naive normalisation chains."""

    def test_mc3_matches_convergence_on_complete_ballots(self, partial_orders, p2):
        """Test the partial-ballot MC3 chain equals the P2 convergence chain."""
        assert mc3_matrix(pairwise_counts(partial_orders)).p == convergence_matrix(p2).p

    def test_mc3_partial_ballots(self, partial_orders):
        """Test MC3 ranks B > C > A where convergence ranks C > B > A."""
        board = mc3_scores(pairwise_counts(partial_orders))
        assert scores(board) == [F(39, 223), F(95, 223), F(89, 223)]
        assert rank(board).tiers == (('B',), ('C',), ('A',))

    def test_mc3_uncompared(self):
        """Test no comparisons gives uniform scores."""
        board = mc3_scores(pairwise_counts(parse_profile("candidates: A, B, C\n4: B")))
        assert scores(board) == [F(1, 3)] * 3

    def test_naive_presidential(self, p1):
        """Test (5/15, 6/15, 4/15)."""
        assert scores(naive_normalized_scores(pairwise_counts(p1))) == [F(5, 15), F(6, 15), F(4, 15)]

    def test_naive_two_party(self, two_party):
        """Test (1/2, 1/2) regardless of the numbers."""
        for n_ab, n_ba in [(1, 9), (50, 3), (7, 7)]:
            board = naive_normalized_scores(pairwise_counts(two_party(n_ab, n_ba)))
            assert scores(board) == [F(1, 2), F(1, 2)]

    def test_naive_absorbing(self):
        """Test a candidate nobody beats absorbs everything."""
        board = naive_normalized_scores(pairwise_counts(parse_profile("candidates: A, B\n1: A > B")))
        assert scores(board) == [1, 0]


class TestCompareRules:
    """Test the side-by-side comparison."""

    @staticmethod
    def winners(outcomes):
        return {name: list(outcome.winners) if outcome.winners else None for name, outcome in outcomes.items()}

    def test_rule_order(self, p1):
        """Test every rule runs in table order."""
        assert list(compare_rules(p1)) == [
            'convergence', 'borda', 'plurality', 'majority', 'condorcet', 'copeland', 'mc3', 'naive']

    def test_presidential(self, p1):
        """Test the three counting outcomes next to convergence."""
        winners = self.winners(compare_rules(p1))
        assert winners['convergence'] == ['A']
        assert winners['borda'] == ['A']
        assert winners['plurality'] == ['A', 'B']
        assert winners['majority'] is None
        assert winners['condorcet'] is None

    def test_p2(self, p2):
        """Test Condorcet and Copeland pick C, convergence and MC3 pick B."""
        winners = self.winners(compare_rules(p2))
        assert winners['condorcet'] == ['C']
        assert winners['copeland'] == ['C']
        assert winners['convergence'] == ['B']
        assert winners['mc3'] == ['B']

    def test_borda_divergence(self, p4, p5):
        """Test Borda picks B on both profiles while convergence differs on P4."""
        p4_winners = self.winners(compare_rules(p4))
        assert (p4_winners['borda'], p4_winners['convergence'], p4_winners['condorcet']) == (['B'], ['C'], ['C'])
        p5_winners = self.winners(compare_rules(p5))
        assert (p5_winners['borda'], p5_winners['convergence'], p5_winners['condorcet']) == (['B'], ['B'], ['C'])

    def test_errors_reported_inline(self, partial_orders):
        """Test a failing rule does not stop the others."""
        outcomes = compare_rules(partial_orders)
        assert outcomes['borda'].error is not None
        assert outcomes['borda'].to_json() == {'rule': 'borda', 'error': outcomes['borda'].error}
        assert list(outcomes['convergence'].winners) == ['C']

    def test_empty_profile(self):
        """Test uniform convergence scores and empty counts."""
        outcomes = compare_rules(parse_profile("candidates: A, B, C"))
        assert scores(outcomes['convergence'].board) == [F(1, 3)] * 3
        assert outcomes['borda'].winners is None
        assert outcomes['plurality'].winners is None
        assert outcomes['majority'].winners is None
        assert outcomes['condorcet'].winners is None

    def test_outcome_json(self, p2):
        """Test the per-rule JSON document."""
        doc = compare_rules(p2)['convergence'].to_json()
        assert doc['rule'] == 'convergence'
        assert doc['scores']['B'] == {'num': 95, 'den': 223, 'decimal': pytest.approx(95 / 223)}
        assert doc['ranking'] == [['B'], ['C'], ['A']]
        assert doc['winner'] == ['B']
