"""Shared profiles and generators for the test suite."""

import random
from pathlib import Path

import pytest

from convergence_vote.ballots import CandidateRoster, PreferenceProfile, chain_ballot, parse_profile
from convergence_vote.chain import decompose
from convergence_vote.rules import convergence_matrix

DATA_DIR = Path(__file__).parent / 'data'


def load_vote(name: str) -> PreferenceProfile:
    return parse_profile((DATA_DIR / f"{name}.vote").read_text(encoding='utf-8'))


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def p1():
    """Presidential election, 5 million voters."""
    return load_vote('p1')


@pytest.fixture
def p2():
    return load_vote('p2')


@pytest.fixture
def p3():
    return load_vote('p3')


@pytest.fixture
def p4():
    return load_vote('p4')


@pytest.fixture
def p5():
    return load_vote('p5')


@pytest.fixture
def partial_orders():
    """Partial ballots where only 5 of 20 voters compare A with B."""
    return load_vote('partial_orders')


@pytest.fixture
def one_voter():
    """A single voter preferring A over B, indifferent about C."""
    return parse_profile("candidates: A, B, C\n1: A > B\n")


@pytest.fixture
def two_party():
    """Factory for the two-party profile: n_ab ballots B > A, n_ba ballots A > B."""
    def build(n_ab: int, n_ba: int) -> PreferenceProfile:
        roster = CandidateRoster(('A', 'B'))
        return PreferenceProfile(roster, (chain_ballot(n_ab, 'B', 'A'), chain_ballot(n_ba, 'A', 'B')))
    return build


@pytest.fixture
def random_profile():
    """Factory for random profiles drawn from a seeded `random.Random`.

    With `total=True` every ballot ranks all candidates; otherwise each
    ballot is a chain over a random subset of at least two candidates.
    """
    def build(rng: random.Random, max_candidates: int = 5, max_lines: int = 6,
              max_weight: int = 5, total: bool = True) -> PreferenceProfile:
        names = tuple('ABCDEFGH'[:rng.randint(2, max_candidates)])
        ballots = []
        for _ in range(rng.randint(1, max_lines)):
            order = list(names)
            rng.shuffle(order)
            if not total:
                order = order[:rng.randint(2, len(order))]
            ballots.append(chain_ballot(rng.randint(1, max_weight), *order))
        return PreferenceProfile(CandidateRoster(names), tuple(ballots))
    return build


@pytest.fixture
def strongly_connected(random_profile):
    """Factory for random profiles whose convergence chain is irreducible."""
    def build(rng: random.Random, **kwargs) -> PreferenceProfile:
        while True:
            profile = random_profile(rng, **kwargs)
            d = decompose(convergence_matrix(profile))
            if len(d.closed_classes) == 1 and not d.transient:
                return profile
    return build
