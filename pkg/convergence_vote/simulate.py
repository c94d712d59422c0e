"""Negotiation and deliberation processes whose limits are the convergence scores.

Both processes work from the ballots directly and never build the
convergence transition matrix, so they serve as independent checks on
the analytic scores.
"""

import bisect
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .ballots import Ballot, CandidateRoster, PreferenceProfile
from .chain import Distribution, TransitionMatrix, limit_from
from .config import config
from .errors import InputError
from .rng import LehmerRandom
from .utils import fraction_to_json

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


@dataclass(frozen=True)
class SupportTrajectory:
    """Support functions s0, s1, ... of a negotiation run."""
    roster: CandidateRoster
    steps: Tuple[Tuple[Number, ...], ...]
    l1_deltas: Tuple[float, ...]
    converged_at: Optional[int]
    exact: bool = True

    @property
    def final(self) -> Tuple[Number, ...]:
        return self.steps[-1]

    def final_distribution(self) -> Distribution:
        if not self.exact:
            raise InputError("floating-point trajectories have no exact distribution")
        return Distribution(self.roster, self.final)

    def to_json(self) -> Dict[str, object]:
        final = {name: fraction_to_json(v) if self.exact else float(v)
                 for name, v in zip(self.roster.names, self.final)}
        return {
            'schema_version': config.SCHEMA_VERSION,
            'rounds': len(self.steps) - 1,
            'converged_at': self.converged_at,
            'exact': self.exact,
            'final': final,
            'l1_deltas': list(self.l1_deltas),
        }


@dataclass(frozen=True)
class VoterMatrix:
    """One voter's negotiating position T_v."""
    ballot: Optional[Ballot]
    matrix: TransitionMatrix


@dataclass(frozen=True)
class WalkReport:
    """Visit counts of one seeded deliberation walk."""
    roster: CandidateRoster
    seed: int
    steps: int
    visit_counts: Tuple[int, ...]

    @property
    def frequencies(self) -> Tuple[float, ...]:
        return tuple(count / self.steps for count in self.visit_counts)

    def to_json(self) -> Dict[str, object]:
        return {
            'schema_version': config.SCHEMA_VERSION,
            'seed': self.seed,
            'steps': self.steps,
            'counts': dict(zip(self.roster.names, self.visit_counts)),
            'frequencies': dict(zip(self.roster.names, self.frequencies)),
        }


def _redistribute(profile: PreferenceProfile, support: Sequence[Number],
                  part_of: Callable[[Number, int], Number]) -> List[Number]:
    """One round of the negotiation, voter by voter.

    Each voter holds weight/|V| of the support of every option c, splits it
    into |K|-1 equal parts, and for every other option c' moves that part
    to c' if they prefer c' over c; otherwise the part stays at c.
    """
    names = profile.roster.names
    result = [support[0] * 0 for _ in names]
    for ballot in profile.ballots:
        if not ballot.weight:
            continue
        for i, c in enumerate(names):
            part = part_of(support[i], ballot.weight)
            for j, other in enumerate(names):
                if j == i:
                    continue
                if ballot.prefers(other, c):
                    result[j] += part
                else:
                    result[i] += part
    return result


def _is_degenerate(profile: PreferenceProfile) -> bool:
    return profile.voters == 0 or len(profile.roster) == 1


def negotiation_step(profile: PreferenceProfile, s: Distribution) -> Distribution:
    """Apply one exact negotiation round to the support function s."""
    if s.roster != profile.roster:
        raise InputError("support function and profile use different rosters")
    if _is_degenerate(profile):
        return s
    denominator = profile.voters * (len(profile.roster) - 1)
    mass = _redistribute(profile, s.mass, lambda value, weight: value * Fraction(weight, denominator))
    return Distribution(s.roster, tuple(mass))


def negotiate(profile: PreferenceProfile, max_rounds: Optional[int] = None,
              tol: Optional[float] = None, exact: bool = True) -> SupportTrajectory:
    """Negotiate from the uniform support until the L1 change drops below tol."""
    max_rounds = config.MAX_ROUNDS if max_rounds is None else max_rounds
    tol = config.NEGOTIATE_TOL if tol is None else tol
    if max_rounds < 1:
        raise InputError("max_rounds must be at least 1")
    if tol <= 0:
        raise InputError("tol must be positive")

    roster = profile.roster
    size = len(roster)
    if exact:
        current: List[Number] = list(Distribution.uniform(roster).mass)
        denominator = profile.voters * (size - 1)
        part_of = lambda value, weight: value * Fraction(weight, denominator)
    else:
        current = [1.0 / size] * size
        denominator = float(profile.voters * (size - 1))
        part_of = lambda value, weight: value * weight / denominator

    steps = [tuple(current)]
    deltas: List[float] = []
    converged_at = None
    for round_number in range(1, max_rounds + 1):
        nxt = current if _is_degenerate(profile) else _redistribute(profile, current, part_of)
        delta = float(sum(abs(a - b) for a, b in zip(nxt, current)))
        steps.append(tuple(nxt))
        deltas.append(delta)
        current = nxt
        if delta < tol:
            converged_at = round_number
            break

    if converged_at is None:
        logger.warning(f"Negotiation did not converge within {max_rounds} rounds "
                       f"(last L1 change {deltas[-1]:.3g})")
    else:
        logger.debug(f"Negotiation converged after {converged_at} rounds")
    return SupportTrajectory(roster, tuple(steps), tuple(deltas), converged_at, exact)


def voter_matrix(ballot: Ballot, roster: CandidateRoster) -> VoterMatrix:
    """(T_v)[i][j] = 1/(|K|-1) when the voter prefers j to i; the rest stays on the loop."""
    size = len(roster)
    if size < 2:
        raise InputError("voter matrices need at least two candidates")
    move = Fraction(1, size - 1)
    rows = []
    for i, c in enumerate(roster.names):
        row = [move if j != i and ballot.prefers(other, c) else Fraction(0)
               for j, other in enumerate(roster.names)]
        row[i] = 1 - sum(row)
        rows.append(tuple(row))
    return VoterMatrix(ballot, TransitionMatrix(roster, tuple(rows)))


def support_voter_matrix(support: Distribution) -> VoterMatrix:
    """Position of a voter with an explicit support function: every row equals it."""
    return VoterMatrix(None, TransitionMatrix(support.roster, tuple(support.mass for _ in support.roster)))


def profile_voter_matrices(profile: PreferenceProfile) -> List[Tuple[VoterMatrix, Fraction]]:
    """One matrix per ballot line, with share weight/|V|."""
    if profile.voters == 0:
        raise InputError("an empty electorate has no voter shares")
    return [(voter_matrix(ballot, profile.roster), Fraction(ballot.weight, profile.voters))
            for ballot in profile.ballots if ballot.weight]


def aggregate_matrix(pairs: Sequence[Tuple[VoterMatrix, Fraction]]) -> TransitionMatrix:
    """The share-weighted sum of voter matrices."""
    if not pairs:
        raise InputError("no voter matrices to aggregate")
    shares = [Fraction(share) for _, share in pairs]
    if any(share < 0 for share in shares) or sum(shares) != 1:
        raise InputError(f"voter shares must be non-negative and sum to 1, got {sum(shares)}")

    roster = pairs[0][0].matrix.roster
    size = len(roster)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for (vm, _), share in zip(pairs, shares):
        if vm.matrix.roster != roster:
            raise InputError("voter matrices use different rosters")
        for i in range(size):
            for j in range(size):
                rows[i][j] += share * vm.matrix.p[i][j]
    return TransitionMatrix(roster, tuple(tuple(row) for row in rows))


def renegotiated_support(pairs: Sequence[Tuple[VoterMatrix, Fraction]],
                         initial: Optional[Distribution] = None) -> Distribution:
    """Limit of the aggregated negotiation from `initial` (uniform when omitted)."""
    t = aggregate_matrix(pairs)
    return limit_from(t, initial or Distribution.uniform(t.roster))


def random_walk(profile: PreferenceProfile, steps: Optional[int] = None,
                seed: Optional[int] = None) -> WalkReport:
    """Iterated change of decision.

    Start at a uniformly random option; every step proposes a uniformly
    random alternative, asks a voter drawn in proportion to ballot weight,
    and moves when that voter prefers the alternative.
    """
    steps = config.WALK_STEPS if steps is None else steps
    seed = config.WALK_SEED if seed is None else seed
    roster = profile.roster
    size = len(roster)
    if steps < 1:
        raise InputError("steps must be at least 1")
    if size < 2:
        raise InputError("the walk needs at least two candidates")
    if profile.voters == 0:
        raise InputError("the walk needs at least one voter")

    ballots = [ballot for ballot in profile.ballots if ballot.weight]
    cumulative = list(itertools.accumulate(ballot.weight for ballot in ballots))
    preferences = [{(roster.index(x), roster.index(y)) for x, y in ballot.relation} for ballot in ballots]
    voters = cumulative[-1]

    rng = LehmerRandom(seed)
    # proposals and voter draws come from separate streams
    voter_rng = rng.fork()
    current = rng.randbelow(size)
    counts = [0] * size
    for _ in range(steps):
        alternative = rng.randbelow(size - 1)
        if alternative >= current:
            alternative += 1
        voter = bisect.bisect_right(cumulative, voter_rng.randbelow(voters))
        if (alternative, current) in preferences[voter]:
            current = alternative
        counts[current] += 1

    logger.debug(f"Walk of {steps} steps with seed {seed}: {counts}")
    return WalkReport(roster, seed, steps, tuple(counts))


def walk_error(report: WalkReport, exact: Distribution) -> float:
    """L-infinity distance between walk frequencies and an exact distribution."""
    return float(np.max(np.abs(np.array(report.frequencies) - exact.as_array())))
