"""Seat apportionment from distribution-valued scoreboards."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .ballots import CandidateRoster
from .errors import InputError
from .rules import Scoreboard

logger = logging.getLogger(__name__)

LARGEST_REMAINDER = 'largest-remainder'

# Highest-averages divisors keyed by method name; argument is seats won so far
DIVISORS: Dict[str, Callable[[int], int]] = {
    'dhondt': lambda seats: seats + 1,
    'sainte-lague': lambda seats: 2 * seats + 1,
}

METHODS = (LARGEST_REMAINDER,) + tuple(DIVISORS)


@dataclass(frozen=True)
class SeatAllocation:
    """Integer seats per candidate; ties go to the earlier roster position."""
    roster: CandidateRoster
    total: int
    seats: Tuple[int, ...]
    method: str

    def __getitem__(self, name: str) -> int:
        return self.seats[self.roster.index(name)]

    def as_dict(self) -> Dict[str, int]:
        return dict(zip(self.roster.names, self.seats))


def _largest_remainder(shares: List[Fraction], total: int) -> List[int]:
    quotas = [total * share for share in shares]
    seats = [math.floor(q) for q in quotas]
    remaining = total - sum(seats)
    # stable sort keeps roster order among equal remainders
    order = sorted(range(len(shares)), key=lambda i: -(quotas[i] - seats[i]))
    for i in order[:remaining]:
        seats[i] += 1
    return seats


def _seats_below(x: Fraction, divisor: Callable[[int], int]) -> int:
    """Count the k >= 0 with divisor(k) < x; divisors are increasing integers of at least 1."""
    lo, hi = 0, max(0, math.ceil(x))
    while lo < hi:
        mid = (lo + hi) // 2
        if divisor(mid) < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _highest_averages(shares: List[Fraction], total: int, divisor: Callable[[int], int]) -> List[int]:
    # every quotient above `level` is awarded before any quotient at or below it
    level = Fraction(1, divisor(total))
    seats = [_seats_below(share / level, divisor) for share in shares]
    while sum(seats) > total:
        level *= Fraction(sum(seats) + len(shares), total)
        seats = [_seats_below(share / level, divisor) for share in shares]

    for _ in range(total - sum(seats)):
        best = max(range(len(shares)), key=lambda i: (shares[i] / divisor(seats[i]), -i))
        seats[best] += 1
    return seats


def allocate_seats(board: Scoreboard, total: int, method: str = LARGEST_REMAINDER) -> SeatAllocation:
    """Turn a distribution of scores into `total` integer seats."""
    if total < 1:
        raise InputError(f"seat total must be at least 1, got {total}")
    shares = list(board.as_distribution().mass)

    if method == LARGEST_REMAINDER:
        seats = _largest_remainder(shares, total)
    elif method in DIVISORS:
        seats = _highest_averages(shares, total, DIVISORS[method])
    else:
        raise InputError(f"unknown apportionment method {method!r}; choose from {', '.join(METHODS)}")

    logger.debug(f"Allocated {total} seats by {method}: {seats}")
    return SeatAllocation(board.roster, total, tuple(seats), method)
