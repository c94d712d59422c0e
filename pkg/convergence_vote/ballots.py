"""Ballot files, preference profiles and pairwise-comparison counts."""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import BallotShapeError, BallotSyntaxError, CountOverflowError, CycleError, InputError

logger = logging.getLogger(__name__)

UINT64_MAX = 2 ** 64 - 1

Pair = Tuple[str, str]


@dataclass(frozen=True)
class CandidateRoster:
    """Ordered candidate names; the position of a name is its matrix index."""
    names: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(name.strip() for name in self.names)
        if not names:
            raise InputError("candidate roster is empty")
        index = {}
        for position, name in enumerate(names):
            if not name:
                raise InputError("candidate names must be non-empty")
            if name in index:
                raise InputError(f"duplicate candidate {name!r}")
            index[name] = position
        object.__setattr__(self, 'names', names)
        object.__setattr__(self, '_index', index)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown candidate {name!r}") from None

    def union(self, other: 'CandidateRoster') -> 'CandidateRoster':
        """Ordered union: this roster's names, then the new ones from `other`."""
        return CandidateRoster(self.names + tuple(n for n in other.names if n not in self))


@dataclass(frozen=True)
class Ballot:
    """A weighted strict partial order; (x, y) in relation means x is preferred to y."""
    weight: int
    relation: FrozenSet[Pair] = frozenset()

    def __post_init__(self):
        # stored closed; a reflexive or cyclic relation raises CycleError
        object.__setattr__(self, 'relation', close_ballot(self.relation))

    def prefers(self, x: str, y: str) -> bool:
        return (x, y) in self.relation

    @property
    def listed(self) -> Set[str]:
        """Candidates that appear in at least one pair."""
        return {name for pair in self.relation for name in pair}

    def maximal(self) -> Set[str]:
        """Listed candidates with no superior in this ballot."""
        dominated = {y for _, y in self.relation}
        return self.listed - dominated

    def is_chain(self) -> bool:
        """True when the listed candidates are totally ordered."""
        k = len(self.listed)
        return len(self.relation) == k * (k - 1) // 2

    def chain_order(self) -> List[str]:
        """Listed candidates most-preferred first; only valid for chains."""
        if not self.is_chain():
            raise BallotShapeError(f"ballot {format_relation(self.relation)!r} is not a chain")
        above = {name: 0 for name in self.listed}
        for _, y in self.relation:
            above[y] += 1
        return sorted(above, key=lambda name: above[name])


@dataclass(frozen=True)
class PreferenceProfile:
    """Weighted ballots over a candidate roster."""
    roster: CandidateRoster
    ballots: Tuple[Ballot, ...]

    def __post_init__(self):
        object.__setattr__(self, 'ballots', tuple(self.ballots))
        total = 0
        for ballot in self.ballots:
            if ballot.weight < 0:
                raise InputError(f"negative ballot weight {ballot.weight}")
            for x, y in ballot.relation:
                self.roster.index(x)
                self.roster.index(y)
            total = checked_add(total, ballot.weight)

    @property
    def voters(self) -> int:
        """Total voter count |V|."""
        return sum(ballot.weight for ballot in self.ballots)


@dataclass(frozen=True)
class PairwiseCounts:
    """n[x][y] = number of voters who strictly prefer y over x."""
    roster: CandidateRoster
    n: Tuple[Tuple[int, ...], ...]

    def get(self, x: str, y: str) -> int:
        return self.n[self.roster.index(x)][self.roster.index(y)]


def checked_add(a: int, b: int) -> int:
    """Add two counts, rejecting results outside the unsigned 64-bit range."""
    result = a + b
    if result > UINT64_MAX:
        raise CountOverflowError(f"voter count {result} exceeds 64-bit range")
    return result


def _find_cycle(successors: Dict[str, Set[str]]) -> Optional[List[str]]:
    """Return one cycle as [a, b, ..., a], or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {node: WHITE for node in successors}
    path: List[str] = []

    def visit(node: str) -> Optional[List[str]]:
        colour[node] = GREY
        path.append(node)
        for nxt in sorted(successors.get(node, ())):
            if colour.get(nxt, WHITE) == GREY:
                return path[path.index(nxt):] + [nxt]
            if colour.get(nxt, WHITE) == WHITE:
                found = visit(nxt)
                if found:
                    return found
        path.pop()
        colour[node] = BLACK
        return None

    for node in sorted(successors):
        if colour[node] == WHITE:
            found = visit(node)
            if found:
                return found
    return None


def close_ballot(pairs: Iterable[Pair], line: Optional[int] = None) -> FrozenSet[Pair]:
    """Transitive closure of a preference relation.

    Raises CycleError when the closure would contain (x, x) or a symmetric
    pair; the error names one offending cycle.
    """
    successors: Dict[str, Set[str]] = {}
    for x, y in pairs:
        successors.setdefault(x, set()).add(y)
        successors.setdefault(y, set())

    cycle = _find_cycle(successors)
    if cycle:
        raise CycleError(cycle, line)

    closed: Set[Pair] = set()
    for source in successors:
        stack = list(successors[source])
        seen: Set[str] = set()
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            closed.add((source, node))
            stack.extend(successors[node])
    return frozenset(closed)


class BallotParser:
    """Parses the ballot file format.

    candidates: A, B, C
    # comment
    3: A > B > C
    1: A > C; B > C
    """

    def __init__(self):
        self.name_pattern = re.compile(r'^[A-Za-z0-9_.-]+$')
        self.header_pattern = re.compile(r'^candidates\s*:(.*)$', re.IGNORECASE)
        self.ballot_pattern = re.compile(r'^([^:]*):(.*)$')
        self.weight_pattern = re.compile(r'^\d+$')

    def parse(self, text: str) -> PreferenceProfile:
        """Parse ballot-file content into a profile with closed ballots."""
        roster: Optional[CandidateRoster] = None
        ballots: List[Ballot] = []

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue

            if roster is None:
                roster = self._parse_header(line, number)
                continue

            ballots.append(self._parse_ballot(line, number, roster))

        if roster is None:
            raise BallotSyntaxError("missing 'candidates:' header")

        profile = PreferenceProfile(roster, tuple(ballots))
        logger.debug(f"Parsed {len(ballots)} ballot lines, {profile.voters} voters, "
                     f"{len(roster)} candidates")
        return profile

    def _parse_header(self, line: str, number: int) -> CandidateRoster:
        match = self.header_pattern.match(line)
        if not match:
            raise BallotSyntaxError("expected 'candidates: <name>, ...' header", number)

        names = [name.strip() for name in match.group(1).split(',')]
        for name in names:
            self._check_name(name, number)
        try:
            return CandidateRoster(tuple(names))
        except InputError as e:
            raise BallotSyntaxError(str(e), number) from None

    def _parse_ballot(self, line: str, number: int, roster: CandidateRoster) -> Ballot:
        match = self.ballot_pattern.match(line)
        if not match:
            raise BallotSyntaxError("expected '<weight>: <chain>'", number)

        weight_text = match.group(1).strip()
        if not self.weight_pattern.match(weight_text):
            raise BallotSyntaxError(f"malformed weight {weight_text!r}", number)
        weight = int(weight_text)
        if weight > UINT64_MAX:
            raise CountOverflowError(f"line {number}: weight {weight} exceeds 64-bit range")

        pairs: Set[Pair] = set()
        for chain_text in match.group(2).split(';'):
            names = [name.strip() for name in chain_text.split('>')]
            for name in names:
                self._check_name(name, number)
                if name not in roster:
                    raise BallotSyntaxError(f"unknown candidate {name!r}", number)
            if len(set(names)) != len(names):
                raise BallotSyntaxError(f"duplicate candidate in chain {chain_text.strip()!r}", number)
            pairs.update(zip(names, names[1:]))

        return Ballot(weight, close_ballot(pairs, number))

    def _check_name(self, name: str, number: int):
        if not self.name_pattern.match(name):
            raise BallotSyntaxError(f"invalid candidate name {name!r}", number)


# Global parser instance
ballot_parser = BallotParser()


def parse_profile(text: str) -> PreferenceProfile:
    """Parse ballot-file content."""
    return ballot_parser.parse(text)


def format_relation(relation: Iterable[Pair]) -> str:
    """Covering pairs of a closed relation as '; '-joined 'x > y' chains."""
    relation = set(relation)
    covering = sorted(
        (x, y) for x, y in relation
        if not any((x, z) in relation and (z, y) in relation
                   for z in {b for _, b in relation})
    )
    return '; '.join(f"{x} > {y}" for x, y in covering)


def format_profile(profile: PreferenceProfile) -> str:
    """Render a profile in the ballot-file grammar."""
    lines = [f"candidates: {', '.join(profile.roster.names)}"]
    for ballot in profile.ballots:
        if ballot.is_chain() and ballot.relation:
            body = ' > '.join(ballot.chain_order())
        elif ballot.relation:
            body = format_relation(ballot.relation)
        else:
            body = profile.roster.names[0]
        lines.append(f"{ballot.weight}: {body}")
    return '\n'.join(lines) + '\n'


def pairwise_counts(profile: PreferenceProfile) -> PairwiseCounts:
    """Count, for every ordered pair (x, y), the voters preferring y over x."""
    roster = profile.roster
    size = len(roster)
    n = [[0] * size for _ in range(size)]
    for ballot in profile.ballots:
        if not ballot.weight:
            continue
        for winner, loser in ballot.relation:
            row, col = roster.index(loser), roster.index(winner)
            n[row][col] = checked_add(n[row][col], ballot.weight)
    return PairwiseCounts(roster, tuple(tuple(row) for row in n))


def threshold_counts(counts: PairwiseCounts, voters: int, percent: Fraction) -> PairwiseCounts:
    """Zero every count below `percent` of the electorate.

    A pair supported by only a few voters then no longer links otherwise
    uncompared groups of candidates.
    """
    percent = Fraction(percent)
    if not 0 <= percent <= 100:
        raise InputError(f"pair threshold must be between 0 and 100 percent, got {percent}")
    kept = tuple(tuple(v if 100 * v >= percent * voters else 0 for v in row) for row in counts.n)
    dropped = sum(1 for row, new in zip(counts.n, kept) for v, w in zip(row, new) if v != w)
    logger.debug(f"Pair threshold {percent}% of {voters} voters dropped {dropped} counts")
    return PairwiseCounts(counts.roster, kept)


def restrict_profile(profile: PreferenceProfile, keep: Sequence[str]) -> PreferenceProfile:
    """Keep only the named candidates, in roster order."""
    wanted = set(keep)
    for name in wanted:
        profile.roster.index(name)
    kept = [name for name in profile.roster if name in wanted]
    roster = CandidateRoster(tuple(kept))
    ballots = tuple(
        Ballot(b.weight, frozenset((x, y) for x, y in b.relation if x in roster and y in roster))
        for b in profile.ballots
    )
    return PreferenceProfile(roster, ballots)


def drop_candidates(profile: PreferenceProfile, dropped: Sequence[str]) -> PreferenceProfile:
    for name in dropped:
        profile.roster.index(name)
    return restrict_profile(profile, [n for n in profile.roster if n not in set(dropped)])


def complete_ballots(profile: PreferenceProfile) -> PreferenceProfile:
    """Rank each ballot's unlisted candidates tied at the bottom."""
    ballots = []
    for ballot in profile.ballots:
        listed = ballot.listed
        if not listed:
            ballots.append(ballot)
            continue
        extra = {(x, y) for x in listed for y in profile.roster if y not in listed}
        ballots.append(Ballot(ballot.weight, frozenset(ballot.relation | extra)))
    return PreferenceProfile(profile.roster, tuple(ballots))


def reverse_ballot(ballot: Ballot) -> Ballot:
    return Ballot(ballot.weight, frozenset((y, x) for x, y in ballot.relation))


def chain_ballot(weight: int, *names: str) -> Ballot:
    """Ballot for a single most-preferred-first chain."""
    return Ballot(weight, close_ballot(zip(names, names[1:])))
