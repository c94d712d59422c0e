"""Exact Markov chain analysis of candidate transition matrices.

All analytic results are exact `Fraction`s. The chain is read with the
row-vector convention: a distribution rho moves to rho @ T.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .ballots import CandidateRoster
from .config import config
from .errors import ConvergenceError, EmptyElectorateError, InputError, NotIrreducibleError
from .graph import PCGraph
from .linalg import fraction_matrix, identity_matrix, solve
from .utils import fraction_to_json

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix of exact rationals indexed by candidates."""
    roster: CandidateRoster
    p: Matrix

    def __post_init__(self):
        size = len(self.roster)
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.p)
        if len(rows) != size or any(len(row) != size for row in rows):
            raise InputError(f"transition matrix does not match {size} candidates")
        for name, row in zip(self.roster, rows):
            if any(v < 0 for v in row):
                raise InputError(f"negative transition probability in row {name}")
            if sum(row) != 1:
                raise InputError(f"row {name} sums to {sum(row)}, not 1")
        object.__setattr__(self, 'p', rows)

    def __len__(self) -> int:
        return len(self.roster)

    def successors(self, i: int) -> List[int]:
        """States reachable in one step with positive probability."""
        return [j for j, v in enumerate(self.p[i]) if v > 0]

    def restrict(self, states: Sequence[int]) -> 'TransitionMatrix':
        """Sub-chain on a closed set of states."""
        roster = CandidateRoster(tuple(self.roster.names[i] for i in states))
        return TransitionMatrix(roster, tuple(tuple(self.p[i][j] for j in states) for i in states))

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.p], dtype=float)


@dataclass(frozen=True)
class Distribution:
    """Exact probability vector over candidates."""
    roster: CandidateRoster
    mass: Tuple[Fraction, ...]

    def __post_init__(self):
        mass = tuple(Fraction(v) for v in self.mass)
        if len(mass) != len(self.roster):
            raise InputError(f"distribution does not match {len(self.roster)} candidates")
        if any(v < 0 for v in mass):
            raise InputError("distribution entries must be non-negative")
        if sum(mass) != 1:
            raise InputError(f"distribution sums to {sum(mass)}, not 1")
        object.__setattr__(self, 'mass', mass)

    @classmethod
    def uniform(cls, roster: CandidateRoster) -> 'Distribution':
        return cls(roster, tuple(Fraction(1, len(roster)) for _ in roster))

    def __getitem__(self, name: str) -> Fraction:
        return self.mass[self.roster.index(name)]

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(zip(self.roster.names, self.mass))

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.mass], dtype=float)

    def to_json(self) -> Dict[str, Dict[str, object]]:
        return {name: fraction_to_json(v) for name, v in zip(self.roster.names, self.mass)}


@dataclass(frozen=True)
class ChainDecomposition:
    """Canonical-form decomposition of a chain.

    absorption[t][k] is the probability that a walk from transient state
    transient[t] ends in closed class k.
    """
    roster: CandidateRoster
    closed_classes: Tuple[Tuple[int, ...], ...]
    transient: Tuple[int, ...]
    class_stationaries: Tuple[Tuple[Fraction, ...], ...]
    absorption: Tuple[Tuple[Fraction, ...], ...]

    def class_names(self, k: int) -> List[str]:
        return [self.roster.names[i] for i in self.closed_classes[k]]


@dataclass(frozen=True)
class PowerIterationResult:
    """Floating-point limit estimate from power iteration."""
    roster: CandidateRoster
    mass: np.ndarray
    steps: int
    l1_change: float


def transition_matrix(graph: PCGraph) -> TransitionMatrix:
    """Divide a complemented graph's weights by its normalizer N."""
    if graph.normalizer is None:
        raise InputError("transition matrix needs a complemented graph")
    if graph.normalizer == 0:
        raise EmptyElectorateError("normalizer is 0: no voters or a single candidate")
    n = graph.normalizer
    return TransitionMatrix(graph.roster, tuple(tuple(Fraction(w, n) for w in row) for row in graph.weights))


def tarjan(vertices: Iterable[int], neighbours: Callable[[int], Iterable[int]]) -> Iterator[Set[int]]:
    """Strongly connected components, yielded in reverse topological order."""
    def strongconnect(v):
        index[v] = lowlink[v] = next(indices)
        stack.append(v)
        on_stack.add(v)

        for w in neighbours(v):
            if w not in index:
                yield from strongconnect(w)
                lowlink[v] = min(lowlink[v], lowlink[w])
            elif w in on_stack:
                lowlink[v] = min(lowlink[v], index[w])

        if lowlink[v] == index[v]:
            scc = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                scc.add(w)
                if w == v:
                    break
            yield scc

    indices = itertools.count()
    stack: List[int] = []
    on_stack: Set[int] = set()
    index: Dict[int, int] = {}
    lowlink: Dict[int, int] = {}
    for v in vertices:
        if v not in index:
            yield from strongconnect(v)


def stationary_of_class(t: TransitionMatrix) -> Distribution:
    """Unique stationary distribution of an irreducible chain.

    Solves (T^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    """
    size = len(t)
    components = list(tarjan(range(size), t.successors))
    if len(components) != 1:
        raise NotIrreducibleError(f"chain over {list(t.roster)} has {len(components)} communication classes")

    a = fraction_matrix(t.p).T - identity_matrix(size)
    a[size - 1, :] = Fraction(1)
    b = np.array([Fraction(0)] * (size - 1) + [Fraction(1)], dtype=object)
    pi = solve(a, b)
    return Distribution(t.roster, tuple(pi))


def decompose(t: TransitionMatrix) -> ChainDecomposition:
    """Split states into closed communication classes and transient states."""
    size = len(t)
    components = list(tarjan(range(size), t.successors))

    closed: List[Tuple[int, ...]] = []
    for component in components:
        if all(j in component for i in component for j in t.successors(i)):
            closed.append(tuple(sorted(component)))
    closed.sort()
    in_class = {i for states in closed for i in states}
    transient = tuple(i for i in range(size) if i not in in_class)

    stationaries = tuple(stationary_of_class(t.restrict(states)).mass for states in closed)

    absorption: Tuple[Tuple[Fraction, ...], ...] = ()
    if transient:
        # (I - Q) X = S, where S[t][k] is the one-step mass from transient t into class k
        q = fraction_matrix([[t.p[i][j] for j in transient] for i in transient])
        s = fraction_matrix([[sum(t.p[i][j] for j in states) for states in closed] for i in transient])
        x = solve(identity_matrix(len(transient)) - q, s)
        absorption = tuple(tuple(Fraction(v) for v in row) for row in x)

    if len(closed) > 1:
        logger.warning(f"Chain has {len(closed)} closed classes; uncompared groups split the outcome")
    logger.debug(f"Decomposed chain: classes={closed}, transient={transient}")
    return ChainDecomposition(t.roster, tuple(closed), transient, stationaries, absorption)


def limit_from(t: TransitionMatrix, start: Distribution,
               decomposition: Optional[ChainDecomposition] = None) -> Distribution:
    """Limit of start @ T^n (the Cesaro limit when a recurrent class is periodic)."""
    if start.roster != t.roster:
        raise InputError("start distribution and chain use different rosters")
    d = decomposition or decompose(t)
    position = {state: row for row, state in enumerate(d.transient)}

    mass = [Fraction(0)] * len(t)
    for k, states in enumerate(d.closed_classes):
        class_mass = sum((start.mass[i] for i in states), Fraction(0))
        class_mass += sum((start.mass[s] * d.absorption[position[s]][k] for s in d.transient), Fraction(0))
        for i, share in zip(states, d.class_stationaries[k]):
            mass[i] = class_mass * share
    return Distribution(t.roster, tuple(mass))


def power_iterate(t: TransitionMatrix, start: Distribution, tol: Optional[float] = None,
                  max_steps: Optional[int] = None) -> PowerIterationResult:
    """Iterate rho <- rho @ T in floating point until the L1 change drops below tol."""
    tol = config.POWER_TOL if tol is None else tol
    max_steps = config.POWER_MAX_STEPS if max_steps is None else max_steps
    if tol <= 0:
        raise InputError("tol must be positive")
    matrix = t.as_array()
    rho = start.as_array()
    change = float('inf')

    for step in range(1, max_steps + 1):
        rho_next = rho @ matrix
        change = float(np.abs(rho_next - rho).sum())
        rho = rho_next
        if change < tol:
            logger.debug(f"Power iteration converged after {step} steps")
            return PowerIterationResult(t.roster, rho, step, change)

    raise ConvergenceError(f"power iteration did not converge in {max_steps} steps "
                           f"(last L1 change {change:.3g})")


def closed_class_report(t: TransitionMatrix) -> List[str]:
    """One line per closed class plus the transient candidates."""
    d = decompose(t)
    lines = [f"closed class {k + 1}: {', '.join(d.class_names(k))}" for k in range(len(d.closed_classes))]
    if d.transient:
        lines.append(f"transient: {', '.join(t.roster.names[i] for i in d.transient)}")
    return lines
