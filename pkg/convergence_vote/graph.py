"""Condorcet, complemented and atomic pairwise-comparison graphs."""

import json
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .ballots import CandidateRoster, PairwiseCounts
from .config import config
from .errors import InputError, NormalizerError

logger = logging.getLogger(__name__)

Weights = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class PCGraph:
    """Weighted directed graph over candidates.

    weights[x][y] is the weight on edge x -> y; the diagonal holds loop
    weights. `normalizer` is set only on complemented graphs, whose rows all
    sum to it.
    """
    roster: CandidateRoster
    weights: Weights
    normalizer: Optional[int] = None

    def __post_init__(self):
        size = len(self.roster)
        if len(self.weights) != size or any(len(row) != size for row in self.weights):
            raise InputError(f"weight matrix does not match {size} candidates")
        if any(w < 0 for row in self.weights for w in row):
            raise InputError("edge weights must be non-negative")
        if self.normalizer is not None and any(sum(row) != self.normalizer for row in self.weights):
            raise NormalizerError(f"rows do not all sum to N={self.normalizer}")

    @property
    def is_complemented(self) -> bool:
        return self.normalizer is not None

    def weight(self, x: str, y: str) -> int:
        return self.weights[self.roster.index(x)][self.roster.index(y)]

    def out_weight(self, x: int) -> int:
        """Sum of off-diagonal weights leaving candidate index x."""
        return sum(w for y, w in enumerate(self.weights[x]) if y != x)


def _freeze(rows: List[List[int]]) -> Weights:
    return tuple(tuple(row) for row in rows)


def condorcet_graph(counts: PairwiseCounts) -> PCGraph:
    """Edge x -> y weighted by the voters preferring y over x; no loops."""
    size = len(counts.roster)
    rows = [[counts.n[x][y] if x != y else 0 for y in range(size)] for x in range(size)]
    return PCGraph(counts.roster, _freeze(rows))


def default_normalizer(voters: int, candidates: int) -> int:
    return voters * (candidates - 1)


def complement(graph: PCGraph, voters: int, normalizer_override: Optional[int] = None) -> PCGraph:
    """Pad every row with a loop so that all rows sum to N."""
    size = len(graph.roster)
    if any(graph.weights[x][x] for x in range(size)):
        raise InputError("complement expects a Condorcet graph without loops")

    normalizer = default_normalizer(voters, size) if normalizer_override is None else normalizer_override
    rows = [list(row) for row in graph.weights]
    for x in range(size):
        out = graph.out_weight(x)
        if out > normalizer:
            raise NormalizerError(
                f"normalizer {normalizer} is smaller than the out-weight {out} "
                f"of {graph.roster.names[x]}")
        rows[x][x] = normalizer - out

    logger.debug(f"Complemented graph over {size} candidates with N={normalizer}")
    return PCGraph(graph.roster, _freeze(rows), normalizer)


def atomic_graph(counts: PairwiseCounts, voters: int, a: str, b: str) -> PCGraph:
    """The single-pair graph G_ab: edge a -> b and a loop for the remaining voters."""
    if a == b:
        raise InputError(f"atomic graph needs two distinct candidates, got {a!r} twice")
    i, j = counts.roster.index(a), counts.roster.index(b)
    size = len(counts.roster)
    rows = [[0] * size for _ in range(size)]
    rows[i][j] = counts.n[i][j]
    rows[i][i] = voters - counts.n[i][j]
    return PCGraph(counts.roster, _freeze(rows))


def graph_union(g1: PCGraph, g2: PCGraph) -> PCGraph:
    """Entrywise sum over the ordered union of the two rosters."""
    roster = g1.roster.union(g2.roster)
    size = len(roster)
    rows = [[0] * size for _ in range(size)]
    for graph in (g1, g2):
        positions = [roster.index(name) for name in graph.roster]
        for x, px in enumerate(positions):
            for y, py in enumerate(positions):
                rows[px][py] += graph.weights[x][y]

    normalizer = None
    if g1.normalizer is not None and g2.normalizer is not None and g1.roster == g2.roster:
        normalizer = g1.normalizer + g2.normalizer
    return PCGraph(roster, _freeze(rows), normalizer)


def dot_id(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def export_graph(graph: PCGraph, fmt: str = 'dot') -> str:
    """Deterministic DOT or JSON rendering in roster order."""
    if fmt == 'json':
        return json.dumps({
            'schema_version': config.SCHEMA_VERSION,
            'candidates': list(graph.roster.names),
            'N': graph.normalizer,
            'weights': [list(row) for row in graph.weights],
        }, indent=2)

    if fmt != 'dot':
        raise InputError(f"unknown graph format {fmt!r}")

    name = 'complemented' if graph.is_complemented else 'condorcet'
    lines = [f"digraph {name} {{"]
    if graph.is_complemented:
        lines.append(f'  label="N = {graph.normalizer}";')
    for candidate in graph.roster:
        lines.append(f"  {dot_id(candidate)};")
    for x, source in enumerate(graph.roster):
        for y, target in enumerate(graph.roster):
            weight = graph.weights[x][y]
            if weight:
                lines.append(f'  {dot_id(source)} -> {dot_id(target)} [label="{weight}"];')
    lines.append("}")
    return '\n'.join(lines) + '\n'
