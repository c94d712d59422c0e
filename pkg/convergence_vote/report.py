"""Table and JSON rendering for command-line output."""

import json
from typing import Dict, List, Optional

import pandas as pd

from .chain import TransitionMatrix
from .config import config
from .errors import InputError
from .graph import dot_id
from .rules import RuleOutcome, Scoreboard, rank
from .seats import SeatAllocation
from .simulate import SupportTrajectory, WalkReport
from .utils import decimal_string, fraction_string, fraction_to_json


def _table(rows: List[Dict[str, object]]) -> str:
    return pd.DataFrame(rows).fillna('-').to_string(index=False)


def ranking_line(board: Scoreboard) -> str:
    """'B > C > A', with '=' inside a tier."""
    return ' > '.join(' = '.join(tier) for tier in rank(board).tiers)


def scoreboard_json(board: Scoreboard) -> Dict[str, object]:
    ranking = rank(board)
    return {
        'schema_version': config.SCHEMA_VERSION,
        'rule': board.rule,
        'scores': {name: fraction_to_json(v) for name, v in board.as_dict().items()},
        'ranking': [list(tier) for tier in ranking.tiers],
        'winner': ranking.winners or None,
    }


def scoreboard_table(board: Scoreboard, notes: Optional[List[str]] = None) -> str:
    ranking = rank(board)
    tier_of = {name: number for number, tier in enumerate(ranking.tiers, start=1) for name in tier}
    rows = [{
        'candidate': name,
        'score': fraction_string(score),
        'decimal': decimal_string(score),
        'tier': tier_of[name],
    } for name, score in board.as_dict().items()]
    lines = [f"rule: {board.rule}", _table(rows), f"ranking: {ranking_line(board)}"]
    lines.extend(notes or [])
    return '\n'.join(lines)


def comparison_json(outcomes: Dict[str, RuleOutcome]) -> Dict[str, object]:
    return {
        'schema_version': config.SCHEMA_VERSION,
        'rules': [outcome.to_json() for outcome in outcomes.values()],
    }


def comparison_table(outcomes: Dict[str, RuleOutcome]) -> str:
    rows = []
    for name, outcome in outcomes.items():
        row: Dict[str, object] = {'rule': name}
        if outcome.error is not None:
            row['winner'] = f"n/a ({outcome.error})"
        else:
            row['winner'] = ', '.join(outcome.winners) if outcome.winners else 'none'
            for candidate, score in outcome.board.as_dict().items():
                row[candidate] = fraction_string(score)
        rows.append(row)
    return _table(rows)


def chain_export(t: TransitionMatrix, fmt: str = 'dot') -> str:
    """Transition matrix as DOT (fraction labels) or JSON (fraction triples)."""
    if fmt == 'json':
        return json.dumps({
            'schema_version': config.SCHEMA_VERSION,
            'candidates': list(t.roster.names),
            'matrix': [[fraction_to_json(v) for v in row] for row in t.p],
        }, indent=2)
    if fmt != 'dot':
        raise InputError(f"unknown graph format {fmt!r}")

    lines = ["digraph chain {"]
    for name in t.roster:
        lines.append(f"  {dot_id(name)};")
    for i, source in enumerate(t.roster):
        for j, target in enumerate(t.roster):
            if t.p[i][j]:
                lines.append(f'  {dot_id(source)} -> {dot_id(target)} [label="{fraction_string(t.p[i][j])}"];')
    lines.append("}")
    return '\n'.join(lines) + '\n'


def seats_json(allocation: SeatAllocation, board: Scoreboard) -> Dict[str, object]:
    return {
        'schema_version': config.SCHEMA_VERSION,
        'method': allocation.method,
        'total': allocation.total,
        'tie_break': 'roster order',
        'seats': allocation.as_dict(),
        'scores': {name: fraction_to_json(v) for name, v in board.as_dict().items()},
    }


def seats_table(allocation: SeatAllocation, board: Scoreboard) -> str:
    rows = [{
        'candidate': name,
        'score': fraction_string(board[name]),
        'seats': seats,
    } for name, seats in allocation.as_dict().items()]
    return '\n'.join([
        _table(rows),
        f"method: {allocation.method}, total {allocation.total} (ties broken by roster order)",
    ])


def trajectory_table(trajectory: SupportTrajectory) -> str:
    rows = [{
        'candidate': name,
        'support': decimal_string(value) if trajectory.exact else f"{value:.12g}",
    } for name, value in zip(trajectory.roster.names, trajectory.final)]
    status = (f"converged after {trajectory.converged_at} rounds"
              if trajectory.converged_at is not None
              else f"not converged after {len(trajectory.steps) - 1} rounds")
    return '\n'.join([_table(rows), status])


def walk_table(report: WalkReport) -> str:
    rows = [{
        'candidate': name,
        'visits': count,
        'frequency': f"{freq:.6f}",
    } for name, count, freq in zip(report.roster.names, report.visit_counts, report.frequencies)]
    return '\n'.join([_table(rows), f"steps: {report.steps}, seed: {report.seed}"])


def dumps(doc: Dict[str, object]) -> str:
    return json.dumps(doc, indent=2)
