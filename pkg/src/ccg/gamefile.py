"""JSON game file format.

A game file is a single JSON object:

    {
      "resources": ["A", "B"],
      "players": 4,
      "costs": {"A": [0, 12, 16, 18], "B": [0, 12, 16, 18]},
      "strategies": "simple",
      "partition": [[1, 2, 3], [4]]
    }

Rationals are integers or "p/q" strings; floats are rejected. "strategies"
is either the literal string "simple" or a map from 1-based sub-agent id to
an array of resource-id arrays. Sub-agent ids in "partition" are 1-based.

Emission is deterministic: keys in the order above, resources sorted, block
members ascending and blocks ordered by first member. The resources array
defines the canonical resource order of the loaded game.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import GameFileError
from .game import CongestionGame, CostTable, Partition
from .rationals import as_fraction, format_rational

GameWithPartition = tuple[CongestionGame, Partition]


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise GameFileError(f"{where}: floats are not allowed, use ints or 'p/q' strings")
    try:
        return as_fraction(value)
    except (TypeError, GameFileError) as exc:
        raise GameFileError(f"{where}: {exc}") from exc


def game_to_dict(game: CongestionGame, partition: Partition) -> dict:
    resources = sorted(game.resources)
    costs = {r: [format_rational(v) for v in game.costs[r].values] for r in resources}
    if game.is_simple:
        strategies = "simple"
    else:
        strategies = {
            str(i + 1): [list(choice) for choice in strat_set]
            for i, strat_set in enumerate(game.strategy_sets)
        }
    return {
        "resources": resources,
        "players": game.n,
        "costs": costs,
        "strategies": strategies,
        "partition": partition.one_based(),
    }


def dumps_game(game: CongestionGame, partition: Partition) -> str:
    return json.dumps(game_to_dict(game, partition), indent=2) + "\n"


def dict_to_game(obj) -> GameWithPartition:
    if not isinstance(obj, dict):
        raise GameFileError(f"game file must be a JSON object, got {type(obj).__name__}")
    missing = [k for k in ("resources", "players", "costs", "strategies", "partition") if k not in obj]
    if missing:
        raise GameFileError(f"missing keys: {', '.join(missing)}")

    resources = obj["resources"]
    if not isinstance(resources, list) or not all(isinstance(r, str) for r in resources):
        raise GameFileError("'resources' must be an array of strings")
    n = obj["players"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GameFileError("'players' must be a positive integer")

    costs_obj = obj["costs"]
    if not isinstance(costs_obj, dict):
        raise GameFileError("'costs' must be a map resource -> array")
    costs = {}
    for r, values in costs_obj.items():
        if not isinstance(values, list):
            raise GameFileError(f"costs[{r}] must be an array")
        costs[r] = CostTable(tuple(_parse_rational(v, f"costs[{r}][{j + 1}]") for j, v in enumerate(values)))

    strategies = obj["strategies"]
    if strategies == "simple":
        singles = tuple((r,) for r in resources)
        strategy_sets = tuple(singles for _ in range(n))
    elif isinstance(strategies, dict):
        strategy_sets = []
        for i in range(1, n + 1):
            raw = strategies.get(str(i))
            if raw is None:
                raise GameFileError(f"'strategies' has no entry for sub-agent {i}")
            if not isinstance(raw, list) or not all(isinstance(c, list) for c in raw):
                raise GameFileError(f"strategies[{i}] must be an array of resource-id arrays")
            strategy_sets.append(tuple(tuple(str(r) for r in choice) for choice in raw))
        strategy_sets = tuple(strategy_sets)
    else:
        raise GameFileError("'strategies' must be \"simple\" or a map of sub-agent ids")

    partition_obj = obj["partition"]
    if not isinstance(partition_obj, list) or not all(isinstance(b, list) for b in partition_obj):
        raise GameFileError("'partition' must be an array of arrays of 1-based sub-agent ids")
    try:
        partition = Partition.from_one_based(partition_obj)
        game = CongestionGame(tuple(resources), costs, strategy_sets)
        partition.validate_for(n)
    except Exception as exc:
        raise GameFileError(str(exc)) from exc
    if game.n != n:
        raise GameFileError(f"'players' is {n} but {game.n} strategy sets were built")
    return game, partition


def loads_game(text: str) -> GameWithPartition:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"invalid JSON: {exc}") from exc
    return dict_to_game(obj)


def load_game_file(path: str | Path) -> GameWithPartition:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GameFileError(f"cannot read {path}: {exc}") from exc
    return loads_game(text)


def write_game_file(path: str | Path, game: CongestionGame, partition: Partition) -> None:
    Path(path).write_text(dumps_game(game, partition))
