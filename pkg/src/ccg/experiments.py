"""Batch experiments over seeded random instances.

Each experiment returns a JSON-ready dict. All randomness comes from the
given seed, so a (kind, seed, trials, size) tuple pins the exact instance
stream and therefore the exact report.
"""

from __future__ import annotations

import random

from .equilibria import enumerate_pure_ne, is_ccg_ne
from .game import CoalitionalGame, materialize
from .gamefile import game_to_dict
from .instances import no_ne_triple_fixture, random_game, random_partition
from .pair_solver import solve_pair_ccg
from .potential import check_linearity_equivalence, four_cycle_residual

MAX_REPORTED_COUNTEREXAMPLES = 5


def pair_solver_sweep(
    trials: int, seed, max_players: int = 6, max_resources: int = 4
) -> dict:
    """Run the constructive pair solver on random instances and verify each
    output independently; also confirm by direct search that an equilibrium
    exists at all. Both counts must equal `trials`."""
    driver = random.Random(f"pair-sweep:{seed}")
    verified = 0
    nonempty = 0
    failures: list[dict] = []
    for t in range(trials):
        n = driver.randint(1, max_players)
        r = driver.randint(1, max_resources)
        game = random_game(f"{seed}:{t}", n, r, "monotone")
        partition = random_partition(f"{seed}:{t}", n, min(2, n))
        cg = CoalitionalGame(game, partition)
        trace = solve_pair_ccg(game, partition)
        if is_ccg_ne(cg, trace.result):
            verified += 1
        else:
            failures.append({"trial": t, "game": game_to_dict(game, partition)})
        if not enumerate_pure_ne(cg, stop_after=1).is_empty:
            nonempty += 1
    return {
        "kind": "theorem1",
        "trials": trials,
        "verified": verified,
        "ne_nonempty": nonempty,
        "failures": failures,
    }


def linearity_sweep(
    trials: int, seed, max_players: int = 5, max_resources: int = 3
) -> dict:
    """Confusion matrix of (all costs affine) versus (exact potential exists)
    over partitions with a singleton and a pair. The off-diagonal cells must
    stay empty; every negative verdict's witness is re-evaluated."""
    driver = random.Random(f"linearity-sweep:{seed}")
    confusion = {
        "linear+potential": 0,
        "linear+none": 0,
        "nonlinear+potential": 0,
        "nonlinear+none": 0,
    }
    witness_failures = 0
    for t in range(trials):
        n = driver.randint(3, max_players)
        r = driver.randint(2, max_resources)
        cost_class = "linear" if t % 2 == 0 else "monotone"
        game = random_game(f"{seed}:{t}", n, r, cost_class)
        partition = random_partition(
            f"{seed}:{t}", n, min(3, n), require_singleton_and_pair=True
        )
        verdict = check_linearity_equivalence(game, partition)
        key = ("linear" if verdict.all_linear else "nonlinear") + (
            "+potential" if verdict.has_potential else "+none"
        )
        confusion[key] += 1
        witness = verdict.potential.witness
        if witness is not None:
            sf = materialize(CoalitionalGame(game, partition))
            again = four_cycle_residual(
                sf, witness.player_i, witness.player_j, witness.profile, witness.alt_i, witness.alt_j
            )
            if again != witness.residual or again == 0:
                witness_failures += 1
    return {
        "kind": "theorem2",
        "trials": trials,
        "confusion": confusion,
        "witness_recheck_failures": witness_failures,
    }


def block_size_sweep(
    trials: int, seed, max_players: int = 6, max_resources: int = 4
) -> dict:
    """Frequency of empty equilibrium sets once blocks of three are allowed.

    Trial 0 is the canned triple-coalition instance, so at least one empty
    set is always observed. Counterexamples ship as game file objects.
    """
    driver = random.Random(f"block-sweep:{seed}")
    empty = 0
    injected_empty = False
    counterexamples: list[dict] = []
    for t in range(trials):
        if t == 0:
            fx = no_ne_triple_fixture()
            game, partition = fx.game, fx.partition
        else:
            n = driver.randint(3, max_players)
            r = driver.randint(2, max_resources)
            game = random_game(f"{seed}:{t}", n, r, "monotone")
            partition = random_partition(f"{seed}:{t}", n, min(3, n))
        cg = CoalitionalGame(game, partition)
        report = enumerate_pure_ne(cg, stop_after=1)
        if report.is_empty:
            empty += 1
            if t == 0:
                injected_empty = True
            if len(counterexamples) < MAX_REPORTED_COUNTEREXAMPLES:
                counterexamples.append(game_to_dict(game, partition))
    return {
        "kind": "pairs-vs-triples",
        "trials": trials,
        "empty_ne": empty,
        "injected_empty": injected_empty,
        "counterexamples": counterexamples,
    }


EXPERIMENTS = {
    "theorem1": pair_solver_sweep,
    "theorem2": linearity_sweep,
    "pairs-vs-triples": block_size_sweep,
}
