"""Coalitional congestion games: exact equilibrium and potential analysis.

Build congestion games and group their players into coalitions, then:

- enumerate pure Nash equilibria of the coalitional game exhaustively,
- construct one directly when every coalition has at most two members,
- decide exact-potential existence of any finite strategic-form game,
  returning either the potential table or a four-cycle witness,
- relate potential existence to cost linearity for simple games.

All arithmetic is exact (`fractions.Fraction`); every verdict is a rational
equality, never a tolerance check.
"""

from .equilibria import (
    BestReplySet,
    DeviationWitness,
    DynamicsResult,
    LiftVerdict,
    NeReport,
    check_ne_lift,
    check_ne_lift_restricted,
    coalition_best_response,
    enumerate_pure_ne,
    enumerate_pure_ne_restricted,
    find_deviation,
    in_restricted_space,
    is_ccg_ne,
    is_ne_congestion,
    pure_nash_equilibria,
    restricted_strategies,
    rosenthal_potential,
    underlying_pure_ne,
)
from .errors import (
    CcgError,
    GameFileError,
    InvalidGameError,
    InvalidParamsError,
    InvalidProfileError,
    PreconditionViolatedError,
    SizeLimitExceededError,
)
from .game import (
    CoalitionalGame,
    CongestionGame,
    CongestionVector,
    CostTable,
    Partition,
    PureProfile,
    StrategicForm,
    Violation,
    as_profile,
    assemble_profile,
    canonical_block_strategies,
    canonical_multiplicity,
    canonicalize,
    coalition_utility,
    congestion,
    congestion_distance,
    materialize,
    player_cost,
    private_congestion,
    validate_game,
)
from .gamefile import dumps_game, game_to_dict, load_game_file, loads_game, write_game_file
from .instances import (
    Fixture,
    canned_fixtures,
    evaluate_fixture,
    fixture_manifest,
    no_ne_overlap_fixture,
    no_ne_triple_fixture,
    parametric_two_resource_fixture,
    random_game,
    random_partition,
)
from .pair_solver import PairSolveTrace, arrange_distinct, arrange_hub, hub_improvement_loop, solve_pair_ccg
from .potential import (
    EquivalenceVerdict,
    FourCycleWitness,
    LinearityEntry,
    PotentialTable,
    PotentialVerdict,
    build_potential_by_path,
    check_linearity_equivalence,
    exact_potential,
    fix_strategies_subgame,
    four_cycle_residual,
    is_linear,
    linearity_report,
    verify_exact_potential,
)

__version__ = "0.1.0"

__all__ = [
    "BestReplySet",
    "CcgError",
    "CoalitionalGame",
    "CongestionGame",
    "CongestionVector",
    "CostTable",
    "DeviationWitness",
    "DynamicsResult",
    "EquivalenceVerdict",
    "Fixture",
    "FourCycleWitness",
    "GameFileError",
    "InvalidGameError",
    "InvalidParamsError",
    "InvalidProfileError",
    "LiftVerdict",
    "LinearityEntry",
    "NeReport",
    "PairSolveTrace",
    "Partition",
    "PotentialTable",
    "PotentialVerdict",
    "PreconditionViolatedError",
    "PureProfile",
    "SizeLimitExceededError",
    "StrategicForm",
    "Violation",
    "arrange_distinct",
    "arrange_hub",
    "as_profile",
    "assemble_profile",
    "build_potential_by_path",
    "canned_fixtures",
    "canonical_block_strategies",
    "canonical_multiplicity",
    "canonicalize",
    "check_linearity_equivalence",
    "check_ne_lift",
    "check_ne_lift_restricted",
    "coalition_best_response",
    "coalition_utility",
    "congestion",
    "congestion_distance",
    "dumps_game",
    "enumerate_pure_ne",
    "enumerate_pure_ne_restricted",
    "evaluate_fixture",
    "exact_potential",
    "find_deviation",
    "fix_strategies_subgame",
    "fixture_manifest",
    "four_cycle_residual",
    "game_to_dict",
    "hub_improvement_loop",
    "in_restricted_space",
    "is_ccg_ne",
    "is_linear",
    "is_ne_congestion",
    "linearity_report",
    "load_game_file",
    "loads_game",
    "materialize",
    "no_ne_overlap_fixture",
    "no_ne_triple_fixture",
    "parametric_two_resource_fixture",
    "player_cost",
    "private_congestion",
    "pure_nash_equilibria",
    "random_game",
    "random_partition",
    "restricted_strategies",
    "rosenthal_potential",
    "solve_pair_ccg",
    "underlying_pure_ne",
    "validate_game",
    "verify_exact_potential",
    "write_game_file",
]
