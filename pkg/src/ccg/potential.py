"""Exact-potential analysis of finite strategic-form games.

An exact potential is a single function over joint profiles whose change
under any unilateral deviation equals the deviating player's utility change.
Existence is decided constructively: integrate utility differences along the
lexicographic path from the all-first-strategies profile, then verify the
candidate on every deviation. For finite games this is sound and complete,
and on failure some deviation square (a *four-cycle*: two players, two
strategies each) must carry a nonzero residual, which is extracted as a
witness.

The module also ties potential existence back to congestion structure: for a
simple game with a partition containing at least one singleton and one pair
(and at least two resources), an induced coalitional game has an exact
potential exactly when every resource cost table is affine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    CoverageMismatchError,
    InvalidIndicesError,
    LinearityEquivalenceViolationError,
    PreconditionViolatedError,
)
from .game import (
    CoalitionalGame,
    CongestionGame,
    CostTable,
    Partition,
    PureProfile,
    StrategicForm,
    as_profile,
    block_strategy_label,
    canonical_block_strategies,
    coalition_utility,
    materialize,
)
from .limits import ensure_within_limit


@dataclass(frozen=True)
class PotentialTable:
    """Candidate potential values, one per joint strategy index tuple."""

    values: Mapping[tuple[int, ...], Fraction]


@dataclass(frozen=True)
class PotentialViolation:
    """First deviation where a candidate table breaks the defining equation."""

    profile: tuple[int, ...]
    player: int
    alternative: int
    potential_delta: Fraction
    utility_delta: Fraction


@dataclass(frozen=True)
class FourCycleWitness:
    """A deviation square with nonzero residual: proof that no exact
    potential exists."""

    player_i: int
    player_j: int
    profile: tuple[int, ...]
    alt_i: int
    alt_j: int
    residual: Fraction

    def cycle_profiles(self) -> tuple[tuple[int, ...], ...]:
        """The four corners in traversal order."""
        s = self.profile
        p10 = s[: self.player_i] + (self.alt_i,) + s[self.player_i + 1 :]
        p11 = p10[: self.player_j] + (self.alt_j,) + p10[self.player_j + 1 :]
        p01 = s[: self.player_j] + (self.alt_j,) + s[self.player_j + 1 :]
        return (s, p10, p11, p01)


@dataclass(frozen=True)
class PotentialVerdict:
    """Either a verified potential table or a four-cycle witness."""

    table: PotentialTable | None
    witness: FourCycleWitness | None

    @property
    def has_potential(self) -> bool:
        return self.table is not None


@dataclass(frozen=True)
class LinearityEntry:
    """Affinity report for one cost table: P(j) = slope * j + intercept."""

    linear: bool
    slope: Fraction | None
    intercept: Fraction | None
    first_violation: int | None


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Joint verdict of cost linearity and potential existence.

    `consistent` is None when the partition shape makes the equivalence
    inapplicable; when applicable, inconsistency raises instead.
    """

    applicable: bool
    all_linear: bool
    has_potential: bool
    consistent: bool | None
    potential: PotentialVerdict
    linearity: dict[str, LinearityEntry]


def build_potential_by_path(game: StrategicForm, limit: int | None = None) -> PotentialTable:
    """Integrate utility differences along one-coordinate steps from the
    all-first-strategies profile (anchored at zero).

    The table is well-defined for any finite game; whether it actually is a
    potential is decided by `verify_exact_potential`.
    """
    ensure_within_limit(game.num_profiles(), limit, "potential table")
    values: dict[tuple[int, ...], Fraction] = {}
    for profile in game.profiles():
        last = None
        for i in range(game.players - 1, -1, -1):
            if profile[i] != 0:
                last = i
                break
        if last is None:
            values[profile] = Fraction(0)
            continue
        prev = profile[:last] + (0,) + profile[last + 1 :]
        values[profile] = values[prev] + game.utility(profile, last) - game.utility(prev, last)
    return PotentialTable(values)


def verify_exact_potential(
    game: StrategicForm, table: PotentialTable
) -> tuple[bool, PotentialViolation | None]:
    """Check the potential equation on every unilateral deviation, exactly.

    Returns (True, None) or (False, first violation) in lexicographic order
    of (profile, player, alternative). Each undirected deviation edge is
    checked once; the equation is antisymmetric so this covers both
    directions.
    """
    values = table.values
    for profile in game.profiles():
        p_here = values[profile]
        u_here = game.utilities[profile]
        for i in range(game.players):
            for t in range(profile[i] + 1, len(game.strategies[i])):
                other = profile[:i] + (t,) + profile[i + 1 :]
                pot_delta = p_here - values[other]
                util_delta = u_here[i] - game.utility(other, i)
                if pot_delta != util_delta:
                    return False, PotentialViolation(profile, i, t, pot_delta, util_delta)
    return True, None


def four_cycle_residual(
    game: StrategicForm,
    i: int,
    j: int,
    s: tuple[int, ...],
    t_i: int,
    t_j: int,
) -> Fraction:
    """Signed utility change around the deviation square spanned by players
    i and j moving to t_i and t_j. Zero on every square iff the game has an
    exact potential."""
    if i == j:
        raise InvalidIndicesError("players must differ")
    for player in (i, j):
        if not 0 <= player < game.players:
            raise InvalidIndicesError(f"player {player} outside 0..{game.players - 1}")
    if len(s) != game.players or any(
        not 0 <= si < len(game.strategies[k]) for k, si in enumerate(s)
    ):
        raise InvalidIndicesError(f"bad profile {s}")
    if not 0 <= t_i < len(game.strategies[i]):
        raise InvalidIndicesError(f"bad alternative {t_i} for player {i}")
    if not 0 <= t_j < len(game.strategies[j]):
        raise InvalidIndicesError(f"bad alternative {t_j} for player {j}")

    p00 = s
    p10 = s[:i] + (t_i,) + s[i + 1 :]
    p11 = p10[:j] + (t_j,) + p10[j + 1 :]
    p01 = s[:j] + (t_j,) + s[j + 1 :]
    return (
        (game.utility(p00, i) - game.utility(p10, i))
        + (game.utility(p10, j) - game.utility(p11, j))
        + (game.utility(p11, i) - game.utility(p01, i))
        + (game.utility(p01, j) - game.utility(p00, j))
    )


def _find_nonzero_cycle(game: StrategicForm) -> FourCycleWitness | None:
    """Lexicographically first deviation square with nonzero residual."""
    for i in range(game.players):
        for j in range(i + 1, game.players):
            for s in game.profiles():
                for t_i in range(s[i] + 1, len(game.strategies[i])):
                    for t_j in range(s[j] + 1, len(game.strategies[j])):
                        residual = four_cycle_residual(game, i, j, s, t_i, t_j)
                        if residual != 0:
                            return FourCycleWitness(i, j, s, t_i, t_j, residual)
    return None


def exact_potential(game: StrategicForm, limit: int | None = None) -> PotentialVerdict:
    """Decide exact-potential existence; return the table or a witness.

    If an exact potential exists, path integration reconstructs it (up to
    the anchoring constant), so verification failure proves non-existence
    and guarantees a nonzero four-cycle can be found.
    """
    candidate = build_potential_by_path(game, limit=limit)
    ok, _ = verify_exact_potential(game, candidate)
    if ok:
        return PotentialVerdict(candidate, None)
    witness = _find_nonzero_cycle(game)
    if witness is None:
        raise PreconditionViolatedError("verification failed but every four-cycle is zero (bug)")
    return PotentialVerdict(None, witness)


# ---------------------------------------------------------------------------
# Cost linearity


def is_linear(table: CostTable) -> LinearityEntry:
    """Affine check via second differences; reports slope and intercept when
    they exist. Tables of length at most two are trivially affine."""
    v = table.values
    for j in range(1, len(v) - 1):
        if v[j + 1] - 2 * v[j] + v[j - 1] != 0:
            return LinearityEntry(False, None, None, j + 1)
    if len(v) >= 2:
        slope = v[1] - v[0]
    else:
        slope = Fraction(0)
    intercept = v[0] - slope
    return LinearityEntry(True, slope, intercept, None)


def linearity_report(g: CongestionGame) -> dict[str, LinearityEntry]:
    return {r: is_linear(g.costs[r]) for r in g.resources}


def check_linearity_equivalence(
    g: CongestionGame, partition: Partition, limit: int | None = None
) -> EquivalenceVerdict:
    """Run both sides of the linearity/potential equivalence.

    Applicable when the base game is simple with at least two resources and
    the partition holds at least one singleton and one pair (with a single
    resource the strategy space is trivial, so a potential exists no matter
    the cost shape). When applicable the two verdicts must agree; raises
    otherwise. Both are computed regardless so the caller always sees them.
    """
    if not g.is_simple:
        raise PreconditionViolatedError("equivalence check needs a simple game")
    partition.validate_for(g.n)
    report = linearity_report(g)
    all_linear = all(entry.linear for entry in report.values())
    verdict = exact_potential(materialize(CoalitionalGame(g, partition), limit=limit), limit=limit)
    applicable = (
        bool(partition.singletons()) and bool(partition.pairs()) and len(g.resources) >= 2
    )
    consistent: bool | None = None
    if applicable:
        consistent = all_linear == verdict.has_potential
        if not consistent:
            raise LinearityEquivalenceViolationError(
                f"all_linear={all_linear} but has_potential={verdict.has_potential}"
            )
    return EquivalenceVerdict(applicable, all_linear, verdict.has_potential, consistent, verdict, report)


# ---------------------------------------------------------------------------
# Frozen-context subgames


def fix_strategies_subgame(
    cg: CoalitionalGame, fixed: Mapping[int, object], free_blocks: Iterable[int]
) -> StrategicForm:
    """Strategic form over a subset of blocks with everyone else frozen.

    `fixed` maps each sub-agent outside the free blocks to its frozen choice;
    it must cover exactly those sub-agents. With all blocks free this is just
    materialization.
    """
    free = sorted(set(free_blocks))
    for k in free:
        cg.block(k)
    free_agents = {i for k in free for i in cg.blocks[k]}
    frozen_agents = set(range(cg.base.n)) - free_agents
    if set(fixed) != frozen_agents:
        raise CoverageMismatchError(
            f"fixed profile covers {sorted(fixed)}, expected {sorted(frozen_agents)}"
        )

    base_choices = list(
        as_profile(
            cg.base,
            [fixed.get(i, cg.base.resources[0]) for i in range(cg.base.n)],
        ).choices
    )
    strats = [canonical_block_strategies(cg, k) for k in free]
    labels = tuple(tuple(block_strategy_label(t) for t in per_block) for per_block in strats)

    utilities: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    for idx in itertools.product(*(range(len(s)) for s in strats)):
        choices = list(base_choices)
        for pos, k in enumerate(free):
            for i, choice in zip(cg.blocks[k], strats[pos][idx[pos]]):
                choices[i] = choice
        profile = PureProfile(tuple(choices))
        utilities[idx] = tuple(coalition_utility(cg, profile, k) for k in free)
    return StrategicForm(labels, utilities)
