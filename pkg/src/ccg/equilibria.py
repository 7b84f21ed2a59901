"""Pure Nash equilibrium machinery.

Covers the underlying simple game (best-response dynamics driven by the
classic Rosenthal potential), coalition best replies, exhaustive coalitional
equilibrium enumeration, the restricted variant where block members must
occupy distinct resources, and executable checkers for the two lifting
statements: an equilibrium congestion vector realized with per-block-distinct
resources is an equilibrium of the coalitional game (restricted or not).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InvalidVectorError,
    NeLiftViolationError,
    PreconditionViolatedError,
    RestrictedNeLiftViolationError,
)
from .game import (
    BlockStrategy,
    CoalitionalGame,
    CongestionGame,
    CongestionVector,
    PureProfile,
    StrategicForm,
    assemble_profile,
    canonical_block_strategies,
    canonical_multiplicity,
    canonicalize,
    congestion,
    contribution,
    private_congestion,
    validate_profile,
)
from .limits import ensure_within_limit


@dataclass(frozen=True)
class BestReplySet:
    """All strategy tuples of one block that maximize its utility against a
    fixed opponent profile, together with the common best value."""

    block: int
    replies: tuple[BlockStrategy, ...]
    value: Fraction


@dataclass(frozen=True)
class DeviationWitness:
    """A strictly improving unilateral block deviation."""

    block: int
    strategy: BlockStrategy
    current_value: Fraction
    best_value: Fraction


@dataclass(frozen=True)
class NeReport:
    """Result of an equilibrium enumeration.

    `equilibria` holds canonical profiles in lexicographic order. When the
    search was stopped early (`exhaustive` False) the list is a prefix of the
    full answer. `multiplicities` counts the raw profiles each canonical
    equilibrium represents.
    """

    equilibria: tuple[PureProfile, ...]
    multiplicities: tuple[int, ...]
    exhaustive: bool
    profiles_checked: int

    @property
    def is_empty(self) -> bool:
        return not self.equilibria


@dataclass(frozen=True)
class DynamicsMove:
    agent: int
    source: str
    target: str
    cost_before: Fraction
    cost_after: Fraction


@dataclass(frozen=True)
class DynamicsResult:
    """Trace of best-response dynamics on a simple game."""

    start: PureProfile
    profile: PureProfile
    moves: tuple[DynamicsMove, ...]


@dataclass(frozen=True)
class LiftVerdict:
    """Outcome of a lifting check: `holds` is None when not applicable."""

    applicable: bool
    holds: bool | None


# ---------------------------------------------------------------------------
# Underlying simple game


def rosenthal_potential(g: CongestionGame, s: PureProfile) -> Fraction:
    """Sum over resources of the cost prefix up to the occupancy: the classic
    exact potential of a congestion game. Each unilateral move changes it by
    exactly the mover's cost change."""
    c = congestion(g, s)
    total = Fraction(0)
    for r in g.resources:
        table = g.costs[r].values
        for j in range(c[r]):
            total += table[j]
    return total


def is_ne_congestion(g: CongestionGame, c: CongestionVector) -> bool:
    """Decide whether a congestion vector belongs to an equilibrium of a
    simple game: on every occupied resource, staying is weakly cheaper than
    any single move away. Sufficient and necessary because simple-game costs
    depend on choices only through occupancies."""
    if not g.is_simple:
        raise PreconditionViolatedError("equilibrium congestion test needs a simple game")
    if tuple(c.resources) != g.resources:
        raise InvalidVectorError(f"vector over {c.resources}, game over {g.resources}")
    if c.total != g.n:
        raise InvalidVectorError(f"vector totals {c.total}, game has {g.n} sub-agents")
    if any(x < 0 for x in c.counts):
        raise InvalidVectorError("negative occupancy")
    for ri, r in enumerate(g.resources):
        if c.counts[ri] < 1:
            continue
        stay = g.costs[r].cost(c.counts[ri])
        for xi, x in enumerate(g.resources):
            if xi == ri:
                continue
            if stay > g.costs[x].cost(c.counts[xi] + 1):
                return False
    return True


def underlying_pure_ne(g: CongestionGame) -> DynamicsResult:
    """Find a pure equilibrium of a simple game by best-response dynamics.

    Starts with every sub-agent on the first resource, then repeatedly sweeps
    sub-agents in index order, moving each to its cheapest resource whenever
    that strictly lowers its cost (ties go to the lowest resource index).
    Every move strictly decreases the Rosenthal potential, so the dynamics
    terminate; the result is verified before returning.
    """
    if not g.is_simple:
        raise PreconditionViolatedError("best-response dynamics need a simple game")
    tables = [g.costs[r].values for r in g.resources]
    position = [0] * g.n
    counts = [0] * len(g.resources)
    counts[0] = g.n
    start = PureProfile(tuple((g.resources[0],) for _ in range(g.n)))

    moves: list[DynamicsMove] = []
    while True:
        moved = False
        for i in range(g.n):
            here = position[i]
            stay = tables[here][counts[here] - 1]
            best_r, best_cost = here, stay
            for ri in range(len(g.resources)):
                if ri == here:
                    continue
                price = tables[ri][counts[ri]]
                if price < best_cost:
                    best_r, best_cost = ri, price
            if best_r != here:
                counts[here] -= 1
                counts[best_r] += 1
                position[i] = best_r
                moves.append(
                    DynamicsMove(i, g.resources[here], g.resources[best_r], stay, best_cost)
                )
                moved = True
        if not moved:
            break

    profile = PureProfile(tuple((g.resources[p],) for p in position))
    final = CongestionVector(g.resources, tuple(counts))
    if not is_ne_congestion(g, final):
        raise PreconditionViolatedError("dynamics ended off-equilibrium (bug)")
    return DynamicsResult(start, profile, tuple(moves))


# ---------------------------------------------------------------------------
# Coalitional equilibria
#
# For fixed opponents, a block's utility depends on the opponents only
# through their congestion vector, so best-reply values are cached per
# (block, opponent congestion). One _Analyzer is built per enumeration call.


class _Analyzer:
    def __init__(self, cg: CoalitionalGame, restricted: bool = False):
        self.cg = cg
        self.tables = [cg.base.costs[r].values for r in cg.base.resources]
        self.n_res = len(cg.base.resources)
        self.strats = [
            canonical_block_strategies(cg, k, restricted=restricted)
            for k in range(len(cg.blocks))
        ]
        self.contribs = [
            [contribution(cg.base, t) for t in per_block] for per_block in self.strats
        ]
        self._br: dict[tuple[int, tuple[int, ...]], tuple[Fraction, tuple[int, ...]]] = {}

    def utility(self, k: int, strat_idx: int, counts: list[int]) -> Fraction:
        cost = Fraction(0)
        contrib = self.contribs[k][strat_idx]
        for r in range(self.n_res):
            used = contrib[r]
            if used:
                cost += used * self.tables[r][counts[r] - 1]
        return -cost

    def best_reply(self, k: int, env: tuple[int, ...]) -> tuple[Fraction, tuple[int, ...]]:
        """Best value and all maximizing strategy indices of block k against
        an opponent congestion vector `env`."""
        key = (k, env)
        cached = self._br.get(key)
        if cached is not None:
            return cached
        best: Fraction | None = None
        arg: list[int] = []
        for si in range(len(self.strats[k])):
            contrib = self.contribs[k][si]
            counts = [env[r] + contrib[r] for r in range(self.n_res)]
            u = self.utility(k, si, counts)
            if best is None or u > best:
                best, arg = u, [si]
            elif u == best:
                arg.append(si)
        assert best is not None
        result = (best, tuple(arg))
        self._br[key] = result
        return result

    def strat_index(self, k: int, strat: BlockStrategy) -> int:
        try:
            return self.strats[k].index(strat)
        except ValueError as exc:
            raise PreconditionViolatedError(
                f"block {k} cannot play {strat} in this strategy space"
            ) from exc

    def profile_indices(self, s: PureProfile) -> tuple[int, ...]:
        canon = canonicalize(self.cg, s)
        return tuple(
            self.strat_index(k, tuple(canon.choices[i] for i in block))
            for k, block in enumerate(self.cg.blocks)
        )

    def total_counts(self, idx: tuple[int, ...]) -> list[int]:
        counts = [0] * self.n_res
        for k, si in enumerate(idx):
            contrib = self.contribs[k][si]
            for r in range(self.n_res):
                counts[r] += contrib[r]
        return counts

    def find_deviation(self, idx: tuple[int, ...]) -> DeviationWitness | None:
        counts = self.total_counts(idx)
        for k, si in enumerate(idx):
            contrib = self.contribs[k][si]
            env = tuple(counts[r] - contrib[r] for r in range(self.n_res))
            value, arg = self.best_reply(k, env)
            current = self.utility(k, si, counts)
            if value > current:
                return DeviationWitness(k, self.strats[k][arg[0]], current, value)
        return None


def coalition_best_response(
    cg: CoalitionalGame,
    s: PureProfile,
    k: int,
    restricted: bool = False,
    limit: int | None = None,
) -> BestReplySet:
    """Exhaustive best reply of block k against the rest of `s` (block k's
    own coordinates are ignored). Returns every maximizer."""
    validate_profile(cg.base, s)
    an = _Analyzer(cg, restricted=restricted)
    ensure_within_limit(len(an.strats[k]), limit, f"block {k} strategy space")
    block = set(cg.block(k))
    index = cg.base.resource_index()
    env = [0] * an.n_res
    for i, choice in enumerate(s.choices):
        if i in block:
            continue
        for r in choice:
            env[index[r]] += 1
    value, arg = an.best_reply(k, tuple(env))
    return BestReplySet(k, tuple(an.strats[k][si] for si in arg), value)


def find_deviation(
    cg: CoalitionalGame, s: PureProfile, restricted: bool = False
) -> DeviationWitness | None:
    """First strictly improving block deviation, or None if `s` is an
    equilibrium. Blocks are scanned in index order; among a block's best
    replies the lexicographically first is reported."""
    validate_profile(cg.base, s)
    an = _Analyzer(cg, restricted=restricted)
    return an.find_deviation(an.profile_indices(s))


def is_ccg_ne(cg: CoalitionalGame, s: PureProfile, restricted: bool = False) -> bool:
    return find_deviation(cg, s, restricted=restricted) is None


def enumerate_pure_ne(
    cg: CoalitionalGame,
    restricted: bool = False,
    limit: int | None = None,
    stop_after: int | None = None,
) -> NeReport:
    """Exhaustive equilibrium search over canonical joint profiles.

    Equilibria come out in lexicographic order. `stop_after` truncates the
    scan once that many equilibria were found (the report is then flagged
    non-exhaustive if profiles remained).
    """
    an = _Analyzer(cg, restricted=restricted)
    total = math.prod(len(s) for s in an.strats)
    ensure_within_limit(total, limit, "joint canonical profile space")

    equilibria: list[PureProfile] = []
    multiplicities: list[int] = []
    checked = 0
    exhaustive = True
    for idx in itertools.product(*(range(len(s)) for s in an.strats)):
        checked += 1
        if an.find_deviation(idx) is None:
            profile = assemble_profile(cg, [an.strats[k][si] for k, si in enumerate(idx)])
            equilibria.append(profile)
            multiplicities.append(canonical_multiplicity(cg, profile))
            if stop_after is not None and len(equilibria) >= stop_after:
                exhaustive = checked == total
                break
    return NeReport(tuple(equilibria), tuple(multiplicities), exhaustive, checked)


def restricted_strategies(cg: CoalitionalGame, k: int) -> tuple[BlockStrategy, ...]:
    """Canonical tuples assigning pairwise-distinct resources to block k's
    members (simple base games only)."""
    return canonical_block_strategies(cg, k, restricted=True)


def enumerate_pure_ne_restricted(
    cg: CoalitionalGame, limit: int | None = None, stop_after: int | None = None
) -> NeReport:
    return enumerate_pure_ne(cg, restricted=True, limit=limit, stop_after=stop_after)


def in_restricted_space(cg: CoalitionalGame, s: PureProfile) -> bool:
    """True when every block's members occupy pairwise-distinct resources."""
    for k in range(len(cg.blocks)):
        if any(x > 1 for x in private_congestion(cg, s, k).counts):
            return False
    return True


# ---------------------------------------------------------------------------
# Lifting checks
#
# Both checks are executable assertions: when applicable, a failure is an
# implementation bug, not a legitimate outcome, so they raise.


def check_ne_lift(cg: CoalitionalGame, s: PureProfile) -> LiftVerdict:
    """Applicable when block members occupy pairwise-distinct resources and
    the congestion vector is an equilibrium vector of the simple base game;
    then `s` must be an equilibrium of the coalitional game."""
    if not cg.base.is_simple:
        raise PreconditionViolatedError("lift check needs a simple base game")
    validate_profile(cg.base, s)
    applicable = in_restricted_space(cg, s) and is_ne_congestion(cg.base, congestion(cg.base, s))
    if not applicable:
        return LiftVerdict(False, None)
    witness = find_deviation(cg, s)
    if witness is not None:
        raise NeLiftViolationError(
            f"block {witness.block} improves from {witness.current_value} "
            f"to {witness.best_value} via {witness.strategy}"
        )
    return LiftVerdict(True, True)


def check_ne_lift_restricted(cg: CoalitionalGame, s: PureProfile) -> LiftVerdict:
    """Same statement against restricted deviations only. `s` itself must lie
    in the restricted space."""
    if not cg.base.is_simple:
        raise PreconditionViolatedError("restricted lift check needs a simple base game")
    validate_profile(cg.base, s)
    if not in_restricted_space(cg, s):
        raise PreconditionViolatedError("profile assigns one block two sub-agents on one resource")
    applicable = is_ne_congestion(cg.base, congestion(cg.base, s))
    if not applicable:
        return LiftVerdict(False, None)
    witness = find_deviation(cg, s, restricted=True)
    if witness is not None:
        raise RestrictedNeLiftViolationError(
            f"block {witness.block} improves from {witness.current_value} "
            f"to {witness.best_value} via {witness.strategy}"
        )
    return LiftVerdict(True, True)


# ---------------------------------------------------------------------------
# Generic normal-form brute force (independent oracle for materialized games)


def pure_nash_equilibria(game: StrategicForm) -> list[tuple[int, ...]]:
    """All pure equilibria of a finite normal-form game, lexicographic."""
    found = []
    for profile in game.profiles():
        ok = True
        for i in range(game.players):
            current = game.utility(profile, i)
            for t in range(len(game.strategies[i])):
                if t == profile[i]:
                    continue
                alt = profile[:i] + (t,) + profile[i + 1 :]
                if game.utility(alt, i) > current:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(profile)
    return found
