"""Data model for congestion games, partitions, and induced coalitional games.

A congestion game has a finite ordered resource set, one cost table per
resource (cost per user as a function of occupancy), and one strategy set per
sub-agent, each strategy being a nonempty resource subset. A game is *simple*
when every strategy set consists of all singletons. Grouping sub-agents with a
partition induces a coalitional game whose players are the blocks: a block
chooses a tuple of member strategies and receives the sum of member utilities
(utilities are negated costs).

Everything is an immutable value; every operation is a pure function; all
arithmetic uses `fractions.Fraction` so equilibrium and potential verdicts are
exact. Sub-agents and blocks are 0-indexed throughout the library; the file
format and CLI translate to 1-based ids.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BlockLargerThanResourceSetError,
    InvalidBlockError,
    InvalidGameError,
    InvalidProfileError,
    MismatchedResourcesError,
    PreconditionViolatedError,
    UnequalTotalsError,
)
from .limits import ensure_within_limit
from .rationals import as_fraction

# A choice is a nonempty tuple of resource ids, kept sorted in the owning
# game's resource order.
Choice = tuple[str, ...]

# A block strategy is one choice per block member, kept sorted so that
# permutations of interchangeable members collapse to one representative.
BlockStrategy = tuple[Choice, ...]


@dataclass(frozen=True)
class Violation:
    """One structural defect found by `validate_game`."""

    code: str
    where: str
    message: str


NEGATIVE_COST = "NegativeCost"
DECREASING_COST = "DecreasingCost"
EMPTY_STRATEGY_SET = "EmptyStrategySet"
UNKNOWN_RESOURCE = "UnknownResource"
LENGTH_MISMATCH = "LengthMismatch"


@dataclass(frozen=True)
class CostTable:
    """Per-user cost of one resource, indexed by occupancy 1..n.

    Valid tables are non-negative and weakly increasing; `validate_game`
    reports violations rather than the constructor raising.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def cost(self, occupancy: int) -> Fraction:
        """Cost paid by each user when `occupancy` users share the resource."""
        if not 1 <= occupancy <= len(self.values):
            raise InvalidProfileError(f"occupancy {occupancy} outside 1..{len(self.values)}")
        return self.values[occupancy - 1]


def _normalize_choice(raw, index: Mapping[str, int], width: int) -> Choice:
    if isinstance(raw, str):
        items = {raw}
    else:
        items = set(raw)  # a choice is a resource subset; duplicates collapse
    # Unknown resources sort after known ones so construction never fails;
    # validate_game reports them.
    return tuple(sorted(items, key=lambda r: (index.get(r, width), r)))


@dataclass(frozen=True)
class CongestionGame:
    """A congestion game over an ordered resource set.

    The resource order is significant: it is the tie-break order for
    best-response dynamics and the canonical sort order for choices.
    """

    resources: tuple[str, ...]
    costs: Mapping[str, CostTable]
    strategy_sets: tuple[tuple[Choice, ...], ...]

    def __post_init__(self) -> None:
        resources = tuple(str(r) for r in self.resources)
        if len(set(resources)) != len(resources):
            raise InvalidGameError(f"duplicate resource ids in {resources}")
        index = {r: i for i, r in enumerate(resources)}
        costs = {
            str(r): t if isinstance(t, CostTable) else CostTable(tuple(t))
            for r, t in dict(self.costs).items()
        }
        sets = tuple(
            tuple(_normalize_choice(c, index, len(resources)) for c in strat_set)
            for strat_set in self.strategy_sets
        )
        if not sets:
            raise InvalidGameError("a game needs at least one sub-agent")
        object.__setattr__(self, "resources", resources)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "strategy_sets", sets)

    @classmethod
    def simple(cls, resources: Sequence[str], costs: Mapping[str, Sequence]) -> "CongestionGame":
        """Build a simple game: every sub-agent picks exactly one resource.

        The sub-agent count is the (common) cost table length.
        """
        tables = {
            r: v if isinstance(v, CostTable) else CostTable(tuple(v)) for r, v in costs.items()
        }
        lengths = {len(t) for t in tables.values()}
        if len(lengths) != 1:
            raise InvalidGameError(f"cost tables disagree on length: {sorted(lengths)}")
        n = lengths.pop()
        singles = tuple((r,) for r in resources)
        return cls(tuple(resources), tables, tuple(singles for _ in range(n)))

    @property
    def n(self) -> int:
        """Number of sub-agents."""
        return len(self.strategy_sets)

    @property
    def is_simple(self) -> bool:
        singles = tuple((r,) for r in self.resources)
        return all(s == singles for s in self.strategy_sets)

    def resource_index(self) -> dict[str, int]:
        return {r: i for i, r in enumerate(self.resources)}

    def choice_key(self, choice: Choice) -> tuple[int, ...]:
        index = self.resource_index()
        width = len(self.resources)
        return tuple(index.get(r, width) for r in choice)


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks of sub-agent indices (0-based).

    Blocks are normalized: members ascending within a block, blocks ordered
    by their smallest member. Coverage of 0..n-1 is checked against a game
    when the partition is attached to one.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if not blocks or any(not b for b in blocks):
            raise InvalidGameError("partition blocks must be nonempty")
        blocks = tuple(sorted(blocks, key=lambda b: b[0]))
        seen: set[int] = set()
        for b in blocks:
            for i in b:
                if i < 0:
                    raise InvalidGameError(f"negative sub-agent index {i}")
                if i in seen:
                    raise InvalidGameError(f"sub-agent {i} appears in two blocks")
                seen.add(i)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_one_based(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(tuple(tuple(i - 1 for i in b) for b in blocks))

    def one_based(self) -> list[list[int]]:
        return [[i + 1 for i in b] for b in self.blocks]

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def n_agents(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def max_block_size(self) -> int:
        return max(len(b) for b in self.blocks)

    def validate_for(self, n: int) -> None:
        members = sorted(i for b in self.blocks for i in b)
        if members != list(range(n)):
            raise InvalidGameError(f"partition covers {members}, expected 0..{n - 1}")

    def singletons(self) -> list[int]:
        return [k for k, b in enumerate(self.blocks) if len(b) == 1]

    def pairs(self) -> list[int]:
        return [k for k, b in enumerate(self.blocks) if len(b) == 2]

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))


@dataclass(frozen=True)
class CoalitionalGame:
    """A congestion game together with a partition of its sub-agents."""

    base: CongestionGame
    partition: Partition

    def __post_init__(self) -> None:
        self.partition.validate_for(self.base.n)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.partition.blocks

    def block(self, k: int) -> tuple[int, ...]:
        if not 0 <= k < len(self.blocks):
            raise InvalidBlockError(f"block {k} outside 0..{len(self.blocks) - 1}")
        return self.blocks[k]


@dataclass(frozen=True)
class PureProfile:
    """One choice per sub-agent, in sub-agent order."""

    choices: tuple[Choice, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "choices", tuple(tuple(c) if not isinstance(c, str) else (c,) for c in self.choices)
        )

    def __len__(self) -> int:
        return len(self.choices)


@dataclass(frozen=True)
class CongestionVector:
    """Per-resource occupancy counts, aligned with a game's resource order."""

    resources: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.resources) != len(self.counts):
            raise MismatchedResourcesError("resource and count lengths differ")

    def __getitem__(self, resource: str) -> int:
        try:
            return self.counts[self.resources.index(resource)]
        except ValueError as exc:
            raise MismatchedResourcesError(f"unknown resource {resource!r}") from exc

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.resources, self.counts))


@dataclass(frozen=True)
class StrategicForm:
    """A finite normal-form game with a total rational utility table.

    `strategies[i]` lists player i's strategy labels; `utilities` maps every
    joint strategy index tuple to one utility per player.
    """

    strategies: tuple[tuple[str, ...], ...]
    utilities: Mapping[tuple[int, ...], tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        strategies = tuple(tuple(s) for s in self.strategies)
        object.__setattr__(self, "strategies", strategies)
        expected = math.prod(len(s) for s in strategies)
        if len(self.utilities) != expected:
            raise InvalidGameError(
                f"utility table has {len(self.utilities)} entries, expected {expected}"
            )
        for profile, values in self.utilities.items():
            if len(values) != len(strategies):
                raise InvalidGameError(f"profile {profile} has {len(values)} utilities")

    @property
    def players(self) -> int:
        return len(self.strategies)

    def profiles(self) -> Iterator[tuple[int, ...]]:
        """All joint strategy index tuples, lexicographic."""
        return itertools.product(*(range(len(s)) for s in self.strategies))

    def utility(self, profile: tuple[int, ...], player: int) -> Fraction:
        return self.utilities[profile][player]

    def num_profiles(self) -> int:
        return math.prod(len(s) for s in self.strategies)


# ---------------------------------------------------------------------------
# Construction helpers and validation


def as_profile(g: CongestionGame, choices: Sequence) -> PureProfile:
    """Build a profile from raw per-sub-agent choices, normalizing each
    choice to the game's resource order. Accepts bare strings for
    single-resource choices."""
    index = g.resource_index()
    width = len(g.resources)
    return PureProfile(tuple(_normalize_choice(c, index, width) for c in choices))


def validate_game(g: CongestionGame) -> tuple[Violation, ...]:
    """Check every structural invariant; return all violations found."""
    found: list[Violation] = []
    n = g.n
    resource_set = set(g.resources)
    for r in g.resources:
        table = g.costs.get(r)
        if table is None:
            found.append(Violation(LENGTH_MISMATCH, f"costs[{r}]", "no cost table for resource"))
            continue
        if len(table) != n:
            found.append(
                Violation(LENGTH_MISMATCH, f"costs[{r}]", f"table length {len(table)} != {n} sub-agents")
            )
        for j, v in enumerate(table.values, start=1):
            if v < 0:
                found.append(Violation(NEGATIVE_COST, f"costs[{r}][{j}]", f"cost {v} is negative"))
        for j in range(1, len(table)):
            if table.values[j] < table.values[j - 1]:
                found.append(
                    Violation(
                        DECREASING_COST,
                        f"costs[{r}][{j + 1}]",
                        f"{table.values[j]} < {table.values[j - 1]}",
                    )
                )
    for r in g.costs:
        if r not in resource_set:
            found.append(Violation(UNKNOWN_RESOURCE, f"costs[{r}]", "cost table for unknown resource"))
    for i, strat_set in enumerate(g.strategy_sets):
        if not strat_set:
            found.append(Violation(EMPTY_STRATEGY_SET, f"strategies[{i}]", "empty strategy set"))
        for choice in strat_set:
            if not choice:
                found.append(Violation(EMPTY_STRATEGY_SET, f"strategies[{i}]", "empty resource subset"))
            for r in choice:
                if r not in resource_set:
                    found.append(
                        Violation(UNKNOWN_RESOURCE, f"strategies[{i}]", f"unknown resource {r!r}")
                    )
    return tuple(found)


def require_valid(g: CongestionGame) -> None:
    problems = validate_game(g)
    if problems:
        detail = "; ".join(f"{v.code} at {v.where}: {v.message}" for v in problems)
        raise InvalidGameError(detail)


def validate_profile(g: CongestionGame, s: PureProfile) -> None:
    if len(s) != g.n:
        raise InvalidProfileError(f"profile has {len(s)} choices, game has {g.n} sub-agents")
    for i, choice in enumerate(s.choices):
        if choice not in g.strategy_sets[i]:
            raise InvalidProfileError(f"sub-agent {i} cannot play {choice}")


# ---------------------------------------------------------------------------
# Congestion bookkeeping


def congestion(g: CongestionGame, s: PureProfile) -> CongestionVector:
    """Occupancy counts: how many sub-agents' choices contain each resource."""
    validate_profile(g, s)
    index = g.resource_index()
    counts = [0] * len(g.resources)
    for choice in s.choices:
        for r in choice:
            counts[index[r]] += 1
    return CongestionVector(g.resources, tuple(counts))


def player_cost(g: CongestionGame, s: PureProfile, i: int) -> Fraction:
    """Total payment of sub-agent i: the sum of its chosen resources' costs
    at the profile's occupancies. Utility is the negation."""
    if not 0 <= i < g.n:
        raise InvalidProfileError(f"sub-agent {i} outside 0..{g.n - 1}")
    c = congestion(g, s)
    return sum((g.costs[r].cost(c[r]) for r in s.choices[i]), Fraction(0))


def private_congestion(cg: CoalitionalGame, s: PureProfile, k: int) -> CongestionVector:
    """Occupancy counts restricted to block k's members."""
    block = cg.block(k)
    validate_profile(cg.base, s)
    index = cg.base.resource_index()
    counts = [0] * len(cg.base.resources)
    for i in block:
        for r in s.choices[i]:
            counts[index[r]] += 1
    return CongestionVector(cg.base.resources, tuple(counts))


def coalition_utility(cg: CoalitionalGame, s: PureProfile, k: int) -> Fraction:
    """Block k's utility: the (negated) sum of its members' payments."""
    block = cg.block(k)
    validate_profile(cg.base, s)
    c = congestion(cg.base, s)
    total = Fraction(0)
    for i in block:
        for r in s.choices[i]:
            total += cg.base.costs[r].cost(c[r])
    return -total


def congestion_distance(u: CongestionVector, v: CongestionVector) -> Fraction:
    """Half the L1 distance between two congestion vectors with equal totals."""
    if u.resources != v.resources:
        raise MismatchedResourcesError(f"{u.resources} vs {v.resources}")
    if u.total != v.total:
        raise UnequalTotalsError(f"totals {u.total} != {v.total}")
    return Fraction(sum(abs(a - b) for a, b in zip(u.counts, v.counts)), 2)


# ---------------------------------------------------------------------------
# Canonical coalition strategies

# Within a block, member choices can be permuted without changing any
# utility, so enumeration and reporting use the sorted tuple as the canonical
# representative of each orbit.


def canonicalize(cg: CoalitionalGame, s: PureProfile) -> PureProfile:
    """Sort each block's member choices into the canonical order."""
    key = cg.base.choice_key
    choices = list(s.choices)
    for block in cg.blocks:
        selected = sorted((choices[i] for i in block), key=key)
        for i, choice in zip(block, selected):
            choices[i] = choice
    return PureProfile(tuple(choices))


def canonical_multiplicity(cg: CoalitionalGame, s: PureProfile) -> int:
    """Number of raw profiles sharing this profile's canonical form.

    Counts, per block, the distinct valid assignments of the block's choice
    multiset to its members.
    """
    total = 1
    for block in cg.blocks:
        tuples = {
            perm
            for perm in itertools.permutations(s.choices[i] for i in block)
            if all(c in cg.base.strategy_sets[i] for i, c in zip(block, perm))
        }
        total *= len(tuples)
    return total


def canonical_block_strategies(
    cg: CoalitionalGame, k: int, restricted: bool = False
) -> tuple[BlockStrategy, ...]:
    """All canonical strategy tuples of block k, sorted.

    With `restricted=True` (simple games only) the members must occupy
    pairwise-distinct resources.
    """
    block = cg.block(k)
    g = cg.base
    key = g.choice_key
    if restricted:
        if not g.is_simple:
            raise PreconditionViolatedError("restricted strategies need a simple base game")
        if len(block) > len(g.resources):
            raise BlockLargerThanResourceSetError(
                f"block of {len(block)} cannot spread over {len(g.resources)} resources"
            )
        return tuple(
            tuple((r,) for r in combo) for combo in itertools.combinations(g.resources, len(block))
        )
    if g.is_simple:
        return tuple(
            tuple((r,) for r in combo)
            for combo in itertools.combinations_with_replacement(g.resources, len(block))
        )
    member_sets = [g.strategy_sets[i] for i in block]
    canon = {tuple(sorted(raw, key=key)) for raw in itertools.product(*member_sets)}
    return tuple(sorted(canon, key=lambda t: tuple(key(c) for c in t)))


def assemble_profile(
    cg: CoalitionalGame, block_strategies: Sequence[BlockStrategy]
) -> PureProfile:
    """Place one strategy tuple per block into a flat profile (members in
    ascending order receive the tuple entries in order)."""
    if len(block_strategies) != len(cg.blocks):
        raise InvalidBlockError(f"need {len(cg.blocks)} block strategies, got {len(block_strategies)}")
    choices: list[Choice] = [()] * cg.base.n
    for block, strat in zip(cg.blocks, block_strategies):
        if len(strat) != len(block):
            raise InvalidProfileError(f"tuple of {len(strat)} choices for block of {len(block)}")
        for i, choice in zip(block, strat):
            choices[i] = choice
    return PureProfile(tuple(choices))


def choice_label(choice: Choice) -> str:
    if all(len(r) == 1 for r in choice):
        return "".join(choice)
    return "+".join(choice)


def block_strategy_label(strat: BlockStrategy) -> str:
    return ",".join(choice_label(c) for c in strat)


# ---------------------------------------------------------------------------
# Materialization


def contribution(g: CongestionGame, strat: BlockStrategy) -> tuple[int, ...]:
    """Per-resource usage counts of one block strategy."""
    index = g.resource_index()
    counts = [0] * len(g.resources)
    for choice in strat:
        for r in choice:
            counts[index[r]] += 1
    return tuple(counts)


def materialize(cg: CoalitionalGame, limit: int | None = None) -> StrategicForm:
    """Flatten a coalitional game into a normal-form game.

    Players are the blocks; strategies are canonical member-choice tuples in
    lexicographic resource order; utilities are the blocks' summed member
    utilities. Refuses games whose utility table would exceed the size limit.
    """
    strats = [canonical_block_strategies(cg, k) for k in range(len(cg.blocks))]
    n_profiles = math.prod(len(s) for s in strats)
    ensure_within_limit(n_profiles * len(strats), limit, "materialized utility table")

    tables = [cg.base.costs[r].values for r in cg.base.resources]
    contribs = [[contribution(cg.base, t) for t in per_block] for per_block in strats]
    n_res = len(cg.base.resources)

    utilities: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    for idx in itertools.product(*(range(len(s)) for s in strats)):
        counts = [0] * n_res
        for k, si in enumerate(idx):
            for r, used in enumerate(contribs[k][si]):
                counts[r] += used
        row = []
        for k, si in enumerate(idx):
            cost = Fraction(0)
            for r, used in enumerate(contribs[k][si]):
                if used:
                    cost += used * tables[r][counts[r] - 1]
            row.append(-cost)
        utilities[idx] = tuple(row)
    labels = tuple(tuple(block_strategy_label(t) for t in per_block) for per_block in strats)
    return StrategicForm(labels, utilities)
