from __future__ import annotations

from fractions import Fraction

import pytest

from ccg import (
    CoalitionalGame,
    CongestionGame,
    CongestionVector,
    Partition,
    StrategicForm,
    as_profile,
    check_ne_lift,
    check_ne_lift_restricted,
    coalition_best_response,
    coalition_utility,
    congestion,
    enumerate_pure_ne,
    enumerate_pure_ne_restricted,
    find_deviation,
    is_ccg_ne,
    is_ne_congestion,
    materialize,
    pure_nash_equilibria,
    restricted_strategies,
    rosenthal_potential,
    underlying_pure_ne,
)
from ccg.errors import (
    BlockLargerThanResourceSetError,
    InvalidVectorError,
    PreconditionViolatedError,
    SizeLimitExceededError,
)
from oracle_helpers import brute_ccg_equilibria, brute_is_ccg_ne, brute_simple_ne_congestions


class TestUnderlyingDynamics:
    def test_balanced_split(self, triple_game):
        result = underlying_pure_ne(triple_game)
        c = congestion(triple_game, result.profile)
        assert c.as_dict() == {"A": 2, "B": 2}
        # cross-check against the definition-level oracle
        assert c.counts in brute_simple_ne_congestions(triple_game)

    def test_single_resource(self):
        g = CongestionGame.simple(("A",), {"A": (1, 2, 3)})
        result = underlying_pure_ne(g)
        assert congestion(g, result.profile).as_dict() == {"A": 3}

    def test_weak_tie_keeps_everyone_on_cheap_resource(self):
        g = CongestionGame.simple(("A", "B"), {"A": (0, 1, 5), "B": (5, 6, 7)})
        result = underlying_pure_ne(g)
        assert congestion(g, result.profile).as_dict() == {"A": 3, "B": 0}

    def test_each_move_strictly_decreases_potential(self, triple_game):
        result = underlying_pure_ne(triple_game)
        assert result.moves, "reference game needs rebalancing from the all-on-A start"
        choices = list(result.start.choices)
        phi = rosenthal_potential(triple_game, result.start)
        for move in result.moves:
            choices[move.agent] = (move.target,)
            from ccg import PureProfile

            phi_next = rosenthal_potential(triple_game, PureProfile(tuple(choices)))
            assert phi_next < phi
            assert phi_next - phi == move.cost_after - move.cost_before
            phi = phi_next
        assert tuple(choices) == result.profile.choices

    def test_needs_simple_game(self, overlap_game):
        with pytest.raises(PreconditionViolatedError):
            underlying_pure_ne(overlap_game)


class TestNeCongestion:
    def test_balanced_true(self, triple_game):
        assert is_ne_congestion(triple_game, CongestionVector(("A", "B"), (2, 2)))

    def test_skewed_false(self, triple_game):
        assert not is_ne_congestion(triple_game, CongestionVector(("A", "B"), (3, 1)))

    def test_single_resource_always_true(self):
        g = CongestionGame.simple(("A",), {"A": (7, 8, 9)})
        assert is_ne_congestion(g, CongestionVector(("A",), (3,)))

    def test_wrong_total_rejected(self, triple_game):
        with pytest.raises(InvalidVectorError):
            is_ne_congestion(triple_game, CongestionVector(("A", "B"), (1, 1)))


class TestCoalitionBestResponse:
    def test_unique_best_reply_against_singleton(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "A", "A"])
        br = coalition_best_response(triple_ccg, s, 0)
        assert br.value == Fraction(-32)
        assert br.replies == ((("A",), ("A",), ("B",)),)

    def test_singleton_block_is_classic_best_response(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "B", "A"])
        br = coalition_best_response(triple_ccg, s, 1)
        # against A,A,B the lone agent prefers B: 12 < 16
        assert br.value == Fraction(-12)
        assert br.replies == ((("B",),),)

    def test_subset_game_best_reply(self, overlap_ccg):
        s = as_profile(overlap_ccg.base, [("A", "B"), ("A", "C"), ("A", "B")])
        br = coalition_best_response(overlap_ccg, s, 1)
        assert br.value == Fraction(-6)
        assert br.replies == ((("B", "C"),),)

    def test_every_reply_attains_value(self, pair_ccg):
        s = as_profile(pair_ccg.base, ["A", "B", "A", "B"])
        br = coalition_best_response(pair_ccg, s, 0)
        assert br.replies
        for reply in br.replies:
            choices = list(s.choices)
            for i, choice in zip(pair_ccg.blocks[0], reply):
                choices[i] = choice
            from ccg import PureProfile

            assert coalition_utility(pair_ccg, PureProfile(tuple(choices)), 0) == br.value

    def test_size_limit(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "A", "A"])
        with pytest.raises(SizeLimitExceededError):
            coalition_best_response(triple_ccg, s, 0, limit=2)


class TestIsCcgNe:
    def test_rejection_with_witness(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "B", "B"])
        witness = find_deviation(triple_ccg, s)
        assert witness is not None
        assert witness.block == 0
        assert witness.strategy == (("A",), ("B",), ("B",))
        assert witness.best_value == Fraction(-32)
        assert witness.current_value == Fraction(-36)

    def test_pair_split_is_equilibrium(self, pair_ccg):
        s = as_profile(pair_ccg.base, ["A", "B", "A", "B"])
        assert is_ccg_ne(pair_ccg, s)
        assert brute_is_ccg_ne(pair_ccg, s)

    def test_one_block_partition_means_welfare_max(self, triple_game):
        cg = CoalitionalGame(triple_game, Partition.from_one_based([[1, 2, 3, 4]]))
        # welfare: 2+2 split and 3+1 split both cost 48, all-on-one costs 72
        assert is_ccg_ne(cg, as_profile(triple_game, ["A", "A", "B", "B"]))
        assert is_ccg_ne(cg, as_profile(triple_game, ["A", "A", "A", "B"]))
        assert not is_ccg_ne(cg, as_profile(triple_game, ["A", "A", "A", "A"]))

    def test_witness_strictly_improves_on_reevaluation(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "B", "B"])
        witness = find_deviation(triple_ccg, s)
        choices = list(s.choices)
        for i, choice in zip(triple_ccg.blocks[witness.block], witness.strategy):
            choices[i] = choice
        from ccg import PureProfile

        improved = coalition_utility(triple_ccg, PureProfile(tuple(choices)), witness.block)
        assert improved == witness.best_value
        assert improved > coalition_utility(triple_ccg, s, witness.block)


class TestEnumerate:
    def test_triple_block_has_no_equilibrium(self, triple_ccg):
        report = enumerate_pure_ne(triple_ccg)
        assert report.is_empty
        assert report.exhaustive
        assert report.profiles_checked == 8

    def test_overlapping_routes_have_no_equilibrium(self, overlap_ccg):
        assert enumerate_pure_ne(overlap_ccg).is_empty

    def test_discrete_partition_equilibria(self, triple_game):
        cg = CoalitionalGame(triple_game, Partition.discrete(4))
        report = enumerate_pure_ne(cg)
        assert not report.is_empty
        assert len(report.equilibria) == 6
        for profile in report.equilibria:
            assert congestion(triple_game, profile).as_dict() == {"A": 2, "B": 2}
        # lexicographic order over per-agent choices
        listed = [p.choices for p in report.equilibria]
        assert listed == sorted(listed)
        assert report.multiplicities == (1,) * 6

    def test_matches_raw_brute_force(self, pair_ccg):
        from ccg import canonicalize

        report = enumerate_pure_ne(pair_ccg)
        raw = {canonicalize(pair_ccg, s).choices for s in brute_ccg_equilibria(pair_ccg)}
        assert {p.choices for p in report.equilibria} == raw

    def test_stop_after(self, triple_game):
        cg = CoalitionalGame(triple_game, Partition.discrete(4))
        report = enumerate_pure_ne(cg, stop_after=1)
        assert len(report.equilibria) == 1
        assert not report.exhaustive

    def test_size_limit(self, triple_ccg):
        with pytest.raises(SizeLimitExceededError):
            enumerate_pure_ne(triple_ccg, limit=4)

    def test_matches_normal_form_brute_force(self, triple_ccg, pair_ccg):
        for cg in (triple_ccg, pair_ccg):
            sf = materialize(cg)
            from ccg import assemble_profile, canonical_block_strategies

            strats = [canonical_block_strategies(cg, k) for k in range(len(cg.blocks))]
            translated = {
                assemble_profile(cg, [strats[k][si] for k, si in enumerate(idx)]).choices
                for idx in pure_nash_equilibria(sf)
            }
            assert translated == {p.choices for p in enumerate_pure_ne(cg).equilibria}


class TestRestricted:
    def test_pair_block_two_resources(self, pair_ccg):
        assert restricted_strategies(pair_ccg, 0) == ((("A",), ("B",)),)

    def test_singleton_block(self, triple_ccg):
        assert restricted_strategies(triple_ccg, 1) == ((("A",),), (("B",),))

    def test_triple_block_three_resources(self):
        g = CongestionGame.simple(("A", "B", "C"), {r: (0, 1, 2) for r in "ABC"})
        cg = CoalitionalGame(g, Partition.from_one_based([[1, 2, 3]]))
        assert restricted_strategies(cg, 0) == ((("A",), ("B",), ("C",)),)

    def test_block_larger_than_resource_set(self, triple_ccg):
        with pytest.raises(BlockLargerThanResourceSetError):
            restricted_strategies(triple_ccg, 0)

    def test_restricted_enumeration_finds_split(self, pair_ccg):
        report = enumerate_pure_ne_restricted(pair_ccg)
        assert (("A",), ("B",), ("A",), ("B",)) in {p.choices for p in report.equilibria}

    def test_all_singletons_restriction_is_vacuous(self, triple_game):
        cg = CoalitionalGame(triple_game, Partition.discrete(4))
        unrestricted = {p.choices for p in enumerate_pure_ne(cg).equilibria}
        restricted = {p.choices for p in enumerate_pure_ne_restricted(cg).equilibria}
        assert restricted == unrestricted

    def test_restricted_enumeration_rejects_oversized_block(self, triple_ccg):
        with pytest.raises(BlockLargerThanResourceSetError):
            enumerate_pure_ne_restricted(triple_ccg)


class TestLiftChecks:
    def test_applicable_and_holds(self, pair_ccg):
        s = as_profile(pair_ccg.base, ["A", "B", "A", "B"])
        verdict = check_ne_lift(pair_ccg, s)
        assert verdict.applicable and verdict.holds
        assert brute_is_ccg_ne(pair_ccg, s)

    def test_shared_resource_not_applicable(self, triple_ccg):
        s = as_profile(triple_ccg.base, ["A", "A", "B", "B"])
        verdict = check_ne_lift(triple_ccg, s)
        assert not verdict.applicable
        assert verdict.holds is None

    def test_non_equilibrium_congestion_not_applicable(self):
        g = CongestionGame.simple(("A", "B"), {"A": (0, 1, 5), "B": (5, 6, 7)})
        cg = CoalitionalGame(g, Partition.from_one_based([[1, 2], [3]]))
        s = as_profile(g, ["A", "B", "B"])
        verdict = check_ne_lift(cg, s)
        assert not verdict.applicable

    def test_restricted_variant_holds(self, pair_ccg):
        s = as_profile(pair_ccg.base, ["A", "B", "A", "B"])
        verdict = check_ne_lift_restricted(pair_ccg, s)
        assert verdict.applicable and verdict.holds

    def test_restricted_variant_rejects_doubled_profile(self, pair_ccg):
        s = as_profile(pair_ccg.base, ["A", "A", "B", "B"])
        with pytest.raises(PreconditionViolatedError):
            check_ne_lift_restricted(pair_ccg, s)

    def test_singleton_blocks_on_distinct_resources(self):
        g = CongestionGame.simple(("A", "B", "C"), {r: (0, 1, 2) for r in "ABC"})
        cg = CoalitionalGame(g, Partition.discrete(3))
        s = as_profile(g, ["A", "B", "C"])
        assert is_ne_congestion(g, congestion(g, s))
        verdict = check_ne_lift_restricted(cg, s)
        assert verdict.applicable and verdict.holds


class TestNormalFormBruteForce:
    def test_matching_pennies_has_no_pure_equilibrium(self):
        sf = StrategicForm(
            (("H", "T"), ("H", "T")),
            {
                (0, 0): (Fraction(1), Fraction(-1)),
                (0, 1): (Fraction(-1), Fraction(1)),
                (1, 0): (Fraction(-1), Fraction(1)),
                (1, 1): (Fraction(1), Fraction(-1)),
            },
        )
        assert pure_nash_equilibria(sf) == []

    def test_coordination_game(self):
        sf = StrategicForm(
            (("L", "R"), ("L", "R")),
            {
                (0, 0): (Fraction(2), Fraction(2)),
                (0, 1): (Fraction(0), Fraction(0)),
                (1, 0): (Fraction(0), Fraction(0)),
                (1, 1): (Fraction(1), Fraction(1)),
            },
        )
        assert pure_nash_equilibria(sf) == [(0, 0), (1, 1)]
