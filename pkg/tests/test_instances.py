from __future__ import annotations

from fractions import Fraction

import pytest

from ccg import (
    CoalitionalGame,
    canned_fixtures,
    enumerate_pure_ne,
    evaluate_fixture,
    is_linear,
    materialize,
    no_ne_overlap_fixture,
    no_ne_triple_fixture,
    parametric_two_resource_fixture,
    random_game,
    random_partition,
    validate_game,
)
from ccg.errors import InvalidParamsError


class TestCannedClaims:
    def test_triple_instance_matches_its_matrix(self):
        report = evaluate_fixture(no_ne_triple_fixture())
        assert report.passed
        assert report.discrepancies == ()
        assert len([r for r in report.results if r.description.startswith("cell")]) == 8

    def test_overlap_instance_has_exactly_two_flagged_cells(self):
        report = evaluate_fixture(no_ne_overlap_fixture())
        assert report.passed
        flagged = {(d.row, d.col) for d in report.discrepancies}
        assert flagged == {("AB,AB", "AC"), ("AC,AC", "AC")}
        assert all(d.expected for d in report.discrepancies)

    def test_overlap_recomputed_values(self):
        report = evaluate_fixture(no_ne_overlap_fixture())
        by_cell = {(d.row, d.col): d for d in report.discrepancies}
        assert by_cell[("AB,AB", "AC")].recomputed == (Fraction(-14), Fraction(-4))
        assert by_cell[("AC,AC", "AC")].recomputed == (Fraction(-16), Fraction(-8))

    def test_parametric_instance_symbolic_cells(self):
        fx = parametric_two_resource_fixture((1, 2, 3), (2, 4, 6))
        sf = materialize(CoalitionalGame(fx.game, fx.partition))
        rows = {label: i for i, label in enumerate(sf.strategies[0])}
        cols = {label: i for i, label in enumerate(sf.strategies[1])}
        # cell (A,B | A) carries costs (a2+b1, a2) = (4, 2)
        assert sf.utilities[(rows["A,B"], cols["A"])] == (Fraction(-4), Fraction(-2))
        assert evaluate_fixture(fx).passed

    def test_parametric_potential_claims(self):
        assert parametric_two_resource_fixture((1, 2, 3), (2, 4, 6)).potential_exists
        assert not parametric_two_resource_fixture((1, 2, 4), (1, 2, 3)).potential_exists
        assert evaluate_fixture(parametric_two_resource_fixture((1, 2, 4), (1, 2, 3))).passed

    def test_parametric_rejects_bad_costs(self):
        with pytest.raises(InvalidParamsError):
            parametric_two_resource_fixture((3, 2, 1), (1, 2, 3))
        with pytest.raises(InvalidParamsError):
            parametric_two_resource_fixture((1, 2), (1, 2, 3))

    def test_registry_keys(self):
        registry = canned_fixtures()
        assert set(registry) == {"2", "3", "4"}
        assert len(registry["4"]) == 2

    def test_pair_partition_instance_always_has_equilibrium(self):
        fx = parametric_two_resource_fixture((0, 12, 16), (0, 12, 16))
        assert not enumerate_pure_ne(CoalitionalGame(fx.game, fx.partition)).is_empty

    def test_manifest_round_trips_and_reloads(self):
        import json

        from ccg.gamefile import dict_to_game
        from ccg.instances import fixture_manifest

        fx = no_ne_overlap_fixture()
        manifest = fixture_manifest(fx)
        assert json.loads(json.dumps(manifest)) == manifest
        game, partition = dict_to_game(manifest["game"])
        assert (game, partition) == (fx.game, fx.partition)
        assert len(manifest["matrix_claims"]) == 18
        assert manifest["ne_is_empty"] is True


class TestRandomGame:
    def test_deterministic(self):
        assert random_game(42, 4, 3, "monotone") == random_game(42, 4, 3, "monotone")

    def test_seeds_differ(self):
        assert random_game(1, 4, 3, "monotone") != random_game(2, 4, 3, "monotone")

    def test_linear_class_has_affine_tables(self):
        for seed in range(20):
            g = random_game(seed, 5, 3, "linear")
            assert all(is_linear(g.costs[r]).linear for r in g.resources)

    def test_generated_games_are_valid(self):
        for seed in range(20):
            for cost_class in ("linear", "convex", "monotone"):
                g = random_game(seed, 4, 2, cost_class)
                assert validate_game(g) == ()
                assert g.is_simple

    def test_small_denominators(self):
        for seed in range(20):
            g = random_game(seed, 6, 4, "monotone")
            for r in g.resources:
                assert all(v.denominator <= 12 for v in g.costs[r].values)

    def test_param_validation(self):
        with pytest.raises(InvalidParamsError):
            random_game(1, 0, 2, "monotone")
        with pytest.raises(InvalidParamsError):
            random_game(1, 2, 0, "monotone")
        with pytest.raises(InvalidParamsError):
            random_game(1, 2, 2, "parabolic")


class TestRandomPartition:
    def test_deterministic(self):
        assert random_partition(7, 6, 2) == random_partition(7, 6, 2)

    def test_discrete_when_max_block_one(self):
        p = random_partition(3, 5, 1)
        assert all(len(b) == 1 for b in p.blocks)

    def test_block_bound_respected(self):
        for seed in range(20):
            p = random_partition(seed, 7, 3)
            assert p.max_block_size <= 3
            assert p.n_agents == 7

    def test_singleton_and_pair_shape(self):
        for seed in range(20):
            p = random_partition(seed, 5, 2, require_singleton_and_pair=True)
            sizes = sorted(len(b) for b in p.blocks)
            assert 1 in sizes and 2 in sizes

    def test_minimal_shape(self):
        p = random_partition(0, 3, 2, require_singleton_and_pair=True)
        assert sorted(len(b) for b in p.blocks) == [1, 2]

    def test_param_validation(self):
        with pytest.raises(InvalidParamsError):
            random_partition(1, 3, 0)
        with pytest.raises(InvalidParamsError):
            random_partition(1, 3, 4)
        with pytest.raises(InvalidParamsError):
            random_partition(1, 2, 2, require_singleton_and_pair=True)
