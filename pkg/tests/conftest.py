from __future__ import annotations

import pytest

from ccg import CoalitionalGame, CongestionGame, Partition


@pytest.fixture
def triple_game() -> CongestionGame:
    """Two identical resources, four sub-agents, costs 0/12/16/18."""
    return CongestionGame.simple(("A", "B"), {"A": (0, 12, 16, 18), "B": (0, 12, 16, 18)})


@pytest.fixture
def triple_ccg(triple_game) -> CoalitionalGame:
    """The four-agent game with a block of three and a singleton."""
    return CoalitionalGame(triple_game, Partition.from_one_based([[1, 2, 3], [4]]))


@pytest.fixture
def pair_ccg(triple_game) -> CoalitionalGame:
    """Same game, partitioned into two pairs."""
    return CoalitionalGame(triple_game, Partition.from_one_based([[1, 2], [3, 4]]))


@pytest.fixture
def overlap_game() -> CongestionGame:
    """Three resources, three sub-agents each picking a two-resource subset,
    costs 0/3/4 at occupancies 1/2/3."""
    subsets = (("A", "B"), ("A", "C"), ("B", "C"))
    return CongestionGame(
        ("A", "B", "C"),
        {r: (0, 3, 4) for r in ("A", "B", "C")},
        tuple(subsets for _ in range(3)),
    )


@pytest.fixture
def overlap_ccg(overlap_game) -> CoalitionalGame:
    return CoalitionalGame(overlap_game, Partition.from_one_based([[1, 2], [3]]))
