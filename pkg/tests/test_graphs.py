import itertools

import numpy as np
import pytest

from hardcore_tree import FertileGraph, FiniteTree, adjacency_matrix, is_admissible_configuration, is_admissible_pair


@pytest.mark.parametrize(
    "kind, rows",
    [
        ("loop", [[1, 1, 1], [1, 1, 0], [1, 0, 1]]),
        ("rod", [[0, 1, 1], [1, 1, 0], [1, 0, 1]]),
        ("key", [[1, 1, 1], [1, 1, 0], [1, 0, 0]]),
        ("whistle", [[1, 1, 0], [1, 0, 1], [0, 1, 0]]),
    ],
)
def test_adjacency_rows(kind, rows):
    np.testing.assert_array_equal(adjacency_matrix(kind), rows)


@pytest.mark.parametrize("g", list(FertileGraph))
def test_matrix_matches_edge_list(g):
    a = g.adjacency
    assert np.array_equal(a, a.T)
    listed = {frozenset(e) for e in g.edges}
    for i, j in itertools.product(range(3), repeat=2):
        assert a[i, j] == (frozenset((i, j)) in listed)


@pytest.mark.parametrize("g", list(FertileGraph))
def test_no_isolated_state(g):
    assert np.all(g.adjacency.sum(axis=1) >= 1)


def test_adjacency_is_read_only_but_copy_is_not():
    with pytest.raises(ValueError):
        FertileGraph.LOOP.adjacency[0, 0] = 5
    a = adjacency_matrix("loop")
    a[0, 0] = 5
    assert FertileGraph.LOOP.adjacency[0, 0] == 1


def test_pairs():
    assert not is_admissible_pair(FertileGraph.LOOP, 1, 2)
    assert is_admissible_pair(FertileGraph.KEY, 0, 0)
    assert not is_admissible_pair(FertileGraph.ROD, 0, 0)
    for g in FertileGraph:
        for s, t in itertools.product(range(3), repeat=2):
            assert is_admissible_pair(g, s, t) == is_admissible_pair(g, t, s)


def test_bad_state_rejected():
    with pytest.raises(ValueError):
        is_admissible_pair(FertileGraph.LOOP, 0, 3)


def test_parse_names():
    assert FertileGraph.parse("Whistle") is FertileGraph.WHISTLE
    with pytest.raises(ValueError, match="unknown graph"):
        FertileGraph.parse("triangle")


def test_swap_symmetry_flags():
    assert FertileGraph.LOOP.swap_symmetric and FertileGraph.ROD.swap_symmetric
    assert not FertileGraph.KEY.swap_symmetric and not FertileGraph.WHISTLE.swap_symmetric


def test_configurations():
    tree = FiniteTree.cayley(2, 2)
    zeros = [0] * tree.n_vertices
    assert is_admissible_configuration(FertileGraph.LOOP, tree, zeros)
    assert not is_admissible_configuration(FertileGraph.ROD, tree, zeros)
    single = FiniteTree.from_parents([-1])
    for g in FertileGraph:
        for s in range(3):
            assert is_admissible_configuration(g, single, [s])
    # path 1-0-2 is fine for loop, 1-2 adjacency is not
    path = FiniteTree.cayley(1, 1)
    assert is_admissible_configuration(FertileGraph.LOOP, path, [0, 1, 2])
    assert not is_admissible_configuration(FertileGraph.LOOP, path, [1, 1, 2])
    assert is_admissible_configuration(FertileGraph.LOOP, path, {0: 0, 1: 1, 2: 2})
    with pytest.raises(ValueError):
        is_admissible_configuration(FertileGraph.LOOP, path, [0, 1])
