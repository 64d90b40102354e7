# -*- coding: utf-8 -*-

import numpy as np
import pytest

from diversipy.trees import InvalidTreeError, WeightedTree


def test_path_subtrees():
    tree = WeightedTree.path([1.0, 2.0, 3.0])
    assert tree.subtree_length(0b1001) == 6.0
    assert tree.subtree_length(0b0110) == 2.0
    assert tree.subtree_length(0b0001) == 0.0
    assert tree.total_length == 6.0


def test_star_subtrees():
    tree = WeightedTree.star([1.0, 1.0, 1.0])
    assert tree.subtree_length(0b1110) == 3.0
    assert tree.subtree_length(0b0110) == 2.0
    assert tree.subtree_length(0b0011) == 1.0


def test_unplaced_centre():
    tree = WeightedTree(4, [(3, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0)], [0, 1, 2])
    assert tree.n == 3
    assert tree.subtree_length(0b111) == 3.0
    assert tree.leaf_distances().tolist() == [[0, 2, 2], [2, 0, 2], [2, 2, 0]]


def test_shared_placement():
    tree = WeightedTree(2, [(0, 1, 1.5)], [0, 0, 1])
    assert tree.subtree_length(0b011) == 0.0
    assert tree.subtree_length(0b101) == 1.5


def test_invalid_trees():
    with pytest.raises(InvalidTreeError):
        WeightedTree(3, [(0, 1, 1.0)], [0, 1, 2])
    with pytest.raises(InvalidTreeError):
        WeightedTree(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], [0, 1, 2, 3])
    with pytest.raises(InvalidTreeError):
        WeightedTree(2, [(0, 1, 0.0)], [0, 1])
    with pytest.raises(InvalidTreeError):
        WeightedTree(2, [(0, 1, 1.0)], [0, 2])


def test_split_sides():
    tree = WeightedTree.path([1.0, 2.0])
    sides = sorted(tree.split_sides())
    assert [w for w, _ in sides] == [1.0, 2.0]
    for weight, side in sides:
        assert side not in (0, 0b111)


def test_suppress_degree_two():
    tree = WeightedTree(3, [(0, 1, 1.0), (1, 2, 2.5)], [0, 2])
    short = tree.suppress_degree_two()
    assert short.vertices == 2
    assert short.edges[0][2] == 3.5
    assert np.allclose(short.leaf_distances(), tree.leaf_distances())


def test_json():
    tree = WeightedTree(4, [(3, 0, 1.0), (3, 1, 2.0), (3, 2, 0.5)], [0, 1, 2])
    again = WeightedTree.from_json(tree.to_json())
    assert again.edges == tree.edges
    assert again.placement == tree.placement
