"""
Exact hitting times against the linear-system oracle.
"""
from fractions import Fraction

import pytest

from src.data.tree_generator import path_tree, random_labeled_tree, random_weighted_tree
from src.evaluation.exact_solver import hitting_times_linear_system
from src.exceptions import StateCapError, UnknownVertexError
from src.extensions.hitting import hitting_table, hitting_time_exact, hitting_times_from
from src.preprocessing.rooting import attach_super_root


def test_path_values(path3):
    assert hitting_time_exact(path3, "a", "a") == 0
    assert hitting_time_exact(path3, "b", "a") == 3
    assert hitting_time_exact(path3, "c", "a") == 4
    assert hitting_time_exact(path3, "a", "c") == 4
    assert hitting_time_exact(path3, "a", "b") == 1


def test_unit_child_to_parent_formula():
    tree = random_labeled_tree(9, 2)
    table = hitting_table(tree, "v0")
    sizes = attach_super_root(tree, "v0").subtree_size
    for child, value in table.edge_values.items():
        assert value == 2 * sizes[child] - 1


def test_commute_times_on_unit_tree():
    tree = random_labeled_tree(8, 5)
    table = hitting_table(tree, "v3")
    for child in table.edge_values:
        assert table.commute(child) == 2 * (tree.n - 1)


def test_weighted_commute_times(weighted3):
    table = hitting_table(weighted3, "a")
    total = weighted3.total_conductance()
    assert table.commute("b") == 2 * 2 * total
    assert table.commute("c") == 2 * Fraction(1, 2) * total
    assert table.reverse_edge("b") == hitting_time_exact(weighted3, "a", "b")


@pytest.mark.parametrize("seed", range(8))
def test_matches_linear_system(seed):
    tree = random_weighted_tree(3 + seed % 6, seed, resistances=(1, 3, Fraction(1, 2)))
    for target in tree.vertices:
        assert hitting_table(tree, target).to_target == hitting_times_linear_system(tree, target)


@pytest.mark.parametrize("seed", range(4))
def test_from_source_matches_pairwise(seed):
    tree = random_weighted_tree(7, seed)
    source = tree.vertices[seed]
    forward = hitting_times_from(tree, source)
    assert forward == {u: hitting_time_exact(tree, source, u) for u in tree.vertices}


def test_unknown_labels(path3):
    with pytest.raises(UnknownVertexError, match="source"):
        hitting_time_exact(path3, "x", "a")
    with pytest.raises(UnknownVertexError, match="target"):
        hitting_time_exact(path3, "a", "x")


def test_linear_system_oracle_cap():
    with pytest.raises(StateCapError):
        hitting_times_linear_system(path_tree(11), "v0")
