"""
Resistance-weighted chains: chain steps, subdivided steps and helpers.
"""
from fractions import Fraction

import pytest

from src.data.tree_generator import random_weighted_tree
from src.data.tree_loader import build_tree, parse_tree_file
from src.evaluation.exact_solver import exact_cover_return_small
from src.exceptions import ConfigurationError, SubdivisionCapError
from src.extensions.weighted import (
    cover_return_weighted, scale_to_integers, subdivide_tree, subdivided_cross_check, tail_size,
)
from src.inference.estimator import cover_return_time


@pytest.fixture
def heavy_edge():
    return parse_tree_file("a b 2\n")


def test_heavy_edge_in_chain_steps(heavy_edge):
    report = cover_return_weighted(heavy_edge, "a", trunc_n=64)
    assert report.mode == "weighted" and report.units == "chain"
    assert report.scale == 1
    assert report.lower <= 2 <= report.upper
    assert abs(report.estimate - 2) < Fraction(1, 10 ** 9)


def test_heavy_edge_in_subdivided_steps(heavy_edge):
    report = cover_return_weighted(heavy_edge, "a", units="subdivided", trunc_n=64)
    assert report.scale == 4
    assert report.lower <= 8 <= report.upper
    assert abs(report.estimate - 8) < Fraction(1, 10 ** 8)


def test_subdivision_cross_check_agrees(heavy_edge):
    direct = cover_return_weighted(heavy_edge, "a", units="subdivided", trunc_n=96)
    chained = subdivided_cross_check(heavy_edge, "a", trunc_n=96)
    assert chained.n == 3
    assert abs(float(direct.estimate) - float(chained.estimate)) < 1e-4


def test_unit_resistances_reduce_to_plain_estimate(path4):
    plain = cover_return_time(path4, "v1", trunc_n=24)
    weighted = cover_return_weighted(path4, "v1", trunc_n=24)
    for field in ("estimate", "lower", "upper", "trunc_n", "delta_apriori", "delta_empirical",
                  "certified"):
        assert getattr(weighted, field) == getattr(plain, field)


def test_unit_resistances_certified_identically(single_edge):
    plain = cover_return_time(single_edge, "a", epsilon=Fraction(1, 2))
    weighted = cover_return_weighted(single_edge, "a", epsilon=Fraction(1, 2))
    assert weighted.trunc_n == plain.trunc_n == 208
    assert (weighted.lower, weighted.upper) == (plain.lower, plain.upper)


def test_fractional_resistances_are_scaled_for_subdivision():
    tree = parse_tree_file("a b 1/2\nb c 1/3\n")
    report = cover_return_weighted(tree, "a", units="subdivided", trunc_n=8)
    assert report.extras["subdivision_scale"] == 6
    assert report.scale == 10


@pytest.mark.parametrize("seed", range(4))
def test_chain_steps_match_exact_solver(seed):
    tree = random_weighted_tree(3 + seed % 2, seed, resistances=(1, 2, Fraction(1, 2)))
    start = tree.vertices[0]
    exact = exact_cover_return_small(tree, start).value
    report = cover_return_weighted(tree, start, trunc_n=128)
    assert report.lower <= exact <= report.upper
    assert abs(float(report.estimate) - float(exact)) / float(exact) < 1e-3


def test_tail_size():
    assert tail_size(parse_tree_file("a b\nb c\n")) == 3
    assert tail_size(parse_tree_file("a b 1/2\nb c 2\n")) == 7
    assert tail_size(build_tree(["a"], [])) == 1


def test_scale_to_integers():
    tree = parse_tree_file("a b 1/2\nb c 1/3\n")
    scaled, factor = scale_to_integers(tree)
    assert factor == 6
    assert [r for _, _, r in scaled.edges] == [3, 2]
    same, factor = scale_to_integers(parse_tree_file("a b 3\n"))
    assert factor == 1 and same.resistance("a", "b") == 3
    with pytest.raises(SubdivisionCapError, match="scale factor"):
        scale_to_integers(tree, cap=5)


def test_subdivide_tree_labels():
    chained = subdivide_tree(parse_tree_file("a b 3\nb c\n"))
    assert chained.n == 5
    assert chained.is_unit()
    assert "a~b#1" in chained and "a~b#2" in chained
    assert chained.neighbors("a") == ["a~b#1"]
    with pytest.raises(ConfigurationError):
        subdivide_tree(parse_tree_file("a b 1/2\n"))


def test_unknown_units(heavy_edge):
    with pytest.raises(ConfigurationError):
        cover_return_weighted(heavy_edge, "a", units="seconds", trunc_n=8)
