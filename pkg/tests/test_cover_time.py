"""
Cover time from cover-and-return, last-vertex weights and hitting times.
"""
from fractions import Fraction

import pytest

from src.data.tree_generator import random_labeled_tree, random_weighted_tree
from src.evaluation.exact_solver import exact_cover_time_small
from src.extensions.cover_time import cover_time


def test_path_from_endpoint(path3):
    report = cover_time(path3, "a", trunc_n=64)
    assert report.mode == "cover"
    # the hitting time to the far end is already 4
    assert report.lower == 4
    assert report.lower <= 4 <= report.upper
    assert abs(float(report.estimate) - 4) < 1e-6


def test_longer_path_and_star(path4, star4):
    path = cover_time(path4, "v0", trunc_n=64)
    assert path.lower <= 9 <= path.upper
    assert abs(float(path.estimate) - 9) < 1e-4
    star = cover_time(star4, "v0", trunc_n=48)
    assert star.lower <= 10 <= star.upper
    assert abs(float(star.estimate) - 10) < 1e-4


def test_cover_below_cover_return(star4):
    report = cover_time(star4, "v1", trunc_n=32)
    cover_return = report.extras["cover_return"]
    assert report.estimate <= cover_return.estimate
    assert report.upper <= cover_return.upper
    assert report.extras["last_vertex"].N == 32


def test_single_vertex(single_vertex):
    report = cover_time(single_vertex, "a", epsilon=Fraction(1, 100))
    assert report.estimate == report.lower == report.upper == 0


@pytest.mark.parametrize("seed", range(8))
def test_matches_exact_solver(seed):
    tree = random_labeled_tree(2 + seed % 4, seed)
    start = tree.vertices[-1]
    exact = exact_cover_time_small(tree, start).value
    report = cover_time(tree, start, trunc_n=64)
    assert report.lower <= exact <= report.upper
    assert abs(float(report.estimate) - float(exact)) < 1e-3 * float(exact)


@pytest.mark.parametrize("seed", range(3))
def test_weighted_matches_exact_solver(seed):
    tree = random_weighted_tree(4, seed, resistances=(1, 2))
    start = tree.vertices[0]
    exact = exact_cover_time_small(tree, start).value
    report = cover_time(tree, start, trunc_n=128)
    assert report.lower <= exact <= report.upper
    assert abs(float(report.estimate) - float(exact)) < 1e-3 * float(exact)


def test_floating_backend_matches_rational(path4):
    exact = cover_time(path4, "v1", trunc_n=24, backend="rational")
    approx = cover_time(path4, "v1", trunc_n=24, backend="float")
    assert approx.backend == "float"
    assert abs(float(exact.estimate) - float(approx.estimate)) < 1e-12


def test_numpy_backend_matches_rational(star4):
    exact = cover_time(star4, "v1", trunc_n=40, backend="rational")
    approx = cover_time(star4, "v1", trunc_n=40, backend="numpy")
    assert approx.backend == "numpy"
    assert abs(float(exact.estimate) - approx.estimate) < 1e-10
    assert approx.lower <= float(exact.lower) + 1e-12
