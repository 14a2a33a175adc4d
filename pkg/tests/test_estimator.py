"""
End-to-end cover-and-return estimates.
"""
from fractions import Fraction

import pytest

from src.data.tree_generator import path_tree, random_labeled_tree, star_tree
from src.data.tree_loader import build_tree
from src.evaluation.closed_forms import closed_form_reference
from src.evaluation.exact_solver import exact_cover_return_small
from src.exceptions import ConfigurationError, UnknownVertexError
from src.inference.estimator import cover_return_time, run_pipeline
from src.inference.truncation import choose_truncation


def test_single_edge_certified_interval(single_edge):
    report = cover_return_time(single_edge, "a", epsilon=Fraction(1, 2))
    assert report.certified
    assert report.trunc_n == 208
    assert report.backend == "rational" and report.exact
    assert report.estimate == report.lower == 2 * (1 - Fraction(1, 2 ** 207))
    assert report.upper == 2
    assert report.lower <= 2 <= report.upper
    assert report.delta_apriori == Fraction(1, 4096)


def test_single_edge_from_either_end(single_edge):
    left = cover_return_time(single_edge, "a", trunc_n=32)
    right = cover_return_time(single_edge, "b", trunc_n=32)
    assert left.estimate == right.estimate
    assert 2 - left.estimate < Fraction(1, 10 ** 9)


def test_path_without_certificate_falls_back_to_global_bound(path3):
    report = cover_return_time(path3, "a", trunc_n=64)
    assert not report.certified
    assert report.upper == 8
    assert report.lower <= 8
    assert abs(report.estimate - 8) < Fraction(1, 10 ** 6)
    assert report.scale == 4


@pytest.mark.slow
def test_path_certified_interval(path3):
    report = cover_return_time(path3, "a", epsilon=Fraction(1, 2))
    assert report.certified
    assert report.trunc_n % 36 == 0
    assert report.lower <= 8 <= report.upper
    assert report.upper - report.lower <= 4 * Fraction(1, 2)


def test_star_from_center(star4):
    report = cover_return_time(star4, "v0", trunc_n=48)
    assert report.lower <= 11 <= report.upper
    assert abs(float(report.estimate) - 11) < 1e-4
    assert report.upper <= 18


def test_single_vertex(single_vertex):
    report = cover_return_time(single_vertex, "a", epsilon=Fraction(1, 1000))
    assert report.estimate == report.lower == report.upper == 0
    assert report.trunc_n == 4
    assert report.certified


def test_global_bounds_on_random_trees():
    for seed in range(6):
        tree = random_labeled_tree(6, seed)
        n = tree.n
        report = cover_return_time(tree, tree.vertices[seed % n], trunc_n=24)
        assert 0 <= report.lower <= report.estimate <= report.upper
        assert report.upper >= 2 * (n - 1)
        assert report.lower <= 2 * (n - 1) ** 2


@pytest.mark.parametrize("seed", range(10))
def test_lower_endpoint_below_exact_value(seed):
    tree = random_labeled_tree(2 + seed % 4, seed)
    for start in tree.vertices:
        exact = exact_cover_return_small(tree, start).value
        report = cover_return_time(tree, start, trunc_n=64)
        assert report.lower <= exact <= report.upper
        assert abs(report.estimate - exact) / exact < Fraction(1, 1000)


def test_two_child_order_is_irrelevant():
    # children of "a" swapped: no gadget involved, so the results agree exactly
    first = build_tree(["a", "b", "c", "d"], [("a", "b", 1), ("a", "c", 1), ("c", "d", 1)])
    second = build_tree(["a", "c", "d", "b"], [("a", "c", 1), ("c", "d", 1), ("a", "b", 1)])
    one = cover_return_time(first, "a", trunc_n=20)
    two = cover_return_time(second, "a", trunc_n=20)
    assert one.estimate == two.estimate


def test_gadget_order_changes_only_truncation_error():
    edges = [("h", "x", 1), ("h", "y", 1), ("y", "y2", 1), ("h", "z", 1), ("z", "z2", 1),
             ("z2", "z3", 1)]
    first = build_tree(["h", "x", "y", "y2", "z", "z2", "z3"], edges)
    second = build_tree(["h", "z", "z2", "z3", "y", "y2", "x"], edges[3:] + edges[1:3] + edges[:1])
    one = cover_return_time(first, "h", trunc_n=96)
    two = cover_return_time(second, "h", trunc_n=96)
    assert abs(float(one.estimate) - float(two.estimate)) < 1e-6
    assert one.lower <= two.upper and two.lower <= one.upper


def test_thread_count_does_not_change_report():
    tree = random_labeled_tree(11, 4)
    reports = [cover_return_time(tree, "v2", trunc_n=16, n_jobs=jobs) for jobs in (1, 4, 8)]
    assert len({r.fingerprint() for r in reports}) == 1


def test_floating_backend(path4):
    exact = cover_return_time(path4, "v0", trunc_n=32, backend="rational")
    approx = cover_return_time(path4, "v0", trunc_n=32, backend="float", precision_bits=80)
    assert approx.backend == "float" and not approx.exact
    assert abs(float(approx.estimate) - float(exact.estimate)) < 1e-12


def test_auto_backend_switches_on_propagation_work(monkeypatch, path4):
    import src.inference.arithmetic as arithmetic

    # five gadget-tree nodes at N = 8: work 5 * 64 = 320
    monkeypatch.setattr(arithmetic, "RATIONAL_WORK_LIMIT", 319)
    assert cover_return_time(path4, "v0", trunc_n=8).backend == "numpy"
    monkeypatch.setattr(arithmetic, "RATIONAL_WORK_LIMIT", 320)
    assert cover_return_time(path4, "v0", trunc_n=8).backend == "rational"


def test_numpy_backend_widens_endpoints(path4):
    exact = cover_return_time(path4, "v0", trunc_n=32, backend="rational")
    approx = cover_return_time(path4, "v0", trunc_n=32, backend="numpy")
    assert approx.backend == "numpy" and not approx.exact
    assert isinstance(approx.estimate, float)
    assert abs(approx.estimate - float(exact.estimate)) < 1e-12
    assert approx.lower < approx.estimate <= approx.upper
    assert approx.lower <= float(exact.lower)


@pytest.mark.slow
@pytest.mark.parametrize("family, n", [("path", 3), ("path", 10), ("star", 4), ("star", 10)])
def test_closed_forms_at_default_epsilon(family, n):
    tree = path_tree(n) if family == "path" else star_tree(n)
    reference = float(closed_form_reference(family, n))
    report = cover_return_time(tree, "v0", epsilon=Fraction(1, 1000))
    assert report.certified
    assert report.trunc_n == choose_truncation(n, Fraction(1, 1000)).N
    assert float(report.lower) <= reference <= float(report.upper)
    assert (float(report.upper) - float(report.lower)) / reference <= 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(6))
def test_certified_relative_gap_on_random_trees(seed):
    tree = random_labeled_tree(2 + seed % 3, seed)
    start = tree.vertices[seed % tree.n]
    exact = float(exact_cover_return_small(tree, start).value)
    report = cover_return_time(tree, start, epsilon=Fraction(1, 1000), backend="numpy")
    assert report.certified
    assert float(report.lower) <= exact <= float(report.upper)
    assert (float(report.upper) - float(report.lower)) / exact <= 1e-3


@pytest.mark.slow
def test_certified_relative_gap_in_exact_arithmetic(single_edge):
    report = cover_return_time(single_edge, "a", epsilon=Fraction(1, 1000), backend="rational")
    assert report.certified and report.exact
    assert report.lower <= 2 <= report.upper
    assert (report.upper - report.lower) / 2 <= Fraction(1, 1000)



def test_pipeline_products(star4):
    run = run_pipeline(star4, "v0", trunc_n=10)
    assert run.truncation.N == 10
    assert run.dp.N == 10
    assert run.gadget_tree.gadget_count() == 1
    assert run.rooted.start == "v0"


@pytest.mark.parametrize("call, error", [
    (lambda t: cover_return_time(t, "zz", trunc_n=8), UnknownVertexError),
    (lambda t: cover_return_time(t, "v0"), ConfigurationError),
    (lambda t: cover_return_time(t, "v0", trunc_n=0), ConfigurationError),
    (lambda t: cover_return_time(t, "v0", trunc_n=8, backend="decimal"), ConfigurationError),
])
def test_input_errors(call, error):
    with pytest.raises(error):
        call(path_tree(3))


def test_weighted_tree_needs_weighted_mode(weighted3):
    with pytest.raises(ConfigurationError, match="weighted"):
        cover_return_time(weighted3, "a", trunc_n=8)
