"""
Monte-Carlo oracle: episode statistics, stream determinism and gadget projection.
"""
import numpy as np
import pytest

from src.data.tree_generator import random_labeled_tree, random_weighted_tree, star_tree
from src.evaluation.exact_solver import exact_cover_return_small
from src.evaluation.monte_carlo import (
    TransitionTable, mc_cover_return, mc_cover_time, simulate_episodes, simulate_gadget_projection,
)
from src.exceptions import ConfigurationError, UnknownVertexError
from src.inference.estimator import cover_return_time
from src.preprocessing.binarizer import binarize
from src.preprocessing.rooting import attach_super_root


def test_single_edge_is_deterministic(single_edge):
    result = mc_cover_return(single_edge, "a", 500, seed=1)
    assert result.mean == 2.0 and result.std == 0.0
    assert result.half_width == 0.0
    assert mc_cover_time(single_edge, "b", 50, seed=1).mean == 1.0


def test_single_vertex_needs_no_steps(single_vertex):
    steps = simulate_episodes(single_vertex, "a", 10, seed=0)
    assert steps.tolist() == [0] * 10


def test_episode_counts_respect_parity(path4):
    steps = simulate_episodes(path4, "v0", 300, seed=5, block_size=64)
    assert len(steps) == 300
    # bipartite: every return to the start takes an even number of steps
    assert np.all(steps % 2 == 0)
    assert steps.min() >= 6


def test_thread_count_does_not_change_samples(star4):
    serial = simulate_episodes(star4, "v0", 1000, seed=42, n_jobs=1, block_size=128)
    threaded = simulate_episodes(star4, "v0", 1000, seed=42, n_jobs=4, block_size=128)
    assert np.array_equal(serial, threaded)
    other = simulate_episodes(star4, "v0", 1000, seed=43, block_size=128)
    assert not np.array_equal(serial, other)


def test_transition_table_follows_conductances(weighted3):
    table = TransitionTable(weighted3)
    b = table.index["b"]
    uniforms = np.array([0.0, 0.19, 0.21, 0.99])
    moved = table.step(np.full(4, b), uniforms)
    # from b: a with conductance 1/2, c with conductance 2
    assert [table.labels[i] for i in moved] == ["a", "a", "c", "c"]


def test_invalid_arguments(path3):
    with pytest.raises(ConfigurationError):
        simulate_episodes(path3, "a", 0, seed=1)
    with pytest.raises(ConfigurationError):
        simulate_episodes(path3, "a", 10, seed=1, measure="hitting")
    with pytest.raises(UnknownVertexError):
        simulate_episodes(path3, "z", 10, seed=1)


@pytest.mark.slow
@pytest.mark.parametrize("fixture, start, value", [("path3", "a", 8), ("star4", "v0", 11)])
def test_mean_matches_known_values(request, fixture, start, value):
    tree = request.getfixturevalue(fixture)
    result = mc_cover_return(tree, start, 40_000, seed=2024)
    assert abs(result.mean - value) < 4 * result.standard_error


@pytest.mark.slow
def test_interval_coverage():
    tree = random_labeled_tree(6, 11)
    start = tree.vertices[2]
    exact = exact_cover_return_small(tree, start).value
    hits = sum(mc_cover_return(tree, start, 2000, seed=s).contains(exact) for s in range(100))
    assert hits >= 95


def _assert_projection_matches(tree, start, steps, seed):
    gt = binarize(attach_super_root(tree, start))
    counts = simulate_gadget_projection(gt, steps, seed=seed)
    assert set(tree.vertices) <= set(counts)
    for vertex in tree.vertices:
        # moves into the super-root exist only on the gadget tree
        observed = {w: c for w, c in counts[vertex].items() if w is not None}
        total = sum(observed.values())
        neighbors = tree.neighbors(vertex)
        assert set(observed) <= set(neighbors)
        weights = {w: float(tree.conductance(vertex, w)) for w in neighbors}
        norm = sum(weights.values())
        for w in neighbors:
            p = weights[w] / norm
            se = np.sqrt(p * (1 - p) / total)
            assert abs(observed.get(w, 0) / total - p) <= 4 * se + 1e-12, (vertex, w)


@pytest.mark.slow
@pytest.mark.parametrize("tree, start", [
    (star_tree(6), "v1"),
    (random_labeled_tree(9, 5), "v0"),
    (random_weighted_tree(7, 3), "v2"),
])
def test_gadget_walk_projects_to_simple_walk(tree, start):
    _assert_projection_matches(tree, start, 100_000, seed=3)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_estimate_agrees_with_simulation_on_larger_trees(seed):
    tree = random_labeled_tree(50, 100 + seed)
    start = tree.vertices[seed]
    report = cover_return_time(tree, start, trunc_n=2000, backend="numpy")
    mc = mc_cover_return(tree, start, 100_000, seed=seed, n_jobs=4)
    assert report.lower <= mc.mean + 4 * mc.standard_error
    assert abs(mc.mean - report.estimate) <= 4 * mc.standard_error

