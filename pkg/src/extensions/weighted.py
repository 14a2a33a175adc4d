"""
Weighted Markov Chains on Trees
Cover-and-return times of reversible chains given by edge resistances, counted
either in chain transitions or in steps of the walk on the subdivided tree.
"""
import sys
import time
from fractions import Fraction
from math import ceil, lcm
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, DEFAULT_PRECISION_BITS, STEP_UNITS, SUBDIVISION_SCALE_CAP
from src.data.tree_loader import build_tree
from src.exceptions import ConfigurationError, SubdivisionCapError, TreeStructureError
from src.inference.estimator import certified_report, cover_return_time, run_pipeline

logger = logging.getLogger(__name__)


def tail_size(tree):
    """
    Vertex count of the subdivision of T_r in which the smallest resistance
    (the root edge counted as 1) is one unit, excluding r; n for unit trees.
    """
    unit = min([Fraction(1)] + [r for _, _, r in tree.edges])
    return ceil((1 + tree.total_resistance()) / unit)


def scale_to_integers(tree, cap=SUBDIVISION_SCALE_CAP):
    """
    Multiply all resistances by the least common denominator.

    Returns:
        (scaled tree, factor)
    """
    factor = 1
    for _, _, r in tree.edges:
        factor = lcm(factor, r.denominator)
        if factor > cap:
            raise SubdivisionCapError(
                f"resistances need a scale factor above {cap} to become integers"
            )
    if factor == 1:
        return tree, 1
    edges = [(u, v, r * factor) for u, v, r in tree.edges]
    return build_tree(tree.vertices, edges), factor


def subdivide_tree(tree):
    """
    Replace every edge of integer resistance R by a path of R unit edges.

    Interior chain vertices are labelled "u~v#i".
    """
    vertices = list(tree.vertices)
    edges = []
    for u, v, r in tree.edges:
        if r.denominator != 1:
            raise ConfigurationError(f"subdivision needs integer resistances, edge {u}-{v} has {r}")
        chain = [u] + [f"{u}~{v}#{i}" for i in range(1, int(r))] + [v]
        vertices.extend(chain[1:-1])
        edges.extend((a, b, 1) for a, b in zip(chain, chain[1:]))
    return build_tree(vertices, edges)


def cover_return_weighted(tree, start, epsilon=None, units="chain", trunc_n=None,
                          backend="auto", precision_bits=DEFAULT_PRECISION_BITS,
                          n_jobs=DEFAULT_JOBS):
    """
    Certified cover-and-return time of the resistance-weighted walk.

    E(1) comes from the conductance gadget DP on T itself; the scale is
    C[v1, r] - 2 in the requested unit: 2 * (sum of conductances) for chain
    transitions, 2 * (sum of resistances) for subdivided steps. Subdivided
    steps on non-integral resistances are taken on the tree scaled by the
    least common denominator.

    Args:
        tree: WeightedTree
        start: Start label
        epsilon: Additive target on E(1)
        units: "chain" or "subdivided"
        trunc_n: Explicit profile length

    Returns:
        EstimateReport
    """
    if units not in STEP_UNITS:
        raise ConfigurationError(f"units must be one of {STEP_UNITS}, got {units!r}")
    if tree.n == 0:
        raise TreeStructureError("tree has no vertices")
    started = time.perf_counter()
    factor = 1
    if units == "subdivided":
        tree, factor = scale_to_integers(tree)
    run = run_pipeline(tree, start, epsilon, trunc_n, tail_size=tail_size(tree),
                       backend=backend, precision_bits=precision_bits, n_jobs=n_jobs)
    if units == "chain":
        scale = 2 * tree.total_conductance()
        bound = 2 * tree.total_conductance() * tree.total_resistance()
    else:
        scale = 2 * tree.total_resistance()
        bound = 2 * tree.total_resistance() ** 2
    report = certified_report(run, "weighted", scale, bound, started, units=units)
    if factor != 1:
        report.extras["subdivision_scale"] = factor
    logger.info("✓ Weighted estimate (%s units) %s", units, float(report.estimate))
    return report


def subdivided_cross_check(tree, start, epsilon=None, trunc_n=None, backend="auto",
                           precision_bits=DEFAULT_PRECISION_BITS, n_jobs=DEFAULT_JOBS):
    """Unit pipeline on the subdivided (and, if needed, integer-scaled) tree."""
    scaled, _ = scale_to_integers(tree)
    return cover_return_time(subdivide_tree(scaled), start, epsilon, trunc_n,
                             backend=backend, precision_bits=precision_bits, n_jobs=n_jobs)
