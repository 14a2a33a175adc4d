"""
Subset Cover-and-Return
Expected time to visit every target vertex and return to the start.
"""
import sys
import time
from pathlib import Path
import logging

import networkx as nx

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, DEFAULT_PRECISION_BITS
from src.exceptions import ConfigurationError
from src.extensions.weighted import tail_size
from src.inference.estimator import certified_report, run_pipeline

logger = logging.getLogger(__name__)


def steiner_subtree(tree, start, targets):
    """
    Minimal subtree spanning targets and start, as an induced WeightedTree.

    Args:
        tree: WeightedTree
        start: Start label
        targets: Iterable of target labels
    """
    tree.require(start, "start")
    targets = list(targets)
    if not targets:
        raise ConfigurationError("target set must be nonempty")
    for label in targets:
        tree.require(label, "target")
    graph = tree.to_networkx()
    paths = nx.single_source_shortest_path(graph, start)
    keep = {start}
    for label in targets:
        keep.update(paths[label])
    return tree.induced(keep)


def cover_return_subset(tree, start, targets, epsilon=None, trunc_n=None, backend="auto",
                        precision_bits=DEFAULT_PRECISION_BITS, n_jobs=DEFAULT_JOBS):
    """
    Certified estimate of the time to visit all targets and return to start.

    Runs the pipeline on the Steiner subtree T' (the projection of the walk
    onto T' has the same traversal counts) and scales E_T'(1) by the
    commute factor of the full tree, 2(n-1) for unit trees.

    Returns:
        EstimateReport with n the vertex count of the full tree
    """
    started = time.perf_counter()
    sub = steiner_subtree(tree, start, targets)
    logger.info("Steiner subtree: %d of %d vertices", sub.n, tree.n)
    run = run_pipeline(sub, start, epsilon, trunc_n, tail_size=tail_size(sub),
                       backend=backend, precision_bits=precision_bits, n_jobs=n_jobs)
    scale = 2 * tree.total_conductance()
    # an Euler tour of T' bounds the subset cover-and-return time
    bound = 2 * tree.total_conductance() * sub.total_resistance()
    report = certified_report(run, "subset", scale, bound, started, n=tree.n)
    report.extras["subtree_size"] = sub.n
    return report
