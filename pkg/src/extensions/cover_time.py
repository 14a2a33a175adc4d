"""
Cover Time
C_v = C_v^+ - sum over leaves u of P_last[u] H[u, v], with the cover-and-return
certificate widened by the last-vertex truncation mass.
"""
import sys
import time
from dataclasses import replace
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, DEFAULT_PRECISION_BITS
from src.exceptions import TreeStructureError
from src.extensions.hitting import hitting_table, hitting_times_from
from src.extensions.last_vertex import last_vertex_from_run
from src.extensions.weighted import tail_size
from src.inference.estimator import certified_report, run_pipeline

logger = logging.getLogger(__name__)


def cover_time(tree, start, epsilon=None, trunc_n=None, backend="auto",
               precision_bits=DEFAULT_PRECISION_BITS, n_jobs=DEFAULT_JOBS):
    """
    Estimate of the expected cover time from start, in chain steps.

    Args:
        tree: WeightedTree (unit or weighted)
        start: Start label
        epsilon: Additive target on E(1)
        trunc_n: Explicit profile length

    Returns:
        EstimateReport with mode "cover"; extras hold the last-vertex result
    """
    if tree.n == 0:
        raise TreeStructureError("tree has no vertices")
    started = time.perf_counter()
    run = run_pipeline(tree, start, epsilon, trunc_n, tail_size=tail_size(tree),
                       backend=backend, precision_bits=precision_bits, n_jobs=n_jobs)
    conductance = tree.total_conductance()
    cover_return = certified_report(run, "cover-return", 2 * conductance,
                                    2 * conductance * tree.total_resistance(), started)
    last = last_vertex_from_run(run, n_jobs)

    arithmetic = run.backend
    into_start = hitting_table(tree, start)
    weighted_sum = arithmetic.zero
    for leaf, probability in last.probabilities.items():
        weighted_sum += probability * arithmetic.convert(into_start[leaf])
    h_max = arithmetic.convert(max((into_start[u] for u in last.probabilities), default=0))
    if run.truncation.certified:
        slack = h_max * (last.mass_gap + arithmetic.convert(run.truncation.additive_bound))
    else:
        slack = h_max

    zero = arithmetic.zero
    # every hitting time from start is a lower bound on the cover time
    floor = arithmetic.convert(max(hitting_times_from(tree, start).values()))
    lower = max(cover_return.lower - min(h_max, weighted_sum + slack), floor, zero)
    upper = max(cover_return.upper - max(zero, weighted_sum - slack), lower)
    estimate = min(max(cover_return.estimate - weighted_sum, lower), upper)

    report = replace(
        cover_return,
        mode="cover",
        estimate=estimate,
        lower=lower,
        upper=upper,
        wallclock_ms=(time.perf_counter() - started) * 1000.0,
        extras={"last_vertex": last, "cover_return": cover_return},
    )
    logger.info("✓ Cover-time estimate %s", float(estimate))
    return report
