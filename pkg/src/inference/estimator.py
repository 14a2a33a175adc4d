"""
Cover-and-Return Estimator
Chains super-rooting, binarization, truncation and the profile DP into a
certified interval for the expected cover-and-return time.
"""
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, DEFAULT_PRECISION_BITS, ROUNDING_SLACK_FACTOR
from src.exceptions import ConfigurationError, TreeStructureError
from src.inference.arithmetic import make_backend
from src.inference.profile_dp import expected_traversals, run_dp
from src.inference.truncation import choose_truncation, params_for
from src.preprocessing.binarizer import binarize
from src.preprocessing.rooting import attach_super_root

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimateReport:
    """
    Point estimate with lower/upper endpoints and truncation diagnostics.

    Values are Fractions for the rational backend, mpmath numbers for the
    float backend and Python floats for numpy; `exact` records which.
    """

    mode: str
    n: int
    start: str
    estimate: object
    lower: object
    upper: object
    trunc_n: int
    e_lower: object
    additive_bound: object
    scale: Fraction
    delta_apriori: Fraction
    delta_empirical: object
    backend: str
    exact: bool
    certified: bool
    units: str = "chain"
    wallclock_ms: float = None
    extras: dict = field(default_factory=dict, compare=False)

    def fingerprint(self):
        """JSON of every reported field except the wallclock, for determinism checks."""
        fields = (self.mode, self.n, self.start, self.estimate, self.lower, self.upper,
                  self.trunc_n, self.delta_apriori, self.delta_empirical, self.backend,
                  self.exact, self.certified, self.units)
        return json.dumps([None if f is None else str(f) for f in fields])


@dataclass(frozen=True)
class PipelineRun:
    """Intermediate products of one estimator pipeline run."""

    rooted: object
    gadget_tree: object
    truncation: object
    dp: object
    backend: object
    e_lower: object


def resolve_truncation(n, epsilon, trunc_n, tail_size):
    """TruncationParams from an explicit N or from epsilon."""
    if trunc_n is not None:
        return params_for(trunc_n, n, tail_size, epsilon)
    if epsilon is None:
        raise ConfigurationError("either epsilon or a truncation N must be given")
    return choose_truncation(n, epsilon, tail_size)


def run_pipeline(tree, start, epsilon=None, trunc_n=None, tail_size=None,
                 backend="auto", precision_bits=DEFAULT_PRECISION_BITS,
                 n_jobs=DEFAULT_JOBS):
    """
    attach_super_root -> binarize -> truncation -> run_dp -> expected_traversals.

    Args:
        tree: WeightedTree
        start: Start label
        epsilon: Additive target on E(1) (ignored when trunc_n is given)
        trunc_n: Explicit profile length
        tail_size: Size entering the a-priori tail block (defaults to n)
        backend: "auto", "rational", "float" or "numpy"
        precision_bits: Float backend precision
        n_jobs: Worker threads for the DP

    Returns:
        PipelineRun
    """
    if tree.n == 0:
        raise TreeStructureError("tree has no vertices")
    rooted = attach_super_root(tree, start)
    gt = binarize(rooted)
    params = resolve_truncation(tree.n, epsilon, trunc_n, tail_size)
    arithmetic = make_backend(backend, work=len(gt) * params.N ** 2, bits=precision_bits)
    dp = run_dp(gt, params.N, arithmetic, n_jobs=n_jobs)
    e_lower = expected_traversals(dp.root_profile)
    return PipelineRun(rooted, gt, params, dp, arithmetic, e_lower)


def rounding_slack(arithmetic, magnitude, N, nodes):
    """
    Widening applied to floating endpoints,
    magnitude * nodes * N * (bit length of N + 1) * factor * u, with u the unit
    roundoff of the backend. The bit-length term covers the log-gamma table,
    whose entries grow like N log N. Zero for exact arithmetic.
    """
    if arithmetic.exact:
        return arithmetic.zero
    scale = Fraction(nodes * N * (N.bit_length() + 1) * ROUNDING_SLACK_FACTOR)
    scale *= arithmetic.unit_roundoff
    return abs(magnitude) * arithmetic.convert(scale)


def certified_report(run, mode, scale, universal_bound, started, units="chain", n=None):
    """
    Turn a pipeline run into a report.

    estimate = scale * E1(1), which is also the lower endpoint for exact
    backends; upper = scale * (E1(1) + additive bound), never above the
    universal bound, which is also the upper endpoint when no certificate is
    available at this N. Floating backends move both endpoints outward by
    rounding_slack.
    """
    arithmetic = run.backend
    scale_value = arithmetic.convert(scale)
    estimate = scale_value * run.e_lower
    bound = arithmetic.convert(universal_bound)
    params = run.truncation
    slack = rounding_slack(arithmetic, estimate + scale_value, params.N, len(run.gadget_tree))
    if params.certified:
        upper = scale_value * (run.e_lower + arithmetic.convert(params.additive_bound)) + slack
        upper = min(upper, bound)
    else:
        upper = bound
    upper = max(upper, estimate)
    lower = max(estimate - slack, arithmetic.zero)
    elapsed = (time.perf_counter() - started) * 1000.0
    return EstimateReport(
        mode=mode,
        n=run.rooted.n if n is None else n,
        start=run.rooted.start,
        estimate=estimate,
        lower=lower,
        upper=upper,
        trunc_n=params.N,
        e_lower=run.e_lower,
        additive_bound=params.additive_bound,
        scale=Fraction(scale),
        delta_apriori=params.delta,
        delta_empirical=run.dp.delta_empirical,
        backend=arithmetic.name,
        exact=arithmetic.exact,
        certified=params.certified,
        units=units,
        wallclock_ms=elapsed,
    )


def cover_return_time(tree, start, epsilon=None, trunc_n=None, backend="auto",
                      precision_bits=DEFAULT_PRECISION_BITS, n_jobs=DEFAULT_JOBS):
    """
    Certified estimate of the cover-and-return time of a unit-resistance tree.

    The estimate is 2(n-1) E1(1); it is a lower bound on the true value and
    the upper endpoint never exceeds 2(n-1)^2.
    """
    if tree.n == 0:
        raise TreeStructureError("tree has no vertices")
    if not tree.is_unit():
        raise ConfigurationError("cover_return_time needs unit resistances; use weighted mode")
    started = time.perf_counter()
    run = run_pipeline(tree, start, epsilon, trunc_n, backend=backend,
                       precision_bits=precision_bits, n_jobs=n_jobs)
    n = tree.n
    report = certified_report(run, "cover-return", 2 * (n - 1), 2 * (n - 1) ** 2, started)
    logger.info("✓ Cover-and-return estimate %s (N = %d)", float(report.estimate), report.trunc_n)
    return report
