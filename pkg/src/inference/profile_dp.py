"""
Coverage Profile DP
Bottom-up recursion over the gadget tree computing, for every node i and
1 <= t <= N, the probability that the subtree of i is covered within the
first t traversals of its parent edge.
"""
import sys
from dataclasses import dataclass
from pathlib import Path
import logging

from joblib import Parallel, delayed

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS
from src.exceptions import ConfigurationError
from src.inference import vectorized
from src.inference.kernels import KernelCache
from src.preprocessing.binarizer import NodeClass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverageProfile:
    """
    Truncated profile P(1..N) of one node; values[t - 1] holds P(t).

    The stored P(N) is 1; precap keeps the value the recursion produced at N.
    """

    values: tuple
    node_id: int
    exact: bool
    precap: object

    @property
    def N(self):
        return len(self.values)

    def at(self, t):
        """P(t) with P(0) = 0 and P(t) = 1 for t >= N."""
        if t <= 0:
            return 0 * self.values[0]
        if t >= self.N:
            return self.values[-1]
        return self.values[t - 1]

    def gaps(self):
        """g(b) = 1 - P(b) for b = 0 .. N-1 (g(0) = 1); g vanishes from N on."""
        one = self.values[-1]
        return [one] + [one - p for p in self.values[:-1]]

    def tail_gap(self):
        return 1 - self.precap


def leaf_profile(N, node_id, backend):
    ones = tuple(backend.one for _ in range(N))
    return CoverageProfile(ones, node_id, backend.exact, backend.one)


def _dot(row, weights, start=0):
    total = 0 * row[0]
    for i in range(start, len(weights)):
        w = weights[i]
        if w:
            total += row[i] * w
    return total


def _capped(raw, node_id, backend):
    values = list(raw)
    precap = values[-1]
    values[-1] = backend.one
    return CoverageProfile(tuple(values), node_id, backend.exact, precap)


def _one_child(kernel, left):
    N = kernel.N
    gl = left.gaps()
    return [1 - _dot(kernel.left_marginal(t), gl) for t in range(1, N + 1)]


def _two_child(kernel, left, right):
    N = kernel.N
    gl, gr = left.gaps(), right.gaps()
    # right subtree uncovered after the right moves preceding the m-th non-right move
    right_open = [None] + [_dot(kernel.right_given_moves(m), gr) for m in range(1, 2 * N)]
    raw = []
    for t in range(1, N + 1):
        row_l = kernel.left_marginal(t)
        row_r = kernel.right_marginal(t)
        left_open = 0 * row_l[0]
        both_open = 0 * row_l[0]
        for a in range(N):
            if gl[a]:
                term = row_l[a] * gl[a]
                left_open += term
                both_open += term * right_open[t + a]
        raw.append(1 - left_open - _dot(row_r, gr) + both_open)
    return raw


def _gadget(kernel, left, right):
    N = kernel.N
    raw = []
    for t in range(1, N + 1):
        split = kernel.split_row(t)
        total = 0 * split[0]
        for a in range(1, t):
            total += split[a] * left.at(a) * right.at(t - a)
        raw.append(total)
    return raw


def propagate_profile(kernel, left, right=None, node_id=None):
    """
    Profile of a node from its kernel and its children's profiles.

    Evaluates sum over 1 <= t_l, t_r <= N of Q(t_l, t_r; t) P_l(t_l) P_r(t_r)
    through the factorization of Q into negative-binomial marginals, which
    is quadratic in N and equal to the capped double sum term for term.

    Args:
        kernel: TraversalKernel of the node
        left: CoverageProfile of the left child
        right: CoverageProfile of the right child (absent for one-child nodes)
        node_id: Id stored on the result

    Returns:
        CoverageProfile with P(N) capped to 1
    """
    N = kernel.N
    for child in (left, right):
        if child is not None and child.N != N:
            raise ConfigurationError(f"profile length {child.N} does not match kernel N = {N}")
    if getattr(kernel.backend, "vectorized", False):
        one_child, two_child, gadget = vectorized.one_child, vectorized.two_child, vectorized.gadget
    else:
        one_child, two_child, gadget = _one_child, _two_child, _gadget
    if kernel.node_class is NodeClass.ONE_CHILD:
        raw = one_child(kernel, left)
    elif right is None:
        raise ConfigurationError(f"{kernel.node_class.value} kernel needs two child profiles")
    elif kernel.node_class is NodeClass.TWO_CHILD:
        raw = two_child(kernel, left, right)
    else:
        raw = gadget(kernel, left, right)
    return _capped(raw, node_id, kernel.backend)


def propagate_profile_dense(kernel, left, right=None, node_id=None):
    """Same result as propagate_profile from the dense kernel table (cubic in N)."""
    N = kernel.N
    table = kernel.dense_table()
    raw = []
    for t in range(1, N + 1):
        total = kernel.backend.zero
        for t_l in range(1, N + 1):
            if kernel.node_class is NodeClass.ONE_CHILD:
                total += table[t][t_l][0] * left.at(t_l)
                continue
            for t_r in range(1, N + 1):
                total += table[t][t_l][t_r] * left.at(t_l) * right.at(t_r)
        raw.append(total)
    return _capped(raw, node_id, kernel.backend)


@dataclass(frozen=True)
class DpResult:
    """Profiles of every node below r, the profile at w1 and the tail diagnostics."""

    root_profile: CoverageProfile
    profiles: dict
    max_tail_gap: object
    N: int
    backend_name: str
    kernels_built: int

    @property
    def delta_empirical(self):
        return 2 * self.max_tail_gap


class ProfileDP:
    """Runs the coverage recursion on one gadget tree."""

    def __init__(self, gt, N, backend, n_jobs=DEFAULT_JOBS, cache=None):
        if N < 1:
            raise ConfigurationError(f"truncation N must be positive, got {N}")
        self.gt = gt
        self.N = N
        self.backend = backend
        self.n_jobs = n_jobs
        self.cache = KernelCache() if cache is None else cache
        self.profiles = {}

    def kernel_for(self, node):
        return self.cache.get(node.node_class, node.probs, self.N, self.backend)

    def _evaluate(self, node_id):
        node = self.gt.node(node_id)
        if node.node_class is NodeClass.LEAF:
            return leaf_profile(self.N, node_id, self.backend)
        left = self.profiles[node.left]
        right = self.profiles[node.right] if node.right is not None else None
        return propagate_profile(self.kernel_for(node), left, right, node_id)

    def run(self):
        """
        Evaluate all nodes level by level; nodes of one height are
        independent and may run on worker threads.
        """
        levels = self.gt.levels()
        logger.info("Running profile DP: %d nodes, N = %d, backend %s",
                    len(self.gt) - 1, self.N, self.backend.name)
        for level in levels:
            if self.n_jobs == 1 or len(level) == 1:
                results = [self._evaluate(node_id) for node_id in level]
            else:
                results = Parallel(n_jobs=self.n_jobs, prefer="threads")(
                    delayed(self._evaluate)(node_id) for node_id in level
                )
            for node_id, profile in zip(level, results):
                self.profiles[node_id] = profile

        max_gap = self.backend.zero
        for node_id in sorted(self.profiles):
            gap = self.profiles[node_id].tail_gap()
            if gap > max_gap:
                max_gap = gap
        root = self.profiles[self.gt.w1]
        logger.info("✓ DP complete: %d kernels built, max tail gap %s",
                    len(self.cache), float(max_gap))
        return DpResult(root, dict(self.profiles), max_gap, self.N,
                        self.backend.name, len(self.cache))


def run_dp(gt, N, backend, n_jobs=DEFAULT_JOBS, cache=None):
    """
    Coverage profiles bottom-up from the leaves (all-ones profiles).

    Returns:
        DpResult with the profile at w1 and the largest pre-cap gap 1 - P(N)
    """
    return ProfileDP(gt, N, backend, n_jobs, cache).run()


def expected_traversals(profile):
    """E1(1) = sum over t = 1..N of (1 - P(t))."""
    total = 0 * profile.values[0]
    for p in profile.values:
        total += 1 - p
    return total
