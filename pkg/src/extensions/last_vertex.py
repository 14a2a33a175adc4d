"""
Last-Vertex Distribution
P_last[u]: probability that leaf u is the final vertex visited, via the
A-recursion from u up to w1 over the shared coverage profiles.
"""
import sys
from dataclasses import dataclass
from pathlib import Path
import logging

from joblib import Parallel, delayed

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, DEFAULT_PRECISION_BITS
from src.exceptions import ConfigurationError
from src.extensions.last_kernel import build_last_kernel
from src.extensions.weighted import tail_size
from src.inference import vectorized
from src.inference.estimator import run_pipeline
from src.inference.kernels import KernelCache, binomial_row, negative_binomial_row
from src.preprocessing.binarizer import NodeClass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LastVertexProfile:
    """A(1..N) at one node for one target leaf; values[t - 1] holds A(t)."""

    values: tuple
    target: str
    node_id: int

    @property
    def N(self):
        return len(self.values)

    def total(self):
        result = 0 * self.values[0]
        for a in self.values:
            result += a
        return result


@dataclass(frozen=True)
class LastVertexResult:
    """Per-leaf probabilities in vertex order, their sum and |1 - sum|."""

    probabilities: dict
    total: object
    mass_gap: object
    N: int
    backend_name: str

    def __getitem__(self, label):
        return self.probabilities[label]


def target_profile(N, target, node_id, backend):
    """Base case at the target leaf: first visit before the first parent traversal."""
    values = [backend.one] + [backend.zero for _ in range(N - 1)]
    return LastVertexProfile(tuple(values), target, node_id)


def _open_mass(probability, gaps, N):
    """U(m) = P(subtree still uncovered after the moves preceding the m-th other move)."""
    return [None] + [
        sum((r * g for r, g in zip(negative_binomial_row(m, probability, N), gaps) if g), 0 * gaps[0])
        for m in range(1, 2 * N)
    ]


def propagate_last(kernel, child, other=None, node_id=None):
    """
    A at a node from A of its target-side child and the coverage profile of
    the other child; mass with t > N is dropped.

    Args:
        kernel: LastKernel of the node (side = target side)
        child: LastVertexProfile of the target-side child
        other: CoverageProfile of the other child (absent for one-child nodes)
        node_id: Id stored on the result
    """
    N = kernel.N
    if child.N != N or (other is not None and other.N != N):
        raise ConfigurationError(f"profile lengths do not match kernel N = {N}")
    if getattr(kernel.backend, "vectorized", False):
        if kernel.node_class is NodeClass.GADGET:
            values = vectorized.last_gadget(kernel, child, other)
        else:
            values = vectorized.last_branch(kernel, child, other)
        return LastVertexProfile(tuple(values), child.target, node_id)
    zero = kernel.backend.zero
    out = [zero] * N
    A = child.values

    if kernel.node_class is NodeClass.GADGET:
        for t in range(1, N + 1):
            row = binomial_row(t - 1, kernel.p_other, kernel.p_target)
            total = zero
            for t_target in range(1, t + 1):
                if not A[t_target - 1]:
                    continue
                t_other = t - t_target
                # C(t-1, t_other) p_target^t_target p_other^t_other
                weight = row[t_other] * kernel.p_target
                total += A[t_target - 1] * weight * other.at(t_other)
            out[t - 1] = total
        return LastVertexProfile(tuple(out), child.target, node_id)

    if kernel.node_class is NodeClass.TWO_CHILD:
        p_other = kernel.p_other
        still_open = _open_mass(p_other, other.gaps(), N)
    for t_target in range(1, N + 1):
        a = A[t_target - 1]
        if not a:
            continue
        # parent moves before the t_target-th target move
        row = negative_binomial_row(t_target, kernel.sigma, N)
        for t in range(1, N + 1):
            weight = row[t - 1]
            if kernel.node_class is NodeClass.TWO_CHILD:
                weight = weight * (1 - still_open[t + t_target - 1])
            out[t - 1] += a * weight
    return LastVertexProfile(tuple(out), child.target, node_id)


def propagate_last_dense(kernel, child, other=None, node_id=None):
    """Same result as propagate_last from the dense R table (cubic in N)."""
    N = kernel.N
    table = kernel.dense_table()
    out = []
    for t in range(1, N + 1):
        total = kernel.backend.zero
        for (t_target, t_other), r in table[t].items():
            if kernel.node_class is NodeClass.ONE_CHILD:
                total += r * child.values[t_target - 1]
            elif t_other >= 1:
                total += r * child.values[t_target - 1] * other.at(t_other)
        out.append(total)
    return LastVertexProfile(tuple(out), child.target, node_id)


class LastVertexSolver:
    """Runs the A-recursion for every leaf over one set of coverage profiles."""

    def __init__(self, gt, dp, backend, n_jobs=DEFAULT_JOBS):
        self.gt = gt
        self.dp = dp
        self.backend = backend
        self.N = dp.N
        self.n_jobs = n_jobs
        self.cache = KernelCache()
        self.node_of = {label: i for i, label in gt.projection.items() if label is not None}

    def _kernel(self, node, side):
        key = (node.node_class, node.probs.as_tuple(), self.N, side)
        return self.cache.lookup(
            key, lambda: build_last_kernel(node.node_class, node.probs, side, self.N, self.backend)
        )

    def solve_leaf(self, label):
        node_id = self.node_of[label]
        profile = target_profile(self.N, label, node_id, self.backend)
        path = self.gt.path_to_root(node_id)
        for child_id, parent_id in zip(path, path[1:]):
            parent = self.gt.node(parent_id)
            if parent.left == child_id:
                side, other_id = "left", parent.right
            else:
                side, other_id = "right", parent.left
            other = self.dp.profiles[other_id] if other_id is not None else None
            profile = propagate_last(self._kernel(parent, side), profile, other, parent_id)
        return profile

    def solve(self):
        start = self.gt.rooted.start
        leaves = [v for v in self.gt.rooted.order if not self.gt.rooted.children[v] and v != start]
        order = {v: i for i, v in enumerate(self.gt.rooted.tree.vertices)}
        leaves.sort(key=order.__getitem__)
        logger.info("Running last-vertex recursion for %d leaves", len(leaves))
        if self.n_jobs == 1 or len(leaves) < 2:
            profiles = [self.solve_leaf(v) for v in leaves]
        else:
            profiles = Parallel(n_jobs=self.n_jobs, prefer="threads")(
                delayed(self.solve_leaf)(v) for v in leaves
            )
        probabilities = {v: p.total() for v, p in zip(leaves, profiles)}
        total = self.backend.zero
        for v in leaves:
            total += probabilities[v]
        gap = abs(1 - total) if leaves else self.backend.zero
        logger.info("✓ Last-vertex mass %s", float(total))
        return LastVertexResult(probabilities, total, gap, self.N, self.backend.name)


def last_vertex_from_run(run, n_jobs=DEFAULT_JOBS):
    """Last-vertex distribution reusing the profiles of a pipeline run."""
    return LastVertexSolver(run.gadget_tree, run.dp, run.backend, n_jobs).solve()


def last_vertex_distribution(tree, start, N=None, epsilon=None, backend="auto",
                             precision_bits=DEFAULT_PRECISION_BITS, n_jobs=DEFAULT_JOBS):
    """
    P_last[u] for every leaf u != start.

    Args:
        tree: WeightedTree with at least two vertices
        start: Start label
        N: Truncation length (or give epsilon)
        epsilon: Target used to choose N when N is absent

    Returns:
        LastVertexResult
    """
    if tree.n < 2:
        raise ConfigurationError("last-vertex distribution needs at least two vertices")
    run = run_pipeline(tree, start, epsilon, N, tail_size=tail_size(tree), backend=backend,
                       precision_bits=precision_bits, n_jobs=n_jobs)
    return last_vertex_from_run(run, n_jobs)
