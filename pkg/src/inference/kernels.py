"""
Traversal Kernels
Distribution of child-edge traversal counts during the first t traversals of a
node's parent edge, with counts of N or more collapsed into index N.
"""
import sys
import threading
from math import comb
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.exceptions import ConfigurationError
from src.preprocessing.binarizer import BranchProbabilities, NodeClass

logger = logging.getLogger(__name__)

KERNEL_CLASSES = (NodeClass.ONE_CHILD, NodeClass.TWO_CHILD, NodeClass.GADGET)


def negative_binomial_row(m, x, length):
    """
    NB(b; m, x) = C(m+b-1, b) x^b (1-x)^m for b = 0 .. length-1.

    The number of x-moves before the m-th other move, built by a running
    product so no factorial is ever formed.
    """
    row = [(1 - x) ** m]
    for b in range(1, length):
        row.append(row[-1] * x * (m + b - 1) / b)
    return row


def binomial_row(t, x, y):
    """C(t, a) x^a y^(t-a) for a = 0 .. t."""
    row = [y ** t]
    for a in range(1, t + 1):
        row.append(row[-1] * x * (t - a + 1) / (a * y))
    return row


class TraversalKernel:
    """
    Kernel Q(t_l, t_r; t) of one node class and branch distribution.

    Entries are served on demand; the profile propagation only needs the
    negative-binomial factors, the dense table exists for verification.
    """

    def __init__(self, node_class, probs, N, backend):
        if N < 1:
            raise ConfigurationError(f"kernel length N must be positive, got {N}")
        if node_class not in KERNEL_CLASSES:
            raise ConfigurationError(f"no traversal kernel for node class {node_class}")
        if not isinstance(probs, BranchProbabilities):
            probs = BranchProbabilities(*probs)
        if node_class is NodeClass.GADGET:
            if probs.parent != 0 or probs.left <= 0 or probs.right <= 0:
                raise ConfigurationError(f"gadget kernel needs a two-way split, got {probs.as_tuple()}")
        elif probs.parent <= 0 or probs.left <= 0:
            raise ConfigurationError(f"kernel probabilities must be positive, got {probs.as_tuple()}")
        elif node_class is NodeClass.TWO_CHILD and probs.right <= 0:
            raise ConfigurationError(f"two-child kernel needs p_right > 0, got {probs.as_tuple()}")
        elif node_class is NodeClass.ONE_CHILD and probs.right != 0:
            raise ConfigurationError(f"one-child kernel needs p_right = 0, got {probs.as_tuple()}")

        self.node_class = node_class
        self.probs = probs
        self.N = N
        self.backend = backend
        self.p_parent = backend.convert(probs.parent)
        self.p_left = backend.convert(probs.left)
        self.p_right = backend.convert(probs.right)
        if node_class is NodeClass.TWO_CHILD:
            # marginal split of left (resp. right) moves against parent moves
            self.s_left = backend.convert(probs.left / (probs.parent + probs.left))
            self.s_right = backend.convert(probs.right / (probs.parent + probs.right))
        elif node_class is NodeClass.ONE_CHILD:
            self.s_left = self.p_left
            self.s_right = None

    @property
    def key(self):
        return kernel_key(self.node_class, self.probs, self.N, self.backend)

    def left_marginal(self, t, length=None):
        """P(left count = a) for a < length during t parent traversals."""
        return negative_binomial_row(t, self.s_left, self.N if length is None else length)

    def right_marginal(self, t, length=None):
        return negative_binomial_row(t, self.s_right, self.N if length is None else length)

    def right_given_moves(self, m, length=None):
        """P(right count = b) before the m-th non-right move."""
        return negative_binomial_row(m, self.p_right, self.N if length is None else length)

    def split_row(self, t):
        """Gadget: P(left count = a) for a = 0 .. t, the rest going right."""
        return binomial_row(t, self.p_left, self.p_right)

    def _interior(self, t_l, t_r, t):
        if self.node_class is NodeClass.TWO_CHILD:
            coefficient = comb(t + t_l + t_r - 1, t_l) * comb(t + t_r - 1, t_r)
            return coefficient * self.p_parent ** t * self.p_left ** t_l * self.p_right ** t_r
        if self.node_class is NodeClass.ONE_CHILD:
            return comb(t + t_l - 1, t_l) * self.p_parent ** t * self.p_left ** t_l
        if t_l + t_r != t:
            return self.backend.zero
        return comb(t, t_l) * self.p_left ** t_l * self.p_right ** t_r

    def entry(self, t_l, t_r, t):
        """
        Q(t_l, t_r; t) with index N meaning "N or more".

        One-child kernels ignore t_r (pass 0).
        """
        N = self.N
        if not (0 <= t_l <= N and 0 <= t_r <= N and 1 <= t <= N):
            raise ConfigurationError(f"kernel index out of range: ({t_l}, {t_r}; {t}) for N = {N}")
        if self.node_class is NodeClass.GADGET:
            return self._interior(t_l, t_r, t)
        if self.node_class is NodeClass.ONE_CHILD:
            if t_l < N:
                return self._interior(t_l, 0, t)
            return 1 - sum(self.left_marginal(t))
        if t_l < N and t_r < N:
            return self._interior(t_l, t_r, t)
        if t_l < N:
            partial = sum((self._interior(t_l, b, t) for b in range(N)), self.backend.zero)
            return self.left_marginal(t)[t_l] - partial
        if t_r < N:
            partial = sum((self._interior(a, t_r, t) for a in range(N)), self.backend.zero)
            return self.right_marginal(t)[t_r] - partial
        # both capped: inclusion-exclusion over the two marginals
        interior = sum((self._interior(a, b, t) for a in range(N) for b in range(N)),
                       self.backend.zero)
        return 1 - sum(self.left_marginal(t)) - sum(self.right_marginal(t)) + interior

    def dense_table(self):
        """
        Full table {t: [[Q(a, b; t) for b in 0..N] for a in 0..N]}.

        One-child tables have a single column. Cubic in N; for checks only.
        """
        width = 1 if self.node_class is NodeClass.ONE_CHILD else self.N + 1
        return {
            t: [[self.entry(a, b, t) for b in range(width)] for a in range(self.N + 1)]
            for t in range(1, self.N + 1)
        }

    def slice_sum(self, t):
        width = 1 if self.node_class is NodeClass.ONE_CHILD else self.N + 1
        return sum((self.entry(a, b, t) for a in range(self.N + 1) for b in range(width)),
                   self.backend.zero)


def kernel_key(node_class, probs, N, backend):
    precision = getattr(backend, "bits", None)
    return (node_class, probs.as_tuple(), N, backend.name, precision)


def build_kernel(node_class, probs, N, backend):
    """Construct a TraversalKernel (see TraversalKernel for validation)."""
    return TraversalKernel(node_class, probs, N, backend)


class KernelCache:
    """Once-per-key kernel construction, safe under concurrent lookups."""

    def __init__(self):
        self._kernels = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, node_class, probs, N, backend):
        return self.lookup(kernel_key(node_class, probs, N, backend),
                           lambda: build_kernel(node_class, probs, N, backend))

    def lookup(self, key, factory):
        """Return the kernel stored under key, building it with factory() on first use."""
        with self._lock:
            kernel = self._kernels.get(key)
            if kernel is None:
                kernel = factory()
                self._kernels[key] = kernel
                self.misses += 1
            else:
                self.hits += 1
        return kernel

    def __len__(self):
        return len(self._kernels)
