"""
Last-Vertex Kernels
R(t_l, t_r; t): the target-side child edge is entered for the t_l-th time
after exactly t - 1 parent-edge traversals, with the other child edge
traversed t_r times before that (t_r = N meaning N or more).
"""
import sys
from math import comb
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.exceptions import ConfigurationError
from src.inference.kernels import KERNEL_CLASSES, kernel_key
from src.preprocessing.binarizer import BranchProbabilities, NodeClass

SIDES = ("left", "right")


class LastKernel:
    """Kernel R of one node class, branch distribution and target side."""

    def __init__(self, node_class, probs, side, N, backend):
        if N < 1:
            raise ConfigurationError(f"kernel length N must be positive, got {N}")
        if node_class not in KERNEL_CLASSES:
            raise ConfigurationError(f"no last-vertex kernel for node class {node_class}")
        if side not in SIDES:
            raise ConfigurationError(f"side must be 'left' or 'right', got {side!r}")
        if not isinstance(probs, BranchProbabilities):
            probs = BranchProbabilities(*probs)
        if node_class is NodeClass.ONE_CHILD and side != "left":
            raise ConfigurationError("one-child nodes only have a left child")
        if node_class is NodeClass.GADGET and probs.parent != 0:
            raise ConfigurationError(f"gadget kernel needs a two-way split, got {probs.as_tuple()}")
        if node_class is not NodeClass.GADGET and probs.parent <= 0:
            raise ConfigurationError(f"kernel probabilities must be positive, got {probs.as_tuple()}")

        self.node_class = node_class
        self.probs = probs
        self.side = side
        self.N = N
        self.backend = backend
        target, other = (probs.left, probs.right) if side == "left" else (probs.right, probs.left)
        if target <= 0 or (node_class is not NodeClass.ONE_CHILD and other <= 0):
            raise ConfigurationError(f"kernel probabilities must be positive, got {probs.as_tuple()}")
        self.p_parent = backend.convert(probs.parent)
        self.p_target = backend.convert(target)
        self.p_other = backend.convert(other)
        if node_class is not NodeClass.GADGET:
            # parent moves against target-side moves, other side ignored
            self.sigma = backend.convert(probs.parent / (probs.parent + target))

    @property
    def key(self):
        return kernel_key(self.node_class, self.probs, self.N, self.backend) + (self.side,)

    def _interior(self, t_target, t_other, t):
        if self.node_class is NodeClass.GADGET:
            if t_target + t_other != t:
                return self.backend.zero
            return comb(t - 1, t_other) * self.p_target ** t_target * self.p_other ** t_other
        if self.node_class is NodeClass.ONE_CHILD:
            if t_other != 0:
                return self.backend.zero
            return comb(t + t_target - 2, t_target - 1) * self.p_parent ** (t - 1) * self.p_target ** t_target
        # multinomial (t-1, t_target-1, t_other) as a product of two binomials
        coefficient = comb(t + t_target + t_other - 2, t_other) * comb(t + t_target - 2, t - 1)
        return (coefficient * self.p_parent ** (t - 1) * self.p_target ** t_target
                * self.p_other ** t_other)

    def marginal(self, t_target, t):
        """Probability of exactly t - 1 parent moves before the t_target-th target move."""
        return comb(t + t_target - 2, t - 1) * self.sigma ** (t - 1) * (1 - self.sigma) ** t_target

    def entry_by_role(self, t_target, t_other, t):
        N = self.N
        if not (1 <= t_target <= N and 0 <= t_other <= N and 1 <= t <= N):
            raise ConfigurationError(
                f"last-kernel index out of range: ({t_target}, {t_other}; {t}) for N = {N}"
            )
        if self.node_class is not NodeClass.TWO_CHILD or t_other < N:
            return self._interior(t_target, t_other, t)
        partial = sum((self._interior(t_target, b, t) for b in range(N)), self.backend.zero)
        return self.marginal(t_target, t) - partial

    def entry(self, t_l, t_r, t):
        """R(t_l, t_r; t) in left/right coordinates; one-child kernels take t_r = 0."""
        if self.side == "left":
            return self.entry_by_role(t_l, t_r, t)
        return self.entry_by_role(t_r, t_l, t)

    def dense_table(self):
        """{t: {(t_target, t_other): R}} over the full index range; for checks only."""
        width = 1 if self.node_class is NodeClass.ONE_CHILD else self.N + 1
        return {
            t: {(a, b): self.entry_by_role(a, b, t)
                for a in range(1, self.N + 1) for b in range(width)}
            for t in range(1, self.N + 1)
        }


def build_last_kernel(node_class, probs, side, N, backend):
    """Construct a LastKernel (see LastKernel for validation)."""
    return LastKernel(node_class, probs, side, N, backend)
