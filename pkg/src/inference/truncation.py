"""
Truncation Selection
Chooses the profile length N from the explicit tail bound
P(t) >= 1 - 2^-floor(t / block), block = 4 * size^2.
"""
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import MAX_TRUNCATION_N, MIN_BLOCKS, TAIL_BLOCK_FACTOR
from src.exceptions import ConfigurationError, TruncationError

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TruncationParams:
    """
    Profile length and the a-priori tail parameters behind it.

    additive_bound is None when the tail argument gives no certificate at
    this N (delta >= 1/2).
    """

    N: int
    n: int
    tail_size: int
    block: int
    delta: Fraction
    additive_bound: object
    epsilon_target: object = None

    @property
    def certified(self):
        return self.additive_bound is not None

    @property
    def tail_rate(self):
        return (self.block, HALF)


def tail_block(tail_size):
    return TAIL_BLOCK_FACTOR * tail_size * tail_size


def apriori_delta(N, block):
    """delta = 2 * 2^-floor(N / block), the a-priori bound on 2(1 - P(N))."""
    return 2 * HALF ** (N // block)


def additive_error_bound(N, n, block):
    """
    Certified bound on E(1) - E1(1) at profile length N.

    N((1 + delta)^(2n) - 1) + 2 N delta; None when delta >= 1/2. A single
    vertex has an exact all-ones profile, so its bound is 0.
    """
    if n <= 1:
        return Fraction(0)
    delta = apriori_delta(N, block)
    if delta >= HALF:
        return None
    return N * ((1 + delta) ** (2 * n) - 1) + 2 * N * delta


def params_for(N, n, tail_size=None, epsilon=None):
    """TruncationParams for a caller-supplied N."""
    if N < 1:
        raise ConfigurationError(f"truncation N must be positive, got {N}")
    tail_size = n if tail_size is None else tail_size
    block = tail_block(tail_size)
    delta = Fraction(0) if n <= 1 else apriori_delta(N, block)
    return TruncationParams(N, n, tail_size, block, delta,
                            additive_error_bound(N, n, block), epsilon)


def choose_truncation(n, epsilon, tail_size=None, cap=None):
    """
    Smallest multiple N of the tail block meeting the additive error target.

    The block count k is found by doubling then bisection; the bound is
    decreasing in k once k >= MIN_BLOCKS.

    Args:
        n: Vertex count
        epsilon: Positive rational target
        tail_size: Size entering the block length (defaults to n)
        cap: Hard limit on N (defaults to MAX_TRUNCATION_N)

    Returns:
        TruncationParams
    """
    if n < 1:
        raise ConfigurationError(f"vertex count must be positive, got {n}")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ConfigurationError(f"epsilon must be positive, got {epsilon}")
    cap = MAX_TRUNCATION_N if cap is None else cap
    tail_size = n if tail_size is None else tail_size
    block = tail_block(tail_size)

    if n == 1:
        return params_for(block, n, tail_size, epsilon)

    def fits(k):
        return additive_error_bound(k * block, n, block) <= epsilon

    hi = MIN_BLOCKS
    while not fits(hi):
        if hi * block > cap:
            raise TruncationError(
                f"truncation search exceeded N = {cap} for n = {n}, epsilon = {epsilon}; "
                "relax epsilon or pass an explicit N"
            )
        hi *= 2
    lo = max(MIN_BLOCKS - 1, hi // 2)  # fits(lo) is false or lo is below the minimum
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid >= MIN_BLOCKS and fits(mid):
            hi = mid
        else:
            lo = mid

    N = hi * block
    if N > cap:
        raise TruncationError(
            f"truncation N = {N} exceeds the cap {cap}; relax epsilon or pass an explicit N"
        )
    params = params_for(N, n, tail_size, epsilon)
    logger.info("✓ Truncation: N = %d (block %d, delta = %s)", N, block, float(params.delta))
    return params
