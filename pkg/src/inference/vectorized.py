"""
Vectorized Propagation
numpy float64 versions of the coverage-profile and last-vertex recursions.
Negative-binomial and binomial weights are formed in log space from a
log-gamma table, so rows with m in the thousands neither underflow at
their head nor overflow in their binomial coefficients.
"""
import sys
from pathlib import Path

import numpy as np
from scipy.special import gammaln

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import VECTOR_BLOCK_CELLS


def log_gamma_table(size):
    """G[k] = log Gamma(k) for k = 0 .. size-1 (G[0] = inf)."""
    with np.errstate(divide="ignore"):
        return gammaln(np.arange(size, dtype=float))


def row_blocks(rows, width, start=1):
    """Consecutive integer index arrays covering start .. start+rows-1, sized to VECTOR_BLOCK_CELLS."""
    step = max(1, VECTOR_BLOCK_CELLS // max(1, width))
    stop = start + rows
    for first in range(start, stop, step):
        yield np.arange(first, min(first + step, stop))


def log_negative_binomial(m, b, x, G):
    """log NB(b; m, x) = log C(m+b-1, b) + b log x + m log(1-x), broadcast over m and b."""
    return G[m + b] - G[m] - G[b + 1] + b * np.log(x) + m * np.log1p(-x)


def weighted_nb_sums(ms, x, weights, G):
    """sum over b of NB(b; m, x) weights[b] for every m in ms."""
    b = np.arange(len(weights))
    out = np.empty(len(ms))
    for block in row_blocks(len(ms), len(weights), start=0):
        m = ms[block][:, None]
        out[block] = (np.exp(log_negative_binomial(m, b[None, :], x, G)) * weights).sum(axis=1)
    return out


def _as_array(values):
    return np.asarray([float(v) for v in values], dtype=float)


def one_child(kernel, left):
    N = kernel.N
    G = log_gamma_table(2 * N + 2)
    gl = _as_array(left.gaps())
    raw = 1.0 - weighted_nb_sums(np.arange(1, N + 1), float(kernel.s_left), gl, G)
    return raw.tolist()


def two_child(kernel, left, right):
    N = kernel.N
    G = log_gamma_table(3 * N + 2)
    gl, gr = _as_array(left.gaps()), _as_array(right.gaps())
    s_left, s_right = float(kernel.s_left), float(kernel.s_right)
    right_open = np.zeros(2 * N)
    right_open[1:] = weighted_nb_sums(np.arange(1, 2 * N), float(kernel.p_right), gr, G)

    a = np.arange(N)
    raw = np.empty(N)
    for t in row_blocks(N, N):
        tt = t[:, None]
        left_terms = np.exp(log_negative_binomial(tt, a[None, :], s_left, G)) * gl
        left_open = left_terms.sum(axis=1)
        both_open = (left_terms * right_open[tt + a[None, :]]).sum(axis=1)
        right_terms = np.exp(log_negative_binomial(tt, a[None, :], s_right, G)) * gr
        raw[t - 1] = 1.0 - left_open - right_terms.sum(axis=1) + both_open
    return raw.tolist()


def gadget(kernel, left, right):
    N = kernel.N
    G = log_gamma_table(N + 2)
    vl, vr = _as_array(left.values), _as_array(right.values)
    log_pl, log_pr = np.log(float(kernel.p_left)), np.log(float(kernel.p_right))
    a = np.arange(1, N)
    raw = np.zeros(N)
    if N == 1:
        return raw.tolist()
    for t in row_blocks(N, N - 1):
        tt = t[:, None]
        b = tt - a[None, :]
        valid = b >= 1
        b = np.clip(b, 1, N - 1)
        log_w = G[tt + 1] - G[a + 1] - G[b + 1] + a * log_pl + b * log_pr
        weights = np.where(valid, np.exp(log_w), 0.0)
        raw[t - 1] = (weights * vl[a - 1] * vr[b - 1]).sum(axis=1)
    return raw.tolist()


def last_gadget(kernel, child, other):
    """A(t) = sum over t_target of A_child(t_target) C(t-1, t_other) p_target^t_target p_other^t_other P_other(t_other)."""
    N = kernel.N
    G = log_gamma_table(N + 2)
    A = _as_array(child.values)
    vo = _as_array(other.values)
    log_pt, log_po = np.log(float(kernel.p_target)), np.log(float(kernel.p_other))
    t_target = np.arange(1, N + 1)
    out = np.empty(N)
    for t in row_blocks(N, N):
        tt = t[:, None]
        t_other = tt - t_target[None, :]
        # P_other(0) = 0
        valid = t_other >= 1
        t_other = np.clip(t_other, 1, N)
        log_w = (G[tt] - G[t_other + 1] - G[tt - t_other]
                 + t_other * log_po + (tt - t_other) * log_pt)
        weights = np.where(valid, np.exp(log_w), 0.0)
        out[t - 1] = (weights * A * vo[t_other - 1]).sum(axis=1)
    return out.tolist()


def last_branch(kernel, child, other=None):
    """
    One- and two-child nodes: A(t) = sum over t_target of A_child(t_target)
    NB(t-1; t_target, sigma), times the probability that the other subtree is
    covered before the t_target-th target move on two-child nodes.
    """
    N = kernel.N
    G = log_gamma_table(3 * N + 2)
    A = _as_array(child.values)
    sigma = float(kernel.sigma)
    t_target = np.arange(1, N + 1)
    covered = None
    if other is not None:
        still_open = np.zeros(2 * N)
        still_open[1:] = weighted_nb_sums(np.arange(1, 2 * N), float(kernel.p_other),
                                          _as_array(other.gaps()), G)
        covered = 1.0 - still_open
    out = np.empty(N)
    for t in row_blocks(N, N):
        tt = t[:, None]
        weights = np.exp(log_negative_binomial(t_target[None, :], tt - 1, sigma, G))
        if covered is not None:
            weights = weights * covered[tt + t_target[None, :] - 1]
        out[t - 1] = (weights * A).sum(axis=1)
    return out.tolist()
