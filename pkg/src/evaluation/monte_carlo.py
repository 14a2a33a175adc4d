"""
Monte-Carlo Oracle
Vectorized random-walk episodes on trees with per-block counter-based streams.
"""
import sys
from dataclasses import dataclass
from pathlib import Path
import logging

import numpy as np
from joblib import Parallel, delayed

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_JOBS, MC_BLOCK_SIZE, MC_Z_99
from src.exceptions import ConfigurationError
from src.preprocessing.binarizer import NodeClass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class McResult:
    """Sample statistics of one Monte-Carlo run."""

    samples: int
    mean: float
    std: float
    half_width: float
    seed: int
    measure: str = "cover-return"

    @property
    def standard_error(self):
        return self.std / np.sqrt(self.samples) if self.samples > 0 else 0.0

    def contains(self, value):
        return abs(float(value) - self.mean) <= self.half_width


class TransitionTable:
    """Padded neighbor and cumulative-probability arrays of a tree's walk."""

    def __init__(self, tree):
        self.labels = list(tree.vertices)
        self.index = {v: i for i, v in enumerate(self.labels)}
        n = len(self.labels)
        width = max([tree.degree(v) for v in self.labels] + [1])
        self.neighbors = np.zeros((n, width), dtype=np.int64)
        self.cdf = np.ones((n, width), dtype=np.float64)
        for i, v in enumerate(self.labels):
            nbrs = tree.neighbors(v)
            if not nbrs:
                continue
            weights = np.array([float(tree.conductance(v, w)) for w in nbrs])
            cumulative = np.cumsum(weights / weights.sum())
            cumulative[-1] = 1.0
            self.neighbors[i, :len(nbrs)] = [self.index[w] for w in nbrs]
            self.cdf[i, :len(nbrs)] = cumulative
            self.neighbors[i, len(nbrs):] = self.neighbors[i, len(nbrs) - 1]

    @property
    def n(self):
        return len(self.labels)

    def step(self, positions, uniforms):
        """Next positions for an array of walkers given uniforms in [0, 1)."""
        choice = (uniforms[:, None] >= self.cdf[positions]).sum(axis=1)
        choice = np.minimum(choice, self.cdf.shape[1] - 1)
        return self.neighbors[positions, choice]


def _run_block(table, start, size, seed_sequence, measure):
    rng = np.random.Generator(np.random.Philox(seed_sequence))
    n = table.n
    positions = np.full(size, start, dtype=np.int64)
    visited = np.zeros((size, n), dtype=bool)
    visited[:, start] = True
    counts = np.ones(size, dtype=np.int64)
    steps = np.zeros(size, dtype=np.int64)
    rows = np.arange(size)
    active = counts < n if measure == "cover" else ~((counts == n) & (positions == start))
    while active.any():
        idx = rows[active]
        positions[idx] = table.step(positions[idx], rng.random(idx.size))
        steps[idx] += 1
        fresh = ~visited[idx, positions[idx]]
        visited[idx, positions[idx]] = True
        counts[idx] += fresh
        if measure == "cover":
            active[idx] = counts[idx] < n
        else:
            active[idx] = ~((counts[idx] == n) & (positions[idx] == start))
    return steps


def simulate_episodes(tree, start, samples, seed, measure="cover-return",
                      n_jobs=DEFAULT_JOBS, block_size=MC_BLOCK_SIZE):
    """
    Step counts of independent episodes, in block order.

    Block b uses the b-th child of SeedSequence(seed), so the samples do not
    depend on n_jobs.
    """
    if samples < 1:
        raise ConfigurationError(f"samples must be at least 1, got {samples}")
    if measure not in ("cover-return", "cover"):
        raise ConfigurationError(f"unknown Monte-Carlo measure {measure!r}")
    tree.require(start, "start")
    table = TransitionTable(tree)
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    start_index = table.index[start]
    if tree.n == 1:
        return np.zeros(samples, dtype=np.int64)
    blocks = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_run_block)(table, start_index, size, stream, measure)
        for size, stream in zip(sizes, streams)
    )
    return np.concatenate(blocks)


def summarize(steps, seed, measure):
    samples = len(steps)
    mean = float(np.mean(steps))
    std = float(np.std(steps, ddof=1)) if samples > 1 else 0.0
    half_width = MC_Z_99 * std / np.sqrt(samples)
    return McResult(samples, mean, std, float(half_width), seed, measure)


def mc_cover_return(tree, start, samples, seed, n_jobs=DEFAULT_JOBS):
    """
    Monte-Carlo estimate of the cover-and-return time.

    Args:
        tree: WeightedTree (transition probabilities follow conductances)
        start: Start label
        samples: Episode count
        seed: Root seed of the block streams

    Returns:
        McResult
    """
    steps = simulate_episodes(tree, start, samples, seed, "cover-return", n_jobs)
    result = summarize(steps, seed, "cover-return")
    logger.info("✓ MC cover-return: mean %.4f ± %.4f (%d samples)",
                result.mean, result.half_width, samples)
    return result


def mc_cover_time(tree, start, samples, seed, n_jobs=DEFAULT_JOBS):
    """Monte-Carlo estimate of the cover time (no return)."""
    steps = simulate_episodes(tree, start, samples, seed, "cover", n_jobs)
    return summarize(steps, seed, "cover")


def simulate_gadget_projection(gt, steps, seed):
    """
    Walk on the gadget tree and record transitions between original vertices.

    Gadget nodes are passed through: entered from above they forward to a
    child, entered from below they forward to their parent. The super-root
    is included and labelled None.

    Returns:
        dict: origin label -> {next label: count}
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    nodes = gt.nodes
    counts = {}
    current = gt.w1
    uniforms = rng.random(steps * 2)
    cursor = 0

    def draw():
        nonlocal cursor, uniforms
        if cursor >= len(uniforms):
            uniforms = rng.random(steps * 2)
            cursor = 0
        cursor += 1
        return uniforms[cursor - 1]

    for _ in range(steps):
        node = nodes[current]
        if node.node_class is NodeClass.ROOT:
            nxt, came_from_parent = node.left, True
        else:
            u = draw()
            probs = node.probs
            if u < probs.parent:
                nxt, came_from_parent = node.parent, False
            elif u < probs.parent + probs.left:
                nxt, came_from_parent = node.left, True
            else:
                nxt, came_from_parent = node.right, True
        while nodes[nxt].node_class is NodeClass.GADGET:
            gadget = nodes[nxt]
            if came_from_parent:
                nxt = gadget.left if draw() < gadget.probs.left else gadget.right
            else:
                nxt = gadget.parent
        origin = gt.projection[current]
        target = gt.projection[nxt]
        counts.setdefault(origin, {})
        counts[origin][target] = counts[origin].get(target, 0) + 1
        current = nxt
    return counts
