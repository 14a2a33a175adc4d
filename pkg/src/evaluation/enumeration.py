"""
Move-Enumeration Oracle
Exhaustive enumeration of the move sequences made at a single node, grouped by
their move counts, giving exact kernel entries independently of the closed forms.
"""
import itertools
import sys
from fractions import Fraction
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.preprocessing.binarizer import BranchProbabilities, NodeClass

MOVES = ("p", "l", "r")


def _letters(node_class, probs):
    if not isinstance(probs, BranchProbabilities):
        probs = BranchProbabilities(*probs)
    weights = {"p": probs.parent, "l": probs.left, "r": probs.right}
    if node_class is NodeClass.GADGET:
        weights.pop("p")
    if node_class is NodeClass.ONE_CHILD:
        weights.pop("r")
    return weights


def enumerate_move_strings(probs, length, letters=MOVES):
    """Every move string of the given length with its probability."""
    weights = dict(zip(MOVES, probs.as_tuple() if isinstance(probs, BranchProbabilities) else probs))
    for word in itertools.product(letters, repeat=length):
        probability = Fraction(1)
        for move in word:
            probability *= weights[move]
        yield "".join(word), probability


def prefix_masses(weights, limits):
    """
    Total probability of all move prefixes with each count vector.

    Args:
        weights: letter -> probability of that move
        limits: letter -> largest count kept

    Returns:
        dict: tuple of counts (in weights order) -> probability
    """
    letters = list(weights)
    origin = tuple(0 for _ in letters)
    masses = {origin: Fraction(1)}
    frontier = [origin]
    while frontier:
        layer = {}
        for counts in frontier:
            mass = masses[counts]
            for k, letter in enumerate(letters):
                if counts[k] >= limits[letter]:
                    continue
                extended = counts[:k] + (counts[k] + 1,) + counts[k + 1:]
                layer[extended] = layer.get(extended, Fraction(0)) + mass * weights[letter]
        for counts, mass in layer.items():
            masses[counts] = mass
        frontier = sorted(layer)
    return masses


def enumerate_kernel_outcomes(node_class, probs, N):
    """
    Exact Q(t_l, t_r; t) for t_l, t_r < N and 1 <= t <= N.

    A t-slice entry is the mass of prefixes with t - 1 parent moves, t_l left
    and t_r right moves, times the closing parent move; gadget entries are
    the masses of left/right strings of length t.

    Returns:
        dict: (t_l, t_r, t) -> Fraction (one-child entries use t_r = 0)
    """
    weights = _letters(node_class, probs)
    result = {}
    if node_class is NodeClass.GADGET:
        masses = prefix_masses(weights, {"l": N, "r": N})
        for (l, r), mass in masses.items():
            t = l + r
            if 1 <= t <= N:
                result[(l, r, t)] = mass
        return result
    limits = {"p": N - 1, "l": N - 1, "r": N - 1}
    masses = prefix_masses(weights, limits)
    for counts, mass in masses.items():
        p, l = counts[0], counts[1]
        r = counts[2] if len(counts) == 3 else 0
        result[(l, r, p + 1)] = mass * weights["p"]
    return result


def enumerate_last_outcomes(node_class, probs, side, N):
    """
    Exact interior R(t_l, t_r; t) for the target on the given side: the mass
    of prefixes with t - 1 parent moves, t_target - 1 target moves and t_other
    other moves, times the closing target move.

    Returns:
        dict: (t_l, t_r, t) -> Fraction in left/right coordinates
    """
    weights = _letters(node_class, probs)
    target, other = ("l", "r") if side == "left" else ("r", "l")
    result = {}
    if node_class is NodeClass.GADGET:
        masses = prefix_masses(weights, {target: N - 1, other: N - 1})
    else:
        masses = prefix_masses(weights, {"p": N - 1, target: N - 1, other: N - 1})
    letters = list(weights)
    for counts, mass in masses.items():
        count = dict(zip(letters, counts))
        t_target = count[target] + 1
        t_other = count.get(other, 0)
        t = t_target + t_other if node_class is NodeClass.GADGET else count["p"] + 1
        if t > N:
            continue
        key = (t_target, t_other, t) if side == "left" else (t_other, t_target, t)
        result[key] = mass * weights[target]
    return result
