"""
Move-enumeration oracle.
"""
from fractions import Fraction

from src.evaluation.enumeration import (
    enumerate_kernel_outcomes, enumerate_move_strings, prefix_masses,
)
from src.preprocessing.binarizer import BranchProbabilities, NodeClass

THIRD = Fraction(1, 3)
UNIFORM = BranchProbabilities(THIRD, THIRD, THIRD)


def test_move_strings_sum_to_one():
    strings = dict(enumerate_move_strings(UNIFORM, 3))
    assert len(strings) == 27
    assert sum(strings.values()) == 1
    assert strings["plr"] == Fraction(1, 27)


def test_prefix_masses_count_orderings():
    weights = {"p": THIRD, "l": THIRD, "r": THIRD}
    masses = prefix_masses(weights, {"p": 1, "l": 1, "r": 1})
    assert masses[(0, 0, 0)] == 1
    assert masses[(1, 0, 0)] == THIRD
    assert masses[(1, 1, 0)] == Fraction(2, 9)
    assert masses[(1, 1, 1)] == Fraction(6, 27)
    assert len(masses) == 8


def test_two_child_entries():
    outcomes = enumerate_kernel_outcomes(NodeClass.TWO_CHILD, UNIFORM, 3)
    assert outcomes[(1, 1, 1)] == Fraction(2, 27)
    assert outcomes[(0, 0, 1)] == THIRD


def test_gadget_entries():
    probs = BranchProbabilities(0, THIRD, 2 * THIRD)
    outcomes = enumerate_kernel_outcomes(NodeClass.GADGET, probs, 3)
    assert outcomes[(1, 1, 2)] == Fraction(4, 9)
    assert sum(v for (l, r, t), v in outcomes.items() if t == 2) == 1
