"""
Shared fixtures: small trees, backends and random kernel configurations.
"""
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.data.tree_generator import path_tree, star_tree
from src.data.tree_loader import build_tree, parse_tree_file
from src.inference.arithmetic import FloatArithmetic, RationalArithmetic
from src.preprocessing.binarizer import BranchProbabilities, NodeClass


@pytest.fixture
def rational():
    return RationalArithmetic()


@pytest.fixture
def floating():
    return FloatArithmetic(96)


@pytest.fixture
def single_vertex():
    return build_tree(["a"], [])


@pytest.fixture
def single_edge():
    return parse_tree_file("a b\n")


@pytest.fixture
def path3():
    return parse_tree_file("a b\nb c\n")


@pytest.fixture
def path4():
    return path_tree(4)


@pytest.fixture
def star4():
    """Center v0 with leaves v1, v2, v3."""
    return star_tree(4)


@pytest.fixture
def weighted3():
    return build_tree(["a", "b", "c"], [("a", "b", 2), ("b", "c", Fraction(1, 2))])


def _random_probs(rng, node_class):
    def weight():
        return rng.randint(1, 5)

    if node_class is NodeClass.GADGET:
        return BranchProbabilities.from_weights(0, weight(), weight())
    if node_class is NodeClass.ONE_CHILD:
        return BranchProbabilities.from_weights(weight(), weight())
    return BranchProbabilities.from_weights(weight(), weight(), weight())


@pytest.fixture
def kernel_configs():
    """Factory of (node_class, probs, N) triples with small rational weights."""

    def make(count, max_n, seed=0):
        rng = random.Random(seed)
        classes = (NodeClass.ONE_CHILD, NodeClass.TWO_CHILD, NodeClass.GADGET)
        configs = []
        for i in range(count):
            node_class = classes[i % 3]
            configs.append((node_class, _random_probs(rng, node_class), rng.randint(1, max_n)))
        return configs

    return make


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
