"""
Super-Root Attachment
Orients a tree away from the start vertex and hangs it below an auxiliary root r.
"""
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.data.tree_loader import WeightedTree

logger = logging.getLogger(__name__)

ROOT_RESISTANCE = Fraction(1)


@dataclass(frozen=True)
class RootedTree:
    """
    Tree T_r: the input tree oriented away from start, plus the super-root r.

    parent[start] is None and stands for r; the edge (r, start) has
    resistance ROOT_RESISTANCE. Children keep the input edge order.
    """

    tree: WeightedTree
    start: str
    parent: dict
    children: dict
    subtree_size: dict
    order: tuple  # preorder from start

    @property
    def n(self):
        return self.tree.n

    def parent_resistance(self, v):
        """Resistance of e_v, the edge entering v from its parent."""
        p = self.parent[v]
        return ROOT_RESISTANCE if p is None else self.tree.resistance(p, v)

    def parent_conductance(self, v):
        return 1 / self.parent_resistance(v)

    def subtree_conductance(self, v):
        """Sum of conductances of the edges inside the subtree of v."""
        total = Fraction(0)
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                total += self.tree.conductance(u, c)
                stack.append(c)
        return total

    def edge_orientation(self):
        """Edges e_i as (parent, child) pairs, r written as None."""
        return [(self.parent[v], v) for v in self.order]


def attach_super_root(tree, start):
    """
    Root the tree at start and attach the super-root above it.

    Args:
        tree: Validated WeightedTree
        start: Start vertex label

    Returns:
        RootedTree
    """
    tree.require(start, "start")
    edge_index = {}
    for i, (u, v, _) in enumerate(tree.edges):
        edge_index[frozenset((u, v))] = i

    parent = {start: None}
    children = {}
    order = []
    stack = [start]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = [w for w in tree.neighbors(v) if w != parent[v]]
        kids.sort(key=lambda w: edge_index[frozenset((v, w))])
        children[v] = kids
        for w in kids:
            parent[w] = v
        stack.extend(reversed(kids))

    subtree_size = {}
    for v in reversed(order):
        subtree_size[v] = 1 + sum(subtree_size[c] for c in children[v])

    logger.debug("Rooted tree at %r: %d vertices", start, len(order))
    return RootedTree(tree, start, parent, children, subtree_size, tuple(order))
