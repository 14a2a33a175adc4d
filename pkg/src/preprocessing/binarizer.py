"""
Gadget-Tree Binarizer
Expands every vertex with more than two children into a weighted caterpillar so
each node of the resulting tree T_B has at most two children.
"""
import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
import logging

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.exceptions import ConfigurationError
from src.preprocessing.rooting import RootedTree

logger = logging.getLogger(__name__)

ROOT_ID = 0


class NodeClass(str, Enum):
    ROOT = "root"
    LEAF = "leaf"
    ONE_CHILD = "one-child"
    TWO_CHILD = "two-child"
    GADGET = "gadget"


@dataclass(frozen=True)
class BranchProbabilities:
    """Next-move distribution at a node: to the parent, the left child, the right child."""

    parent: Fraction
    left: Fraction
    right: Fraction

    def __post_init__(self):
        values = (self.parent, self.left, self.right)
        if any(p < 0 for p in values) or sum(values) != 1:
            raise ConfigurationError(f"branch probabilities must be nonnegative and sum to 1: {values}")

    @classmethod
    def from_weights(cls, parent, left=0, right=0):
        total = Fraction(parent) + left + right
        return cls(Fraction(parent) / total, Fraction(left) / total, Fraction(right) / total)

    def as_tuple(self):
        return (self.parent, self.left, self.right)


@dataclass(frozen=True)
class GadgetNode:
    """
    One node of T_B.

    origin is the original vertex label, or None for the super-root and for
    gadget nodes; gadget nodes carry gadget = (label of v_i, k) for b^i_k.
    weight is the conductance routed through the node's parent edge.
    """

    id: int
    node_class: NodeClass
    origin: object
    gadget: tuple
    weight: Fraction
    parent: int
    left: int
    right: int
    probs: BranchProbabilities

    @property
    def is_gadget(self):
        return self.node_class is NodeClass.GADGET

    def children(self):
        return [c for c in (self.left, self.right) if c is not None]


@dataclass(frozen=True)
class GadgetTree:
    """Binarized, super-rooted, weighted tree T_B with the projection to original vertices."""

    nodes: tuple
    root: int
    w1: int
    projection: dict  # node id -> original label or None
    rooted: RootedTree

    def __len__(self):
        return len(self.nodes)

    def node(self, node_id):
        return self.nodes[node_id]

    def node_of(self, label):
        """Id of the node representing an original vertex."""
        return self._index()[label]

    def _index(self):
        return {label: i for i, label in self.projection.items() if label is not None}

    def post_order(self):
        """Node ids below the root, children before parents."""
        order = []
        stack = [(self.w1, False)]
        while stack:
            node_id, expanded = stack.pop()
            if expanded:
                order.append(node_id)
                continue
            stack.append((node_id, True))
            node = self.nodes[node_id]
            for child in reversed(node.children()):
                stack.append((child, False))
        return order

    def heights(self):
        """Height of every non-root node (leaves have height 0)."""
        height = {}
        for node_id in self.post_order():
            kids = self.nodes[node_id].children()
            height[node_id] = 0 if not kids else 1 + max(height[c] for c in kids)
        return height

    def levels(self):
        """Node ids grouped by height, lowest first."""
        grouped = {}
        for node_id, h in sorted(self.heights().items()):
            grouped.setdefault(h, []).append(node_id)
        return [grouped[h] for h in sorted(grouped)]

    def path_to_root(self, node_id):
        """Node ids from node_id up to w1 inclusive."""
        path = [node_id]
        while path[-1] != self.w1:
            path.append(self.nodes[path[-1]].parent)
        return path

    def original_leaves(self):
        """Original vertex labels that are leaves of T_B."""
        return [self.projection[n.id] for n in self.nodes if n.node_class is NodeClass.LEAF]

    def gadget_count(self):
        return sum(1 for n in self.nodes if n.is_gadget)


class _Builder:
    """Accumulates nodes in preorder, left subtree before right."""

    def __init__(self, rt):
        self.rt = rt
        self.records = []

    def new_id(self):
        self.records.append(None)
        return len(self.records) - 1

    def build(self):
        root_id = self.new_id()
        stack = [("vertex", self.rt.start, root_id, "left")]
        links = {root_id: {"parent": None, "left": None, "right": None}}
        while stack:
            kind, payload, parent_id, side = stack.pop()
            node_id = self.new_id()
            links[node_id] = {"parent": parent_id, "left": None, "right": None}
            links[parent_id][side] = node_id
            if kind == "vertex":
                pending = self._vertex(node_id, payload)
            else:
                pending = self._gadget(node_id, *payload)
            # right pushed first so the left subtree gets the smaller ids
            for task in reversed(pending):
                stack.append(task[:2] + (node_id,) + task[2:])

        self.records[root_id] = (NodeClass.ROOT, None, None, Fraction(0),
                                 BranchProbabilities(Fraction(0), Fraction(1), Fraction(0)))
        nodes = []
        for node_id, (node_class, origin, gadget, weight, probs) in enumerate(self.records):
            link = links[node_id]
            nodes.append(GadgetNode(node_id, node_class, origin, gadget, weight,
                                    link["parent"], link["left"], link["right"], probs))
        return nodes

    def _vertex(self, node_id, label):
        rt = self.rt
        weight = rt.parent_conductance(label)
        kids = rt.children[label]
        conductances = [rt.tree.conductance(label, c) for c in kids]
        if not kids:
            self.records[node_id] = (NodeClass.LEAF, label, None, weight,
                                     BranchProbabilities(Fraction(1), Fraction(0), Fraction(0)))
            return []
        if len(kids) == 1:
            probs = BranchProbabilities.from_weights(weight, conductances[0])
            self.records[node_id] = (NodeClass.ONE_CHILD, label, None, weight, probs)
            return [("vertex", kids[0], "left")]
        right_weight = sum(conductances[1:], Fraction(0))
        probs = BranchProbabilities.from_weights(weight, conductances[0], right_weight)
        self.records[node_id] = (NodeClass.TWO_CHILD, label, None, weight, probs)
        if len(kids) == 2:
            right = ("vertex", kids[1], "right")
        else:
            right = ("gadget", (label, 1, tuple(kids[1:]), tuple(conductances[1:])), "right")
        return [("vertex", kids[0], "left"), right]

    def _gadget(self, node_id, label, k, kids, conductances):
        # b^i_k routes children u_{k+1} .. u_d of v_i
        weight = sum(conductances, Fraction(0))
        right_weight = weight - conductances[0]
        probs = BranchProbabilities(Fraction(0), conductances[0] / weight, right_weight / weight)
        self.records[node_id] = (NodeClass.GADGET, None, (label, k), weight, probs)
        if len(kids) == 2:
            right = ("vertex", kids[1], "right")
        else:
            right = ("gadget", (label, k + 1, kids[1:], conductances[1:]), "right")
        return [("vertex", kids[0], "left"), right]


def binarize(rt):
    """
    Build the gadget tree T_B from a rooted tree.

    A vertex v with d > 2 children u_1..u_d keeps u_1 as its left child and
    gets the caterpillar b_1 .. b_(d-2) on its right: b_k has left child
    u_(k+1) and right child b_(k+1), except b_(d-2) whose right child is u_d.
    Branch probabilities are proportional to edge conductances, so unit trees
    give W(b_k) = d - k.

    Args:
        rt: RootedTree

    Returns:
        GadgetTree
    """
    nodes = _Builder(rt).build()
    projection = {node.id: node.origin for node in nodes}
    gt = GadgetTree(tuple(nodes), ROOT_ID, nodes[ROOT_ID].left, projection, rt)
    logger.info("✓ Binarized tree: %d nodes (%d gadget nodes) for %d vertices",
                len(nodes), gt.gadget_count(), rt.n)
    return gt
