"""
Exact Hitting Times on Trees
H[c -> p] = 2 R(c, p) C(T_c) + 1 across an edge, where C(T_c) is the total
conductance inside the component of c; path sums give every other pair.
"""
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.preprocessing.rooting import attach_super_root


@dataclass(frozen=True)
class HittingTable:
    """
    Hitting times H[u, target] in chain steps for every vertex u, plus the
    per-edge child -> parent values with the tree rooted at target.
    """

    target: str
    to_target: dict
    edge_values: dict  # child -> H[child -> parent]
    resistances: dict  # child -> R(child, parent)
    total_conductance: Fraction

    def __getitem__(self, u):
        return self.to_target[u]

    def reverse_edge(self, child):
        """H[p -> c] for the edge above child."""
        r = self.resistances[child]
        inside = (self.edge_values[child] - 1) / (2 * r)
        return 2 * r * (self.total_conductance - inside - 1 / r) + 1

    def commute(self, child):
        """H[c -> p] + H[p -> c] = 2 R(c, p) * total conductance."""
        return self.edge_values[child] + self.reverse_edge(child)


def hitting_table(tree, target):
    """
    All hitting times into target.

    Args:
        tree: WeightedTree
        target: Target label

    Returns:
        HittingTable
    """
    rooted = attach_super_root(tree, target)
    side = {}
    for v in reversed(rooted.order):
        side[v] = sum((side[c] + tree.conductance(v, c) for c in rooted.children[v]), Fraction(0))

    edge_values = {}
    resistances = {}
    to_target = {target: Fraction(0)}
    for v in rooted.order:
        p = rooted.parent[v]
        if p is None:
            continue
        r = tree.resistance(p, v)
        edge_values[v] = 2 * r * side[v] + 1
        resistances[v] = r
        to_target[v] = to_target[p] + edge_values[v]
    return HittingTable(target, to_target, edge_values, resistances, tree.total_conductance())


def hitting_time_exact(tree, u, v):
    """
    Exact expected number of steps from u to first reach v.

    Args:
        tree: WeightedTree
        u: Source label
        v: Target label
    """
    tree.require(u, "source")
    tree.require(v, "target")
    return hitting_table(tree, v)[u]


def hitting_times_from(tree, source):
    """H[source, u] for every vertex u."""
    tree.require(source, "source")
    # H[s -> u] sums parent -> child steps along the path from s down to u
    rooted = attach_super_root(tree, source)
    total = tree.total_conductance()
    side = {}
    for v in reversed(rooted.order):
        side[v] = sum((side[c] + tree.conductance(v, c) for c in rooted.children[v]), Fraction(0))
    result = {source: Fraction(0)}
    for v in rooted.order:
        p = rooted.parent[v]
        if p is None:
            continue
        r = tree.resistance(p, v)
        # parent -> child: the component of p after removing the edge
        other = total - side[v] - 1 / r
        result[v] = result[p] + 2 * r * other + 1
    return result
