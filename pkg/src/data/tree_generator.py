"""
Tree Generators
Path, star, uniform random labeled and non-isomorphic trees for validation runs.
"""
import sys
from pathlib import Path

import networkx as nx
import numpy as np

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.data.tree_loader import build_tree


def _label(i):
    return f"v{i}"


def path_tree(n):
    """Path v0 - v1 - ... - v(n-1) with unit resistances."""
    vertices = [_label(i) for i in range(n)]
    edges = [(vertices[i], vertices[i + 1], 1) for i in range(n - 1)]
    return build_tree(vertices, edges)


def star_tree(n):
    """Star with center v0 and n - 1 leaves."""
    vertices = [_label(i) for i in range(n)]
    edges = [(vertices[0], vertices[i], 1) for i in range(1, n)]
    return build_tree(vertices, edges)


def from_networkx(graph, resistances=None):
    """
    Convert an undirected networkx tree to a WeightedTree.

    Args:
        graph: networkx tree with integer or string nodes
        resistances: optional mapping frozenset({u, v}) -> resistance
    """
    labels = {node: (_label(node) if isinstance(node, (int, np.integer)) else str(node))
              for node in sorted(graph.nodes)}
    vertices = [labels[node] for node in sorted(graph.nodes)]
    edges = []
    for u, v in sorted(tuple(sorted(e)) for e in graph.edges):
        r = 1 if resistances is None else resistances[frozenset((u, v))]
        edges.append((labels[u], labels[v], r))
    return build_tree(vertices, edges)


def random_labeled_tree(n, seed):
    """
    Uniform random labeled tree on n vertices via a random Pruefer sequence.

    Args:
        n: Vertex count (n >= 1)
        seed: Seed for numpy's Generator
    """
    if n == 1:
        return build_tree([_label(0)], [])
    if n == 2:
        return path_tree(2)
    rng = np.random.default_rng(seed)
    sequence = rng.integers(0, n, size=n - 2).tolist()
    return from_networkx(nx.from_prufer_sequence(sequence))


def random_weighted_tree(n, seed, resistances=(1, 2, 3)):
    """Random labeled tree with resistances drawn from the given pool."""
    rng = np.random.default_rng(seed)
    base = random_labeled_tree(n, seed)
    pool = [resistances[i] for i in rng.integers(0, len(resistances), size=len(base.edges))]
    edges = [(u, v, r) for (u, v, _), r in zip(base.edges, pool)]
    return build_tree(base.vertices, edges)


def nonisomorphic_trees(n):
    """All trees on n vertices up to isomorphism."""
    if n == 1:
        return [build_tree([_label(0)], [])]
    return [from_networkx(graph) for graph in nx.nonisomorphic_trees(n)]
