"""
Tree File Loader
Parses edge-list files into validated weighted trees.
"""
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
import logging

import networkx as nx

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.exceptions import TreeFormatError, TreeStructureError, UnknownVertexError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedTree:
    """
    Undirected tree with positive rational edge resistances.

    Vertices keep their order of first appearance in the input, edges keep
    the input order; both orders drive deterministic child ordering later on.
    """

    vertices: tuple
    edges: tuple  # (u, v, resistance)
    _adjacency: dict = field(default=None, init=False, repr=False, compare=False)
    _resistance: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        adjacency = {v: [] for v in self.vertices}
        resistance = {}
        for u, v, r in self.edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
            resistance[frozenset((u, v))] = r
        object.__setattr__(self, "_adjacency", adjacency)
        object.__setattr__(self, "_resistance", resistance)

    @property
    def n(self):
        return len(self.vertices)

    def __contains__(self, label):
        return label in self._adjacency

    def neighbors(self, v):
        """Neighbors of v in input order."""
        return self._adjacency[v]

    def degree(self, v):
        return len(self._adjacency[v])

    def resistance(self, u, v):
        return self._resistance[frozenset((u, v))]

    def conductance(self, u, v):
        return 1 / self._resistance[frozenset((u, v))]

    def is_unit(self):
        return all(r == 1 for _, _, r in self.edges)

    def total_resistance(self):
        return sum((r for _, _, r in self.edges), Fraction(0))

    def total_conductance(self):
        return sum((1 / r for _, _, r in self.edges), Fraction(0))

    def leaves(self):
        """Degree-one vertices in vertex order."""
        return [v for v in self.vertices if self.degree(v) == 1]

    def require(self, label, role="vertex"):
        """Raise UnknownVertexError unless label is a vertex."""
        if label not in self._adjacency:
            raise UnknownVertexError(label, role)
        return label

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for u, v, r in self.edges:
            graph.add_edge(u, v, resistance=r)
        return graph

    def induced(self, keep):
        """Subtree induced by the vertex set keep (must be connected)."""
        keep = set(keep)
        vertices = tuple(v for v in self.vertices if v in keep)
        edges = tuple(e for e in self.edges if e[0] in keep and e[1] in keep)
        return build_tree(vertices, edges)


def build_tree(vertices, edges):
    """
    Validate a vertex/edge list and wrap it as a WeightedTree.

    Args:
        vertices: Vertex labels in order of first appearance
        edges: (u, v, resistance) triples

    Returns:
        WeightedTree
    """
    vertices = tuple(vertices)
    edges = tuple((u, v, Fraction(r)) for u, v, r in edges)
    if not vertices:
        raise TreeStructureError("tree has no vertices")
    if len(edges) >= len(vertices):
        raise TreeStructureError(
            f"cycle detected: {len(edges)} edges on {len(vertices)} vertices"
        )
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from((u, v) for u, v, _ in edges)
    if not nx.is_connected(graph):
        components = nx.number_connected_components(graph)
        raise TreeStructureError(f"disconnected input: {components} components")
    return WeightedTree(vertices, edges)


def _parse_resistance(token, line_number):
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise TreeFormatError(f"invalid resistance {token!r}", line_number) from None
    if value <= 0:
        raise TreeFormatError(f"nonpositive resistance {token!r}", line_number)
    return value


def parse_tree_file(text):
    """
    Parse an edge-list tree description.

    Lines are `u v` or `u v R` with R a positive decimal or p/q rational;
    a lone label declares a vertex; `#` starts a comment.

    Args:
        text: File contents as a string

    Returns:
        WeightedTree
    """
    vertices = {}
    edges = []
    seen = set()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) > 3:
            raise TreeFormatError(f"expected 'u v [R]', got {raw.strip()!r}", line_number)
        if len(tokens) == 1:
            vertices.setdefault(tokens[0], None)
            continue
        u, v = tokens[0], tokens[1]
        if u == v:
            raise TreeFormatError(f"self-loop on {u!r}", line_number)
        key = frozenset((u, v))
        if key in seen:
            raise TreeFormatError(f"duplicate edge {u!r}-{v!r}", line_number)
        seen.add(key)
        resistance = _parse_resistance(tokens[2], line_number) if len(tokens) == 3 else Fraction(1)
        vertices.setdefault(u, None)
        vertices.setdefault(v, None)
        edges.append((u, v, resistance))

    tree = build_tree(list(vertices), edges)
    logger.info("✓ Parsed tree: %d vertices, %d edges", tree.n, len(tree.edges))
    return tree


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise TreeFormatError(f"{path} is not valid UTF-8 (byte {exc.start})") from exc


def load_tree(path):
    """Read and parse a tree file from disk (UTF-8)."""
    path = Path(path)
    logger.info("Loading tree from %s...", path)
    return parse_tree_file(_read_text(path))


def parse_targets_file(text):
    """
    Parse a targets file: one vertex label per line, `#` comments.

    Returns:
        List of labels in file order without duplicates
    """
    targets = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 1:
            raise TreeFormatError(f"expected one label per line, got {raw.strip()!r}", line_number)
        targets.setdefault(tokens[0], None)
    return list(targets)


def load_targets(path):
    return parse_targets_file(_read_text(path))
