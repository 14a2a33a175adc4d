"""
Exact Small-Tree Oracles
Expected cover(-and-return) times, last-vertex distributions and coverage
profiles from rational linear systems over (visited set, position) states.
"""
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
import logging

import sympy

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import EXACT_STATE_CAP, HITTING_ORACLE_CAP
from src.exceptions import StateCapError
from src.preprocessing.rooting import attach_super_root

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactResult:
    """Exact rational value and the number of (set, position) states solved."""

    value: Fraction
    states: int


def _to_fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _solve(matrix_rows, rhs_rows):
    """Solve A X = B exactly; rows are lists of Fractions."""
    A = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in matrix_rows])
    B = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rhs_rows])
    X = A.LUsolve(B)
    return [[_to_fraction(X[i, j]) for j in range(X.cols)] for i in range(X.rows)]


class _WalkModel:
    """Transition probabilities and connected-subset enumeration of a tree."""

    def __init__(self, tree, cap=EXACT_STATE_CAP):
        if tree.n > cap:
            raise StateCapError(f"exact solver is capped at {cap} vertices, tree has {tree.n}")
        self.tree = tree
        self.labels = list(tree.vertices)
        self.index = {v: i for i, v in enumerate(self.labels)}
        self.moves = []
        for v in self.labels:
            nbrs = tree.neighbors(v)
            total = sum((tree.conductance(v, w) for w in nbrs), Fraction(0))
            self.moves.append([(self.index[w], tree.conductance(v, w) / total) for w in nbrs])
        self.full = (1 << len(self.labels)) - 1

    def connected_masks(self, seed_mask, allowed=None):
        """Connected vertex sets containing seed_mask, inside allowed."""
        allowed = self.full if allowed is None else allowed
        found = {seed_mask}
        frontier = [seed_mask]
        while frontier:
            mask = frontier.pop()
            for i in self.members(mask):
                for j, _ in self.moves[i]:
                    bit = 1 << j
                    if allowed & bit and not mask & bit and (mask | bit) not in found:
                        found.add(mask | bit)
                        frontier.append(mask | bit)
        return sorted(found, key=lambda m: (-bin(m).count("1"), m))

    def members(self, mask):
        return [i for i in range(len(self.labels)) if mask >> i & 1]


def _layered_values(model, masks, terminal):
    """
    Expected remaining steps for every (mask, position), supersets first.

    terminal(mask) returns a position -> value dict for masks that need no
    further coverage, or None.
    """
    values = {}
    for mask in masks:
        fixed = terminal(mask)
        positions = model.members(mask)
        if fixed is not None and len(fixed) == len(positions):
            values[mask] = fixed
            continue
        unknown = [p for p in positions if fixed is None or p not in fixed]
        slot = {p: k for k, p in enumerate(unknown)}
        rows, rhs = [], []
        for p in unknown:
            row = [Fraction(0)] * len(unknown)
            row[slot[p]] += 1
            b = Fraction(1)
            for q, prob in model.moves[p]:
                if mask >> q & 1:
                    if q in slot:
                        row[slot[q]] -= prob
                    else:
                        b += prob * fixed[q]
                else:
                    b += prob * values[mask | 1 << q][q]
            rows.append(row)
            rhs.append([b])
        solution = _solve(rows, rhs)
        result = dict(fixed or {})
        for p in unknown:
            result[p] = solution[slot[p]][0]
        values[mask] = result
    return values


def exact_cover_return_small(tree, start):
    """
    Exact expected cover-and-return time on a tree of at most EXACT_STATE_CAP vertices.

    Returns:
        ExactResult
    """
    tree.require(start, "start")
    model = _WalkModel(tree)
    s = model.index[start]
    masks = model.connected_masks(1 << s)

    def terminal(mask):
        # covered: remaining time is the hitting time back to start, 0 at start
        return {s: Fraction(0)} if mask == model.full else None

    values = _layered_values(model, masks, terminal)
    states = sum(bin(m).count("1") for m in masks)
    return ExactResult(values[1 << s][s], states)


def exact_cover_time_small(tree, start):
    """Exact expected cover time (no return)."""
    tree.require(start, "start")
    model = _WalkModel(tree)
    s = model.index[start]
    masks = model.connected_masks(1 << s)

    def terminal(mask):
        if mask == model.full:
            return {p: Fraction(0) for p in model.members(mask)}
        return None

    values = _layered_values(model, masks, terminal)
    states = sum(bin(m).count("1") for m in masks)
    return ExactResult(values[1 << s][s], states)


def exact_last_vertex_small(tree, start):
    """
    Exact probability that each vertex is the last one visited.

    Returns:
        dict: label -> Fraction for every vertex other than start
    """
    tree.require(start, "start")
    model = _WalkModel(tree)
    s = model.index[start]
    targets = [i for i in range(len(model.labels)) if i != s]
    if not targets:
        return {}
    column = {t: k for k, t in enumerate(targets)}
    masks = [m for m in model.connected_masks(1 << s) if m != model.full]
    values = {}
    for mask in masks:
        positions = model.members(mask)
        slot = {p: k for k, p in enumerate(positions)}
        rows, rhs = [], []
        for p in positions:
            row = [Fraction(0)] * len(positions)
            row[slot[p]] += 1
            b = [Fraction(0)] * len(targets)
            for q, prob in model.moves[p]:
                if mask >> q & 1:
                    row[slot[q]] -= prob
                elif mask | 1 << q == model.full:
                    b[column[q]] += prob
                else:
                    nxt = values[mask | 1 << q][q]
                    b = [x + prob * y for x, y in zip(b, nxt)]
            rows.append(row)
            rhs.append(b)
        solution = _solve(rows, rhs)
        values[mask] = {p: solution[slot[p]] for p in positions}
    final = values[1 << s][s]
    return {model.labels[t]: final[column[t]] for t in targets}


def exact_coverage_profile_small(tree, start, vertex, t_max):
    """
    Exact P(t), t = 1..t_max, for the subtree of vertex in T_r rooted at start:
    the probability that the subtree is covered within its first t
    excursions through the edge above vertex.

    Each excursion is solved once per visited set: the outcome is the visited
    set at the excursion's end (or "covered").

    Returns:
        list of Fractions [P(1), ..., P(t_max)]
    """
    tree.require(start, "start")
    tree.require(vertex, "vertex")
    rooted = attach_super_root(tree, start)
    model = _WalkModel(tree)
    v = model.index[vertex]
    parent_conductance = rooted.parent_conductance(vertex)

    subtree = 0
    stack = [vertex]
    while stack:
        u = stack.pop()
        subtree |= 1 << model.index[u]
        stack.extend(rooted.children[u])

    # moves inside T_vertex, plus the exit through the parent edge (index None)
    def moves(p):
        if p == v:
            nbrs = [(q, c) for q, c in _conductances(model, p) if subtree >> q & 1]
            nbrs.append((None, parent_conductance))
            total = sum((c for _, c in nbrs), Fraction(0))
            return [(q, c / total) for q, c in nbrs]
        return model.moves[p]

    masks = model.connected_masks(1 << v, allowed=subtree)
    open_masks = [m for m in masks if m != subtree]
    outcome = {}  # mask -> position -> {end mask: probability}
    for mask in open_masks:
        positions = model.members(mask)
        slot = {p: k for k, p in enumerate(positions)}
        columns = [m for m in masks if m & mask == mask]
        col = {m: k for k, m in enumerate(columns)}
        rows, rhs = [], []
        for p in positions:
            row = [Fraction(0)] * len(positions)
            row[slot[p]] += 1
            b = [Fraction(0)] * len(columns)
            for q, prob in moves(p):
                if q is None:
                    b[col[mask]] += prob
                elif mask >> q & 1:
                    row[slot[q]] -= prob
                elif mask | 1 << q == subtree:
                    b[col[subtree]] += prob
                else:
                    for end, weight in outcome[mask | 1 << q][q].items():
                        b[col[end]] += prob * weight
            rows.append(row)
            rhs.append(b)
        solution = _solve(rows, rhs)
        outcome[mask] = {
            p: {columns[k]: x for k, x in enumerate(solution[slot[p]]) if x}
            for p in positions
        }

    covered = {m: Fraction(0) for m in open_masks}
    covered[subtree] = Fraction(1)
    profile = []
    for _ in range(t_max):
        nxt = {subtree: Fraction(1)}
        for mask in open_masks:
            nxt[mask] = sum((w * covered[end] for end, w in outcome[mask][v].items()), Fraction(0))
        covered = nxt
        profile.append(covered[1 << v] if (1 << v) != subtree else Fraction(1))
    return profile


def _conductances(model, p):
    tree = model.tree
    label = model.labels[p]
    return [(model.index[w], tree.conductance(label, w)) for w in tree.neighbors(label)]


def hitting_times_linear_system(tree, target):
    """
    H[u, target] for all u by solving (I - P) h = 1 off the target.

    Returns:
        dict: label -> Fraction
    """
    tree.require(target, "target")
    model = _WalkModel(tree, cap=HITTING_ORACLE_CAP)
    t = model.index[target]
    others = [i for i in range(len(model.labels)) if i != t]
    slot = {p: k for k, p in enumerate(others)}
    rows, rhs = [], []
    for p in others:
        row = [Fraction(0)] * len(others)
        row[slot[p]] += 1
        for q, prob in model.moves[p]:
            if q != t:
                row[slot[q]] -= prob
        rows.append(row)
        rhs.append([Fraction(1)])
    result = {target: Fraction(0)}
    if others:
        solution = _solve(rows, rhs)
        for p in others:
            result[model.labels[p]] = solution[slot[p]][0]
    return result
