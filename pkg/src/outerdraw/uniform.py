"""Uniform rotation systems: structure trees, counting, and enumeration.

When all k rotations are equal, every inner pair crosses between every
pair of stars and its interaction is captured by a single quadrant type in
1..k.  Such a type table has an outer drawing exactly when it splits into a
constant rectangle recursively, which is recorded as a labelled binary tree:
leaves spell 1..n left to right, internal nodes carry the rectangle type,
and the left child of a node never repeats the node's label (that would
contradict choosing the smallest split, so the constraint makes the tree
canonical).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .core import A, B, InputError, TypeTable, all_pairs
from .rules import legal_triple_uniform, quad_uniform_ok


@dataclass(frozen=True)
class Leaf:
    vertex: int

    def leaves(self):
        return (self.vertex,)

    def to_json(self):
        return self.vertex


@dataclass(frozen=True)
class Node:
    left: "Leaf | Node"
    right: "Leaf | Node"
    label: int

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    def to_json(self):
        return {
            "label": self.label,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


DecompositionTree = Leaf | Node


def _require_uniform(t: TypeTable, k):
    if not t.values_ok(range(1, k + 1)):
        bad = next(v for _, v in t.items() if v not in range(1, k + 1))
        raise InputError(f"not a uniform table over 1..{k}: value {bad!r}")


def decompose_uniform(t: TypeTable, k=None) -> DecompositionTree | None:
    """Canonical decomposition tree of a uniform table, or None.

    Picks the smallest split s whose rectangle [lo, s-1] x [s, hi] is
    constant, then recurses on the two sides; the result reproduces the
    table through `tree_to_table`.
    """
    if k is not None:
        _require_uniform(t, k)

    def rec(lo, hi):
        if lo == hi:
            return Leaf(lo)
        for s in range(lo + 1, hi + 1):
            label = t[lo, s]
            if all(
                t[a, b] == label
                for a in range(lo, s)
                for b in range(s, hi + 1)
            ):
                left = rec(lo, s - 1)
                right = rec(s, hi)
                if left is None or right is None:
                    return None
                return Node(left, right, label)
        return None

    return rec(1, t.n)


def tree_to_table(tree: DecompositionTree) -> TypeTable:
    """Table whose entry at {a, b} is the label of the leaves' junction node."""
    leaves = tree.leaves()
    if leaves != tuple(range(1, len(leaves) + 1)):
        raise InputError(f"tree leaves spell {leaves}, expected 1..{len(leaves)}")
    entries = {}

    def rec(node):
        if isinstance(node, Leaf):
            return
        for a in node.left.leaves():
            for b in node.right.leaves():
                entries[(a, b)] = node.label
        rec(node.left)
        rec(node.right)

    rec(tree)
    return TypeTable(len(leaves), entries)


def uniform_table_ok(t: TypeTable, k) -> bool:
    """Full triple + quadruple rule battery over the uniform alphabet."""
    _require_uniform(t, k)
    n = t.n
    for a in range(1, n - 1):
        for b in range(a + 1, n):
            for c in range(b + 1, n + 1):
                if not legal_triple_uniform(t[a, b], t[a, c], t[b, c], k):
                    return False
    for a in range(1, n - 2):
        for b in range(a + 1, n - 1):
            for c in range(b + 1, n):
                for d in range(c + 1, n + 1):
                    if not quad_uniform_ok(t, a, b, c, d):
                        return False
    return True


# ---------------------------------------------------------------------------
# counting


@lru_cache(maxsize=None)
def count_uniform(k, n) -> int:
    """T(k, n) by the Catalan-style recursion, exact big integers."""
    if k < 1 or n < 1:
        raise InputError("k and n must be positive")
    if n == 1:
        return 1
    total = count_uniform(k, n - 1)
    total += (k - 1) * sum(
        count_uniform(k, i) * count_uniform(k, n - i) for i in range(1, n)
    )
    return total


def count_uniform_closed(k, n) -> int:
    """T(k, n) in closed form: sum_j C(m+j, 2j) * Catalan(j) * (k-1)^j, m=n-1."""
    if k < 1 or n < 1:
        raise InputError("k and n must be positive")
    m, kappa = n - 1, k - 1
    total = 0
    for j in range(m + 1):
        catalan = comb(2 * j, j) // (j + 1)
        total += comb(m + j, 2 * j) * catalan * kappa ** j
    return total


def enumerate_uniform(k, n):
    """All decomposition trees with n leaves and labels in 1..k.

    Yields each drawing exactly once; the stream is deterministic and its
    length equals `count_uniform(k, n)`.
    """
    if k < 1 or n < 1:
        raise InputError("k and n must be positive")

    def rec(lo, hi):
        if lo == hi:
            yield Leaf(lo)
            return
        for s in range(lo + 1, hi + 1):
            for left in rec(lo, s - 1):
                for right in rec(s, hi):
                    for label in range(1, k + 1):
                        if isinstance(left, Node) and left.label == label:
                            continue
                        yield Node(left, right, label)

    yield from rec(1, n)


# ---------------------------------------------------------------------------
# bridge to pair-letter tables


def pair_tables_from_uniform(t: TypeTable, k) -> dict[tuple[int, int], TypeTable]:
    """Pair-letter tables of the uniform drawing, one per outer pair x < y.

    A pair of quadrant type alpha crosses stars x < y in the A pattern
    exactly when x <= alpha < y; all rotations are equal, so the letters are
    simultaneously label-ordered and red-rotation-ordered.
    """
    _require_uniform(t, k)
    tables = {}
    for x in range(1, k + 1):
        for y in range(x + 1, k + 1):
            tables[(x, y)] = TypeTable(
                t.n,
                {
                    (u, v): (A if x <= t[u, v] < y else B)
                    for u, v in all_pairs(t.n)
                },
            )
    return tables
