"""Local legality predicates for pair tables: triples and quadruples.

The triple convention is X = type(a,b), Y = type(a,c), Z = type(b,c) for
a < b < c; quadruples are indexed a < b < c < d.  Both alphabets are
covered: the uniform alphabet 1..k and the pair letters {A, B, N}.
"""

from __future__ import annotations

from itertools import product

from .core import A, B, N, PAIR_LETTERS, TypeTable


def legal_triple_uniform(x, y, z, k) -> bool:
    """A uniform-alphabet triple is realizable iff Y is one of X, Z."""
    for symbol in (x, y, z):
        if not (isinstance(symbol, int) and 1 <= symbol <= k):
            raise ValueError(f"symbol {symbol!r} out of range 1..{k}")
    return y == x or y == z


def quad_uniform_ok(t: TypeTable, a, b, c, d) -> bool:
    """Uniform quadruple rule: X at (a,c),(b,c),(b,d) forces X at (a,d)."""
    assert a < b < c < d
    x = t[a, c]
    if t[b, c] == x and t[b, d] == x:
        return t[a, d] == x
    return True


def _pair2_legal_triples() -> frozenset:
    legal = {
        (x, y, z)
        for x, y, z in product(PAIR_LETTERS, repeat=3)
        if y == x or y == z
    }
    legal.add((N, A, B))
    legal.add((A, B, N))
    return frozenset(legal)


#: The 17 triples of pair letters realizable by an outer drawing of K_{2,3}.
LEGAL_TRIPLES_2 = _pair2_legal_triples()


def legal_triple_2(x, y, z) -> bool:
    return (x, y, z) in LEGAL_TRIPLES_2


def quad_2_ok(t: TypeTable, a, b, c, d) -> bool:
    """Pair-letter quadruple rule, both directed implications.

    The uniform rule survives N types only under a guard: three B entries
    force B at (a,d) only when (a,b) crosses, and three A entries force A
    only when (c,d) crosses.
    """
    assert a < b < c < d
    if t[a, b] != N and t[a, c] == B and t[b, c] == B and t[b, d] == B:
        if t[a, d] != B:
            return False
    if t[c, d] != N and t[a, c] == A and t[b, c] == A and t[b, d] == A:
        if t[a, d] != A:
            return False
    return True
