"""Whole-table consistency deciders and rotation-feasibility search.

Table conventions (see `core` for the letter semantics):

* `check_k2` takes a single normalised table of the outer pair (p_1, p_2):
  the rotation of p_1 is the identity, so letters follow the label order.
* `check_k3` takes the three tables T1=(p3,p2), T2=(p1,p3), T3=(p2,p1).
  `check_general` takes one table per ordered pair (p_i, p_j) with i < j.
  In both, letters are ordered by each table's red (first-role) rotation.
  Under the package-wide normalisation the rotations are recoverable from
  the tables themselves: the N-set of the (p_1, p_j) table is exactly the
  inversion set of p_j's rotation.  The triple/quadruple battery for a
  table is then evaluated with its vertices sorted by the red rotation;
  sorting by raw labels instead would reject realizable instances whose
  red rotation is not the identity.

Witnesses name the first failing tuple: rule batteries scan triples, then
quadruples, each in lexicographic order of the sorted vertex sequence;
multi-table checkers run rotation reconstruction, then the per-pair
K_{3,2} column test, then the batteries table by table.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .core import (
    A,
    B,
    N,
    ATGraph,
    DoubleCrossingError,
    GuardExceeded,
    InputError,
    IntransitivePairsError,
    K32_PROJECTIONS,
    K32_TYPES,
    LETTER_FLIP,
    PAIR_LETTERS,
    TypeTable,
    Verdict,
    Witness,
    all_pairs,
    check_permutation,
    identity,
    inversion_set,
    legal_k32,
    permutation_with_inversions,
    position_map,
    sorted_pair,
    types_from_crossings,
)
from .rules import LEGAL_TRIPLES_2

#: Tables at least this large use the vectorized rule scan; the pure scan
#: remains the reference implementation and the witness producer.
VECTORIZE_MIN = 48

_CODE = {N: 0, A: 1, B: 2}

_LEGAL_LUT = np.zeros((3, 3, 3), dtype=bool)
for _triple in LEGAL_TRIPLES_2:
    _LEGAL_LUT[_CODE[_triple[0]], _CODE[_triple[1]], _CODE[_triple[2]]] = True


def _require_letters(t: TypeTable):
    if not t.values_ok(PAIR_LETTERS):
        bad = next(v for _, v in t.items() if v not in PAIR_LETTERS)
        raise InputError(f"not a pair-letter table: value {bad!r}")


def _letter_grid(t: TypeTable, order):
    """grid[i][j] (i < j, positions in ``order``) = letter of the pair."""
    n = t.n
    pos = {label: i for i, label in enumerate(order)}
    grid = [[None] * n for _ in range(n)]
    for (u, v), letter in t.items():
        i, j = sorted((pos[u], pos[v]))
        grid[i][j] = letter
    return grid


def _battery_witness_scan(t: TypeTable, order) -> Witness | None:
    grid = _letter_grid(t, order)
    n = t.n
    for i in range(n - 2):
        gi = grid[i]
        for j in range(i + 1, n - 1):
            x = gi[j]
            gj = grid[j]
            for k in range(j + 1, n):
                if (x, gi[k], gj[k]) not in LEGAL_TRIPLES_2:
                    return Witness("triple", (order[i], order[j], order[k]))
    for a in range(n - 3):
        ga = grid[a]
        for b in range(a + 1, n - 2):
            gb = grid[b]
            ab = ga[b]
            for c in range(b + 1, n - 1):
                ac, bc = ga[c], gb[c]
                b_arm = ab != N and ac == B and bc == B
                a_arm = ac == A and bc == A
                if not (b_arm or a_arm):
                    continue
                gc = grid[c]
                for d in range(c + 1, n):
                    if b_arm and gb[d] == B and ga[d] != B:
                        return Witness(
                            "quadruple", (order[a], order[b], order[c], order[d])
                        )
                    if a_arm and gc[d] != N and gb[d] == A and ga[d] != A:
                        return Witness(
                            "quadruple", (order[a], order[b], order[c], order[d])
                        )
    return None


def _matrix(t: TypeTable, order):
    n = t.n
    pos = {label: i for i, label in enumerate(order)}
    m = np.zeros((n, n), dtype=np.int8)
    for (u, v), letter in t.items():
        i, j = pos[u], pos[v]
        code = _CODE[letter]
        m[i, j] = code
        m[j, i] = code
    return m


def _triples_ok_matrix(m) -> bool:
    n = m.shape[0]
    for b in range(1, n - 1):
        x = m[:b, b]
        z = m[b, b + 1 :]
        y = m[:b, b + 1 :]
        if not _LEGAL_LUT[x[:, None], y, z[None, :]].all():
            return False
    return True


def _quads_ok_matrix(m) -> bool:
    n = m.shape[0]
    b_code, a_code = _CODE[B], _CODE[A]
    for b in range(1, n - 2):
        rowb = m[b]
        for c in range(b + 1, n - 1):
            if rowb[c] == b_code:
                avec = (m[:b, c] == b_code) & (m[:b, b] != 0)
                if avec.any():
                    dvec = rowb[c + 1 :] == b_code
                    if dvec.any() and (m[:b, c + 1 :] != b_code)[avec][:, dvec].any():
                        return False
            if rowb[c] == a_code:
                avec = m[:b, c] == a_code
                if avec.any():
                    dvec = (rowb[c + 1 :] == a_code) & (m[c, c + 1 :] != 0)
                    if dvec.any() and (m[:b, c + 1 :] != a_code)[avec][:, dvec].any():
                        return False
    return True


def _battery_witness(t: TypeTable, order=None) -> Witness | None:
    """First triple/quadruple violation of ``t`` scanned in ``order``."""
    if order is None:
        order = identity(t.n)
    if t.n >= VECTORIZE_MIN:
        m = _matrix(t, order)
        if _triples_ok_matrix(m) and _quads_ok_matrix(m):
            return None
    return _battery_witness_scan(t, order)


def check_k2(t: TypeTable) -> Verdict:
    """Decide whether a normalised two-star table has an outer drawing.

    Consistency holds exactly when every triple is among the 17 legal ones
    and every quadruple passes the guarded rule.
    """
    _require_letters(t)
    witness = _battery_witness(t)
    return Verdict(witness is None, witness)


def _rotation_or_verdict(n, n_set, outer):
    try:
        return permutation_with_inversions(n, n_set), None
    except IntransitivePairsError as err:
        return None, Verdict(False, Witness("rotation", err.triple, outer=outer))


def check_k3(t1: TypeTable, t2: TypeTable, t3: TypeTable) -> Verdict:
    """Decide realizability of three tables oriented (p3,p2), (p1,p3), (p2,p1)."""
    for t in (t1, t2, t3):
        _require_letters(t)
    n = t1.n
    if not (t2.n == n and t3.n == n):
        raise InputError("tables disagree on the vertex count")
    pi3, bad = _rotation_or_verdict(n, t2.n_set(), (1, 3))
    if bad:
        return bad
    pi2, bad = _rotation_or_verdict(n, t3.n_set(), (2, 1))
    if bad:
        return bad
    for u, v in all_pairs(n):
        if legal_k32(t1[u, v], t2[u, v], t3[u, v]) is None:
            return Verdict(False, Witness("k32_column", (u, v), outer=(1, 2, 3)))
    for table, order, outer in (
        (t1, pi3, (3, 2)),
        (t2, identity(n), (1, 3)),
        (t3, pi2, (2, 1)),
    ):
        witness = _battery_witness(table, order)
        if witness is not None:
            return Verdict(
                False, Witness(witness.rule, witness.vertices, outer=outer)
            )
    return Verdict(True)


def check_general(k: int, tables) -> Verdict:
    """Decide realizability of an assignment of tables T_ij for all i < j.

    Runs in O(k^3 n^2 + k^2 n^4): rotation reconstruction, then the K_{3,2}
    column test over all outer triples, then the per-table rule batteries.
    """
    if k < 1:
        raise InputError("k must be positive")
    keys = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    for key in keys:
        if key not in tables:
            raise InputError(f"missing table for outer pair {key}")
    if not keys:
        return Verdict(True)
    n = tables[keys[0]].n
    for key in keys:
        _require_letters(tables[key])
        if tables[key].n != n:
            raise InputError(f"table {key} disagrees on the vertex count")

    rotations = {1: identity(n)}
    for j in range(2, k + 1):
        rotations[j], bad = _rotation_or_verdict(n, tables[(1, j)].n_set(), (1, j))
        if bad:
            return bad

    flip = LETTER_FLIP
    for a in range(1, k + 1):
        for b in range(a + 1, k + 1):
            for c in range(b + 1, k + 1):
                tab, tac, tbc = tables[(a, b)], tables[(a, c)], tables[(b, c)]
                for u, v in all_pairs(n):
                    col = (flip[tbc[u, v]], tac[u, v], flip[tab[u, v]])
                    if legal_k32(*col) is None:
                        return Verdict(
                            False, Witness("k32_column", (u, v), outer=(a, b, c))
                        )

    for i, j in keys:
        witness = _battery_witness(tables[(i, j)], rotations[i])
        if witness is not None:
            return Verdict(
                False, Witness(witness.rule, witness.vertices, outer=(i, j))
            )
    return Verdict(True)


def realize_atgraph(g: ATGraph) -> Verdict:
    """Decide whether an outer drawing crosses exactly the given edge pairs.

    Inner labels are read as the rotation order at p_1 (the package-wide
    normalisation); the conversion to red-rotation-ordered tables flips the
    letters of pairs that the red rotation reverses.
    """
    g.validate()
    if g.k == 1:
        return Verdict(True)
    try:
        raw = types_from_crossings(g)
    except DoubleCrossingError as err:
        return Verdict(False, Witness("double_crossing", err.pair, outer=err.outer))

    rotations = {1: identity(g.n)}
    for j in range(2, g.k + 1):
        rotations[j], bad = _rotation_or_verdict(g.n, raw[(1, j)].n_set(), (1, j))
        if bad:
            return bad

    tables = {}
    for i in range(1, g.k + 1):
        for j in range(i + 1, g.k + 1):
            reversed_pairs = inversion_set(rotations[i])
            t = raw[(i, j)]
            tables[(i, j)] = TypeTable(
                g.n,
                {
                    p: (LETTER_FLIP[t[p]] if p in reversed_pairs else t[p])
                    for p in t.pairs()
                },
            )
    return check_general(g.k, tables)


# ---------------------------------------------------------------------------
# rotation feasibility search


class _PartialTable:
    """Incrementally filled table in red-rotation scan coordinates."""

    __slots__ = ("n", "pos", "grid")

    def __init__(self, n, order):
        self.n = n
        self.pos = {label: i for i, label in enumerate(order)}
        self.grid = [[None] * n for _ in range(n)]

    def key(self, u, v):
        return sorted_pair(self.pos[u], self.pos[v])

    def set(self, u, v, letter):
        i, j = self.key(u, v)
        self.grid[i][j] = letter

    def unset(self, u, v):
        i, j = self.key(u, v)
        self.grid[i][j] = None

    def ok_after(self, u, v) -> bool:
        """Every fully assigned triple/quadruple through {u, v} still legal."""
        g = self.grid
        n = self.n
        i, j = self.key(u, v)
        for m in range(n):
            if m == i or m == j:
                continue
            a, b, c = sorted((i, j, m))
            x, y, z = g[a][b], g[a][c], g[b][c]
            if x is None or y is None or z is None:
                continue
            if (x, y, z) not in LEGAL_TRIPLES_2:
                return False
        others = [m for m in range(n) if m != i and m != j]
        for idx, m1 in enumerate(others):
            for m2 in others[idx + 1 :]:
                a, b, c, d = sorted((i, j, m1, m2))
                ab, ac, ad = g[a][b], g[a][c], g[a][d]
                bc, bd, cd = g[b][c], g[b][d], g[c][d]
                if None in (ab, ac, ad, bc, bd, cd):
                    continue
                if ab != N and ac == B and bc == B and bd == B and ad != B:
                    return False
                if cd != N and ac == A and bc == A and bd == A and ad != A:
                    return False
        return True


def _search_engine(perms, max_n, max_k):
    """Backtracking search for red-ordered tables matching true rotations.

    Works in labels normalised so the first rotation is the identity;
    returns {(i, j): TypeTable} in normalised labels, or None.
    """
    k = len(perms)
    n = len(perms[0])
    if k > max_k or (k > 3 and n > max_n):
        raise GuardExceeded(f"search guard exceeded for k={k}, n={n}")
    perms = [check_permutation(p, n) for p in perms]
    pos1 = position_map(perms[0])
    relabeled = [tuple(pos1[v] + 1 for v in p) for p in perms]
    inversions = [inversion_set(q) for q in relabeled]

    outer_pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    flip = LETTER_FLIP

    def column_ok(vec, a, b, c):
        col = (flip[vec[(b, c)]], vec[(a, c)], flip[vec[(a, b)]])
        return legal_k32(*col) is not None

    candidates = {}
    for pair in all_pairs(n):
        fixed = {}
        free = []
        for i, j in outer_pairs:
            differs = (pair in inversions[i - 1]) != (pair in inversions[j - 1])
            if differs:
                fixed[(i, j)] = N
            else:
                free.append((i, j))
        vectors = []
        for choice in product((A, B), repeat=len(free)):
            vec = dict(fixed)
            vec.update(zip(free, choice))
            if all(
                column_ok(vec, a, b, c)
                for a in range(1, k + 1)
                for b in range(a + 1, k + 1)
                for c in range(b + 1, k + 1)
            ):
                vectors.append(vec)
        if not vectors:
            return None
        candidates[pair] = vectors

    pair_order = sorted(all_pairs(n), key=lambda p: (len(candidates[p]), p))
    partials = {
        (i, j): _PartialTable(n, relabeled[i - 1]) for i, j in outer_pairs
    }
    assignment = {}

    def backtrack(idx):
        if idx == len(pair_order):
            return True
        u, v = pair_order[idx]
        for vec in candidates[(u, v)]:
            for op in outer_pairs:
                partials[op].set(u, v, vec[op])
            if all(partials[op].ok_after(u, v) for op in outer_pairs):
                assignment[(u, v)] = vec
                if backtrack(idx + 1):
                    return True
                del assignment[(u, v)]
            for op in outer_pairs:
                partials[op].unset(u, v)
        return False

    if not backtrack(0):
        return None
    tables = {
        op: TypeTable(n, {pair: assignment[pair][op] for pair in all_pairs(n)})
        for op in outer_pairs
    }
    verdict = check_general(k, tables)
    assert verdict.consistent, f"search produced an inconsistent table: {verdict}"
    return tables


def search_rotation(perms, *, max_n=8, max_k=6):
    """Feasibility search for an arbitrary rotation system.

    Returns red-ordered tables for all outer pairs i < j, keyed by the
    original inner labels, or None when no consistent assignment exists.
    Exponential in the worst case; guarded.
    """
    if len(perms) < 2:
        raise InputError("need at least two rotations")
    n = len(perms[0])
    normalised = _search_engine(perms, max_n=max_n, max_k=max_k)
    if normalised is None:
        return None
    pos1 = position_map(check_permutation(perms[0], n))

    def rekey(table):
        return TypeTable(
            n,
            {
                (u, v): table[sorted_pair(pos1[u] + 1, pos1[v] + 1)]
                for u, v in all_pairs(n)
            },
        )

    return {op: rekey(t) for op, t in normalised.items()}


def search_rotation_k3(p1, p2, p3) -> TypeTable | None:
    """Consistent K_{3,2}-type assignment for three rotations, if one exists.

    Each pair's candidate types are the projection columns whose N-positions
    match the pair's order pattern across the rotations (at most three);
    backtracking prunes with the triple/quadruple rules incrementally and is
    exhaustive, so None means no assignment over the candidate alphabet.
    """
    tables = search_rotation((p1, p2, p3), max_n=10 ** 9, max_k=3)
    if tables is None:
        return None
    n = len(p1)
    flip = LETTER_FLIP

    def k32_name(u, v):
        col = (
            flip[tables[(2, 3)][u, v]],
            tables[(1, 3)][u, v],
            flip[tables[(1, 2)][u, v]],
        )
        name = legal_k32(*col)
        assert name is not None
        return name

    return TypeTable.from_function(n, k32_name)
