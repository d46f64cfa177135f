"""Core types and encoding conventions for outer drawings of K_{k,n}.

An *outer drawing* places the k vertices p_1..p_k of one side of the
bipartition in clockwise order on the outer boundary; the n inner vertices
are labelled 1..n.  Two stars p_x, p_y interact on an inner pair {u, v} in
one of three ways, recorded as a letter:

    ``N``  no crossing between the four edges (quasi-parallel pair),
    ``A``  edge (first, p_x) crosses edge (second, p_y),
    ``B``  edge (first, p_y) crosses edge (second, p_x),

where *first*/*second* is the order of u, v in the rotation of p_x (the
"red" vertex of the ordered pair).  The whole package normalises instances
so that the rotation of p_1 is the identity; for tables of the pair
(p_1, p_2) "first" is then simply the smaller label.

A pair {u, v} crosses between stars x and y exactly when u and v appear in
different orders in the two rotations; `N` marks those pairs.  Swapping the
roles of the two outer vertices exchanges the two crossing patterns, so
`reverse_table` is the A/B flip (validated against the brute-force oracle
in the test suite, see tests/test_core.py).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Iterator, Mapping

N = "N"
A = "A"
B = "B"
PAIR_LETTERS = (A, B, N)
LETTER_FLIP = {A: B, B: A, N: N}

K32_TYPES = ("B1", "B2", "B3", "W1", "W2", "W3")

#: Columns of the projection table for the six outer drawings of K_{3,2}.
#: Entries are the letters of the tables T1=(p3,p2), T2=(p1,p3), T3=(p2,p1).
K32_PROJECTIONS = {
    "B1": (B, A, A),
    "B2": (A, B, A),
    "B3": (A, A, B),
    "W1": (A, N, N),
    "W2": (N, A, N),
    "W3": (N, N, A),
}

_COLUMN_TO_K32 = {proj: name for name, proj in K32_PROJECTIONS.items()}


class InputError(ValueError):
    """Malformed input document or structurally invalid value."""


class GuardExceeded(ValueError):
    """A brute-force enumeration was asked to run beyond its size guard."""


class IntransitivePairsError(ValueError):
    """A pair pattern does not correspond to any permutation.

    Carries the violating triple of labels.
    """

    def __init__(self, triple):
        super().__init__(f"intransitive pair pattern at triple {triple}")
        self.triple = tuple(triple)


class DoubleCrossingError(ValueError):
    """Both possible crossings of one inner pair are present.

    No outer drawing realises this pattern; `realize_atgraph` converts the
    error into an inconsistent verdict.
    """

    def __init__(self, pair, outer):
        super().__init__(
            f"pair {pair} crosses twice between outer vertices {outer}"
        )
        self.pair = tuple(pair)
        self.outer = tuple(outer)


@dataclass(frozen=True)
class Witness:
    """Minimal violation descriptor: rule name plus the offending tuple.

    ``vertices`` are inner labels in the order the rule inspected them;
    ``outer`` names the outer vertices involved (empty for plain k=2 checks).
    """

    rule: str
    vertices: tuple[int, ...]
    outer: tuple[int, ...] = ()

    def to_json(self):
        return {
            "rule": self.rule,
            "vertices": list(self.vertices),
            "outer": list(self.outer),
        }


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    witness: Witness | None = None

    def __post_init__(self):
        assert self.consistent == (self.witness is None)

    def to_json(self):
        return {
            "consistent": self.consistent,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def sorted_pair(u, v):
    return (u, v) if u < v else (v, u)


def all_pairs(n) -> Iterator[tuple[int, int]]:
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            yield (u, v)


class TypeTable:
    """Total assignment of a symbol to every unordered pair of 1..n.

    Values are pair letters, uniform types in 1..k, or K_{3,2} type names,
    depending on context.  Keys are normalised to (u, v) with u < v.
    """

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], object]):
        if n < 1:
            raise InputError(f"vertex count must be >= 1, got {n}")
        table = {}
        for key, value in entries.items():
            u, v = key
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise InputError(f"bad pair key {key} for n={n}")
            table[sorted_pair(u, v)] = value
        missing = [p for p in all_pairs(n) if p not in table]
        if missing:
            raise InputError(f"table on {n} vertices is missing pair {missing[0]}")
        if len(table) != comb(n, 2):
            raise InputError("table has extraneous pairs")
        self.n = n
        self._entries = table

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], object]) -> "TypeTable":
        return cls(n, {(u, v): fn(u, v) for u, v in all_pairs(n)})

    def __getitem__(self, pair):
        return self._entries[sorted_pair(*pair)]

    def items(self):
        return sorted(self._entries.items())

    def pairs(self):
        return sorted(self._entries)

    def values_ok(self, allowed) -> bool:
        return all(v in allowed for v in self._entries.values())

    def n_set(self) -> frozenset:
        """Pairs labelled N (only meaningful for pair-letter tables)."""
        return frozenset(p for p, v in self._entries.items() if v == N)

    def map_values(self, fn) -> "TypeTable":
        return TypeTable(self.n, {p: fn(v) for p, v in self._entries.items()})

    def restrict(self, labels: Iterable[int]) -> "TypeTable":
        """Induced table on a subset of labels, relabelled to 1..m by rank."""
        order = sorted(labels)
        rank = {lab: i + 1 for i, lab in enumerate(order)}
        return TypeTable(
            len(order),
            {
                (rank[u], rank[v]): self._entries[(u, v)]
                for u, v in all_pairs(self.n)
                if u in rank and v in rank
            },
        )

    def __eq__(self, other):
        return (
            isinstance(other, TypeTable)
            and self.n == other.n
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._entries.items()))))

    def __repr__(self):
        body = ", ".join(f"{u},{v}:{val}" for (u, v), val in self.items())
        return f"TypeTable(n={self.n}, {{{body}}})"

    def to_json(self):
        return {f"{u},{v}": val for (u, v), val in self.items()}


# ---------------------------------------------------------------------------
# permutations


def identity(n) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def reversal(n) -> tuple[int, ...]:
    return tuple(range(n, 0, -1))


def check_permutation(perm, n=None) -> tuple[int, ...]:
    perm = tuple(perm)
    size = len(perm) if n is None else n
    if sorted(perm) != list(range(1, size + 1)):
        raise InputError(f"{perm!r} is not a permutation of 1..{size}")
    return perm


def position_map(perm) -> dict[int, int]:
    return {label: i for i, label in enumerate(perm)}

def inversion_set(perm) -> frozenset[tuple[int, int]]:
    """Pairs (u, v), u < v, that appear reversed in the sequence."""
    pos = position_map(perm)
    n = len(perm)
    return frozenset(
        (u, v) for u, v in all_pairs(n) if pos[u] > pos[v]
    )


def permutation_with_inversions(n, inv) -> tuple[int, ...]:
    """The unique permutation of 1..n whose inversion set is ``inv``.

    Raises IntransitivePairsError (with a violating triple) when no such
    permutation exists, i.e. when ``inv`` or its complement fails
    transitivity.
    """
    inv = {sorted_pair(*p) for p in inv}

    def before(u, v):
        # u appears before v in the target permutation
        if u < v:
            return (u, v) not in inv
        return (v, u) in inv

    ranks = {
        u: sum(1 for v in range(1, n + 1) if v != u and before(v, u))
        for u in range(1, n + 1)
    }
    perm = tuple(sorted(range(1, n + 1), key=lambda u: ranks[u]))
    if sorted(ranks.values()) == list(range(n)) and inversion_set(perm) == frozenset(inv):
        return perm
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            for c in range(b + 1, n + 1):
                ab, ac, bc = before(a, b), before(a, c), before(b, c)
                if (ab and bc and not ac) or (not ab and not bc and ac):
                    raise IntransitivePairsError((a, b, c))
    raise AssertionError("rank construction failed without a violating triple")


@dataclass(frozen=True)
class RotationSystem:
    """k rotations (counterclockwise edge orders) on the same ground set."""

    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.perms) < 1:
            raise InputError("rotation system needs at least one permutation")
        n = len(self.perms[0])
        for perm in self.perms:
            check_permutation(perm, n)

    @property
    def k(self):
        return len(self.perms)

    @property
    def n(self):
        return len(self.perms[0])

    def to_json(self):
        return [list(p) for p in self.perms]


# ---------------------------------------------------------------------------
# conversions between crossing sets and pair tables


def canonical_crossing(e1, e2):
    e1, e2 = tuple(e1), tuple(e2)
    return (e1, e2) if e1 <= e2 else (e2, e1)


@dataclass(frozen=True)
class ATGraph:
    """K_{k,n} together with the set of edge pairs required to cross.

    Edges are (outer index, inner label) pairs.  Crossings never involve a
    shared endpoint and never two edges of the same star.
    """

    k: int
    n: int
    crossings: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(
            self,
            "crossings",
            frozenset(canonical_crossing(*c) for c in self.crossings),
        )

    def validate(self):
        if self.k < 1 or self.n < 1:
            raise InputError(f"bad part sizes k={self.k}, n={self.n}")
        for crossing in sorted(self.crossings):
            (i, u), (j, v) = crossing
            for x, w in ((i, u), (j, v)):
                if not (1 <= x <= self.k and 1 <= w <= self.n):
                    raise InputError(f"edge ({x},{w}) out of range in {crossing}")
            if i == j:
                raise InputError(f"same-star crossing pair {crossing}")
            if u == v:
                raise InputError(f"shared-endpoint crossing pair {crossing}")
        return self

    def has_crossing(self, i, u, j, v) -> bool:
        return canonical_crossing((i, u), (j, v)) in self.crossings

    def to_json(self):
        return {
            "k": self.k,
            "n": self.n,
            "crossings": [
                [list(e1), list(e2)] for e1, e2 in sorted(self.crossings)
            ],
        }


def types_from_crossings(g: ATGraph) -> dict[tuple[int, int], TypeTable]:
    """Pair tables of an AT-graph, for every ordered pair of outer vertices.

    Letters follow the label order (A: (u,p_i) x (v,p_j) for u < v, with
    p_i in the red role), matching the normalisation that inner labels give
    the rotation order at p_1.  Raises DoubleCrossingError when a pair is
    asked to cross twice between the same two stars.
    """
    g.validate()
    tables = {}
    for i in range(1, g.k + 1):
        for j in range(1, g.k + 1):
            if i == j:
                continue

            def letter(u, v, i=i, j=j):
                a_cross = g.has_crossing(i, u, j, v)
                b_cross = g.has_crossing(j, u, i, v)
                if a_cross and b_cross:
                    raise DoubleCrossingError((u, v), (i, j))
                if a_cross:
                    return A
                if b_cross:
                    return B
                return N

            tables[(i, j)] = TypeTable.from_function(g.n, letter)
    return tables


def crossings_from_types(tables, k, n) -> ATGraph:
    """Exact inverse of `types_from_crossings`.

    Expects a table for every ordered pair of outer vertices; ordered pairs
    that disagree with their reverse (under the A/B flip) are rejected.
    """
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j and (i, j) not in tables:
                raise InputError(f"missing table for outer pair ({i},{j})")
    crossings = set()
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            table = tables[(i, j)]
            if reverse_table(table) != tables[(j, i)]:
                raise InputError(
                    f"tables for ({i},{j}) and ({j},{i}) are not mirror images"
                )
            for (u, v), letter in table.items():
                if letter == A:
                    crossings.add(canonical_crossing((i, u), (j, v)))
                elif letter == B:
                    crossings.add(canonical_crossing((j, u), (i, v)))
                elif letter != N:
                    raise InputError(f"bad pair letter {letter!r} at {(u, v)}")
    return ATGraph(k, n, frozenset(crossings)).validate()


def reverse_table(t: TypeTable) -> TypeTable:
    """Table of the same two stars with their roles swapped: A and B flip."""
    return t.map_values(lambda letter: LETTER_FLIP[letter])


def rotation_from_table2(t: TypeTable) -> tuple[int, ...]:
    """Wiring permutation of a normalised two-star table.

    This is the top-to-bottom order of the curves at the right end of the
    wiring diagram: a pair keeps its label order exactly when its type is N,
    and appears inverted when the pair crosses (type A or B).
    """
    crossing_pairs = {p for p, letter in t.items() if letter != N}
    return permutation_with_inversions(t.n, crossing_pairs)


def project_k32(k32_type: str) -> tuple[str, str, str]:
    """Letters of the tables T1=(p3,p2), T2=(p1,p3), T3=(p2,p1)."""
    return K32_PROJECTIONS[k32_type]


def legal_k32(t1: str, t2: str, t3: str) -> str | None:
    """The K_{3,2} type projecting to (t1, t2, t3), if any."""
    return _COLUMN_TO_K32.get((t1, t2, t3))


# ---------------------------------------------------------------------------
# minimum crossings


def min_crossing_value(k, n) -> int:
    """Minimum crossing count over all outer drawings of K_{k,n}."""
    if k < 1 or n < 1:
        raise InputError("k and n must be positive")
    return comb(n, 2) * (comb(k, 2) - (k // 2) * ((k + 1) // 2))


def min_crossing_rotation(k, n) -> RotationSystem:
    """A rotation system achieving `min_crossing_value`.

    floor(k/2) outer vertices see the inner vertices in one order and the
    rest see them reversed; opposite pairs then cross nowhere.
    """
    if k < 1 or n < 1:
        raise InputError("k and n must be positive")
    half = k // 2
    perms = tuple(identity(n) for _ in range(half)) + tuple(
        reversal(n) for _ in range(k - half)
    )
    return RotationSystem(perms)
