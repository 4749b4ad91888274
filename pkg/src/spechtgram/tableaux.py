"""Partitions, Young tableaux, and pair tableaux for hook shapes.

Tableaux are stored row-wise with entries 1..n.  The symmetric group acts on
the right by permuting entries, and every tableau t determines the unique
permutation carrying the row-reading filling to t.

For a hook shape (n-k, 1^k) the package also works with pair tableaux
(a | b): an ordered set pair with k entries in the first component and n-k
in the second, both increasing.  These index the basis of the signed
permutation module used to triangularize hook Gram matrices.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from .coxeter import Perm, reduced_word


class Partition:
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ("parts", "n")

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(p) for p in parts if p != 0)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"{parts} is not weakly decreasing")
        self.parts = parts
        self.n = sum(parts)

    @staticmethod
    def of(value) -> "Partition":
        if isinstance(value, Partition):
            return value
        return Partition(tuple(value))

    @staticmethod
    def parse(text: str) -> "Partition":
        """Parse '3,3,2' (or '3 3 2')."""
        pieces = text.replace(" ", ",").split(",")
        return Partition([int(p) for p in pieces if p])

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    @property
    def is_hook(self) -> bool:
        """True for (n-k, 1^k), including (n) and (1^n)."""
        return all(p == 1 for p in self.parts[1:])

    @property
    def hook_arm(self) -> int:
        """k such that self = (n-k, 1^k); only for hooks."""
        if not self.is_hook:
            raise ValueError(f"{self} is not a hook")
        return len(self.parts) - 1


def conjugate(shape) -> Partition:
    """Transpose of the diagram: column lengths become row lengths."""
    shape = Partition.of(shape)
    if not shape.parts:
        return shape
    return Partition([sum(1 for p in shape.parts if p >= j + 1) for j in range(shape.parts[0])])


def hook_lengths(shape) -> dict[tuple[int, int], int]:
    """Hook length of every node (i, j), 1-based: arm + leg + 1."""
    shape = Partition.of(shape)
    conj = conjugate(shape).parts
    out = {}
    for i, part in enumerate(shape.parts, start=1):
        for j in range(1, part + 1):
            out[(i, j)] = (part - j) + (conj[j - 1] - i) + 1
    return out


def weighted_size(shape) -> int:
    """Sum of (i - 1) * lambda_i over rows; equals the length of the longest
    element of the Young subgroup of the conjugate shape."""
    shape = Partition.of(shape)
    return sum(i * p for i, p in enumerate(shape.parts))


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


class Tableau:
    """A filling of a partition diagram by 1..n, stored row-wise."""

    __slots__ = ("shape", "rows", "_pos")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(r) for r in rows)
        self.shape = Partition([len(r) for r in rows])
        n = self.shape.n
        flat = [v for row in rows for v in row]
        if sorted(flat) != list(range(1, n + 1)):
            raise ValueError(f"rows {rows} are not a filling by 1..{n}")
        self.rows = rows
        self._pos = None

    @property
    def n(self) -> int:
        return self.shape.n

    def positions(self) -> dict[int, tuple[int, int]]:
        """entry -> (row, column), both 1-based."""
        if self._pos is None:
            self._pos = {
                v: (i, j)
                for i, row in enumerate(self.rows, start=1)
                for j, v in enumerate(row, start=1)
            }
        return self._pos

    def row_of(self, value: int) -> int:
        return self.positions()[value][0]

    def first_column(self) -> tuple[int, ...]:
        return tuple(row[0] for row in self.rows)

    def is_row_standard(self) -> bool:
        return all(all(r[j] < r[j + 1] for j in range(len(r) - 1)) for r in self.rows)

    def is_standard(self) -> bool:
        if not self.is_row_standard():
            return False
        for i in range(len(self.rows) - 1):
            upper, lower = self.rows[i], self.rows[i + 1]
            if any(upper[j] >= lower[j] for j in range(len(lower))):
                return False
        return True

    def transpose(self) -> "Tableau":
        cols = max(len(r) for r in self.rows)
        new_rows = []
        for j in range(cols):
            new_rows.append(tuple(r[j] for r in self.rows if len(r) > j))
        return Tableau(new_rows)

    def act(self, w: Perm) -> "Tableau":
        """Right action: relabel every entry v by w(v)."""
        return Tableau([tuple(w(v) for v in row) for row in self.rows])

    def swap_entries(self, a: int, b: int) -> "Tableau":
        return self.act(Perm.transposition(self.n, a, b))

    def __eq__(self, other) -> bool:
        return isinstance(other, Tableau) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Tableau({[list(r) for r in self.rows]})"

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @staticmethod
    def from_json(rows) -> "Tableau":
        return Tableau(rows)


def initial_tableau(shape) -> Tableau:
    """Entries 1..n along rows, left to right then top to bottom."""
    shape = Partition.of(shape)
    rows = []
    nxt = 1
    for part in shape.parts:
        rows.append(tuple(range(nxt, nxt + part)))
        nxt += part
    return Tableau(rows)


def terminal_tableau(shape) -> Tableau:
    """Entries 1..n down columns, top to bottom then left to right."""
    shape = Partition.of(shape)
    return initial_tableau(conjugate(shape)).transpose()


def tableau_permutation(t: Tableau) -> Perm:
    """The unique permutation d with t = (initial tableau) acted on by d."""
    start = initial_tableau(t.shape)
    img = [0] * t.n
    for row_s, row_t in zip(start.rows, t.rows):
        for a, b in zip(row_s, row_t):
            img[a - 1] = b
    return Perm(img)


@lru_cache(maxsize=None)
def _standard_tableaux_cached(parts: tuple[int, ...]) -> tuple[Tableau, ...]:
    """Enumerate by inserting 1..n in order at addable cells."""
    shape = Partition(parts)
    n = shape.n
    if n == 0:
        return (Tableau(()),)
    results = []
    rows: list[list[int]] = [[] for _ in parts]

    def place(v: int):
        if v > n:
            results.append(Tableau([tuple(r) for r in rows]))
            return
        for i in range(len(parts)):
            if len(rows[i]) < parts[i] and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(v)
                place(v + 1)
                rows[i].pop()

    place(1)
    return tuple(results)


def _hook_sort_key(t: Tableau):
    n = t.n
    col = tuple(sorted(t.first_column()))
    n_in_row1 = t.row_of(n) == 1
    return (0 if n_in_row1 else 1, col)


def standard_tableaux(shape) -> list[Tableau]:
    """All standard tableaux of the given shape, in the package's fixed order.

    For hooks: tableaux with n in the first row come first, then the rest,
    each group ordered lexicographically by first-column entries.  For other
    shapes: ordered by the deterministic reduced word of the associated
    permutation.  Gram matrix rows and columns use this order, so it is part
    of the public contract.
    """
    shape = Partition.of(shape)
    tabs = list(_standard_tableaux_cached(shape.parts))
    if shape.is_hook:
        tabs.sort(key=_hook_sort_key)
    else:
        tabs.sort(key=lambda t: reduced_word(tableau_permutation(t)))
    return tabs


def count_standard_tableaux_hook_formula(shape) -> int:
    """n! divided by the product of all hook lengths (independent oracle)."""
    shape = Partition.of(shape)
    import math

    prod = 1
    for h in hook_lengths(shape).values():
        prod *= h
    return math.factorial(shape.n) // prod


# -- pair tableaux for hook shapes ---------------------------------------------


class PairTableau:
    """A standard pair tableau (a | b): disjoint increasing sequences covering
    {1..n} with |a| = k."""

    __slots__ = ("k", "n", "first", "second")

    def __init__(self, n: int, first: Sequence[int], second: Sequence[int] | None = None):
        first = tuple(sorted(first))
        if second is None:
            rest = set(range(1, n + 1)) - set(first)
            second = tuple(sorted(rest))
        else:
            second = tuple(sorted(second))
        if set(first) | set(second) != set(range(1, n + 1)) or set(first) & set(second):
            raise ValueError(f"({first} | {second}) does not partition 1..{n}")
        self.k = len(first)
        self.n = n
        self.first = first
        self.second = second

    def permutation(self) -> Perm:
        """d with (a | b) = (initial pair tableau) acted on by d: the one-line
        form is a followed by b."""
        return Perm(self.first + self.second)

    def length(self) -> int:
        """Number of pairs i in a, j in b with i > j; the Coxeter length of
        the permutation above."""
        return sum(1 for i in self.first for j in self.second if i > j)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PairTableau)
            and self.n == other.n
            and self.first == other.first
        )

    def __hash__(self) -> int:
        return hash((self.n, self.first))

    def __repr__(self) -> str:
        a = "".join(str(v) for v in self.first)
        b = "".join(str(v) for v in self.second)
        return f"({a}|{b})"


def pair_standard_tableaux(k: int, n: int) -> list[tuple[PairTableau, Perm, int]]:
    """All standard (k | n-k) pair tableaux with their permutations and
    lengths, ordered lexicographically by the first component."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k} n={n}")
    out = []
    for first in itertools.combinations(range(1, n + 1), k):
        pt = PairTableau(n, first)
        out.append((pt, pt.permutation(), pt.length()))
    return out


def first_column_index(pair: PairTableau, t: Tableau) -> tuple[int | None, bool]:
    """Index data for a pair tableau against a standard hook tableau.

    Returns (index, n_flag).  The index is defined when every entry of the
    first component lies in the first column of t: it is the row of t whose
    first-column entry is missing from the pair's first component.  n_flag is
    True when additionally n lies in the second component.
    """
    if not t.shape.is_hook:
        raise ValueError(f"{t.shape} is not a hook")
    col = t.first_column()
    first = set(pair.first)
    if not first <= set(col):
        return None, False
    missing = [i for i, entry in enumerate(col, start=1) if entry not in first]
    if len(missing) != 1:
        return None, False
    return missing[0], (t.n in pair.second)


def plus_pair(shape) -> PairTableau:
    """The pair tableau with first component {n-k+1, ..., n}."""
    shape = Partition.of(shape)
    k = shape.hook_arm
    n = shape.n
    return PairTableau(n, tuple(range(n - k + 1, n + 1)))


def star_tableau(t: Tableau) -> Tableau:
    """t with the entries 1 and n swapped."""
    return t.swap_entries(1, t.n)


def star_pair(t: Tableau) -> PairTableau:
    """For a standard hook tableau with n in row 1: the unique standard pair
    tableau whose first component sits in the first column of star_tableau(t)
    and whose second component contains n."""
    if not t.shape.is_hook:
        raise ValueError(f"{t.shape} is not a hook")
    if t.row_of(t.n) != 1:
        raise ValueError("n must lie in the first row")
    col = set(t.first_column())
    col.discard(1)
    return PairTableau(t.n, tuple(sorted(col)))
