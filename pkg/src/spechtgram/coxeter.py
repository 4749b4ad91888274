"""Permutations of {1..n} as a Coxeter group.

A permutation is stored in one-line notation as a tuple of images.  We
compose left to right: (u * v)(x) = v(u(x)), so a word r_{i1} ... r_{ik}
multiplies out with r_{i1} applied first.  This matches a right action on
points and on tableau entries.

Right multiplication by the simple transposition r_i = (i, i+1) swaps the
VALUES i and i+1 in the one-line form; it increases the length exactly when
i appears to the left of i+1.  Left multiplication swaps the POSITIONS i and
i+1.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence


class Perm(tuple):
    """A permutation of {1..n} in one-line notation."""

    def __new__(cls, images: Iterable[int]):
        self = super().__new__(cls, images)
        return self

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(1, n + 1))

    @staticmethod
    def simple(n: int, i: int) -> "Perm":
        """The adjacent transposition r_i = (i, i+1)."""
        return Perm.identity(n).times_simple(i)

    @staticmethod
    def transposition(n: int, a: int, b: int) -> "Perm":
        img = list(range(1, n + 1))
        img[a - 1], img[b - 1] = b, a
        return Perm(img)

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x - 1]

    def __mul__(self, other: "Perm") -> "Perm":  # type: ignore[override]
        """Apply self first, then other."""
        return Perm(other[x - 1] for x in self)

    def inverse(self) -> "Perm":
        img = [0] * len(self)
        for i, v in enumerate(self):
            img[v - 1] = i + 1
        return Perm(img)

    def length(self) -> int:
        """Coxeter length = number of inversions."""
        count = 0
        for i in range(len(self)):
            vi = self[i]
            for j in range(i + 1, len(self)):
                if vi > self[j]:
                    count += 1
        return count

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self))

    def times_simple(self, i: int) -> "Perm":
        """Right multiplication by r_i (swap the values i and i+1)."""
        j = i + 1
        return Perm(j if v == i else i if v == j else v for v in self)

    def simple_times(self, i: int) -> "Perm":
        """Left multiplication by r_i (swap positions i and i+1)."""
        img = list(self)
        img[i - 1], img[i] = img[i], img[i - 1]
        return Perm(img)

    def length_increases_right(self, i: int) -> bool:
        """True when len(self * r_i) = len(self) + 1."""
        return self.index(i) < self.index(i + 1)

    def right_descents(self) -> list[int]:
        return [i for i in range(1, len(self)) if self.index(i + 1) < self.index(i)]

    def to_json(self) -> list[int]:
        return list(self)

    @staticmethod
    def from_json(images: Sequence[int]) -> "Perm":
        p = Perm(images)
        if sorted(p) != list(range(1, len(p) + 1)):
            raise ValueError(f"{images!r} is not a permutation of 1..{len(p)}")
        return p


def reduced_word(w: Perm) -> tuple[int, ...]:
    """The deterministic reduced word: repeatedly strip the smallest right
    descent.  The returned letters multiply left to right back to w."""
    letters_rev = []
    cur = w
    while True:
        descent = None
        for i in range(1, len(cur)):
            if cur.index(i + 1) < cur.index(i):
                descent = i
                break
        if descent is None:
            break
        letters_rev.append(descent)
        cur = cur.times_simple(descent)
    return tuple(reversed(letters_rev))


def length_and_reduced_word(w: Perm) -> tuple[int, tuple[int, ...]]:
    word = reduced_word(w)
    return len(word), word


def perm_from_word(n: int, word: Iterable[int]) -> Perm:
    w = Perm.identity(n)
    for i in word:
        w = w.times_simple(i)
    return w


def all_perms(n: int) -> list[Perm]:
    return [Perm(p) for p in itertools.permutations(range(1, n + 1))]


# -- Young subgroups and coset representatives --------------------------------


def _blocks(mu: Sequence[int]) -> list[range]:
    out = []
    start = 1
    for part in mu:
        if part < 0:
            raise ValueError("composition parts must be >= 0")
        out.append(range(start, start + part))
        start += part
    return out


def young_subgroup_generators(mu: Sequence[int]) -> list[int]:
    """Indices i with r_i inside the Young subgroup of the composition mu."""
    gens = []
    for block in _blocks(mu):
        gens.extend(range(block.start, block.stop - 1))
    return gens


def young_subgroup(mu: Sequence[int]) -> list[Perm]:
    """All elements of the Young subgroup S_mu, permuting each block of
    {1..n} separately."""
    n = sum(mu)
    factors = []
    for block in _blocks(mu):
        factors.append(list(itertools.permutations(block)))
    out = []
    for combo in itertools.product(*factors):
        img = [0] * n
        for block, arranged in zip(_blocks(mu), combo):
            for offset, v in enumerate(arranged):
                img[block.start - 1 + offset] = v
        out.append(Perm(img))
    return out


def is_distinguished(d: Perm, mu: Sequence[int]) -> bool:
    """Membership in D_mu: the one-line form increases within each block of
    positions, i.e. d is the minimal-length representative of its coset."""
    for block in _blocks(mu):
        for j in range(block.start, block.stop - 1):
            if d[j - 1] > d[j]:
                return False
    return True


def distinguished_reps(mu: Sequence[int]) -> list[Perm]:
    """The distinguished coset representatives D_mu, ordered lexicographically
    by one-line form (the row-reading word of the row-standard tableau)."""
    n = sum(mu)
    if n == 0:
        return [Perm(())]
    values = list(range(1, n + 1))
    sizes = [m for m in mu]

    def assign(remaining: tuple[int, ...], sizes_left: list[int]) -> Iterator[tuple[int, ...]]:
        if not sizes_left:
            yield ()
            return
        k = sizes_left[0]
        for chosen in itertools.combinations(remaining, k):
            rest = tuple(v for v in remaining if v not in set(chosen))
            for tail in assign(rest, sizes_left[1:]):
                yield chosen + tail

    reps = [Perm(img) for img in assign(tuple(values), sizes)]
    reps.sort()
    return reps


def min_coset_rep(w: Perm, mu: Sequence[int]) -> Perm:
    """The distinguished representative of the coset S_mu * w."""
    img = list(w)
    for block in _blocks(mu):
        img[block.start - 1 : block.stop - 1] = sorted(img[block.start - 1 : block.stop - 1])
    return Perm(img)


# -- special permutations ------------------------------------------------------


def block_swap(a: int, b: int, n: int) -> Perm:
    """The permutation sending 1..a to b+1..a+b and a+1..a+b to 1..b,
    fixing everything above a+b."""
    if a < 0 or b < 0 or a + b > n:
        raise ValueError(f"need 0 <= a, b with a + b <= n; got a={a} b={b} n={n}")
    img = list(range(1, n + 1))
    for x in range(1, a + 1):
        img[x - 1] = b + x
    for x in range(a + 1, a + b + 1):
        img[x - 1] = x - a
    return Perm(img)


def segment_word(i: int, j: int) -> tuple[int, ...]:
    """Letters of r_{i,j}: r_i r_{i+1} ... r_j if i <= j, else r_i ... r_j
    descending; empty when i = 0 or j = 0."""
    if i == 0 or j == 0:
        return ()
    if i <= j:
        return tuple(range(i, j + 1))
    return tuple(range(i, j - 1, -1))


def column_reading_permutation(parts: Sequence[int]) -> Perm:
    """The permutation carrying the row-reading filling of a partition
    diagram to its column-reading filling."""
    n = sum(parts)
    cols = max(parts) if parts else 0
    col_len = [sum(1 for p in parts if p >= j + 1) for j in range(cols)]
    img = [0] * n
    row_entry = 1
    for i, part in enumerate(parts):
        for j in range(part):
            col_entry = sum(col_len[:j]) + i + 1
            img[row_entry - 1] = col_entry
            row_entry += 1
    return Perm(img)
