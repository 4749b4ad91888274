"""The Iwahori-Hecke algebra of the symmetric group over a Laurent ring.

Elements are finite maps from permutations to Laurent polynomials, i.e.
coordinates in the basis {T_w}.  The defining relations are

    (T_i - q)(T_i + 1) = 0,   T_i T_j = T_j T_i (|i-j| > 1),
    T_i T_{i+1} T_i = T_{i+1} T_i T_{i+1},

and T_w = T_{i1} ... T_{ik} along any reduced word.  Right multiplication by
a generator is the workhorse:

    T_w T_i = T_{w r_i}                  if the length goes up,
            = q T_{w r_i} + (q-1) T_w    otherwise.

Full-algebra arithmetic is meant for validation at small n; production Gram
computations live in the permutation modules (see gram.py), which have far
smaller dimension.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .coxeter import (
    Perm,
    column_reading_permutation,
    reduced_word,
    segment_word,
    young_subgroup,
)
from .qlaurent import ZZ, CoeffRing, LaurentPoly
from .tableaux import Partition, conjugate


class HeckeElt:
    """An element of the Hecke algebra of S_n, stored sparsely."""

    __slots__ = ("n", "ring", "terms")

    def __init__(self, n: int, ring: CoeffRing, terms: dict[Perm, LaurentPoly] | None = None):
        self.n = n
        self.ring = ring
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(n: int, ring: CoeffRing = ZZ) -> "HeckeElt":
        return HeckeElt(n, ring)

    @staticmethod
    def one(n: int, ring: CoeffRing = ZZ) -> "HeckeElt":
        return HeckeElt.basis(Perm.identity(n), ring)

    @staticmethod
    def basis(w: Perm, ring: CoeffRing = ZZ) -> "HeckeElt":
        """T_w."""
        return HeckeElt(len(w), ring, {w: LaurentPoly.one(ring)})

    @staticmethod
    def generator(n: int, i: int, ring: CoeffRing = ZZ) -> "HeckeElt":
        """T_i."""
        return HeckeElt.basis(Perm.simple(n, i), ring)

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "HeckeElt"):
        if self.n != other.n or self.ring != other.ring:
            raise ValueError("degree or ring mismatch")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return HeckeElt(self.n, self.ring, out)

    def __neg__(self) -> "HeckeElt":
        return HeckeElt(self.n, self.ring, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, c: LaurentPoly) -> "HeckeElt":
        if c.is_zero():
            return HeckeElt.zero(self.n, self.ring)
        return HeckeElt(self.n, self.ring, {w: t * c for w, t in self.terms.items()})

    def coefficient(self, w: Perm) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly.zero(self.ring))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HeckeElt)
            and self.n == other.n
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("HeckeElt is not hashable")

    def __repr__(self) -> str:
        if not self.terms:
            return "HeckeElt(0)"
        bits = [f"({c})*T{tuple(w)}" for w, c in sorted(self.terms.items())]
        return "HeckeElt(" + " + ".join(bits) + ")"

    # -- multiplication -----------------------------------------------------

    def times_gen(self, i: int) -> "HeckeElt":
        """Right multiplication by T_i."""
        if not 1 <= i < self.n:
            raise ValueError(f"generator index {i} out of range for n={self.n}")
        q = LaurentPoly.q_power(1, 1, self.ring)
        qm1 = LaurentPoly(self.ring, {1: 1, 0: -1})
        out: dict[Perm, LaurentPoly] = {}

        def bump(w, c):
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s

        for w, c in self.terms.items():
            w2 = w.times_simple(i)
            if w.length_increases_right(i):
                bump(w2, c)
            else:
                bump(w2, c * q)
                bump(w, c * qm1)
        return HeckeElt(self.n, self.ring, out)

    def times_word(self, word: Iterable[int]) -> "HeckeElt":
        out = self
        for i in word:
            out = out.times_gen(i)
        return out

    def times_basis(self, w: Perm) -> "HeckeElt":
        return self.times_word(reduced_word(w))

    def __mul__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        out = HeckeElt.zero(self.n, self.ring)
        for w, c in other.terms.items():
            out = out + self.times_word(reduced_word(w)).scale(c)
        return out

    def times_gen_inverse(self, i: int) -> "HeckeElt":
        """Right multiplication by T_i^{-1} = q^{-1} T_i + (q^{-1} - 1)."""
        qinv = LaurentPoly.q_power(-1, 1, self.ring)
        qinv_m1 = LaurentPoly(self.ring, {-1: 1, 0: -1})
        return self.times_gen(i).scale(qinv) + self.scale(qinv_m1)

    # -- involutions ----------------------------------------------------------

    def reverse_involution(self) -> "HeckeElt":
        """The anti-automorphism T_w -> T_{w^{-1}} (order 2)."""
        return HeckeElt(self.n, self.ring, {w.inverse(): c for w, c in self.terms.items()})

    def sign_involution(self) -> "HeckeElt":
        """The algebra automorphism with T_i -> (q - 1) - T_i (order 2);
        on basis elements T_w -> (-q)^len(w) (T_{w^{-1}})^{-1}."""
        qm1 = LaurentPoly(self.ring, {1: 1, 0: -1})
        out = HeckeElt.zero(self.n, self.ring)
        for w, c in self.terms.items():
            img = HeckeElt.one(self.n, self.ring)
            for i in reduced_word(w):
                img = img.scale(qm1) - img.times_gen(i)
            out = out + img.scale(c)
        return out


def basis_inverse(w: Perm, ring: CoeffRing = ZZ) -> HeckeElt:
    """T_w^{-1}, multiplying out T_i^{-1} along the reversed reduced word."""
    out = HeckeElt.one(len(w), ring)
    for i in reversed(reduced_word(w)):
        out = out.times_gen_inverse(i)
    return out


# -- structural elements --------------------------------------------------------


def symmetrizer(mu: Sequence[int], n: int | None = None, ring: CoeffRing = ZZ) -> HeckeElt:
    """Sum of T_w over the Young subgroup of mu (q-symmetrizer)."""
    n = n or sum(mu)
    if sum(mu) != n:
        raise ValueError(f"composition {mu} does not sum to {n}")
    one = LaurentPoly.one(ring)
    return HeckeElt(n, ring, {w: one for w in young_subgroup(mu)})


def antisymmetrizer(mu: Sequence[int], n: int | None = None, ring: CoeffRing = ZZ) -> HeckeElt:
    """Sum of (-q)^{-len(w)} T_w over the Young subgroup of mu."""
    n = n or sum(mu)
    if sum(mu) != n:
        raise ValueError(f"composition {mu} does not sum to {n}")
    terms = {}
    for w in young_subgroup(mu):
        ln = w.length()
        terms[w] = LaurentPoly.q_power(-ln, (-1) ** ln, ring)
    return HeckeElt(n, ring, terms)


def coset_antisymmetrizer(k: int, n: int, ring: CoeffRing = ZZ) -> HeckeElt:
    """1 + sum_{j=1..k} (-q)^{j-k-1} T_{k,j}: the signed sum over coset
    representatives of S_k inside S_{k+1}."""
    out = HeckeElt.one(n, ring)
    base = HeckeElt.one(n, ring)
    for j in range(k, 0, -1):
        base = base.times_gen(j)  # running product T_k T_{k-1} ... T_j
        out = out + base.scale(LaurentPoly.q_power(j - k - 1, (-1) ** (j - k - 1), ring))
    return out


def coset_symmetrizer(m: int, n: int, ring: CoeffRing = ZZ) -> HeckeElt:
    """1 + T_1 + T_1 T_2 + ... + T_{1,m-1}: coset representatives for the
    first block growing from S_{m-1} to S_m."""
    out = HeckeElt.one(n, ring)
    base = HeckeElt.one(n, ring)
    for j in range(1, m):
        base = base.times_gen(j)
        out = out + base
    return out


def mixed_symmetrizer(k: int, n: int, ring: CoeffRing = ZZ) -> HeckeElt:
    """The generator of the signed permutation module inside the algebra:
    antisymmetrizer on {1..k} times symmetrizer on {k+1..n}."""
    return antisymmetrizer((k,) + (1,) * (n - k), n, ring) * symmetrizer(
        (1,) * k + (n - k,), n, ring
    )


def apply_block_antisymmetrizer(elt: HeckeElt, start: int, size: int) -> HeckeElt:
    """Right-multiply by the antisymmetrizer of the block {start..start+size-1},
    building it as a telescoping product of coset sums (cost O(size^2)
    generator applications instead of size! terms)."""
    out = elt
    ring = elt.ring
    for j in range(2, size + 1):
        # coset antisymmetrizer of S_{j-1} inside S_j, shifted to the block
        top = start + j - 2  # generator index of r_{j-1} shifted
        acc = out
        base = out
        for offset in range(j - 1):
            i = top - offset
            base = base.times_gen(i)
            ln = offset + 1
            acc = acc + base.scale(LaurentPoly.q_power(-ln, (-1) ** ln, ring))
        out = acc
    return out


def apply_young_antisymmetrizer(elt: HeckeElt, mu: Sequence[int]) -> HeckeElt:
    """Right-multiply by the antisymmetrizer of the Young subgroup of mu."""
    out = elt
    start = 1
    for part in mu:
        out = apply_block_antisymmetrizer(out, start, part)
        start += part
    return out


def specht_generator_elt(shape, ring: CoeffRing = ZZ) -> HeckeElt:
    """The Specht module generator inside the algebra: symmetrizer of the
    shape, times T along the column-reading permutation, times the
    antisymmetrizer of the conjugate shape."""
    shape = Partition.of(shape)
    x = symmetrizer(shape.parts, shape.n, ring)
    x = x.times_word(reduced_word(column_reading_permutation(shape.parts)))
    return apply_young_antisymmetrizer(x, conjugate(shape).parts)


def structural_elements(shape, ring: CoeffRing = ZZ) -> dict[str, HeckeElt]:
    """The named elements attached to a hook partition (n-k, 1^k)."""
    shape = Partition.of(shape)
    n, k = shape.n, shape.hook_arm
    return {
        "symmetrizer": symmetrizer(shape.parts, n, ring),
        "antisymmetrizer_conjugate": antisymmetrizer(conjugate(shape).parts, n, ring),
        "specht_generator": specht_generator_elt(shape, ring),
        "coset_antisymmetrizer": coset_antisymmetrizer(k, n, ring),
        "coset_symmetrizer": coset_symmetrizer(n - k, n, ring),
        "mixed_symmetrizer": mixed_symmetrizer(k, n, ring),
    }


def hecke_to_json(h: HeckeElt) -> dict:
    return {
        "n": h.n,
        "ring": h.ring.label(),
        "terms": [[list(w), c.to_json()] for w, c in sorted(h.terms.items())],
    }


def hecke_from_json(d: dict) -> HeckeElt:
    from .qlaurent import ring_from_label

    ring = ring_from_label(d["ring"])
    terms = {Perm.from_json(w): LaurentPoly.from_json(c) for w, c in d["terms"]}
    return HeckeElt(d["n"], ring, terms)
