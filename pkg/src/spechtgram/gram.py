"""Permutation modules, Specht vectors, and Gram matrices.

All production computation happens in module coordinates: a vector is a
sparse map from basis indices to Laurent polynomials.  The permutation
module of a composition mu has basis indexed by distinguished coset
representatives; the signed module of (k | n-k) has basis indexed by the
k-subsets of {1..n} (first components of standard pair tableaux).

The generator of the Specht module is built by acting on the cyclic vector,
never by multiplying inside the full algebra: the antisymmetrizer of a
Young subgroup is applied as a telescoping product of coset sums, which
costs O(sum of part^2) generator applications instead of |S_mu| terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import Perm, column_reading_permutation, reduced_word
from .qlaurent import (
    GF,
    QQ,
    ZZ,
    CoeffRing,
    LaurentPoly,
    canonical,
    exact_div,
    quantum_factorial,
    quantum_integer,
    ring_from_label,
    to_rational,
)
from .tableaux import (
    Partition,
    Tableau,
    conjugate,
    initial_tableau,
    pair_standard_tableaux,
    standard_tableaux,
    star_tableau,
    tableau_permutation,
)

Vector = dict  # basis index -> LaurentPoly


class PermutationModule:
    """M(mu): the module induced from the trivial character of the Young
    subgroup of mu, with basis indexed by distinguished coset reps."""

    def __init__(self, mu: Sequence[int], ring: CoeffRing = ZZ):
        self.mu = tuple(int(m) for m in mu)
        self.n = sum(self.mu)
        self.ring = ring
        self._q = LaurentPoly.q_power(1, 1, ring)
        self._qm1 = LaurentPoly(ring, {1: 1, 0: -1})
        # block id per position (1-based), for the coset-rep test
        self._block_of = [0] * (self.n + 1)
        b = 0
        pos = 1
        for part in self.mu:
            for _ in range(part):
                self._block_of[pos] = b
                pos += 1
            b += 1
        self._len_cache: dict[Perm, int] = {}
        self._case_cache: dict[tuple[int, Perm], tuple[int, Perm]] = {}

    def length(self, d: Perm) -> int:
        ln = self._len_cache.get(d)
        if ln is None:
            ln = d.length()
            self._len_cache[d] = ln
        return ln

    def is_rep(self, d: Perm) -> bool:
        block = self._block_of
        prev_v = d[0]
        prev_b = block[1]
        for pos in range(2, self.n + 1):
            v = d[pos - 1]
            bb = block[pos]
            if bb == prev_b and v < prev_v:
                return False
            prev_v, prev_b = v, bb
        return True

    def identity_vector(self) -> Vector:
        return {Perm.identity(self.n): LaurentPoly.one(self.ring)}

    def _case(self, i: int, d: Perm) -> tuple[int, Perm]:
        key = (i, d)
        hit = self._case_cache.get(key)
        if hit is not None:
            return hit
        d2 = d.times_simple(i)
        if d.length_increases_right(i):
            result = (1, d2) if self.is_rep(d2) else (0, d)
        else:
            result = (2, d2)
        self._case_cache[key] = result
        return result

    def apply_gen(self, vec: Vector, i: int) -> Vector:
        """Right action of T_i in the distinguished basis."""
        if not 1 <= i < self.n:
            raise ValueError(f"generator index {i} out of range for n={self.n}")
        q, qm1 = self._q, self._qm1
        out: Vector = {}

        def bump(key, c):
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s

        for d, c in vec.items():
            code, d2 = self._case(i, d)
            if code == 0:
                bump(d, c * q)
            elif code == 1:
                bump(d2, c)
            else:
                bump(d2, c * q)
                bump(d, c * qm1)
        return out

    def apply_word(self, vec: Vector, word: Iterable[int]) -> Vector:
        for i in word:
            vec = self.apply_gen(vec, i)
        return vec

    def apply_block_antisymmetrizer(self, vec: Vector, start: int, size: int) -> Vector:
        out = vec
        for j in range(2, size + 1):
            top = start + j - 2
            acc = dict(out)
            base = out
            for offset in range(j - 1):
                base = self.apply_gen(base, top - offset)
                ln = offset + 1
                coeff = LaurentPoly.q_power(-ln, (-1) ** ln, self.ring)
                for key, c in base.items():
                    add = c * coeff
                    s = acc.get(key)
                    s = add if s is None else s + add
                    if s.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = s
            out = acc
        return out

    def apply_young_antisymmetrizer(self, vec: Vector, mu: Sequence[int]) -> Vector:
        start = 1
        for part in mu:
            vec = self.apply_block_antisymmetrizer(vec, start, part)
            start += part
        return vec

    def form(self, u: Vector, v: Vector) -> LaurentPoly:
        """<x T_a, x T_b> = q^len(a) delta_ab, extended bilinearly."""
        if len(u) > len(v):
            u, v = v, u
        total = LaurentPoly.zero(self.ring)
        for d, cu in u.items():
            cv = v.get(d)
            if cv is not None:
                total = total + (cu * cv).shift(self.length(d))
        return total


def specht_generator_vector(module: PermutationModule, shape: Partition) -> Vector:
    """Coordinates of the Specht generator in M(shape)."""
    vec = module.identity_vector()
    vec = module.apply_word(vec, reduced_word(column_reading_permutation(shape.parts)))
    return module.apply_young_antisymmetrizer(vec, conjugate(shape).parts)


def specht_vectors(
    shape, ring: CoeffRing = ZZ
) -> tuple[list[Tableau], PermutationModule, list[Vector]]:
    """The standard basis of the Specht module inside M(shape), in the fixed
    Std order."""
    shape = Partition.of(shape)
    module = PermutationModule(shape.parts, ring)
    z = specht_generator_vector(module, shape)
    order = standard_tableaux(shape)
    vecs = []
    for t in order:
        word = reduced_word(tableau_permutation(t.transpose()))
        vecs.append(module.apply_word(z, word))
    return order, module, vecs


@dataclass
class GramMatrix:
    shape: Partition
    order: list[Tableau]
    kind: str  # "plain" or "mixed"
    ring_label: str
    entries: list[list[LaurentPoly]]

    @property
    def size(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "partition": str(self.shape),
            "order": [t.to_json() for t in self.order],
            "kind": self.kind,
            "ring": self.ring_label,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @staticmethod
    def from_json(d: dict) -> "GramMatrix":
        return GramMatrix(
            shape=Partition.parse(d["partition"]),
            order=[Tableau.from_json(rows) for rows in d["order"]],
            kind=d["kind"],
            ring_label=d["ring"],
            entries=[[LaurentPoly.from_json(e) for e in row] for row in d["entries"]],
        )


def gram_matrix(shape, ring: CoeffRing = ZZ) -> GramMatrix:
    """The Gram matrix of the Specht module bilinear form in the standard
    basis, with rows and columns in the fixed Std order."""
    shape = Partition.of(shape)
    order = standard_tableaux(shape)
    if shape.parts and shape.parts[0] == 1 and shape.n >= 8:
        # single column: 1x1 matrix; sum q^(-len) over the conjugate Young
        # subgroup, avoiding the n!-dimensional module
        entry = quantum_factorial(shape.n, ring).substitute_q_inverse()
        return GramMatrix(shape, order, "plain", ring.label(), [[entry]])
    _, module, vecs = specht_vectors(shape, ring)
    m = len(vecs)
    entries = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            val = module.form(vecs[a], vecs[b])
            entries[a][b] = val
            entries[b][a] = val
    return GramMatrix(shape, order, "plain", ring.label(), entries)


# -- the signed module for hook shapes -------------------------------------------


class SignedPermutationModule:
    """M(k | n-k): basis indexed by k-subsets of {1..n} (first components of
    standard pair tableaux), with the sign action on the first component and
    the trivial action on the second."""

    def __init__(self, k: int, n: int, ring: CoeffRing = ZZ):
        if not 0 <= k < n:
            raise ValueError(f"need 0 <= k < n, got k={k} n={n}")
        self.k = k
        self.n = n
        self.ring = ring
        self._q = LaurentPoly.q_power(1, 1, ring)
        self._qm1 = LaurentPoly(ring, {1: 1, 0: -1})
        self.basis = [pt.first for pt, _, _ in pair_standard_tableaux(k, n)]
        self.lengths = {}
        for pt, _, ln in pair_standard_tableaux(k, n):
            self.lengths[pt.first] = ln
        self._tables: dict[int, dict[tuple, tuple[int, tuple]]] = {}

    def base_vector(self) -> Vector:
        return {tuple(range(1, self.k + 1)): LaurentPoly.one(self.ring)}

    def _table(self, i: int) -> dict:
        table = self._tables.get(i)
        if table is None:
            table = {}
            j = i + 1
            for key in self.basis:
                in_a_i = i in key
                in_a_j = j in key
                if in_a_i and in_a_j:
                    table[key] = (0, key)  # scale by -1
                elif not in_a_i and not in_a_j:
                    table[key] = (1, key)  # scale by q
                elif in_a_i:
                    key2 = tuple(sorted(v if v != i else j for v in key))
                    table[key] = (2, key2)  # move
                else:
                    key2 = tuple(sorted(v if v != j else i for v in key))
                    table[key] = (3, key2)  # q*move + (q-1)*stay
            self._tables[i] = table
        return table

    def apply_gen(self, vec: Vector, i: int) -> Vector:
        if not 1 <= i < self.n:
            raise ValueError(f"generator index {i} out of range for n={self.n}")
        table = self._table(i)
        q, qm1 = self._q, self._qm1
        out: Vector = {}

        def bump(key, c):
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s

        for key, c in vec.items():
            code, key2 = table[key]
            if code == 0:
                bump(key, -c)
            elif code == 1:
                bump(key, c * q)
            elif code == 2:
                bump(key2, c)
            else:
                bump(key2, c * q)
                bump(key, c * qm1)
        return out

    def apply_word(self, vec: Vector, word: Iterable[int]) -> Vector:
        for i in word:
            vec = self.apply_gen(vec, i)
        return vec

    def form(self, u: Vector, v: Vector) -> LaurentPoly:
        if len(u) > len(v):
            u, v = v, u
        total = LaurentPoly.zero(self.ring)
        for key, cu in u.items():
            cv = v.get(key)
            if cv is not None:
                total = total + (cu * cv).shift(self.lengths[key])
        return total


def _apply_coset_antisymmetrizer(module: SignedPermutationModule, vec: Vector) -> Vector:
    """Right-multiply by 1 + sum_{j=1..k} (-q)^(j-k-1) T_{k,j}."""
    k = module.k
    acc = dict(vec)
    base = vec
    for offset in range(k):
        base = module.apply_gen(base, k - offset)
        ln = offset + 1
        coeff = LaurentPoly.q_power(-ln, (-1) ** ln, module.ring)
        for key, c in base.items():
            add = c * coeff
            s = acc.get(key)
            s = add if s is None else s + add
            if s.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = s
    return acc


def _apply_coset_symmetrizer(module: SignedPermutationModule, vec: Vector, m: int) -> Vector:
    """Right-multiply by 1 + T_1 + T_1 T_2 + ... + T_{1,m-1}."""
    acc = dict(vec)
    base = vec
    for j in range(1, m):
        base = module.apply_gen(base, j)
        for key, c in base.items():
            s = acc.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = s
    return acc


def signed_specht_vector(shape, t: Tableau, module: SignedPermutationModule) -> Vector:
    """Image of the standard basis vector of tableau t inside the signed
    module, computed by the recursive action (valid for any tableau t)."""
    vec = _apply_coset_antisymmetrizer(module, module.base_vector())
    word = reduced_word(tableau_permutation(t.transpose()))
    return module.apply_word(vec, word)


def signed_specht_vector_closed(shape, t: Tableau, module: SignedPermutationModule) -> Vector:
    """Closed-form expansion of the same vector for standard t: one term per
    pair tableau whose first component sits in the first column of t."""
    shape = Partition.of(shape)
    k = shape.hook_arm
    dlen = tableau_permutation(t.transpose()).length()
    col = t.first_column()
    out: Vector = {}
    from .tableaux import PairTableau

    for idx in range(len(col)):
        first = tuple(sorted(v for r, v in enumerate(col, start=1) if r != idx + 1))
        pt = PairTableau(shape.n, first)
        coeff = LaurentPoly.q_power(dlen - pt.length(), (-1) ** (k + 1 - (idx + 1)), module.ring)
        out[first] = coeff
    return out


def signed_dual_vector(shape, t: Tableau, module: SignedPermutationModule) -> Vector:
    """The second (triangularizing) basis vector attached to a standard hook
    tableau t."""
    shape = Partition.of(shape)
    n, k = shape.n, shape.hook_arm
    if t.row_of(n) == 1:
        return signed_specht_vector(shape, star_tableau(t), module)
    vec = signed_specht_vector(shape, initial_tableau(shape), module)
    vec = _apply_coset_symmetrizer(module, vec, n - k)
    return module.apply_word(vec, reduced_word(tableau_permutation(t)))


def mixed_gram_matrix(shape, ring: CoeffRing = ZZ) -> GramMatrix:
    """The matrix of pairings between the triangularizing basis (rows) and
    the standard signed basis (columns), in the fixed Std order."""
    shape = Partition.of(shape)
    n, k = shape.n, shape.hook_arm
    module = SignedPermutationModule(k, n, ring)
    order = standard_tableaux(shape)
    vs = [signed_specht_vector(shape, t, module) for t in order]
    ws = [signed_dual_vector(shape, t, module) for t in order]
    entries = [[module.form(w, v) for v in vs] for w in ws]
    return GramMatrix(shape, order, "mixed", ring.label(), entries)


def signed_gram_matrix(shape, ring: CoeffRing = ZZ) -> GramMatrix:
    """Pairings of the standard signed basis with itself (the plain Gram
    matrix divided by the hook scaling constant)."""
    shape = Partition.of(shape)
    n, k = shape.n, shape.hook_arm
    module = SignedPermutationModule(k, n, ring)
    order = standard_tableaux(shape)
    vs = [signed_specht_vector(shape, t, module) for t in order]
    m = len(vs)
    entries = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            val = module.form(vs[a], vs[b])
            entries[a][b] = val
            entries[b][a] = val
    return GramMatrix(shape, order, "plain", ring.label(), entries)


class ScalingError(ValueError):
    """The plain and signed Gram matrices failed to be proportional."""


def gram_scaling_constant(shape, gram: GramMatrix | None = None) -> LaurentPoly:
    """The constant c with G(shape) = c * (signed Gram matrix), verified
    entrywise.  For a hook (n-k, 1^k) it is a unit times [k]!_q."""
    shape = Partition.of(shape)
    plain = gram if gram is not None else gram_matrix(shape)
    signed = signed_gram_matrix(shape)
    m = plain.size
    c = None
    for a in range(m):
        for b in range(m):
            if not signed.entries[a][b].is_zero():
                c = exact_div(
                    to_rational(plain.entries[a][b]), to_rational(signed.entries[a][b])
                )
                break
        if c is not None:
            break
    if c is None:
        raise ScalingError("signed Gram matrix is zero")
    for a in range(m):
        for b in range(m):
            if to_rational(plain.entries[a][b]) != c * to_rational(signed.entries[a][b]):
                raise ScalingError(f"proportionality fails at entry ({a}, {b})")
    return c


def hook_elementary_divisors(n: int, k: int) -> list[LaurentPoly]:
    """Predicted divisor chain for the hook (n-k, 1^k): binom(n-2, k) copies
    of [k]!_q followed by binom(n-2, k-1) copies of [k]!_q [n]_q."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k} n={n}")
    small = canonical(quantum_factorial(k))
    large = canonical(small * quantum_integer(n))
    count_small = math.comb(n - 2, k) if k <= n - 2 else 0
    count_large = math.comb(n - 2, k - 1) if k >= 1 else 0
    return [small] * count_small + [large] * count_large


def _scalar_rank(rows: list[list], ring: CoeffRing) -> int:
    """Gaussian elimination rank of a scalar matrix over Q or F_p."""
    rows = [list(r) for r in rows]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, m):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = ring.inv(rows[rank][col])
        rows[rank] = [ring.mul(x, inv) for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [
                    ring.add(x, ring.neg(ring.mul(factor, y)))
                    for x, y in zip(rows[r], rows[rank])
                ]
        rank += 1
    return rank


def gram_rank_at(shape, ring: CoeffRing, q0=None, gram: GramMatrix | None = None) -> int:
    """Rank of the Gram matrix over a field, either specialized at q = q0 or
    symbolically over the Laurent field when q0 is None."""
    if not ring.is_field:
        raise ValueError("rank needs field coefficients")
    shape = Partition.of(shape)
    g = gram if gram is not None else gram_matrix(shape)
    if q0 is None:
        from .pipeline import gram_divisors

        eds = gram_divisors(g, ring.label())
        return sum(1 for d in eds.divisors if not d.is_zero())
    if ring.tag == "Fp":
        from .qlaurent import reduce_mod

        scalar = [[reduce_mod(e, ring.p).evaluate_mod(q0, ring.p) for e in row] for row in g.entries]
    else:
        scalar = [[e.evaluate(q0) for e in row] for row in g.entries]
    return _scalar_rank(scalar, ring)
