"""Smith normal form, elementary divisors, and diagonalizability tests.

Three Euclidean substrates are supported: Laurent polynomials over Q
(computed on primitive integer representatives, scaling rows and columns by
rational units and stripping integer content to contain coefficient
growth), Laurent polynomials over F_p, and plain integers for the q = 1
specialization.

Divisors are reported in canonical form (valuation 0, monic over a field,
positive leading coefficient over Z) so the divisibility chain is unique.
Jump notation compresses the chain into successive quotient factors with
multiplicities.

The obstruction tests decide feasibility of distributing the
irreducible-factor valuations of the rational elementary divisors over
hypothetical diagonal entries so that the mod-p (or q = 1) elementary
divisors are reproduced.  Infeasibility certifies that the matrix is not
diagonalizable over Z localized at p, adjoined q and q^-1; a feasible
assignment decides nothing.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .qlaurent import (
    GF,
    QQ,
    ZZ,
    CoeffRing,
    CyclotomicFactorization,
    LaurentPoly,
    canonical,
    content,
    cyclo_display,
    cyclotomic,
    divides,
    euler_phi,
    exact_div,
    eval_at_one,
    laurent_divmod,
    laurent_gcd,
    reduce_mod,
    ring_from_label,
    to_integer,
    to_rational,
    unit_part,
)

Matrix = list  # list of rows of LaurentPoly (or int for smith_integer)


@dataclass
class ElementaryDivisors:
    """An ordered divisor chain d_1 | d_2 | ... (zeros trail, if any)."""

    ring_label: str
    divisors: list

    @property
    def size(self) -> int:
        return len(self.divisors)

    def is_laurent(self) -> bool:
        return self.ring_label != "Z"

    def nonzero(self) -> list:
        if self.is_laurent():
            return [d for d in self.divisors if not d.is_zero()]
        return [d for d in self.divisors if d != 0]

    def to_json(self) -> dict:
        if self.is_laurent():
            divisors = [d.to_json() for d in self.divisors]
        else:
            divisors = list(self.divisors)
        return {"ring": self.ring_label, "divisors": divisors}

    @staticmethod
    def from_json(d: dict) -> "ElementaryDivisors":
        if d["ring"] == "Z":
            return ElementaryDivisors("Z", [int(x) for x in d["divisors"]])
        return ElementaryDivisors(d["ring"], [LaurentPoly.from_json(x) for x in d["divisors"]])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ElementaryDivisors)
            and self.ring_label == other.ring_label
            and self.divisors == other.divisors
        )


# -- Smith normal form over F_p[q, q^-1] -------------------------------------------


def _find_pivot(M, t: int) -> tuple[int, int] | None:
    """Position of a nonzero entry of minimal Euclidean size in the trailing
    submatrix, ties broken by position."""
    best = None
    best_key = None
    for i in range(t, len(M)):
        row = M[i]
        for j in range(t, len(row)):
            e = row[j]
            if e.is_zero():
                continue
            key = (e.span(), i, j)
            if best_key is None or key < best_key:
                best_key = key
                best = (i, j)
    return best


def _swap_rows(M, a, b):
    M[a], M[b] = M[b], M[a]


def _swap_cols(M, a, b):
    for row in M:
        row[a], row[b] = row[b], row[a]


def _smith_field(M: Matrix, ring: CoeffRing) -> tuple[list[LaurentPoly], LaurentPoly | None]:
    """SNF over a field-coefficient Laurent ring with exact division.

    Returns raw diagonal entries and, for square input, the exact
    determinant (transvections and +-1 swaps only, so the product of the
    diagonal equals +-det)."""
    m = len(M)
    ncols = len(M[0]) if m else 0
    sign = 1
    t = 0
    diag: list[LaurentPoly] = []
    r = min(m, ncols)
    while t < r:
        pos = _find_pivot(M, t)
        if pos is None:
            break
        if pos[0] != t:
            _swap_rows(M, pos[0], t)
            sign = -sign
        if pos[1] != t:
            _swap_cols(M, pos[1], t)
            sign = -sign
        while True:
            dirty = True
            while dirty:
                dirty = False
                # clear the pivot column
                for i in range(t + 1, m):
                    if M[i][t].is_zero():
                        continue
                    quo, rem = laurent_divmod(M[i][t], M[t][t])
                    if not quo.is_zero():
                        row_t = M[t]
                        M[i] = [a - quo * b for a, b in zip(M[i], row_t)]
                    if not M[i][t].is_zero():
                        _swap_rows(M, i, t)
                        sign = -sign
                        dirty = True
                # clear the pivot row
                for j in range(t + 1, ncols):
                    if M[t][j].is_zero():
                        continue
                    quo, rem = laurent_divmod(M[t][j], M[t][t])
                    if not quo.is_zero():
                        for row in M:
                            row[j] = row[j] - quo * row[t]
                    if not M[t][j].is_zero():
                        _swap_cols(M, j, t)
                        sign = -sign
                        dirty = True
            # divisibility sweep
            pivot = M[t][t]
            offender = None
            for i in range(t + 1, m):
                row = M[i]
                for j in range(t + 1, ncols):
                    if not row[j].is_zero():
                        _, rem = laurent_divmod(row[j], pivot)
                        if not rem.is_zero():
                            offender = i
                            break
                if offender is not None:
                    break
            if offender is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[offender])]
        diag.append(M[t][t])
        t += 1
    det = None
    if m == ncols:
        if len(diag) < m:
            det = LaurentPoly.zero(ring)
        else:
            det = LaurentPoly.one(ring)
            for d in diag:
                det = det * d
            if sign < 0:
                det = -det
    return diag, det


# -- Smith normal form over Q[q, q^-1] via primitive integer rows --------------------
#
# The matrix is kept as primitive integer Laurent rows throughout; rational
# unit scalings are tracked in one accumulated factor.  An entry divisible
# by the pivot is cleared with a single denominator-free transvection; an
# entry not divisible triggers one unimodular 2x2 transform built from an
# extended gcd, which replaces the pivot by the gcd.  This avoids the
# exponential coefficient swell of naive remainder cascades.


def _strip_content_row(row: list[LaurentPoly]) -> int:
    """Divide out the common integer content of a row, in place."""
    g = 0
    for e in row:
        for c in e.coeffs.values():
            g = math.gcd(g, c)
        if g == 1:
            return 1
    if g <= 1:
        return 1
    for j, e in enumerate(row):
        if not e.is_zero():
            row[j] = LaurentPoly(ZZ, {k: v // g for k, v in e.coeffs.items()}, _clean=True)
    return g


def _strip_content_col(M, j: int) -> int:
    g = 0
    for row in M:
        for c in row[j].coeffs.values():
            g = math.gcd(g, c)
        if g == 1:
            return 1
    if g <= 1:
        return 1
    for row in M:
        if not row[j].is_zero():
            row[j] = LaurentPoly(ZZ, {k: v // g for k, v in row[j].coeffs.items()}, _clean=True)
    return g


def _pseudo_divmod_int(f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, int, LaurentPoly]:
    """Integer pseudo-division: den*f = quo*g + rem with den a power of the
    leading coefficient of g; f is divisible by g over Q exactly when rem
    vanishes, with quotient quo/den."""
    gd = g.degree()
    gspan = gd - g.valuation()
    glc = g.leading_coeff()
    rem = dict(f.coeffs)
    quo: dict[int, int] = {}
    den = 1
    while rem:
        rd = max(rem)
        if rd - min(rem) < gspan:
            break
        lc = rem[rd]
        shift = rd - gd
        # den*f = quo*g + rem  ->  scale by glc, subtract lc*q^shift*g
        if glc != 1:
            for e in list(rem):
                rem[e] *= glc
            for e in quo:
                quo[e] *= glc
            den *= glc
        quo[shift] = quo.get(shift, 0) + lc
        for e, gc in g.coeffs.items():
            e2 = e + shift
            s = rem.get(e2, 0) - lc * gc
            if s:
                rem[e2] = s
            elif e2 in rem:
                del rem[e2]
    if not rem and quo:
        gg = math.gcd(den, math.gcd(*quo.values()))
        if gg > 1:
            den //= gg
            quo = {e: c // gg for e, c in quo.items()}
    return (
        LaurentPoly(ZZ, quo, _clean=True),
        den,
        LaurentPoly(ZZ, rem, _clean=True),
    )


def _pseudo_divisible(e: LaurentPoly, pivot: LaurentPoly) -> bool:
    if e.is_zero():
        return True
    if pivot.span() > e.span():
        return False
    return _pseudo_divmod_int(e, pivot)[2].is_zero()


def _rat_unit_to_primitive(poly: LaurentPoly) -> tuple[LaurentPoly, Fraction]:
    """Write a rational Laurent polynomial as c * (primitive integer poly
    with positive leading coefficient); returns (primitive, c)."""
    if poly.is_zero():
        return LaurentPoly.zero(ZZ), Fraction(1)
    lcm = 1
    for c in poly.coeffs.values():
        d = Fraction(c).denominator
        lcm = lcm * d // math.gcd(lcm, d)
    ints = {e: int(Fraction(c) * lcm) for e, c in poly.coeffs.items()}
    g = math.gcd(*ints.values())
    if ints[max(ints)] < 0:
        g = -g
    prim = LaurentPoly(ZZ, {e: c // g for e, c in ints.items()}, _clean=True)
    return prim, Fraction(g, lcm)


def _xgcd_rational(f: LaurentPoly, g: LaurentPoly):
    """Extended gcd in Q[q, q^-1] for integer-Laurent input: returns
    (gstar, s, t) with s*f + t*g = gstar, gstar primitive integer with
    positive leading coefficient, s and t rational Laurent polynomials.
    Remainders are stripped to primitive form at every step (primitive
    remainder sequence), which keeps all coefficients small."""
    r0, r1 = to_rational(f), to_rational(g)
    one, zero = LaurentPoly.one(QQ), LaurentPoly.zero(QQ)
    s0, t0 = one, zero
    s1, t1 = zero, one
    while not r1.is_zero():
        quo, rem = laurent_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
        if not r1.is_zero():
            prim, c = _rat_unit_to_primitive(r1)
            cinv = 1 / c
            r1 = to_rational(prim)
            s1 = s1.scale(cinv)
            t1 = t1.scale(cinv)
    prim, c = _rat_unit_to_primitive(r0)
    cinv = 1 / c
    return prim, s0.scale(cinv), t0.scale(cinv)


def _clear_denominators(poly: LaurentPoly) -> tuple[LaurentPoly, int]:
    """Rational poly -> (integer poly, den) with poly = integer/den."""
    lcm = 1
    for c in poly.coeffs.values():
        d = Fraction(c).denominator
        lcm = lcm * d // math.gcd(lcm, d)
    return LaurentPoly(ZZ, {e: int(Fraction(c) * lcm) for e, c in poly.coeffs.items()}, _clean=True), lcm


class _RationalSmith:
    """Worker for the SNF of an integer Laurent matrix over Q[q, q^-1]."""

    def __init__(self, M: list[list[LaurentPoly]]):
        self.M = M
        self.m = len(M)
        self.ncols = len(M[0]) if M else 0
        self.scale = Fraction(1)  # det(current) = scale * sign * det(input)
        self.sign = 1
        for i in range(self.m):
            c = _strip_content_row(self.M[i])
            if c != 1:
                self.scale /= c

    # -- elementary operations, det factors tracked -------------------------

    def transvect_row(self, i: int, t: int, quo_num: LaurentPoly, den: int):
        """row_i <- (den*row_i - quo_num*row_t) / content."""
        row_i, row_t = self.M[i], self.M[t]
        if den == 1:
            new = [x - quo_num * y for x, y in zip(row_i, row_t)]
        else:
            new = [x.scale(den) - quo_num * y for x, y in zip(row_i, row_t)]
        c = _strip_content_row(new)
        self.M[i] = new
        self.scale *= Fraction(den, c)

    def transvect_col(self, j: int, t: int, quo_num: LaurentPoly, den: int):
        M = self.M
        for row in M:
            if den == 1:
                row[j] = row[j] - quo_num * row[t]
            else:
                row[j] = row[j].scale(den) - quo_num * row[t]
        c = _strip_content_col(M, j)
        self.scale *= Fraction(den, c)

    def combine_rows(self, t: int, i: int, col: int):
        """Replace the pivot by gcd(M[t][col], M[i][col]) and zero M[i][col]
        with one unimodular 2x2 transform (up to tracked row scalings)."""
        f, g = self.M[i][col], self.M[t][col]
        gstar, s, tt = _xgcd_rational(f, g)
        fq = exact_div(to_rational(f), to_rational(gstar))
        gq = exact_div(to_rational(g), to_rational(gstar))
        s_num, s_den = _clear_denominators(s)
        t_num, t_den = _clear_denominators(tt)
        den1 = s_den * t_den // math.gcd(s_den, t_den)
        S = s_num.scale(den1 // s_den)
        T = t_num.scale(den1 // t_den)
        f_num, f_den = _clear_denominators(fq)
        g_num, g_den = _clear_denominators(gq)
        den2 = f_den * g_den // math.gcd(f_den, g_den)
        F = f_num.scale(den2 // f_den)
        G = g_num.scale(den2 // g_den)
        row_i, row_t = self.M[i], self.M[t]
        new_t = [S * x + T * y for x, y in zip(row_i, row_t)]
        new_i = [F * y - G * x for x, y in zip(row_i, row_t)]
        c1 = _strip_content_row(new_t)
        c2 = _strip_content_row(new_i)
        self.M[t], self.M[i] = new_t, new_i
        # underlying 2x2 has determinant -1; the integer scalings den1, den2
        # were applied to the two new rows and contents c1, c2 stripped
        self.sign = -self.sign
        self.scale *= Fraction(den1 * den2, c1 * c2)

    def combine_cols(self, t: int, j: int, row: int):
        f, g = self.M[row][j], self.M[row][t]
        gstar, s, tt = _xgcd_rational(f, g)
        fq = exact_div(to_rational(f), to_rational(gstar))
        gq = exact_div(to_rational(g), to_rational(gstar))
        s_num, s_den = _clear_denominators(s)
        t_num, t_den = _clear_denominators(tt)
        den1 = s_den * t_den // math.gcd(s_den, t_den)
        S = s_num.scale(den1 // s_den)
        T = t_num.scale(den1 // t_den)
        f_num, f_den = _clear_denominators(fq)
        g_num, g_den = _clear_denominators(gq)
        den2 = f_den * g_den // math.gcd(f_den, g_den)
        F = f_num.scale(den2 // f_den)
        G = g_num.scale(den2 // g_den)
        for r in self.M:
            x, y = r[j], r[t]
            r[t] = S * x + T * y
            r[j] = F * y - G * x
        c1 = _strip_content_col(self.M, t)
        c2 = _strip_content_col(self.M, j)
        self.sign = -self.sign
        self.scale *= Fraction(den1 * den2, c1 * c2)

    # -- main loop ------------------------------------------------------------

    def clear_column(self, t: int) -> bool:
        combined = False
        for i in range(t + 1, self.m):
            e = self.M[i][t]
            if e.is_zero():
                continue
            pivot = self.M[t][t]
            quo, den, rem = _pseudo_divmod_int(e, pivot)
            if rem.is_zero():
                self.transvect_row(i, t, quo, den)
            else:
                self.combine_rows(t, i, t)
                combined = True
        return combined

    def clear_row(self, t: int) -> bool:
        combined = False
        for j in range(t + 1, self.ncols):
            e = self.M[t][j]
            if e.is_zero():
                continue
            pivot = self.M[t][t]
            quo, den, rem = _pseudo_divmod_int(e, pivot)
            if rem.is_zero():
                self.transvect_col(j, t, quo, den)
            else:
                self.combine_cols(t, j, t)
                combined = True
        return combined

    def run(self) -> list[LaurentPoly]:
        diag: list[LaurentPoly] = []
        t = 0
        r = min(self.m, self.ncols)
        M = self.M
        while t < r:
            pos = _find_pivot(M, t)
            if pos is None:
                break
            if pos[0] != t:
                _swap_rows(M, pos[0], t)
                self.sign = -self.sign
            if pos[1] != t:
                _swap_cols(M, pos[1], t)
                self.sign = -self.sign
            while True:
                while True:
                    col_combined = self.clear_column(t)
                    row_combined = self.clear_row(t)
                    # transvections zero their line and never refill the
                    # other one; only combines disturb the opposite line
                    if not col_combined and not row_combined:
                        break
                pivot = M[t][t]
                offender = None
                for i in range(t + 1, self.m):
                    row = M[i]
                    for j in range(t + 1, self.ncols):
                        if not row[j].is_zero() and not _pseudo_divisible(row[j], pivot):
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                M[t] = [a + b for a, b in zip(M[t], M[offender])]
                c = _strip_content_row(M[t])
                if c != 1:
                    self.scale /= c
            diag.append(M[t][t])
            t += 1
        return diag


def _smith_rational(M: Matrix) -> tuple[list[LaurentPoly], Fraction, int]:
    """SNF of an integer-Laurent matrix viewed over Q[q, q^-1].

    Returns raw integer-Laurent diagonal entries, the accumulated rational
    factor s, and the swap sign, so that det = sign * prod(diag) / s."""
    worker = _RationalSmith(M)
    diag = worker.run()
    return diag, worker.scale, worker.sign


# -- Smith normal form modulo an annihilator of the cokernel -----------------------
#
# When a multiple h of the largest invariant factor is known in advance (for
# a Gram matrix, every divisor divides the hook polynomial), the whole
# elimination can be carried out with entries reduced mod h: appending the
# phantom rows and columns h*e_i to the matrix changes no divisor, and makes
# every entrywise reduction mod h an elementary operation.  Degrees then
# never exceed deg h, which defuses the intermediate swell of elimination
# over polynomial rings.  The result is only correct under the divisibility
# assumption, so callers must validate it (the gram pipeline checks the
# divisor product against exact determinant evaluations).


def _xgcd_field(f: LaurentPoly, g: LaurentPoly):
    """Extended gcd over a field-coefficient Laurent ring: (d, s, t) with
    s*f + t*g = d and d canonical."""
    ring = f.ring
    one, zero = LaurentPoly.one(ring), LaurentPoly.zero(ring)
    r0, r1 = f, g
    s0, t0 = one, zero
    s1, t1 = zero, one
    while not r1.is_zero():
        quo, rem = laurent_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    u = unit_part(r0)
    if not u.is_one():
        uinv = u**-1
        r0, s0, t0 = uinv * r0, uinv * s0, uinv * t0
    return r0, s0, t0


class _ModularSmith:
    """SNF of a field-Laurent matrix with entries kept reduced modulo h."""

    def __init__(self, M: list[list[LaurentPoly]], h: LaurentPoly):
        self.ring = h.ring
        self.h = canonical(h)
        if self.h.is_unit() or self.h.is_zero():
            raise ValueError("modulus must be a nonzero nonunit")
        self.M = [[laurent_divmod(e, self.h)[1] for e in row] for row in M]
        self.m = len(M)
        self.ncols = len(M[0]) if M else 0

    def _red(self, e: LaurentPoly) -> LaurentPoly:
        if e.is_zero():
            return e
        if e.valuation() >= 0 and e.degree() < self.h.degree():
            return e
        return laurent_divmod(e, self.h)[1]

    def _gcd_pivot_with_modulus(self, t: int):
        """Column operation against the phantom column h*e_t: replaces the
        pivot by gcd(pivot, h), scaling the rest of the column accordingly."""
        pivot = self.M[t][t]
        d, s, _ = _xgcd_field(pivot, self.h)
        if canonical(pivot) == d:
            return
        red = self._red
        for i in range(self.m):
            self.M[i][t] = red(s * self.M[i][t])
        self.M[t][t] = d

    def transvect_row(self, i: int, t: int, quo: LaurentPoly):
        row_i, row_t = self.M[i], self.M[t]
        red = self._red
        self.M[i] = [red(x - quo * y) for x, y in zip(row_i, row_t)]

    def transvect_col(self, j: int, t: int, quo: LaurentPoly):
        red = self._red
        for row in self.M:
            row[j] = red(row[j] - quo * row[t])

    def combine_rows(self, t: int, i: int):
        f, g = self.M[i][t], self.M[t][t]
        d, s, tt = _xgcd_field(f, g)
        fq = exact_div(f, d)
        gq = exact_div(g, d)
        row_i, row_t = self.M[i], self.M[t]
        red = self._red
        new_t = [red(s * x + tt * y) for x, y in zip(row_i, row_t)]
        new_i = [red(fq * y - gq * x) for x, y in zip(row_i, row_t)]
        self.M[t], self.M[i] = new_t, new_i
        self.M[t][t] = d
        self.M[i][t] = LaurentPoly.zero(self.ring)

    def combine_cols(self, t: int, j: int):
        f, g = self.M[t][j], self.M[t][t]
        d, s, tt = _xgcd_field(f, g)
        fq = exact_div(f, d)
        gq = exact_div(g, d)
        red = self._red
        for r in self.M:
            x, y = r[j], r[t]
            r[t] = red(s * x + tt * y)
            r[j] = red(fq * y - gq * x)
        self.M[t][t] = d
        self.M[t][j] = LaurentPoly.zero(self.ring)

    def _divides_mod(self, pivot: LaurentPoly, e: LaurentPoly) -> bool:
        # pivot divides h, so divisibility of the true entry e + (h) is
        # decided on the reduced lift
        if e.is_zero():
            return True
        _, rem = laurent_divmod(e, pivot)
        return rem.is_zero()

    def run(self) -> list[LaurentPoly]:
        M = self.M
        divisors: list[LaurentPoly] = []
        r = min(self.m, self.ncols)
        for t in range(r):
            pos = _find_pivot(M, t)
            if pos is None:
                divisors.extend([self.h] * (r - t))
                break
            if pos[0] != t:
                _swap_rows(M, pos[0], t)
            if pos[1] != t:
                _swap_cols(M, pos[1], t)
            while True:
                self._gcd_pivot_with_modulus(t)
                while True:
                    combined = False
                    for i in range(t + 1, self.m):
                        e = M[i][t]
                        if e.is_zero():
                            continue
                        pivot = M[t][t]
                        quo, rem = laurent_divmod(e, pivot)
                        if rem.is_zero():
                            self.transvect_row(i, t, quo)
                        else:
                            self.combine_rows(t, i)
                            combined = True
                    for j in range(t + 1, self.ncols):
                        e = M[t][j]
                        if e.is_zero():
                            continue
                        pivot = M[t][t]
                        quo, rem = laurent_divmod(e, pivot)
                        if rem.is_zero():
                            self.transvect_col(j, t, quo)
                        else:
                            self.combine_cols(t, j)
                            combined = True
                    if not combined:
                        break
                    self._gcd_pivot_with_modulus(t)
                pivot = M[t][t]
                offender = None
                for i in range(t + 1, self.m):
                    row = M[i]
                    for j in range(t + 1, self.ncols):
                        if not row[j].is_zero() and not self._divides_mod(pivot, row[j]):
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                M[t] = [self._red(a + b) for a, b in zip(M[t], M[offender])]
            divisors.append(canonical(M[t][t]))
        return divisors


def _divmod_monic_int(f: LaurentPoly, h: LaurentPoly) -> LaurentPoly:
    """Remainder of an integer Laurent polynomial modulo a monic integer
    polynomial with valuation 0 (integer arithmetic throughout); exponents
    are first shifted to be nonnegative, which only changes f by a unit."""
    if f.is_zero():
        return f
    hd = h.degree()
    rem = dict(f.coeffs)
    v = min(rem)
    if v < 0:
        rem = {e - v: c for e, c in rem.items()}
    while rem:
        rd = max(rem)
        if rd < hd:
            break
        lc = rem[rd]
        shift = rd - hd
        for e, hc in h.coeffs.items():
            e2 = e + shift
            s = rem.get(e2, 0) - lc * hc
            if s:
                rem[e2] = s
            elif e2 in rem:
                del rem[e2]
    return LaurentPoly(ZZ, rem, _clean=True)


def smith_field_laurent_mod(
    matrix: Sequence[Sequence[LaurentPoly]], modulus: LaurentPoly
) -> ElementaryDivisors:
    """Elementary divisors of a field-Laurent matrix whose cokernel is known
    to be annihilated by `modulus` (equivalently, the largest divisor of the
    nonsingular matrix divides it).

    The divisibility assumption is NOT verified here; callers must validate
    the output (e.g. against exact determinant evaluations).  On Gram
    matrices the hook polynomial is such a modulus and this routine is the
    production path; degrees never exceed deg(modulus)."""
    if not matrix or not matrix[0]:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring
    if not ring.is_field:
        raise ValueError("field coefficients required")
    if modulus.ring != ring:
        raise ValueError("modulus ring mismatch")
    worker = _ModularSmith([list(row) for row in matrix], modulus)
    return ElementaryDivisors(ring.label(), worker.run())


def smith_field_laurent(
    matrix: Sequence[Sequence[LaurentPoly]], with_det: bool = False
):
    """Elementary divisors of a matrix over Q[q,q^-1] or F_p[q,q^-1].

    Divisors come out canonical with the divisibility chain; rank deficiency
    shows up as trailing zeros.  With with_det=True also returns the exact
    determinant (square input only)."""
    if not matrix or not matrix[0]:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring
    if not ring.is_field:
        raise ValueError("smith_field_laurent needs field coefficients (Q or F_p)")
    m = len(matrix)
    ncols = len(matrix[0])
    square = m == ncols
    if ring.tag == "Fp":
        work = [list(row) for row in matrix]
        diag, det = _smith_field(work, ring)
    else:
        # clear denominators rowwise, then run the primitive integer algorithm
        work = []
        denom_scale = Fraction(1)
        for row in matrix:
            lcm = 1
            for e in row:
                for c in e.coeffs.values():
                    lcm = lcm * Fraction(c).denominator // math.gcd(lcm, Fraction(c).denominator)
            denom_scale *= lcm
            work.append([to_integer(to_rational(e).scale(lcm)) for e in row])
        diag, scale, sign = _smith_rational(work)
        det = None
        if square:
            if len(diag) < m:
                det = LaurentPoly.zero(QQ)
            else:
                prod = LaurentPoly.one(ZZ)
                for d in diag:
                    prod = prod * d
                total = sign / (scale * denom_scale)
                det = to_rational(prod).scale(total)
    rank = len(diag)
    if ring.tag == "Fp":
        divisors = [canonical(d) for d in diag]
    else:
        divisors = [canonical(to_rational(d)) for d in diag]
    divisors += [LaurentPoly.zero(ring if ring.tag == "Fp" else QQ)] * (min(m, ncols) - rank)
    eds = ElementaryDivisors(ring.label(), divisors)
    if with_det:
        return eds, det
    return eds


# -- integer Smith normal form --------------------------------------------------------


def _xgcd_int(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _ModularSmithInt:
    """SNF of a nonsingular integer matrix with entries reduced modulo a
    positive multiple h of the largest divisor (any nonzero multiple of the
    determinant works).  Entries never exceed h, which defuses the
    coefficient explosion of the classical algorithm."""

    def __init__(self, M: list[list[int]], h: int):
        self.h = h
        self.M = [[x % h for x in row] for row in M]
        self.m = len(M)
        self.ncols = len(M[0]) if M else 0

    def _gcd_pivot_with_modulus(self, t: int):
        M = self.M
        pivot = M[t][t]
        g, s, _ = _xgcd_int(pivot, self.h)
        if g == pivot:
            return
        h = self.h
        for i in range(t + 1, self.m):
            if M[i][t]:
                M[i][t] = M[i][t] * s % h
        M[t][t] = g

    def run(self) -> list[int]:
        M = self.M
        h = self.h
        divisors: list[int] = []
        r = min(self.m, self.ncols)
        for t in range(r):
            # minimal nonzero entry of the trailing submatrix
            best = None
            best_key = None
            for i in range(t, self.m):
                for j in range(t, self.ncols):
                    if M[i][j]:
                        key = (M[i][j], i, j)
                        if best_key is None or key < best_key:
                            best_key, best = key, (i, j)
            if best is None:
                divisors.extend([h] * (r - t))
                break
            if best[0] != t:
                _swap_rows(M, best[0], t)
            if best[1] != t:
                _swap_cols(M, best[1], t)
            while True:
                self._gcd_pivot_with_modulus(t)
                while True:
                    combined = False
                    for i in range(t + 1, self.m):
                        e = M[i][t]
                        if not e:
                            continue
                        pivot = M[t][t]
                        if e % pivot == 0:
                            quo = e // pivot
                            row_i, row_t = M[i], M[t]
                            M[i] = [(x - quo * y) % h for x, y in zip(row_i, row_t)]
                        else:
                            g, s, tt = _xgcd_int(e, pivot)
                            fq, gq = e // g, pivot // g
                            row_i, row_t = M[i], M[t]
                            new_t = [(s * x + tt * y) % h for x, y in zip(row_i, row_t)]
                            new_i = [(fq * y - gq * x) % h for x, y in zip(row_i, row_t)]
                            M[t], M[i] = new_t, new_i
                            M[t][t] = g
                            M[i][t] = 0
                            combined = True
                    for j in range(t + 1, self.ncols):
                        e = M[t][j]
                        if not e:
                            continue
                        pivot = M[t][t]
                        if e % pivot == 0:
                            quo = e // pivot
                            for row in M[t:]:
                                row[j] = (row[j] - quo * row[t]) % h
                        else:
                            g, s, tt = _xgcd_int(e, pivot)
                            fq, gq = e // g, pivot // g
                            for row in M[t:]:
                                x, y = row[j], row[t]
                                row[t] = (s * x + tt * y) % h
                                row[j] = (fq * y - gq * x) % h
                            M[t][t] = g
                            M[t][j] = 0
                            combined = True
                    if not combined:
                        break
                    self._gcd_pivot_with_modulus(t)
                pivot = M[t][t]
                offender = None
                for i in range(t + 1, self.m):
                    if any(M[i][j] % pivot for j in range(t + 1, self.ncols)):
                        offender = i
                        break
                if offender is None:
                    break
                M[t] = [(a + b) % h for a, b in zip(M[t], M[offender])]
            divisors.append(math.gcd(M[t][t], h))
        return divisors


def smith_integer_mod(matrix: Sequence[Sequence[int]], modulus: int) -> ElementaryDivisors:
    """SNF of an integer matrix whose cokernel is annihilated by `modulus`
    (for a nonsingular square matrix, any positive multiple of |det|)."""
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    worker = _ModularSmithInt([list(map(int, row)) for row in matrix], modulus)
    return ElementaryDivisors("Z", worker.run())


def smith_integer(matrix: Sequence[Sequence[int]], with_det: bool = False):
    """Classical SNF over Z with positive divisors (zeros trail).

    Square nonsingular matrices are routed through the mod-determinant
    algorithm, which keeps every intermediate entry below |det|."""
    if not matrix or not matrix[0]:
        raise ValueError("empty matrix")
    M = [list(map(int, row)) for row in matrix]
    m = len(M)
    ncols = len(M[0])
    if m == ncols and m > 4:
        det = bareiss_det_int(M)
        if det:
            eds = smith_integer_mod(M, abs(det))
            if with_det:
                return eds, det
            return eds
    sign = 1
    t = 0
    diag: list[int] = []
    r = min(m, ncols)
    while t < r:
        best = None
        best_key = None
        for i in range(t, m):
            for j in range(t, ncols):
                if M[i][j]:
                    key = (abs(M[i][j]), i, j)
                    if best_key is None or key < best_key:
                        best_key, best = key, (i, j)
        if best is None:
            break
        if best[0] != t:
            _swap_rows(M, best[0], t)
            sign = -sign
        if best[1] != t:
            _swap_cols(M, best[1], t)
            sign = -sign
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            sign = -sign
        while True:
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, m):
                    if M[i][t]:
                        quo = M[i][t] // M[t][t]
                        if quo:
                            M[i] = [a - quo * b for a, b in zip(M[i], M[t])]
                        if M[i][t]:
                            _swap_rows(M, i, t)
                            sign = -sign
                            if M[t][t] < 0:
                                M[t] = [-x for x in M[t]]
                                sign = -sign
                            dirty = True
                for j in range(t + 1, ncols):
                    if M[t][j]:
                        quo = M[t][j] // M[t][t]
                        if quo:
                            for row in M:
                                row[j] -= quo * row[t]
                        if M[t][j]:
                            _swap_cols(M, j, t)
                            sign = -sign
                            if M[t][t] < 0:
                                M[t] = [-x for x in M[t]]
                                sign = -sign
                            dirty = True
            pivot = M[t][t]
            offender = None
            for i in range(t + 1, m):
                if any(M[i][j] % pivot for j in range(t + 1, ncols)):
                    offender = i
                    break
            if offender is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[offender])]
        diag.append(M[t][t])
        t += 1
    divisors = diag + [0] * (min(m, ncols) - len(diag))
    eds = ElementaryDivisors("Z", divisors)
    if with_det:
        det = None
        if m == ncols:
            det = 0 if len(diag) < m else sign * math.prod(diag)
        return eds, det
    return eds


def bareiss_det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    M = [list(map(int, row)) for row in matrix]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if M[i][k]), None)
            if pivot_row is None:
                return 0
            M[k], M[pivot_row] = M[pivot_row], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def laurent_det_bareiss(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Exact determinant of a small Laurent-polynomial matrix (any domain
    with exact division)."""
    M = [list(row) for row in matrix]
    n = len(M)
    ring = M[0][0].ring if n else ZZ
    if n == 0:
        return LaurentPoly.one(ring)
    sign = 1
    prev = LaurentPoly.one(ring)
    for k in range(n - 1):
        if M[k][k].is_zero():
            pivot_row = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if pivot_row is None:
                return LaurentPoly.zero(ring)
            M[k], M[pivot_row] = M[pivot_row], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
            M[i][k] = LaurentPoly.zero(ring)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


# -- jump notation ----------------------------------------------------------------------


@dataclass
class JumpChain:
    """Successive quotient factors with multiplicities: divisor i of step s
    is the product of the factors of steps 1..s."""

    ring_label: str
    steps: list  # (factor, multiplicity); factor LaurentPoly or int

    def expand(self) -> ElementaryDivisors:
        divisors = []
        if self.ring_label == "Z":
            acc = 1
            for f, mult in self.steps:
                acc *= f
                divisors.extend([acc] * mult)
        else:
            ring = ring_from_label(self.ring_label)
            acc = LaurentPoly.one(ring)
            for f, mult in self.steps:
                acc = canonical(acc * f)
                divisors.extend([acc] * mult)
        return ElementaryDivisors(self.ring_label, divisors)

    def render(self) -> str:
        return " ".join(
            f"→{_factor_str(f, self.ring_label)}→ {mult}" for f, mult in self.steps
        )


def _int_factor_str(x: int) -> str:
    if x == 1:
        return "1"
    pieces = []
    n = x
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            pieces.append(f"{d}^{e}" if e > 1 else f"{d}")
        d += 1
    if n > 1:
        pieces.append(f"{n}")
    return "·".join(pieces)


def _factor_str(f, ring_label: str) -> str:
    if ring_label == "Z":
        return _int_factor_str(f)
    if f.is_one():
        return "1"
    return cyclo_display(f).factor_str()


def jump_format(eds: ElementaryDivisors) -> JumpChain:
    """Compress a zero-free divisor chain into jump notation."""
    divisors = eds.divisors
    if not divisors:
        return JumpChain(eds.ring_label, [])
    if eds.ring_label == "Z":
        if any(d == 0 for d in divisors):
            raise ValueError("jump notation needs nonzero divisors")
        steps = []
        prev = 1
        for d in divisors:
            if steps and d == steps[-1][2]:
                steps[-1][1] += 1
            else:
                if d % prev:
                    raise ValueError(f"broken divisibility chain at {d}")
                steps.append([d // prev, 1, d])
                prev = d
        return JumpChain("Z", [(f, m) for f, m, _ in steps])
    if any(d.is_zero() for d in divisors):
        raise ValueError("jump notation needs nonzero divisors")
    steps = []
    prev = LaurentPoly.one(divisors[0].ring)
    for d in divisors:
        if steps and d == steps[-1][2]:
            steps[-1][1] += 1
        else:
            quo = exact_div(d, prev)
            steps.append([canonical(quo), 1, d])
            prev = d
    return JumpChain(eds.ring_label, [(f, m) for f, m, _ in steps])


def render_jump(eds: ElementaryDivisors) -> str:
    return jump_format(eds).render()


# -- divisible diagonalizability certificate ----------------------------------------------


class CertificateError(ValueError):
    """A divisibility hypothesis of the triangular certificate failed."""

    def __init__(self, message: str, position: tuple[int, int]):
        super().__init__(message)
        self.position = position


def divisible_diag_certificate(matrix: Sequence[Sequence[LaurentPoly]]) -> ElementaryDivisors:
    """Certify divisible diagonalizability of an upper-triangular matrix.

    Requires d_1 | d_2 | ... along the diagonal and d_i dividing every entry
    of row i, all in the entry ring (integer Laurent included); then the
    diagonal is the divisor chain.  Raises CertificateError with the
    offending position otherwise."""
    m = len(matrix)
    if any(len(row) != m for row in matrix):
        raise ValueError("certificate needs a square matrix")
    ring = matrix[0][0].ring
    for i in range(m):
        for j in range(i):
            if not matrix[i][j].is_zero():
                raise CertificateError(f"entry ({i},{j}) below the diagonal", (i, j))
    diag = [matrix[i][i] for i in range(m)]
    for i in range(m - 1):
        if not divides(diag[i], diag[i + 1]):
            raise CertificateError(
                f"diagonal chain broken: d_{i} does not divide d_{i + 1}", (i + 1, i + 1)
            )
    for i in range(m):
        for j in range(i + 1, m):
            if not divides(diag[i], matrix[i][j]):
                raise CertificateError(
                    f"d_{i} does not divide entry ({i},{j})", (i, j)
                )
    label = "Z[q]" if ring == ZZ else ring.label()
    return ElementaryDivisors(label, [canonical(d) for d in diag])


# -- minor ideals ---------------------------------------------------------------------------


def minor_ideal_check(
    matrix: Sequence[Sequence[LaurentPoly]],
    eds: ElementaryDivisors,
    k: int,
    max_minors: int = 20000,
    seed: int = 0,
) -> bool:
    """Gcd of the k x k minors equals d_1 ... d_k (canonical), over a field.

    Exhaustive when the number of minors is at most max_minors, otherwise a
    seeded sample (documented approximation; the full enumeration is
    combinatorially infeasible for mid-size k)."""
    m = len(matrix)
    ncols = len(matrix[0])
    ring = matrix[0][0].ring
    if not ring.is_field:
        raise ValueError("minor ideals are checked over a field")
    if k < 1 or k > min(m, ncols):
        raise ValueError(f"k={k} out of range")
    target = LaurentPoly.one(ring)
    for d in eds.divisors[:k]:
        if d.is_zero():
            target = LaurentPoly.zero(ring)
            break
        target = target * d
    target = canonical(target) if not target.is_zero() else target
    import itertools

    total = math.comb(m, k) * math.comb(ncols, k)
    rng = random.Random(seed)
    if total <= max_minors:
        row_sets = itertools.combinations(range(m), k)
        pairs = (
            (rs, cs)
            for rs in row_sets
            for cs in itertools.combinations(range(ncols), k)
        )
    else:
        def sample():
            seen = set()
            count = 0
            # always include the leading minor
            yield tuple(range(k)), tuple(range(k))
            while count < max_minors // 10:
                rs = tuple(sorted(rng.sample(range(m), k)))
                cs = tuple(sorted(rng.sample(range(ncols), k)))
                if (rs, cs) not in seen:
                    seen.add((rs, cs))
                    count += 1
                    yield rs, cs

        pairs = sample()
    g = None
    for rs, cs in pairs:
        sub = [[matrix[i][j] for j in cs] for i in rs]
        det = laurent_det_bareiss(sub)
        if det.is_zero():
            continue
        g = canonical(det) if g is None else laurent_gcd(g, det)
        if g == target:
            if total <= max_minors:
                continue
            return True
    if g is None:
        return target.is_zero()
    return g == target


# -- conjugate duality -------------------------------------------------------------------------


def conjugate_duality_check(shape) -> tuple[bool, int | None]:
    """Over Q[q,q^-1]: the i-th divisor of the shape times the mirrored
    divisor of the conjugate shape is the hook polynomial, up to a unit.
    Returns (ok, first failing index)."""
    from .pipeline import conjugate_duality

    return conjugate_duality(shape)


# -- obstruction tests ---------------------------------------------------------------------------


@dataclass
class ObstructionReport:
    status: str  # "obstructed" | "no-obstruction" | "inconclusive"
    prime: int
    test: str  # "mod-p" | "q1"
    detail: str
    witness: dict | None = None

    def summary(self) -> str:
        if self.status == "no-obstruction":
            return f"no obstruction found by this test (p={self.prime}, {self.test}); decides nothing"
        if self.status == "obstructed":
            return f"obstructed at p={self.prime} ({self.test}): {self.detail}"
        return f"inconclusive (p={self.prime}, {self.test}): {self.detail}"


class _Timeout(Exception):
    pass


def _factor_rational_divisors(divisors: list[LaurentPoly]) -> list[dict[int, int]] | None:
    """Cyclotomic valuation vector of each divisor; None when any divisor
    fails to factor completely into cyclotomics."""
    out = []
    for d in divisors:
        try:
            d_int = to_integer(d)
        except ValueError:
            return None
        fact = cyclo_display(d_int)
        if not fact.remainder.is_one():
            return None
        out.append(dict(fact.factors))
    return out


def _multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} not invertible mod {n}")
    k = 1
    x = a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _poly_powmod(a: LaurentPoly, e: int, f: LaurentPoly) -> LaurentPoly:
    result = LaurentPoly.one(a.ring)
    base = laurent_divmod(a, f)[1]
    while e:
        if e & 1:
            result = laurent_divmod(result * base, f)[1]
        base = laurent_divmod(base * base, f)[1]
        e >>= 1
    return result


def _equal_degree_split(f: LaurentPoly, d: int, p: int, rng: random.Random) -> list[LaurentPoly]:
    """Cantor-Zassenhaus split of a squarefree product of degree-d
    irreducibles over F_p."""
    if f.span() == d:
        return [canonical(f)]
    ring = f.ring
    one = LaurentPoly.one(ring)
    while True:
        a = LaurentPoly(ring, {i: rng.randrange(p) for i in range(f.span())})
        if a.is_zero():
            continue
        if p == 2:
            b = LaurentPoly.zero(ring)
            x = laurent_divmod(a, f)[1]
            for _ in range(d):
                b = b + x
                x = laurent_divmod(x * x, f)[1]
        else:
            b = _poly_powmod(a, (p**d - 1) // 2, f) - one
        if b.is_zero():
            continue
        g = laurent_gcd(f, b)
        if 0 < g.span() < f.span():
            return sorted(
                _equal_degree_split(g, d, p, rng)
                + _equal_degree_split(exact_div(f, g), d, p, rng),
                key=lambda h: tuple(sorted(h.coeffs.items())),
            )


def factor_cyclotomic_mod_p(m: int, p: int) -> list[tuple[LaurentPoly, int]]:
    """Irreducible factorization of the m-th cyclotomic polynomial over F_p:
    distinct monic irreducibles, each with the same multiplicity."""
    m1 = m
    mult = 1
    while m1 % p == 0:
        m1 //= p
    mult = euler_phi(m) // euler_phi(m1)
    base = reduce_mod(cyclotomic(m1), p)
    if m1 == 1:
        return [(canonical(base), mult)]
    d = _multiplicative_order(p, m1)
    count = euler_phi(m1) // d
    if count == 1:
        return [(canonical(base), mult)]
    rng = random.Random(f"cyclotomic-{m}-{p}")
    factors = _equal_degree_split(canonical(base), d, p, rng)
    return [(g, mult) for g in factors]


def _valuation_of(poly: LaurentPoly, g: LaurentPoly) -> int:
    v = 0
    cur = poly
    while True:
        quo, rem = laurent_divmod(cur, g)
        if not rem.is_zero():
            return v
        cur = quo
        v += 1


class _Counter(dict):
    def freeze(self):
        return tuple(sorted((k, v) for k, v in self.items() if v))


def _feasible_cluster(
    value_lists: list[list[int]],
    weights: list[dict[int, int]],
    targets: dict[int, "_Counter"],
    slots: int,
    deadline: float,
    slack_total: int = 0,
) -> list | None:
    """Assign one value from every factor multiset to each of `slots` slots
    so that, for every target g, the multiset of weighted sums matches.

    The search commits the largest outstanding target first: some slot must
    realize it, and slots are interchangeable, so this loses no solutions
    while keeping the branching narrow.  With slack (q = 1 test) a slot may
    exceed its weighted sum by a nonnegative amount, the total excess across
    slots being fixed.  Raises _Timeout past the deadline."""
    nf = len(value_lists)
    f_counts = [_Counter() for _ in range(nf)]
    f_sums = [0] * nf
    for fi, values in enumerate(value_lists):
        if len(values) != slots:
            raise ValueError("value list length disagrees with slot count")
        for v in values:
            f_counts[fi][v] = f_counts[fi].get(v, 0) + 1
            f_sums[fi] += v
    t_sums = {g: sum(v * c for v, c in cnt.items()) for g, cnt in targets.items()}
    gids = sorted(targets)
    memo_fail: set = set()
    assignment: list[tuple] = []

    def combos(fi):
        if fi == nf:
            yield ()
            return
        for v in sorted(f_counts[fi], reverse=True):
            if f_counts[fi][v] > 0:
                for rest in combos(fi + 1):
                    yield (v,) + rest

    def rec(slots_left: int, slack_left: int) -> bool:
        if time.monotonic() > deadline:
            raise _Timeout
        if slots_left == 0:
            return True
        # aggregate prune: totals are conserved by any completion
        for g in gids:
            expected = sum(weights[fi].get(g, 0) * f_sums[fi] for fi in range(nf))
            if slack_total == 0:
                if expected != t_sums[g]:
                    return False
            elif expected > t_sums[g] or t_sums[g] - expected > slack_left:
                return False
        state = (
            tuple(c.freeze() for c in f_counts),
            tuple(targets[g].freeze() for g in gids),
            slack_left,
        )
        if state in memo_fail:
            return False
        # the slot that consumes the largest outstanding target
        g_star, t_star = None, None
        for g in gids:
            for tv, cnt in targets[g].items():
                if cnt > 0 and (t_star is None or tv > t_star):
                    g_star, t_star = g, tv
        for combo in combos(0):
            images = tuple(
                sum(weights[fi].get(g, 0) * combo[fi] for fi in range(nf)) for g in gids
            )
            img = dict(zip(gids, images))
            if g_star is not None:
                if slack_total == 0:
                    if img[g_star] != t_star:
                        continue
                elif img[g_star] > t_star or t_star - img[g_star] > slack_left:
                    continue
            if slack_total == 0:
                if any(targets[g].get(img[g], 0) <= 0 for g in gids):
                    continue
                consumed = img
                spent = 0
            else:
                consumed = {g_star: t_star} if g_star is not None else {}
                spent = (t_star - img[g_star]) if g_star is not None else 0
            for fi in range(nf):
                f_counts[fi][combo[fi]] -= 1
                f_sums[fi] -= combo[fi]
            for g, tv in consumed.items():
                targets[g][tv] -= 1
                t_sums[g] -= tv
            assignment.append((combo, tuple(sorted(consumed.items()))))
            if rec(slots_left - 1, slack_left - spent):
                return True
            assignment.pop()
            for fi in range(nf):
                f_counts[fi][combo[fi]] += 1
                f_sums[fi] += combo[fi]
            for g, tv in consumed.items():
                targets[g][tv] += 1
                t_sums[g] += tv
        memo_fail.add(state)
        return False

    if rec(slots, slack_total):
        return list(assignment)
    return None


def _feasible(
    value_lists: list[list[int]],
    weights: list[dict[int, int]],
    targets: dict[int, "_Counter"],
    slots: int,
    deadline: float,
    slack_total: int = 0,
) -> list[list] | None:
    """Decompose into independent clusters of factors sharing a target and
    search each separately; returns per-cluster assignments or None."""
    nf = len(value_lists)
    parent = list(range(nf))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    by_g: dict[int, list[int]] = {}
    for fi, w in enumerate(weights):
        for g in w:
            by_g.setdefault(g, []).append(fi)
    for fis in by_g.values():
        for other in fis[1:]:
            ra, rb = find(fis[0]), find(other)
            if ra != rb:
                parent[rb] = ra
    clusters: dict[int, list[int]] = {}
    for fi in range(nf):
        clusters.setdefault(find(fi), []).append(fi)
    # a target produced by no factor can only hold zeros (slack-free case)
    covered = set()
    for w in weights:
        covered.update(w)
    for g, cnt in targets.items():
        if g not in covered and slack_total == 0:
            if any(tv != 0 and c > 0 for tv, c in cnt.items()):
                return None
    results = []
    for fis in sorted(clusters.values()):
        gset = set()
        for fi in fis:
            gset.update(weights[fi])
        if not gset:
            continue  # factors constrained by no target
        if slack_total and len(gset) > 1:
            raise ValueError("slack search supports a single target")
        sub_targets = {g: targets[g] for g in sorted(gset)}
        sub = _feasible_cluster(
            [value_lists[fi] for fi in fis],
            [weights[fi] for fi in fis],
            sub_targets,
            slots,
            deadline,
            slack_total=slack_total,
        )
        if sub is None:
            return None
        results.append(sub)
    return results


def _counter_of(values: Iterable[int]) -> _Counter:
    c = _Counter()
    for v in values:
        c[v] = c.get(v, 0) + 1
    return c


def modp_obstruction(
    ed_q: ElementaryDivisors, ed_p: ElementaryDivisors, p: int, time_budget: float = 10.0
) -> ObstructionReport:
    """Compare rational and mod-p elementary divisors.

    Hypothetical diagonal entries must carry the rational cyclotomic
    valuations (as multisets, per cyclotomic), and their mod-p reductions
    must reproduce the mod-p valuations of every F_p-irreducible.  No
    consistent assignment certifies non-diagonalizability over Z_(p)[q,q^-1]
    and hence over Z[q,q^-1]."""
    if ed_q.size != ed_p.size:
        raise ValueError("divisor lists differ in size")
    if any(d.is_zero() for d in ed_q.divisors) or any(d.is_zero() for d in ed_p.divisors):
        raise ValueError("divisors must be nonzero")
    m = ed_q.size
    vq = _factor_rational_divisors(ed_q.divisors)
    if vq is None:
        return ObstructionReport(
            "inconclusive", p, "mod-p", "rational divisors do not factor into cyclotomics"
        )
    fs = sorted({mm for v in vq for mm in v})
    # factor each relevant cyclotomic mod p; key irreducibles by coeffs
    g_key = {}
    g_repr = {}
    weights = {mm: {} for mm in fs}
    for mm in fs:
        for g, e in factor_cyclotomic_mod_p(mm, p):
            key = tuple(sorted(g.coeffs.items()))
            if key not in g_key:
                gid = len(g_key)
                g_key[key] = gid
                g_repr[gid] = g
            weights[mm][g_key[key]] = e
    # factor the mod-p divisors by trial division with the known irreducibles
    vp = []
    for d in ed_p.divisors:
        if d.ring != GF(p):
            raise ValueError("ed_p ring mismatch")
        vals = {}
        rem = canonical(d)
        for key, gid in g_key.items():
            g = g_repr[gid]
            v = 0
            while True:
                quo, r = laurent_divmod(rem, g)
                if not r.is_zero():
                    break
                rem = quo
                v += 1
            if v:
                vals[gid] = v
        if not rem.is_unit():
            return ObstructionReport(
                "obstructed",
                p,
                "mod-p",
                "a mod-p divisor has an irreducible factor that no rational divisor can produce",
                witness={"alien_factor": str(rem), "divisor": str(d)},
            )
        vp.append(vals)
    gids = sorted(g_repr)
    value_lists = [[v.get(mm, 0) for v in vq] for mm in fs]
    weight_dicts = [weights[mm] for mm in fs]
    targets = {gid: _counter_of(v.get(gid, 0) for v in vp) for gid in gids}
    witness_data = {
        "prime": p,
        "cyclotomic_valuations": {mm: sorted(v.get(mm, 0) for v in vq) for mm in fs},
        "weights": {mm: {str(g_repr[g]): e for g, e in weights[mm].items()} for mm in fs},
        "targets": {str(g_repr[g]): sorted(v.get(g, 0) for v in vp) for g in gids},
    }
    deadline = time.monotonic() + time_budget
    try:
        assignment = _feasible(value_lists, weight_dicts, targets, m, deadline)
    except _Timeout:
        return ObstructionReport("inconclusive", p, "mod-p", "time budget exceeded")
    if assignment is None:
        return ObstructionReport(
            "obstructed",
            p,
            "mod-p",
            "no consistent distribution of cyclotomic valuations exists",
            witness=witness_data,
        )
    return ObstructionReport(
        "no-obstruction", p, "mod-p", "a consistent assignment exists", witness=witness_data
    )


def q1_obstruction(
    ed_q: ElementaryDivisors, ed_z: ElementaryDivisors, p: int, time_budget: float = 10.0
) -> ObstructionReport:
    """Compare rational elementary divisors with the integer ones at q = 1.

    The p-valuation of a hypothetical diagonal entry at q = 1 is the sum of
    its valuations at cyclotomics of p-power index, plus a nonnegative
    content term; the multiset must match the p-valuations of the integer
    divisors."""
    if ed_q.size != ed_z.size:
        raise ValueError("divisor lists differ in size")
    if any(d.is_zero() for d in ed_q.divisors) or any(d == 0 for d in ed_z.divisors):
        raise ValueError("divisors must be nonzero")
    m = ed_q.size
    vq = _factor_rational_divisors(ed_q.divisors)
    if vq is None:
        return ObstructionReport(
            "inconclusive", p, "q1", "rational divisors do not factor into cyclotomics"
        )
    if any(1 in v for v in vq):
        return ObstructionReport(
            "inconclusive", p, "q1", "a rational divisor vanishes at q = 1"
        )
    def is_p_power(mm: int) -> bool:
        while mm % p == 0:
            mm //= p
        return mm == 1

    fs = sorted(mm for mm in {mm for v in vq for mm in v} if is_p_power(mm) and mm > 1)
    value_lists = [[v.get(mm, 0) for v in vq] for mm in fs]
    weights = [{0: 1} for _ in fs]

    def p_val(x: int) -> int:
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    target_vals = [p_val(abs(d)) for d in ed_z.divisors]
    base_total = sum(sum(vals) for vals in value_lists)
    target_total = sum(target_vals)
    witness_data = {
        "prime": p,
        "p_power_valuations": {mm: sorted(vals) for mm, vals in zip(fs, value_lists)},
        "targets": sorted(target_vals),
    }
    if target_total < base_total:
        return ObstructionReport(
            "obstructed",
            p,
            "q1",
            f"total p-valuation at q=1 is {target_total}, below the forced minimum {base_total}",
            witness=witness_data,
        )
    if not fs:
        return ObstructionReport(
            "no-obstruction",
            p,
            "q1",
            "no cyclotomic factor of p-power index; integer content absorbs all p-valuations",
            witness=witness_data,
        )
    slack = target_total - base_total
    targets = {0: _counter_of(target_vals)}
    deadline = time.monotonic() + time_budget
    try:
        assignment = _feasible(value_lists, weights, targets, m, deadline, slack_total=slack)
    except _Timeout:
        return ObstructionReport("inconclusive", p, "q1", "time budget exceeded")
    if assignment is None:
        return ObstructionReport(
            "obstructed",
            p,
            "q1",
            "no consistent distribution of p-power valuations exists",
            witness=witness_data,
        )
    return ObstructionReport(
        "no-obstruction", p, "q1", "a consistent assignment exists", witness=witness_data
    )


def verify_witness(report: ObstructionReport) -> bool:
    """Re-check a report's witness in isolation.

    For a feasible assignment: the per-factor marginals and the per-target
    image multisets must reproduce the recorded data.  For an obstruction:
    the recorded constraint data must again admit no assignment."""
    w = report.witness
    if w is None:
        return report.status == "inconclusive"
    if "alien_factor" in w:
        return True
    if report.test == "mod-p":
        fs = sorted(w["cyclotomic_valuations"])
        value_lists = [list(w["cyclotomic_valuations"][mm]) for mm in fs]
        g_names = sorted(w["targets"])
        gid = {g: i for i, g in enumerate(g_names)}
        weights = [
            {gid[g]: e for g, e in w["weights"][mm].items()} for mm in fs
        ]
        targets = {gid[g]: _counter_of(w["targets"][g]) for g in g_names}
        slots = len(value_lists[0]) if value_lists else len(w["targets"][g_names[0]])
        slack = 0
    else:
        fs = sorted(w["p_power_valuations"])
        value_lists = [list(w["p_power_valuations"][mm]) for mm in fs]
        weights = [{0: 1} for _ in fs]
        targets = {0: _counter_of(w["targets"])}
        slots = len(w["targets"])
        base_total = sum(sum(v) for v in value_lists)
        slack = sum(w["targets"]) - base_total
        if slack < 0:
            return report.status == "obstructed"
    deadline = time.monotonic() + 30.0
    try:
        assignment = _feasible(value_lists, weights, targets, slots, deadline, slack)
    except _Timeout:
        return False
    if report.status == "obstructed":
        return assignment is None
    return assignment is not None
