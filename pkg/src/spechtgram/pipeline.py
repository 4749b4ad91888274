"""Certified elementary divisors of Gram matrices.

Every invariant factor of a Specht Gram matrix divides the hook polynomial
of the shape (conjugate duality, valid over Q and over any F_p), and the
hook polynomial is a product of cyclotomics.  The divisor chain is therefore
determined by, for each cyclotomic factor f and each level j, the count
#{ i : v_f(d_i) >= j }.  These counts come from exact linear algebra:

    sum_i min(v_f(d_i), j) * deg f  =  dim_Q coker( M  over  Q[q]/(f^j) )
                                    =  m * deg(f^j) - rank(blowup_j(M)),

where blowup_j replaces each entry by its multiplication matrix on
Q[q]/(f^j) (the entry evaluated at the companion matrix of f^j).  Degrees
never exceed deg(f^j), so there is no intermediate swell at all.

Over Q the blow-up ranks are bounded below by ranks modulo a large prime,
which can only overstate the valuations; the chain is then certified by
comparing the divisor product against exact integer determinant evaluations
at several points.  A nonempty cyclotomic product never evaluates to a
signed power of 3 at q = 3 (all values exceed 1 and are prime to 3), so an
overstated chain cannot pass.  Over F_p the ranks are exact, and the mod-p
product is checked against the reduction of the certified rational
determinant.  Failures raise CertificationError rather than returning a
wrong answer.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .gram import GramMatrix, gram_matrix
from .qlaurent import (
    GF,
    QQ,
    ZZ,
    LaurentPoly,
    canonical,
    cyclo_display,
    cyclotomic,
    eval_at_one,
    hook_polynomial,
    reduce_mod,
    to_integer,
    to_rational,
)
from .snf import (
    ElementaryDivisors,
    _divmod_monic_int,
    bareiss_det_int,
    factor_cyclotomic_mod_p,
    laurent_divmod,
    smith_integer,
)
from .tableaux import Partition

_RANK_PRIMES = (2147483647, 2147483629, 2147483587)


class CertificationError(RuntimeError):
    """The computed divisor chain failed its exactness certificate."""


# -- exact determinant evaluations ------------------------------------------------


def det_at_integer_point(entries, t: int) -> Fraction:
    """Exact determinant of an integer-Laurent matrix at q = t, by integer
    fraction-free elimination after clearing row valuations."""
    shift_total = 0
    rows = []
    for row in entries:
        vals = [e.valuation() for e in row if not e.is_zero()]
        if not vals:
            return Fraction(0)
        v = min(vals)
        shift_total += v
        rows.append([int(e.shift(-v).evaluate(t)) for e in row])
    return Fraction(t) ** shift_total * bareiss_det_int(rows)


def _unit_from_ratio(ratio: Fraction, t: int) -> tuple[int, int] | None:
    """Write ratio as sign * t^a, or None."""
    if ratio == 0:
        return None
    sign = 1 if ratio > 0 else -1
    x = abs(ratio)
    num, den = x.numerator, x.denominator
    a = 0
    while num % abs(t) == 0 and num > 1:
        num //= abs(t)
        a += 1
    while den % abs(t) == 0 and den > 1:
        den //= abs(t)
        a -= 1
    if num != 1 or den != 1:
        return None
    return sign, a


def certify_divisor_product(entries, eds: ElementaryDivisors, points=(3, 5, -2)) -> LaurentPoly:
    """Check prod(divisors) = unit * det(entries) via exact evaluations;
    returns the unit c*q^a over Q or raises CertificationError."""
    prod = LaurentPoly.one(QQ)
    for d in eds.divisors:
        if d.is_zero():
            raise CertificationError("zero divisor: matrix is singular")
        prod = prod * d
    t0 = points[0]
    det0 = det_at_integer_point(entries, t0)
    p0 = prod.evaluate(t0)
    if p0 == 0 or det0 == 0:
        raise CertificationError(f"vanishing value at q={t0}")
    unit = _unit_from_ratio(det0 / p0, t0)
    if unit is None:
        raise CertificationError(f"det / divisor product is not a unit at q={t0}")
    sign, a = unit
    for t in points[1:]:
        det_t = det_at_integer_point(entries, t)
        if det_t != sign * Fraction(t) ** a * prod.evaluate(t):
            raise CertificationError(f"unit inconsistent at q={t}")
    return LaurentPoly.q_power(a, sign, QQ)


# -- blow-up ranks -------------------------------------------------------------------


def _rank_mod_p(A: np.ndarray, p: int) -> int:
    """Exact rank of an integer matrix over F_p (vectorized elimination)."""
    A = np.ascontiguousarray(A % p, dtype=np.int64)
    m, n = A.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(A[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, col]), -1, p)
        A[rank] = (A[rank] * inv) % p
        below = A[rank + 1 :, col]
        mask = below != 0
        if mask.any():
            A[rank + 1 :][mask] = (
                A[rank + 1 :][mask] - below[mask, None] * A[rank][None, :]
            ) % p
        rank += 1
    return rank


def _companion_powers(modpoly: LaurentPoly, p: int) -> list[np.ndarray]:
    """Powers I, C, ..., C^(E-1) of the companion matrix of a monic integer
    polynomial, reduced mod p."""
    E = modpoly.degree()
    # exact bignum arithmetic for the matrix products, then reduce to int64
    comp = np.zeros((E, E), dtype=object)
    for i in range(1, E):
        comp[i, i - 1] = 1
    for i in range(E):
        comp[i, E - 1] = -modpoly.coeffs.get(i, 0) % p
    powers = [np.eye(E, dtype=object)]
    for _ in range(1, E):
        powers.append(powers[-1] @ comp % p)
    return [po.astype(np.int64) for po in powers]


def _blowup_rank(entries, modpoly: LaurentPoly, p: int) -> int:
    """Rank mod p of the matrix of multiplication maps on (Z[q]/(modpoly))^m
    given by the integer-Laurent entries."""
    m = len(entries)
    E = modpoly.degree()
    powers = _companion_powers(modpoly, p)
    big = np.zeros((m * E, m * E), dtype=np.int64)
    for i, row in enumerate(entries):
        # row valuations were normalized by the caller
        for j, e in enumerate(row):
            if e.is_zero():
                continue
            rem = _divmod_monic_int(e, modpoly)
            if rem.is_zero():
                continue
            block = np.zeros((E, E), dtype=np.int64)
            for k, c in rem.coeffs.items():
                cc = c % p
                if cc:
                    block = (block + cc * powers[k]) % p
            big[i * E : (i + 1) * E, j * E : (j + 1) * E] = block
    return _rank_mod_p(big, p)


def _normalize_rows(entries) -> list[list[LaurentPoly]]:
    """Scale each row by a power of q so entries are honest polynomials."""
    out = []
    for row in entries:
        vals = [e.valuation() for e in row if not e.is_zero()]
        v = min(vals) if vals else 0
        out.append([e.shift(-v) if v else e for e in row])
    return out


def _valuation_chain(entries, factor: LaurentPoly, m: int, p: int) -> list[int]:
    """Ascending valuations v_factor(d_1) <= ... <= v_factor(d_m), from
    blow-up ranks mod p.

    When p is a large auxiliary prime (rational divisors) the ranks are
    lower bounds, so these valuations are upper bounds, certified later;
    when p is the target prime of an F_p computation they are exact."""
    e = factor.degree()
    sigma_prev = 0
    levels = []
    power = LaurentPoly.one(ZZ)
    for j in range(1, 10 * m + 16):
        power = power * factor
        rank = _blowup_rank(entries, power, p)
        if rank % e:
            raise CertificationError(f"blow-up rank {rank} not divisible by {e}")
        sigma = m * j - rank // e
        count = sigma - sigma_prev
        if count < 0 or (levels and count > levels[-1]):
            raise CertificationError("inconsistent level counts")
        if count == 0:
            break
        levels.append(count)
        sigma_prev = sigma
    else:
        raise CertificationError("valuation levels failed to terminate")
    vals = [0] * m
    for count in levels:
        for s in range(count):
            vals[m - 1 - s] += 1
    return vals


def _assemble_chain(m: int, factor_vals: dict, make_poly) -> list:
    """Zip per-factor ascending valuations into the divisor chain."""
    divisors = []
    for i in range(m):
        d = None
        for key, vals in factor_vals.items():
            v = vals[i]
            if v:
                piece = make_poly(key) ** v
                d = piece if d is None else d * piece
        divisors.append(d)
    return divisors


# -- public pipeline -----------------------------------------------------------------


def gram_divisors_q(gram: GramMatrix, certify: bool = True) -> ElementaryDivisors:
    """Elementary divisors of a Gram matrix over Q[q, q^-1], via blow-up
    ranks at every cyclotomic factor of the hook polynomial, certified by
    exact determinant evaluations."""
    shape = gram.shape
    m = gram.size
    entries = _normalize_rows(gram.entries)
    hook = hook_polynomial(shape)
    fact = cyclo_display(hook)
    if not fact.remainder.is_one():
        raise CertificationError("hook polynomial failed to factor into cyclotomics")
    last_error = None
    for p in _RANK_PRIMES:
        try:
            factor_vals = {}
            for mm, _ in fact.factors:
                vals = _valuation_chain(entries, cyclotomic(mm), m, p)
                if any(vals):
                    factor_vals[mm] = vals
            divisors = _assemble_chain(
                m, factor_vals, lambda mm: to_rational(cyclotomic(mm))
            )
            divisors = [LaurentPoly.one(QQ) if d is None else canonical(d) for d in divisors]
            eds = ElementaryDivisors("Q", divisors)
            if certify:
                certify_divisor_product(gram.entries, eds)
            return eds
        except CertificationError as err:
            last_error = err
    raise CertificationError(f"divisor chain not certifiable: {last_error}")


def gram_det_q(gram: GramMatrix) -> LaurentPoly:
    """Exact determinant over Q[q, q^-1]: certified unit times the divisor
    product."""
    eds = gram_divisors_q(gram)
    det = certify_divisor_product(gram.entries, eds)
    for d in eds.divisors:
        det = det * d
    return det


def gram_divisors_fp(gram: GramMatrix, p: int, certify: bool = True) -> ElementaryDivisors:
    """Elementary divisors of a Gram matrix over F_p[q, q^-1]: blow-up ranks
    over F_p itself (exact), checked against the reduced rational
    determinant."""
    shape = gram.shape
    m = gram.size
    entries = _normalize_rows(gram.entries)
    hook = hook_polynomial(shape)
    fact = cyclo_display(hook)
    if not fact.remainder.is_one():
        raise CertificationError("hook polynomial failed to factor into cyclotomics")
    # distinct irreducible factors of the hook polynomial mod p, as integer lifts
    seen = {}
    for mm, _ in fact.factors:
        for g, _e in factor_cyclotomic_mod_p(mm, p):
            key = tuple(sorted(g.coeffs.items()))
            if key not in seen:
                seen[key] = LaurentPoly(
                    ZZ, {k: int(c) for k, c in g.coeffs.items()}, _clean=True
                )
    factor_vals = {}
    for key, g_int in sorted(seen.items()):
        vals = _valuation_chain(entries, g_int, m, p)
        if any(vals):
            factor_vals[key] = vals
    lifts = {key: reduce_mod(seen[key], p) for key in factor_vals}
    divisors = _assemble_chain(m, factor_vals, lambda key: lifts[key])
    divisors = [LaurentPoly.one(GF(p)) if d is None else canonical(d) for d in divisors]
    eds = ElementaryDivisors(f"Fp:{p}", divisors)
    if certify:
        det = gram_det_q(gram)
        det_p = canonical(reduce_mod(to_integer(det), p))
        prod = LaurentPoly.one(GF(p))
        for d in eds.divisors:
            prod = prod * d
        if canonical(prod) != det_p:
            raise CertificationError(
                f"mod-{p} divisor product disagrees with the reduced determinant"
            )
    return eds


def gram_divisors_z1(gram: GramMatrix) -> ElementaryDivisors:
    """Elementary divisors over Z of the q = 1 specialization."""
    scalar = [[int(eval_at_one(e)) for e in row] for row in gram.entries]
    return smith_integer(scalar)


def gram_divisors(gram: GramMatrix, ring_label: str) -> ElementaryDivisors:
    """Dispatch on 'Q', 'Fp:<p>', or 'Z1' (q = 1 over Z)."""
    if ring_label == "Q":
        return gram_divisors_q(gram)
    if ring_label.startswith("Fp:"):
        return gram_divisors_fp(gram, int(ring_label[3:]))
    if ring_label in ("Z1", "Z-at-q1", "Z"):
        return gram_divisors_z1(gram)
    raise ValueError(f"unknown ring label {ring_label!r}")


def hook_certificate(n: int, k: int) -> dict:
    """Run the triangular certificate for the hook (n-k, 1^k).

    Returns a report with the certified divisors, the predicted chain, and
    the two extra facts that make the certificate rigorous over Z[q,q^-1]:
    the mixed matrix is genuinely triangular with the stated diagonal, and
    the triangularizing basis is unimodular over the base ring (its
    transition determinant evaluates to +-1 at q = 1 and is a unit over Q).
    """
    from .gram import (
        hook_elementary_divisors,
        mixed_gram_matrix,
        signed_gram_matrix,
    )
    from .qlaurent import quantum_factorial, unit_part
    from .snf import CertificateError, divisible_diag_certificate

    shape = Partition((n - k,) + (1,) * k)
    mixed = mixed_gram_matrix(shape)
    normalized = [
        [unit_part(mixed.entries[i][i]) ** -1 * e for e in row]
        for i, row in enumerate(mixed.entries)
    ]
    report = {"shape": shape, "mixed": mixed, "accepted": False}
    try:
        cert = divisible_diag_certificate(normalized)
    except CertificateError as err:
        report["error"] = f"certificate refused: {err} at {err.position}"
        return report
    kfact = canonical(quantum_factorial(k))
    certified = [canonical(kfact * d) for d in cert.divisors]
    predicted = hook_elementary_divisors(n, k)
    report["certified"] = certified
    report["predicted"] = predicted
    report["matches_prediction"] = certified == predicted
    # unimodularity of the triangularizing basis: det(mixed) = unit * det(signed)
    signed = signed_gram_matrix(shape)
    det_mixed_1 = bareiss_det_int([[int(eval_at_one(e)) for e in row] for row in mixed.entries])
    det_signed_1 = bareiss_det_int([[int(eval_at_one(e)) for e in row] for row in signed.entries])
    report["transition_unimodular_at_1"] = abs(det_mixed_1) == abs(det_signed_1) != 0
    det_mixed_3 = det_at_integer_point(mixed.entries, 3)
    det_signed_3 = det_at_integer_point(signed.entries, 3)
    unit = _unit_from_ratio(det_mixed_3 / det_signed_3, 3) if det_signed_3 else None
    report["transition_unit_over_q"] = unit is not None
    report["accepted"] = (
        report["matches_prediction"]
        and report["transition_unimodular_at_1"]
        and report["transition_unit_over_q"]
    )
    return report


def conjugate_duality(shape) -> tuple[bool, int | None]:
    """Over Q[q,q^-1]: d_i(shape) * d_(m+1-i)(conjugate shape) equals the
    hook polynomial up to a unit, for every i."""
    from .tableaux import conjugate

    shape = Partition.of(shape)
    e1 = gram_divisors_q(gram_matrix(shape))
    e2 = gram_divisors_q(gram_matrix(conjugate(shape)))
    h = canonical(to_rational(hook_polynomial(shape)))
    m = e1.size
    for i in range(m):
        prod = e1.divisors[i] * e2.divisors[m - 1 - i]
        if canonical(prod) != h:
            return False, i
    return True, None
