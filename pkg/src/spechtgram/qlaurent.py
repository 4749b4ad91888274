"""Exact Laurent polynomials in one variable q.

Coefficients live in Z, Q, or a prime field F_p.  A Laurent polynomial is a
finite map from integer exponents (possibly negative) to nonzero
coefficients; the zero polynomial has an empty map.  All operations are pure
and values are immutable, so they can be shared freely.

Over a field, F[q, q^-1] is a Euclidean domain: the units are c*q^a and the
Euclidean size of a nonzero element is its exponent span.  The canonical
form of a nonzero element shifts the lowest exponent to 0 and makes it monic
(over Z: lowest exponent 0 and positive leading coefficient).  Elementary
divisors are compared in canonical form throughout the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Coeff = Union[int, Fraction]


class CoeffRing:
    """Coefficient ring tag: Z, Q, or F_p with p prime."""

    __slots__ = ("tag", "p")

    def __init__(self, tag: str, p: int | None = None):
        if tag not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring tag {tag!r}")
        if tag == "Fp":
            if p is None or not _is_prime(p):
                raise ValueError(f"F_p needs a prime modulus, got {p!r}")
        elif p is not None:
            raise ValueError(f"ring {tag} takes no modulus")
        self.tag = tag
        self.p = p

    @property
    def is_field(self) -> bool:
        return self.tag != "Z"

    def label(self) -> str:
        return f"Fp:{self.p}" if self.tag == "Fp" else self.tag

    def coerce(self, x) -> Coeff:
        """Bring an int or Fraction into this ring's internal representation."""
        if self.tag == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x)
            return int(x)
        if self.tag == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return self.coerce(x.numerator) * self.inv(self.coerce(x.denominator)) % self.p
        return x % self.p

    def add(self, a: Coeff, b: Coeff) -> Coeff:
        return (a + b) % self.p if self.tag == "Fp" else a + b

    def mul(self, a: Coeff, b: Coeff) -> Coeff:
        return (a * b) % self.p if self.tag == "Fp" else a * b

    def neg(self, a: Coeff) -> Coeff:
        return (-a) % self.p if self.tag == "Fp" else -a

    def inv(self, a: Coeff) -> Coeff:
        if self.tag == "Fp":
            return pow(a, -1, self.p)
        if self.tag == "Q":
            return Fraction(1) / a
        if a in (1, -1):
            return a
        raise ValueError(f"{a} is not invertible over Z")

    def coeff_str(self, a: Coeff) -> str:
        return str(a)

    def coeff_parse(self, s: str) -> Coeff:
        return self.coerce(Fraction(s))

    def __eq__(self, other) -> bool:
        return isinstance(other, CoeffRing) and self.tag == other.tag and self.p == other.p

    def __hash__(self) -> int:
        return hash((self.tag, self.p))

    def __repr__(self) -> str:
        return f"CoeffRing({self.label()!r})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, math.isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


ZZ = CoeffRing("Z")
QQ = CoeffRing("Q")


@lru_cache(maxsize=None)
def GF(p: int) -> CoeffRing:
    return CoeffRing("Fp", p)


def ring_from_label(label: str) -> CoeffRing:
    if label == "Z":
        return ZZ
    if label == "Q":
        return QQ
    if label.startswith("Fp:"):
        return GF(int(label[3:]))
    raise ValueError(f"unknown ring label {label!r}")


class LaurentPoly:
    """A Laurent polynomial; immutable after construction."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: CoeffRing, coeffs: Mapping[int, Coeff], *, _clean: bool = False):
        self.ring = ring
        if _clean:
            self.coeffs = dict(coeffs)
        else:
            cleaned = {}
            for e, c in coeffs.items():
                c = ring.coerce(c)
                if c != 0:
                    cleaned[int(e)] = c
            self.coeffs = cleaned
        self._hash = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(ring: CoeffRing = ZZ) -> "LaurentPoly":
        return LaurentPoly(ring, {}, _clean=True)

    @staticmethod
    def const(c, ring: CoeffRing = ZZ) -> "LaurentPoly":
        return LaurentPoly(ring, {0: c})

    @staticmethod
    def one(ring: CoeffRing = ZZ) -> "LaurentPoly":
        return LaurentPoly.const(1, ring)

    @staticmethod
    def q_power(e: int, c=1, ring: CoeffRing = ZZ) -> "LaurentPoly":
        """c * q^e."""
        return LaurentPoly(ring, {e: c})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == {0: 1}

    def is_unit(self) -> bool:
        """Unit of the Laurent ring: c*q^a with c invertible."""
        if len(self.coeffs) != 1:
            return False
        c = next(iter(self.coeffs.values()))
        return self.ring.is_field or c in (1, -1)

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        return min(self.coeffs)

    def span(self) -> int:
        """Euclidean size: degree minus valuation."""
        return self.degree() - self.valuation()

    def leading_coeff(self) -> Coeff:
        return self.coeffs[self.degree()]

    def trailing_coeff(self) -> Coeff:
        return self.coeffs[self.valuation()]

    def num_terms(self) -> int:
        return len(self.coeffs)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        add = self.ring.add
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = add(out.get(e, 0), c)
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPoly(self.ring, out, _clean=True)

    def __neg__(self) -> "LaurentPoly":
        neg = self.ring.neg
        return LaurentPoly(self.ring, {e: neg(c) for e, c in self.coeffs.items()}, _clean=True)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if not self.coeffs or not other.coeffs:
            return LaurentPoly.zero(self.ring)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, Coeff] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        if self.ring.tag == "Fp":
            p = self.ring.p
            out = {e: c % p for e, c in out.items()}
        return LaurentPoly(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    def scale(self, c) -> "LaurentPoly":
        c = self.ring.coerce(c)
        if c == 0:
            return LaurentPoly.zero(self.ring)
        mul = self.ring.mul
        return LaurentPoly(self.ring, {e: mul(v, c) for e, v in self.coeffs.items()}, _clean=True)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        if k == 0:
            return self
        return LaurentPoly(self.ring, {e + k: c for e, c in self.coeffs.items()}, _clean=True)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ValueError("negative power of a non-unit")
            e = self.degree()
            c = self.ring.inv(self.coeffs[e])
            return LaurentPoly.q_power(-e, c, self.ring) ** (-n)
        out = LaurentPoly.one(self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute_q_inverse(self) -> "LaurentPoly":
        """Replace q by q^-1."""
        return LaurentPoly(self.ring, {-e: c for e, c in self.coeffs.items()}, _clean=True)

    def evaluate(self, t) -> Fraction:
        """Exact value at q = t (t a nonzero rational); Z/Q rings only."""
        if self.ring.tag == "Fp":
            raise ValueError("evaluate is for Z or Q coefficients")
        t = Fraction(t)
        if t == 0:
            raise ValueError("q must be invertible; t = 0 not allowed")
        return sum((Fraction(c) * t**e for e, c in self.coeffs.items()), Fraction(0))

    def evaluate_mod(self, t: int, p: int) -> int:
        """Value at q = t in F_p; requires F_p coefficients and p not dividing t."""
        if self.ring.tag != "Fp" or self.ring.p != p:
            raise ValueError("ring mismatch")
        if t % p == 0:
            raise ValueError("q must be invertible mod p")
        return sum(c * pow(t, e, p) for e, c in self.coeffs.items()) % p

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, tuple(sorted(self.coeffs.items()))))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.ring.label()}, {self!s})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            term = "q" if e == 1 else f"q^{e}" if e != 0 else ""
            if term and c == 1:
                cs = ""
            elif term and c == -1 and self.ring.tag != "Fp":
                cs = "-"
            else:
                cs = str(c) + ("*" if term else "")
            s = cs + term
            if parts and not s.startswith("-"):
                parts.append("+" + s)
            else:
                parts.append(s)
        return "".join(parts)

    # -- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ring": self.ring.label(),
            "coeffs": {str(e): self.ring.coeff_str(c) for e, c in sorted(self.coeffs.items())},
        }

    @staticmethod
    def from_json(d: dict) -> "LaurentPoly":
        ring = ring_from_label(d["ring"])
        return LaurentPoly(ring, {int(e): ring.coeff_parse(c) for e, c in d["coeffs"].items()})


# -- ring conversions -------------------------------------------------------


def to_rational(f: LaurentPoly) -> LaurentPoly:
    """Reinterpret Z or Q coefficients over Q."""
    if f.ring == QQ:
        return f
    if f.ring != ZZ:
        raise ValueError("to_rational expects Z or Q coefficients")
    return LaurentPoly(QQ, {e: Fraction(c) for e, c in f.coeffs.items()}, _clean=True)


def to_integer(f: LaurentPoly) -> LaurentPoly:
    """Reinterpret over Z; rejects non-integral coefficients."""
    if f.ring == ZZ:
        return f
    out = {}
    for e, c in f.coeffs.items():
        c = Fraction(c)
        if c.denominator != 1:
            raise ValueError(f"coefficient {c} is not an integer")
        out[e] = int(c)
    return LaurentPoly(ZZ, out, _clean=True)


def reduce_mod(f: LaurentPoly, p: int) -> LaurentPoly:
    """Coefficientwise reduction Z[q,q^-1] -> F_p[q,q^-1]."""
    if f.ring != ZZ:
        raise ValueError("reduce_mod expects integer coefficients")
    ring = GF(p)
    return LaurentPoly(ring, {e: c % p for e, c in f.coeffs.items()})


def eval_at_one(f: LaurentPoly):
    """The specialization q -> 1, i.e. the coefficient sum; Z or Q only."""
    if f.ring.tag == "Fp":
        raise ValueError("q -> 1 specialization is for Z or Q coefficients")
    total = sum(f.coeffs.values())
    return total


def specialize(f: LaurentPoly, target):
    """Spec-level specialization dispatcher.

    target "q=1" sums the coefficients; target ("mod", p) reduces mod p.
    """
    if target == "q=1":
        return eval_at_one(f)
    if isinstance(target, tuple) and len(target) == 2 and target[0] == "mod":
        return reduce_mod(f, target[1])
    raise ValueError(f"unknown specialization target {target!r}")


# -- canonical form and Euclidean structure ----------------------------------


def canonical(f: LaurentPoly) -> LaurentPoly:
    """Canonical associate: valuation 0, monic (field) or positive leading (Z)."""
    if f.is_zero():
        return f
    g = f.shift(-f.valuation())
    lead = g.leading_coeff()
    if f.ring.is_field:
        if lead != 1:
            g = g.scale(f.ring.inv(lead))
    elif lead < 0:
        g = g.scale(-1)
    return g


def unit_part(f: LaurentPoly) -> LaurentPoly:
    """The unit u with f = u * canonical(f); 1 for f = 0."""
    if f.is_zero():
        return LaurentPoly.one(f.ring)
    if f.ring.is_field:
        c = f.leading_coeff()
    else:
        c = 1 if f.leading_coeff() > 0 else -1
    return LaurentPoly.q_power(f.valuation(), c, f.ring)


def laurent_divmod(f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division with remainder over a field: f = quo*g + rem, span(rem) < span(g)."""
    if not f.ring.is_field or f.ring != g.ring:
        raise ValueError("divmod needs matching field coefficients")
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    if f.is_zero():
        return f, f
    gv = g.valuation()
    gd = g.degree() - gv
    glead_inv = ring.inv(g.leading_coeff())
    rem = dict(f.coeffs)
    quo: dict[int, Coeff] = {}

    def deg(d):
        return max(d) if d else None

    def val(d):
        return min(d) if d else None

    while rem:
        rd, rv = deg(rem), val(rem)
        if rd - rv < gd:
            break
        c = ring.mul(rem[rd], glead_inv)
        shift = rd - gv - gd
        quo[shift] = ring.add(quo.get(shift, 0), c)
        for e, gc in g.coeffs.items():
            e2 = e + shift
            s = ring.add(rem.get(e2, 0), ring.neg(ring.mul(c, gc)))
            if s:
                rem[e2] = s
            elif e2 in rem:
                del rem[e2]
    return (
        LaurentPoly(ring, quo, _clean=False),
        LaurentPoly(ring, rem, _clean=False),
    )


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    """Exact divisibility g | f in the coefficient ring's Laurent ring."""
    if f.is_zero():
        return True
    if g.is_zero():
        return False
    if g.ring.is_field:
        _, rem = laurent_divmod(f, g)
        return rem.is_zero()
    try:
        exact_div(f, g)
        return True
    except ValueError:
        return False


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient f / g; raises ValueError when g does not divide f."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return f
    if f.ring.is_field:
        quo, rem = laurent_divmod(f, g)
        if not rem.is_zero():
            raise ValueError("inexact division")
        return quo
    quo, rem = laurent_divmod(to_rational(f), to_rational(g))
    if not rem.is_zero():
        raise ValueError("inexact division")
    return to_integer(quo)


def laurent_gcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Canonical gcd over a field; gcd(0, 0) is an error."""
    if not f.ring.is_field or f.ring != g.ring:
        raise ValueError("gcd needs matching field coefficients")
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero():
        _, r = laurent_divmod(a, b)
        a, b = b, r
    return canonical(a)


def content(f: LaurentPoly) -> int:
    """Gcd of the integer coefficients (1 for the zero polynomial)."""
    if f.ring != ZZ:
        raise ValueError("content needs integer coefficients")
    return math.gcd(*f.coeffs.values()) if f.coeffs else 1


def primitive_part(f: LaurentPoly) -> LaurentPoly:
    c = content(f)
    if c == 1:
        return f
    return LaurentPoly(ZZ, {e: v // c for e, v in f.coeffs.items()}, _clean=True)


# -- quantum integers and cyclotomic polynomials ------------------------------


def quantum_integer(k: int, ring: CoeffRing = ZZ) -> LaurentPoly:
    """[k]_q = 1 + q + ... + q^(k-1); [0]_q = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return LaurentPoly(ring, {i: 1 for i in range(k)})


def quantum_factorial(k: int, ring: CoeffRing = ZZ) -> LaurentPoly:
    """[k]!_q = [1]_q [2]_q ... [k]_q, with the empty product equal to 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = LaurentPoly.one(ring)
    for i in range(2, k + 1):
        out = out * quantum_integer(i, ring)
    return out


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> LaurentPoly:
    """The m-th cyclotomic polynomial over Z, via q^m - 1 = prod_{d|m} Phi_d."""
    if m < 1:
        raise ValueError("m must be >= 1")
    poly = LaurentPoly(ZZ, {m: 1, 0: -1})
    for d in range(1, m):
        if m % d == 0:
            poly = exact_div(poly, cyclotomic(d))
    return poly


def hook_polynomial(shape) -> LaurentPoly:
    """Product of quantum integers of all hook lengths of a partition."""
    from .tableaux import Partition, hook_lengths

    shape = Partition.of(shape)
    out = LaurentPoly.one(ZZ)
    for h in hook_lengths(shape).values():
        out = out * quantum_integer(h)
    return out


def euler_phi(m: int) -> int:
    out = 1
    n = m
    d = 2
    while d * d <= n:
        if n % d == 0:
            out *= d - 1
            n //= d
            while n % d == 0:
                out *= d
                n //= d
        d += 1
    if n > 1:
        out *= n - 1
    return out


class CyclotomicFactorization:
    """Factorization of a Laurent polynomial into a unit, cyclotomic factors
    reduced into the coefficient ring, and an unfactored remainder."""

    __slots__ = ("ring", "unit_sign", "unit_exp", "factors", "remainder")

    def __init__(self, ring, unit_sign, unit_exp, factors, remainder):
        self.ring = ring
        self.unit_sign = unit_sign
        self.unit_exp = unit_exp
        self.factors = factors  # list of (m, exponent), ascending m
        self.remainder = remainder

    def reassemble(self) -> LaurentPoly:
        out = LaurentPoly.q_power(self.unit_exp, self.unit_sign, self.ring)
        for m, e in self.factors:
            phi = cyclotomic(m)
            if self.ring.tag == "Fp":
                phi = reduce_mod(phi, self.ring.p)
            elif self.ring == QQ:
                phi = to_rational(phi)
            out = out * phi**e
        return out * self.remainder

    def factor_str(self) -> str:
        """Render the non-unit part, e.g. 'Φ2^3Φ5' or '1'."""
        parts = [f"Φ{m}" + (f"^{e}" if e > 1 else "") for m, e in self.factors]
        if not self.remainder.is_one():
            parts.append(f"({self.remainder})")
        return "".join(parts) if parts else "1"

    def __repr__(self):
        sign = "-" if self.unit_sign == -1 else ""
        unit = f"{sign}q^{self.unit_exp}·" if self.unit_exp else (sign or "")
        return f"<{unit}{self.factor_str()}>"


def cyclo_display(f: LaurentPoly, max_m: int | None = None) -> CyclotomicFactorization:
    """Greedy trial division by cyclotomic polynomials, ascending m.

    The unit +-q^a is extracted first; whatever survives all divisions is
    returned verbatim in `remainder`, never dropped.  Over F_p each Phi_m is
    reduced mod p before dividing, so e.g. q^2+1 over F_2 comes out as Φ2^2.
    Since Phi_1 collides with Phi_p^s mod p (q-1 = q+1 in F_2), the mod-p
    order tries m = 2, 3, ... first and m = 1 last, matching the usual
    table convention.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ring = f.ring
    a = f.valuation()
    rem = f.shift(-a)
    span = rem.span()
    if max_m is None:
        # phi(m) <= span forces m <= 2*span^2; beyond that no Phi_m can divide
        max_m = 2 * span * span + 2
    factors = []
    order = list(range(1, max_m + 1))
    if ring.tag == "Fp":
        order = order[1:] + order[:1]
    for m in order:
        if rem.span() == 0:
            break
        if euler_phi(m) > rem.span():
            continue
        phi = cyclotomic(m)
        if ring.tag == "Fp":
            phi = reduce_mod(phi, ring.p)
        elif ring == QQ:
            phi = to_rational(phi)
        count = 0
        while True:
            try:
                nxt = exact_div(rem, phi)
            except ValueError:
                break
            rem = nxt
            count += 1
        if count:
            factors.append((m, count))
    factors.sort()
    sign = 1
    if rem.coeffs == {0: 1}:
        rem = LaurentPoly.one(ring)
    elif rem.coeffs == {0: ring.coerce(-1)} and ring.tag != "Fp":
        sign = -1
        rem = LaurentPoly.one(ring)
    elif not ring.is_field and not rem.is_zero() and rem.leading_coeff() < 0:
        sign = -1
        rem = rem.scale(-1)
    return CyclotomicFactorization(ring, sign, a, factors, rem)
