"""Smith normal forms, jump notation, certificates, obstructions."""

import random

import pytest

from spechtgram.qlaurent import (
    GF,
    QQ,
    ZZ,
    LaurentPoly,
    canonical,
    cyclotomic,
    quantum_integer,
    reduce_mod,
    to_rational,
    unit_part,
)
from spechtgram.snf import (
    CertificateError,
    ElementaryDivisors,
    JumpChain,
    bareiss_det_int,
    divisible_diag_certificate,
    factor_cyclotomic_mod_p,
    jump_format,
    laurent_det_bareiss,
    minor_ideal_check,
    modp_obstruction,
    q1_obstruction,
    render_jump,
    smith_field_laurent,
    smith_field_laurent_mod,
    smith_integer,
    smith_integer_mod,
    verify_witness,
)


def LPQ(d):
    return LaurentPoly(QQ, d)


def LPF(d, p):
    return LaurentPoly(GF(p), d)


Phi = cyclotomic


def prodQ(*fs):
    out = LaurentPoly.one(QQ)
    for f in fs:
        out = out * to_rational(f)
    return canonical(out)


def prodFp(p, *fs):
    out = LaurentPoly.one(GF(p))
    for f in fs:
        out = out * reduce_mod(f, p)
    return canonical(out)


class TestSmithFieldLaurent:
    def test_counterexample_matrix_over_q(self):
        B = [[LPQ({1: 1, 0: 1}), LPQ({0: 2})], [LPQ({}), LPQ({1: 1, 0: 1})]]
        eds = smith_field_laurent(B)
        assert eds.divisors == [LPQ({0: 1}), LPQ({2: 1, 1: 2, 0: 1})]

    def test_counterexample_matrix_over_f2(self):
        g = LPF({1: 1, 0: 1}, 2)
        B = [[g, LaurentPoly.zero(GF(2))], [LaurentPoly.zero(GF(2)), g]]
        eds = smith_field_laurent(B)
        assert eds.divisors == [g, g]

    def test_coprime_diagonal_combines(self):
        D = [[LPQ({1: 1, 0: -1}), LPQ({})], [LPQ({}), LPQ({1: 1, 0: 1})]]
        eds = smith_field_laurent(D)
        assert eds.divisors == [LPQ({0: 1}), LPQ({2: 1, 0: -1})]

    def test_zero_divisors_trail(self):
        M = [[LPQ({1: 1}), LPQ({1: 1})], [LPQ({1: 1}), LPQ({1: 1})]]
        eds = smith_field_laurent(M)
        assert eds.divisors[0].is_one()
        assert eds.divisors[1].is_zero()

    def test_determinant_tracking(self):
        M = [[LPQ({1: 2, 0: 2}), LPQ({0: 2})], [LPQ({}), LPQ({1: 3, 0: 3})]]
        eds, det = smith_field_laurent(M, with_det=True)
        assert det == LPQ({2: 6, 1: 12, 0: 6})

    def test_idempotence(self):
        chain = [LPQ({0: 1}), prodQ(Phi(2)), prodQ(Phi(2), Phi(3))]
        M = [
            [chain[i] if i == j else LaurentPoly.zero(QQ) for j in range(3)]
            for i in range(3)
        ]
        eds = smith_field_laurent(M)
        assert eds.divisors == chain

    def test_divisibility_chain(self):
        rng = random.Random(7)
        for _ in range(20):
            M = [
                [LPQ({e: rng.randint(-2, 2) for e in range(rng.randint(0, 3))}) for _ in range(4)]
                for _ in range(4)
            ]
            eds = smith_field_laurent(M)
            nz = [d for d in eds.divisors if not d.is_zero()]
            from spechtgram.qlaurent import divides

            for a, b in zip(nz, nz[1:]):
                assert divides(a, b)

    def test_unimodular_invariance(self):
        rng = random.Random(90125)
        size = 6
        base = [
            [LPQ({e: rng.randint(-2, 2) for e in range(rng.randint(0, 3))}) for _ in range(size)]
            for _ in range(size)
        ]
        reference = smith_field_laurent([row[:] for row in base])

        def random_unimodular_ops(M, trials):
            for _ in range(trials):
                kind = rng.randrange(4)
                a, b = rng.sample(range(size), 2)
                c = LPQ({rng.randint(-1, 1): rng.randint(-2, 2)})
                if kind == 0:
                    M[a] = [x + c * y for x, y in zip(M[a], M[b])]
                elif kind == 1:
                    for row in M:
                        row[a] = row[a] + c * row[b]
                elif kind == 2:
                    M[a], M[b] = M[b], M[a]
                else:
                    M[a] = [x.shift(1).scale(-1) for x in M[a]]

        for trial in range(100):
            M = [row[:] for row in base]
            random_unimodular_ops(M, 6)
            assert smith_field_laurent(M) == reference, trial

    def test_rectangular(self):
        M = [[LPQ({0: 1}), LPQ({}), LPQ({})], [LPQ({}), LPQ({1: 1, 0: 1}), LPQ({})]]
        eds = smith_field_laurent(M)
        assert len(eds.divisors) == 2

    def test_non_field_rejected(self):
        with pytest.raises(ValueError):
            smith_field_laurent([[LaurentPoly.one(ZZ)]])


class TestSmithModular:
    def test_matches_plain_smith(self):
        rng = random.Random(17)
        h = prodQ(Phi(2), Phi(2), Phi(3), Phi(4))
        for _ in range(15):
            diag = [
                prodQ(*rng.sample([Phi(2), Phi(3), Phi(4)], rng.randint(0, 2)))
                for _ in range(4)
            ]
            M = [
                [diag[i] if i == j else LaurentPoly.zero(QQ) for j in range(4)]
                for i in range(4)
            ]
            # mix with unimodular operations
            for _ in range(8):
                a, b = rng.sample(range(4), 2)
                c = LPQ({rng.randint(0, 1): rng.randint(-1, 1)})
                M[a] = [x + c * y for x, y in zip(M[a], M[b])]
                for row in M:
                    row[b] = row[b] + c * row[a]
            plain = smith_field_laurent([row[:] for row in M])
            # the full divisor product divides a power of h
            modded = smith_field_laurent_mod([row[:] for row in M], h)
            assert modded.divisors == plain.divisors

    def test_mod_p_variant(self):
        p = 2
        h = prodFp(p, Phi(2), Phi(2), Phi(2), Phi(3))
        g2 = reduce_mod(Phi(2), p)
        M = [
            [g2 * g2, reduce_mod(LaurentPoly(ZZ, {0: 2}), p)],
            [LaurentPoly.zero(GF(p)), g2],
        ]
        eds = smith_field_laurent_mod(M, h)
        plain = smith_field_laurent([row[:] for row in M])
        assert eds.divisors == plain.divisors

    def test_integer_modular(self):
        M = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
        det = bareiss_det_int(M)
        eds = smith_integer_mod(M, abs(det))
        assert eds.divisors == smith_integer_naive_reference(M)


def smith_integer_naive_reference(M):
    # tiny reference: direct divisor computation via gcds of minors
    import itertools
    import math

    m = len(M)
    divisors = []
    prev = 1
    for k in range(1, m + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(m), k):
                sub = [[M[i][j] for j in cols] for i in rows]
                g = math.gcd(g, bareiss_det_int(sub))
        if g == 0:
            divisors.append(0)
            continue
        divisors.append(g // prev)
        prev = g
    return divisors


class TestSmithInteger:
    def test_diag(self):
        assert smith_integer([[2, 0], [0, 3]]).divisors == [1, 6]

    def test_identity(self):
        assert smith_integer([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).divisors == [1, 1, 1]

    def test_with_det(self):
        eds, det = smith_integer([[2, 4], [6, 8]], with_det=True)
        assert det == -8
        assert eds.divisors == [2, 4]

    def test_gcd_of_minors_oracle(self):
        rng = random.Random(23)
        for _ in range(15):
            M = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
            assert smith_integer(M).divisors == smith_integer_naive_reference(M)

    def test_rank_deficient(self):
        eds = smith_integer([[2, 4], [1, 2]])
        assert eds.divisors == [1, 0]

    def test_bareiss(self):
        assert bareiss_det_int([[2, 4], [6, 8]]) == -8
        assert bareiss_det_int([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
        assert bareiss_det_int([[1, 2], [2, 4]]) == 0


class TestJumpNotation:
    def test_spec_row(self):
        divisors = (
            [LPQ({0: 1})]
            + [prodQ(Phi(3))] * 3
            + [prodQ(Phi(3), Phi(4))]
        )
        eds = ElementaryDivisors("Q", divisors)
        assert render_jump(eds) == "→1→ 1 →Φ3→ 3 →Φ4→ 1"

    def test_all_ones(self):
        eds = ElementaryDivisors("Q", [LPQ({0: 1})] * 3)
        chain = jump_format(eds)
        assert chain.steps == [(LPQ({0: 1}), 3)]
        assert chain.expand() == eds

    def test_integer_rendering(self):
        eds = ElementaryDivisors("Z", [8] * 21 + [120] * 21)
        assert render_jump(eds) == "→2^3→ 21 →3·5→ 21"

    def test_expand_roundtrip(self):
        divisors = [prodQ(Phi(2))] * 2 + [prodQ(Phi(2), Phi(2), Phi(5))] * 3
        eds = ElementaryDivisors("Q", divisors)
        assert jump_format(eds).expand() == eds

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            jump_format(ElementaryDivisors("Q", [LaurentPoly.zero(QQ)]))

    def test_rejects_broken_chain(self):
        with pytest.raises(ValueError):
            jump_format(ElementaryDivisors("Z", [4, 6]))


class TestCertificate:
    def test_accepts_mixed_gram(self):
        from spechtgram.gram import mixed_gram_matrix

        mg = mixed_gram_matrix((2, 1))
        T = [
            [unit_part(mg.entries[i][i]) ** -1 * e for e in row]
            for i, row in enumerate(mg.entries)
        ]
        cert = divisible_diag_certificate(T)
        assert cert.divisors == [LaurentPoly.one(), quantum_integer(3)]
        assert cert.ring_label == "Z[q]"

    def test_refuses_counterexample(self):
        B = [
            [LaurentPoly(ZZ, {1: 1, 0: 1}), LaurentPoly(ZZ, {0: 2})],
            [LaurentPoly.zero(ZZ), LaurentPoly(ZZ, {1: 1, 0: 1})],
        ]
        with pytest.raises(CertificateError) as err:
            divisible_diag_certificate(B)
        assert err.value.position == (0, 1)

    def test_accepts_divisible_chain(self):
        d = LaurentPoly(ZZ, {1: 1, 0: 1})
        M = [[d, d * d], [LaurentPoly.zero(ZZ), d * d]]
        cert = divisible_diag_certificate(M)
        assert cert.divisors == [canonical(d), canonical(d * d)]

    def test_refuses_lower_entries(self):
        M = [[LaurentPoly.one(ZZ), LaurentPoly.zero(ZZ)], [LaurentPoly.one(ZZ), LaurentPoly.one(ZZ)]]
        with pytest.raises(CertificateError):
            divisible_diag_certificate(M)

    def test_refuses_broken_diagonal_chain(self):
        M = [
            [LaurentPoly(ZZ, {1: 1, 0: 1}), LaurentPoly.zero(ZZ)],
            [LaurentPoly.zero(ZZ), LaurentPoly(ZZ, {2: 1, 0: 1})],
        ]
        with pytest.raises(CertificateError):
            divisible_diag_certificate(M)


class TestMinorIdeals:
    def test_gram_two_one(self):
        from spechtgram.gram import gram_matrix

        g = gram_matrix((2, 1))
        gq = [[to_rational(e) for e in row] for row in g.entries]
        eds = smith_field_laurent([row[:] for row in gq])
        assert minor_ideal_check(gq, eds, 1)
        assert minor_ideal_check(gq, eds, 2)

    def test_gram_exhaustive_small(self):
        from spechtgram.gram import gram_matrix
        from spechtgram.tableaux import partitions_of

        for n in range(2, 6):
            for shape in partitions_of(n):
                g = gram_matrix(shape)
                for label, convert in (
                    ("Q", to_rational),
                    ("F2", lambda e: reduce_mod(e, 2)),
                    ("F3", lambda e: reduce_mod(e, 3)),
                ):
                    m = [[convert(e) for e in row] for row in g.entries]
                    eds = smith_field_laurent([row[:] for row in m])
                    for k in range(1, g.size + 1):
                        assert minor_ideal_check(m, eds, k), (shape, label, k)

    def test_laurent_bareiss_det(self):
        f = to_rational(quantum_integer(3))
        g = to_rational(quantum_integer(2))
        M = [[f, g], [g, f]]
        expect = f * f - g * g
        assert laurent_det_bareiss(M) == expect


class TestCyclotomicFactorizationModP:
    @pytest.mark.parametrize(
        "m,p,count,degree,mult",
        [
            (7, 2, 2, 3, 1),
            (4, 2, 1, 1, 2),
            (3, 3, 1, 1, 2),
            (12, 5, 2, 2, 1),
            (1, 5, 1, 1, 1),
            (5, 2, 1, 4, 1),
        ],
    )
    def test_factor_shapes(self, m, p, count, degree, mult):
        factors = factor_cyclotomic_mod_p(m, p)
        assert len(factors) == count
        assert all(g.span() == degree for g, _ in factors)
        assert all(e == mult for _, e in factors)

    @pytest.mark.parametrize("m,p", [(7, 2), (4, 2), (9, 3), (15, 2), (12, 5), (8, 3)])
    def test_product_reassembles(self, m, p):
        out = LaurentPoly.one(GF(p))
        for g, e in factor_cyclotomic_mod_p(m, p):
            out = out * g**e
        assert canonical(out) == canonical(reduce_mod(cyclotomic(m), p))


class TestObstructions:
    def _example1(self):
        ed_q = ElementaryDivisors(
            "Q",
            [prodQ(Phi(2), Phi(2))]
            + [prodQ(Phi(2), Phi(2), Phi(4))] * 20
            + [prodQ(Phi(2), Phi(2), Phi(3), Phi(4), Phi(5))] * 20
            + [prodQ(Phi(2), Phi(2), Phi(3), Phi(4), Phi(4), Phi(5))],
        )
        ed_p = ElementaryDivisors(
            "Fp:2",
            [prodFp(2, *([Phi(2)] * 3))]
            + [prodFp(2, *([Phi(2)] * 4))] * 20
            + [prodFp(2, *([Phi(2)] * 4 + [Phi(3), Phi(5)]))] * 20
            + [prodFp(2, *([Phi(2)] * 5 + [Phi(3), Phi(5)]))],
        )
        ed_z = ElementaryDivisors("Z", [8] * 21 + [120] * 21)
        return ed_q, ed_p, ed_z

    def test_example1_obstructed(self):
        ed_q, ed_p, ed_z = self._example1()
        rep = modp_obstruction(ed_q, ed_p, 2)
        assert rep.status == "obstructed"
        assert verify_witness(rep)
        rep2 = q1_obstruction(ed_q, ed_z, 2)
        assert rep2.status == "obstructed"
        assert verify_witness(rep2)

    def test_hook_is_unobstructed(self):
        ed_q = ElementaryDivisors(
            "Q", [LaurentPoly.one(QQ)] * 2 + [prodQ(Phi(2), Phi(4))]
        )
        ed_p = ElementaryDivisors(
            "Fp:2", [LaurentPoly.one(GF(2))] * 2 + [prodFp(2, *([Phi(2)] * 3))]
        )
        rep = modp_obstruction(ed_q, ed_p, 2)
        assert rep.status == "no-obstruction"
        assert "no obstruction found by this test" in rep.summary()
        assert verify_witness(rep)

    def test_q1_synthetic_consistent(self):
        rep = q1_obstruction(
            ElementaryDivisors("Q", [LaurentPoly.one(QQ), prodQ(Phi(2))]),
            ElementaryDivisors("Z", [1, 2]),
            2,
        )
        assert rep.status == "no-obstruction"
        assert verify_witness(rep)

    def test_q1_rejects_q_minus_one(self):
        rep = q1_obstruction(
            ElementaryDivisors("Q", [canonical(to_rational(cyclotomic(1)))]),
            ElementaryDivisors("Z", [1]),
            2,
        )
        assert rep.status == "inconclusive"

    def test_q1_detects_deficit(self):
        # q = 1 valuations cannot be smaller than the cyclotomic ones force
        rep = q1_obstruction(
            ElementaryDivisors("Q", [prodQ(Phi(2), Phi(2))]),
            ElementaryDivisors("Z", [2]),
            2,
        )
        assert rep.status == "obstructed"

    def test_q1_slack_absorbed_by_content(self):
        # extra p-valuation at q=1 can sit in integer contents
        rep = q1_obstruction(
            ElementaryDivisors("Q", [prodQ(Phi(2))]),
            ElementaryDivisors("Z", [4]),
            2,
        )
        assert rep.status == "no-obstruction"

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            modp_obstruction(
                ElementaryDivisors("Q", [LaurentPoly.one(QQ)]),
                ElementaryDivisors("Fp:2", [LaurentPoly.one(GF(2))] * 2),
                2,
            )

    def test_non_cyclotomic_inconclusive(self):
        weird = canonical(LPQ({2: 1, 1: 1, 0: 2}))
        rep = modp_obstruction(
            ElementaryDivisors("Q", [weird]),
            ElementaryDivisors("Fp:2", [LaurentPoly.one(GF(2))]),
            2,
        )
        assert rep.status == "inconclusive"
