"""Certified divisor pipeline: rank method, determinant certificates,
conjugate duality, hook certificates."""

import pytest

from spechtgram.gram import gram_matrix, GramMatrix
from spechtgram.pipeline import (
    CertificationError,
    certify_divisor_product,
    conjugate_duality,
    det_at_integer_point,
    gram_det_q,
    gram_divisors,
    gram_divisors_fp,
    gram_divisors_q,
    gram_divisors_z1,
    hook_certificate,
)
from spechtgram.qlaurent import (
    GF,
    QQ,
    ZZ,
    LaurentPoly,
    canonical,
    cyclotomic,
    hook_polynomial,
    quantum_integer,
    reduce_mod,
    to_rational,
)
from spechtgram.snf import ElementaryDivisors, jump_format, smith_field_laurent
from spechtgram.tableaux import Partition, partitions_of


class TestDeterminantEvaluation:
    def test_matches_symbolic_det(self):
        g = gram_matrix((2, 1))
        # hand determinant: q + q^2 + q^3
        det = LaurentPoly(ZZ, {3: 1, 2: 1, 1: 1})
        for t in (1, 2, 3, -2):
            assert det_at_integer_point(g.entries, t) == det.evaluate(t)

    def test_gram_det_q(self):
        det = gram_det_q(gram_matrix((2, 1)))
        assert det == to_rational(LaurentPoly(ZZ, {3: 1, 2: 1, 1: 1}))

    def test_certificate_rejects_wrong_chain(self):
        g = gram_matrix((2, 1))
        wrong = ElementaryDivisors(
            "Q", [LaurentPoly.one(QQ), canonical(to_rational(cyclotomic(2)))]
        )
        with pytest.raises(CertificationError):
            certify_divisor_product(g.entries, wrong)

    def test_certificate_accepts_right_chain(self):
        g = gram_matrix((2, 1))
        right = ElementaryDivisors(
            "Q", [LaurentPoly.one(QQ), canonical(to_rational(quantum_integer(3)))]
        )
        unit = certify_divisor_product(g.entries, right)
        assert unit == LaurentPoly.q_power(1, 1, QQ)


class TestDivisorsAgainstDirectElimination:
    @pytest.mark.parametrize("parts", [(2, 1), (3, 2), (2, 2), (3, 1, 1), (2, 2, 1), (4, 2)])
    def test_q_matches_direct(self, parts):
        g = gram_matrix(parts)
        fast = gram_divisors_q(g)
        direct = smith_field_laurent([[to_rational(e) for e in row] for row in g.entries])
        assert fast == direct

    @pytest.mark.parametrize("parts", [(2, 1), (3, 2), (2, 2), (3, 1, 1)])
    @pytest.mark.parametrize("p", [2, 3])
    def test_fp_matches_direct(self, parts, p):
        g = gram_matrix(parts)
        fast = gram_divisors_fp(g, p)
        direct = smith_field_laurent([[reduce_mod(e, p) for e in row] for row in g.entries])
        assert fast == direct

    def test_divisors_divide_hook_polynomial(self):
        from spechtgram.qlaurent import divides

        for parts in [(3, 2), (2, 2, 1), (3, 3)]:
            g = gram_matrix(parts)
            h = canonical(to_rational(hook_polynomial(parts)))
            for d in gram_divisors_q(g).divisors:
                assert divides(d, h)

    def test_dispatch(self):
        g = gram_matrix((2, 1))
        assert gram_divisors(g, "Q") == gram_divisors_q(g)
        assert gram_divisors(g, "Fp:2") == gram_divisors_fp(g, 2)
        assert gram_divisors(g, "Z1") == gram_divisors_z1(g)
        with pytest.raises(ValueError):
            gram_divisors(g, "bogus")


class TestConjugateDuality:
    def test_self_conjugate(self):
        ok, idx = conjugate_duality((2, 1))
        assert ok and idx is None

    def test_pairs(self):
        for parts in [(3, 2), (3, 1), (2, 2), (4, 2)]:
            ok, _ = conjugate_duality(parts)
            assert ok, parts

    def test_full_sweep_small(self):
        for n in range(2, 6):
            for shape in partitions_of(n):
                ok, idx = conjugate_duality(shape)
                assert ok, (shape, idx)


class TestHookCertificate:
    def test_small_hooks(self):
        for n, k in [(3, 1), (4, 1), (4, 2), (5, 2), (6, 3)]:
            report = hook_certificate(n, k)
            assert report["accepted"], (n, k, report.get("error"))
            assert report["matches_prediction"]
            assert report["transition_unimodular_at_1"]

    def test_trivial_cases(self):
        assert hook_certificate(4, 0)["accepted"]
        assert hook_certificate(4, 3)["accepted"]

    def test_predicted_jump_text(self):
        report = hook_certificate(4, 1)
        eds = ElementaryDivisors("Q", [canonical(to_rational(d)) for d in report["certified"]])
        assert jump_format(eds).render() == "→1→ 2 →Φ2Φ4→ 1"
