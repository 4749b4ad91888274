"""Hecke algebra arithmetic: relations, involutions, structural elements."""

import pytest

from spechtgram.coxeter import Perm, all_perms, reduced_word, young_subgroup
from spechtgram.hecke import (
    HeckeElt,
    antisymmetrizer,
    apply_young_antisymmetrizer,
    basis_inverse,
    coset_antisymmetrizer,
    coset_symmetrizer,
    hecke_from_json,
    hecke_to_json,
    mixed_symmetrizer,
    specht_generator_elt,
    symmetrizer,
)
from spechtgram.qlaurent import ZZ, LaurentPoly
from spechtgram.tableaux import conjugate, partitions_of, weighted_size


def q(e=1, c=1):
    return LaurentPoly.q_power(e, c)


class TestRelations:
    def test_quadratic(self):
        t1 = HeckeElt.generator(3, 1)
        assert t1.times_gen(1) == t1.scale(LaurentPoly(ZZ, {1: 1, 0: -1})) + HeckeElt.one(3).scale(q(1))

    def test_braid(self):
        a = HeckeElt.generator(4, 2).times_gen(3).times_gen(2)
        b = HeckeElt.generator(4, 3).times_gen(2).times_gen(3)
        assert a == b

    def test_commuting(self):
        a = HeckeElt.generator(4, 1).times_gen(3)
        b = HeckeElt.generator(4, 3).times_gen(1)
        assert a == b

    def test_length_additive_product(self):
        assert HeckeElt.generator(3, 1).times_gen(2) == HeckeElt.basis(
            Perm.simple(3, 1) * Perm.simple(3, 2)
        )

    def test_general_multiplication_agrees_with_word_products(self):
        for w in all_perms(3):
            for v in all_perms(3):
                lhs = HeckeElt.basis(w) * HeckeElt.basis(v)
                rhs = HeckeElt.basis(w).times_word(reduced_word(v))
                assert lhs == rhs


class TestInverses:
    def test_generator_inverse(self):
        inv = basis_inverse(Perm.simple(3, 1))
        expect = HeckeElt.generator(3, 1).scale(q(-1)) + HeckeElt.one(3).scale(
            LaurentPoly(ZZ, {-1: 1, 0: -1})
        )
        assert inv == expect

    def test_inverse_of_all_perms(self):
        for w in all_perms(4):
            assert basis_inverse(w).times_basis(w) == HeckeElt.one(4)

    def test_longest_element_leading_term(self):
        # the inverse of the column-reading basis element has the conjugate
        # column-reading element with coefficient q^-len as its top term
        from spechtgram.coxeter import column_reading_permutation

        for parts in [(2, 1), (3, 1), (2, 2)]:
            wl = column_reading_permutation(parts)
            wlc = column_reading_permutation(conjugate(parts).parts)
            inv = basis_inverse(wl)
            assert inv.coefficient(wlc) == q(-wl.length())
            for w in inv.terms:
                assert w == wlc or w.length() < wlc.length()


class TestInvolutions:
    def test_reverse_on_basis(self):
        t12 = HeckeElt.generator(3, 1).times_gen(2)
        t21 = HeckeElt.generator(3, 2).times_gen(1)
        assert t12.reverse_involution() == t21

    def test_sign_on_generator(self):
        h = HeckeElt.generator(4, 2).sign_involution()
        expect = HeckeElt.one(4).scale(LaurentPoly(ZZ, {1: 1, 0: -1})) - HeckeElt.generator(4, 2)
        assert h == expect

    def test_orders(self):
        h = HeckeElt.generator(4, 1).times_gen(2).scale(q(2, 3)) + HeckeElt.one(4)
        assert h.sign_involution().sign_involution() == h
        assert h.reverse_involution().reverse_involution() == h

    def test_antisymmetrizer_fixed_by_reverse(self):
        for parts in [(2, 1), (2, 2), (3, 1)]:
            y = antisymmetrizer(parts, sum(parts))
            assert y.reverse_involution() == y

    def test_sign_involution_lemma(self):
        for n in range(2, 6):
            for shape in partitions_of(n):
                lhs = symmetrizer(shape.parts, n).sign_involution()
                rhs = antisymmetrizer(shape.parts, n).scale(q(weighted_size(conjugate(shape))))
                assert lhs == rhs


class TestStructuralElements:
    def test_two_element_subgroup(self):
        assert symmetrizer((2,), 2) == HeckeElt.one(2) + HeckeElt.generator(2, 1)
        assert antisymmetrizer((2,), 2) == HeckeElt.one(2) - HeckeElt.generator(2, 1).scale(q(-1))

    def test_subgroup_scalars(self):
        x = symmetrizer((2, 1), 3)
        y = antisymmetrizer((2, 1), 3)
        assert x.times_gen(1) == x.scale(q(1))
        assert y.times_gen(1) == y.scale(LaurentPoly.const(-1))

    def test_generator_of_row_shape(self):
        assert specht_generator_elt((3,)) == symmetrizer((3,), 3)

    def test_antisymmetrizer_telescoping(self):
        for mu in [(3,), (2, 2), (3, 2), (4,), (2, 1, 1)]:
            n = sum(mu)
            assert apply_young_antisymmetrizer(HeckeElt.one(n), mu) == antisymmetrizer(mu, n)

    def test_coset_antisymmetrizer_factorization(self):
        for n in range(2, 7):
            for k in range(0, n - 1):
                lhs = antisymmetrizer((k + 1,) + (1,) * (n - k - 1), n)
                rhs = antisymmetrizer((k,) + (1,) * (n - k), n) * coset_antisymmetrizer(k, n)
                assert lhs == rhs

    def test_coset_symmetrizer_factorization(self):
        for n in range(3, 7):
            for k in range(1, n - 1):
                mu = (1, n - k - 1) + (1,) * k
                lhs = symmetrizer((n - k,) + (1,) * k, n)
                rhs = symmetrizer(mu, n) * coset_symmetrizer(n - k, n)
                assert lhs == rhs

    def test_mixed_symmetrizer_terms(self):
        # sum over the Young subgroup with sign/trivial weights
        k, n = 1, 3
        x = mixed_symmetrizer(k, n)
        sub = young_subgroup((1, 2))
        assert set(x.terms) == set(sub)
        for w in sub:
            assert x.coefficient(w) == LaurentPoly.one()
        y = mixed_symmetrizer(2, 3)
        for w in young_subgroup((2, 1)):
            ln = w.length()
            assert y.coefficient(w) == q(-ln, (-1) ** ln)

    def test_json_roundtrip(self):
        h = specht_generator_elt((2, 1))
        assert hecke_from_json(hecke_to_json(h)) == h

    def test_degree_mismatch_rejected(self):
        with pytest.raises(ValueError):
            HeckeElt.one(3) + HeckeElt.one(4)
