"""Partitions, tableaux, pair tableaux, and indexing combinatorics."""

import pytest

from spechtgram.coxeter import Perm
from spechtgram.tableaux import (
    PairTableau,
    Partition,
    Tableau,
    conjugate,
    count_standard_tableaux_hook_formula,
    first_column_index,
    hook_lengths,
    initial_tableau,
    pair_standard_tableaux,
    partitions_of,
    plus_pair,
    standard_tableaux,
    star_pair,
    star_tableau,
    tableau_permutation,
    terminal_tableau,
    weighted_size,
)


class TestPartition:
    def test_parse_and_str(self):
        p = Partition.parse("3,3,2")
        assert p.parts == (3, 3, 2)
        assert str(p) == "3,3,2"
        assert p.n == 8

    def test_rejects_increasing(self):
        with pytest.raises(ValueError):
            Partition((2, 3))

    def test_conjugate(self):
        assert conjugate((4, 3, 2)).parts == (3, 3, 2, 1)
        assert conjugate((5,)).parts == (1, 1, 1, 1, 1)

    def test_conjugate_involution(self):
        for n in range(1, 8):
            for shape in partitions_of(n):
                assert conjugate(conjugate(shape)) == shape

    def test_hooks(self):
        assert Partition((4, 1, 1)).is_hook
        assert Partition((4, 1, 1)).hook_arm == 2
        assert Partition((1,)).is_hook
        assert not Partition((3, 2)).is_hook

    def test_partition_count(self):
        assert sum(1 for _ in partitions_of(7)) == 15


class TestHookLengths:
    def test_single_box(self):
        assert hook_lengths((1,)) == {(1, 1): 1}

    def test_three_two(self):
        hl = hook_lengths((3, 2))
        assert hl == {(1, 1): 4, (1, 2): 3, (1, 3): 1, (2, 1): 2, (2, 2): 1}

    def test_two_two(self):
        assert sorted(hook_lengths((2, 2)).values()) == [1, 2, 2, 3]


class TestWeightedSize:
    def test_values(self):
        assert weighted_size((5,)) == 0
        assert weighted_size((4, 3, 2)) == 7
        assert weighted_size((1,) * 6) == 15

    def test_binomial_formula(self):
        for n in range(1, 8):
            for shape in partitions_of(n):
                alt = sum(c * (c - 1) // 2 for c in conjugate(shape).parts)
                assert weighted_size(shape) == alt

    def test_longest_element_length(self):
        from spechtgram.coxeter import young_subgroup

        for shape in partitions_of(5):
            longest = max(w.length() for w in young_subgroup(conjugate(shape).parts))
            assert weighted_size(shape) == longest


class TestTableaux:
    def test_initial_terminal(self):
        assert initial_tableau((3, 2)).rows == ((1, 2, 3), (4, 5))
        assert terminal_tableau((3, 2)).rows == ((1, 3, 5), (2, 4))

    def test_standard_counts(self):
        assert len(standard_tableaux((3, 2))) == 5
        assert len(standard_tableaux((3, 3, 2))) == 42
        assert len(standard_tableaux((5,))) == 1

    def test_hook_formula_oracle(self):
        for n in range(1, 10):
            for shape in partitions_of(n):
                assert len(standard_tableaux(shape)) == count_standard_tableaux_hook_formula(shape)

    def test_tableau_permutation(self):
        assert tableau_permutation(initial_tableau((3, 2))).is_identity()
        assert tableau_permutation(terminal_tableau((2, 1))) == Perm((1, 3, 2))

    def test_action_roundtrip(self):
        start = initial_tableau((3, 2))
        for t in standard_tableaux((3, 2)):
            assert start.act(tableau_permutation(t)) == t

    def test_transpose_identities(self):
        for shape in [(3, 2), (2, 2, 1), (4, 1)]:
            assert initial_tableau(shape).transpose() == terminal_tableau(conjugate(shape))
            assert terminal_tableau(shape).transpose() == initial_tableau(conjugate(shape))

    def test_hook_order_contract(self):
        # n in first row first, then lexicographic on the first column
        tabs = standard_tableaux((3, 1, 1))
        n = 5
        flags = [t.row_of(n) == 1 for t in tabs]
        switch = flags.index(False)
        assert all(flags[:switch]) and not any(flags[switch:])
        for group in (tabs[:switch], tabs[switch:]):
            cols = [tuple(sorted(t.first_column())) for t in group]
            assert cols == sorted(cols)

    def test_standardness_predicates(self):
        t = Tableau([(1, 3, 5), (2, 4)])
        assert t.is_standard()
        assert Tableau([(2, 3, 4), (1, 5)]).is_row_standard()
        assert not Tableau([(2, 3, 4), (1, 5)]).is_standard()

    def test_json(self):
        t = terminal_tableau((3, 2))
        assert Tableau.from_json(t.to_json()) == t


class TestPairTableaux:
    def test_display_order(self):
        pts = pair_standard_tableaux(1, 4)
        assert [p[0].first for p in pts] == [(1,), (2,), (3,), (4,)]

    def test_count(self):
        assert len(pair_standard_tableaux(2, 5)) == 10
        assert len(pair_standard_tableaux(0, 4)) == 1

    def test_length_is_crossing_count(self):
        pt = PairTableau(4, (4,))
        assert pt.length() == 3
        for pt, perm, ln in pair_standard_tableaux(2, 5):
            assert perm.length() == ln
            assert pt.permutation() == perm

    def test_first_column_index(self):
        tl = terminal_tableau((2, 1))
        idx, flag = first_column_index(PairTableau(3, (2,)), tl)
        assert idx == 1 and flag
        idx, flag = first_column_index(PairTableau(3, (1,)), tl)
        assert idx == 2 and flag
        idx, _ = first_column_index(PairTableau(3, (3,)), tl)
        assert idx is None

    def test_precedence_count_is_k_plus_one(self):
        # the first column has k+1 entries, so k+1 pair tableaux precede t
        for n, k in [(4, 1), (5, 2), (6, 3)]:
            shape = (n - k,) + (1,) * k
            for t in standard_tableaux(shape):
                count = sum(
                    1
                    for pt, _, _ in pair_standard_tableaux(k, n)
                    if first_column_index(pt, t)[0] is not None
                )
                assert count == k + 1

    def test_plus_pair(self):
        assert plus_pair(Partition((2, 1))).first == (3,)
        assert plus_pair(Partition((3, 1, 1))).first == (4, 5)

    def test_plus_pair_length(self):
        for n, k in [(4, 1), (5, 2), (6, 3), (7, 2)]:
            assert plus_pair(Partition((n - k,) + (1,) * k)).length() == k * (n - k)

    def test_star_pair(self):
        tl = terminal_tableau((2, 1))
        assert star_pair(tl).first == (2,)
        assert star_tableau(tl).rows == ((3, 1), (2,))

    def test_star_pair_is_unique_match(self):
        for n, k in [(5, 2), (6, 3)]:
            shape = Partition((n - k,) + (1,) * k)
            for t in standard_tableaux(shape):
                if t.row_of(n) != 1:
                    continue
                sp = star_pair(t)
                ts = star_tableau(t)
                matches = [
                    pt.first
                    for pt, _, _ in pair_standard_tableaux(k, n)
                    if first_column_index(pt, ts) == (first_column_index(pt, ts)[0], True)
                    and first_column_index(pt, ts)[0] is not None
                    and n in pt.second
                ]
                assert matches == [sp.first]
