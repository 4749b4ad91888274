"""Acceptance suite.

One test per criterion; each prints a single pass/fail line (visible under
`pytest -s`).  Expensive objects (Gram matrices, divisor chains) are shared
across criteria through session fixtures.
"""

import math
import time

import pytest

from spechtgram.gram import (
    gram_matrix,
    gram_rank_at,
    hook_elementary_divisors,
)
from spechtgram.pipeline import (
    certify_divisor_product,
    gram_divisors_fp,
    gram_divisors_q,
    gram_divisors_z1,
    hook_certificate,
)
from spechtgram.qlaurent import (
    GF,
    QQ,
    LaurentPoly,
    canonical,
    eval_at_one,
    hook_polynomial,
    reduce_mod,
    to_integer,
    to_rational,
)
from spechtgram.snf import (
    bareiss_det_int,
    jump_format,
    modp_obstruction,
    q1_obstruction,
    verify_witness,
)
from spechtgram.tableaux import Partition, partitions_of
from spechtgram.verify import identity_suite

TABLE_ROWS = [
    (4, (2, 2), "→Φ2→ 1 →Φ3→ 1"),
    (5, (3, 2), "→1→ 1 →Φ3→ 3 →Φ4→ 1"),
    (6, (4, 2), "→1→ 4 →Φ4→ 1 →Φ2→ 3 →Φ5→ 1"),
    (6, (3, 3), "→Φ2→ 1 →Φ3→ 3 →Φ4→ 1"),
    (6, (3, 2, 1), "→1→ 4 →Φ3→ 4 →Φ5→ 4 →Φ3→ 4"),
    (7, (5, 2), "→1→ 8 →Φ5→ 5 →Φ3Φ6→ 1"),
    (7, (4, 3), "→1→ 1 →Φ3→ 7 →Φ4→ 5 →Φ5→ 1"),
    (7, (3, 3, 1), "→Φ2→ 6 →Φ3→ 2 →Φ5→ 12 →Φ4→ 1"),
    (8, (6, 2), "→1→ 13 →Φ3Φ6→ 1 →Φ2→ 5 →Φ7→ 1"),
    (8, (5, 3), "→1→ 8 →Φ4→ 6 →Φ2→ 7 →Φ5→ 6 →Φ6→ 1"),
    (8, (4, 4), "→Φ2→ 1 →Φ3→ 7 →Φ4→ 5 →Φ5→ 1"),
    (9, (7, 2), "→1→ 19 →Φ7→ 7 →Φ4Φ8→ 1"),
    (9, (6, 3), "→1→ 21 →Φ5→ 19 →Φ6→ 1 →Φ3→ 6 →Φ7→ 1"),
    (9, (5, 4), "→1→ 1 →Φ3→ 15 →Φ4→ 18 →Φ5→ 7 →Φ6→ 1"),
]

EXAMPLE1_Q = "→Φ2^2→ 1 →Φ4→ 20 →Φ3Φ5→ 20 →Φ4→ 1"
EXAMPLE1_F2 = "→Φ2^3→ 1 →Φ2→ 20 →Φ3Φ5→ 20 →Φ2→ 1"
EXAMPLE1_Z = "→2^3→ 21 →3·5→ 21"

EXAMPLE2_Q = "→Φ2→ 14 →Φ2→ 1 →Φ4→ 30 →Φ7→ 30 →Φ4→ 1 →Φ2→ 14"
EXAMPLE2_F2 = "→Φ2→ 14 →Φ2^2→ 1 →Φ2→ 30 →Φ7→ 30 →Φ2→ 1 →Φ2^2→ 14"
EXAMPLE2_F3 = "→Φ2→ 13 →Φ2→ 2 →Φ4→ 30 →Φ7→ 30 →Φ4→ 2 →Φ2→ 13"
EXAMPLE2_Z = "→2→ 14 →2^2→ 31 →7→ 31 →2^2→ 14"

HOOK_N_MAX = 9
DUALITY_N_MAX = 7


class Store:
    """Session-wide computation cache."""

    def __init__(self):
        self.grams = {}
        self.divisors = {}

    def gram(self, parts):
        parts = tuple(parts)
        if parts not in self.grams:
            self.grams[parts] = gram_matrix(parts)
        return self.grams[parts]

    def eds(self, parts, ring):
        key = (tuple(parts), ring)
        if key not in self.divisors:
            g = self.gram(parts)
            if ring == "Q":
                self.divisors[key] = gram_divisors_q(g)
            elif ring.startswith("Fp:"):
                self.divisors[key] = gram_divisors_fp(g, int(ring[3:]))
            else:
                self.divisors[key] = gram_divisors_z1(g)
        return self.divisors[key]


@pytest.fixture(scope="session")
def store():
    return Store()


def report(number, ok, text):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number}: {text}")
    assert ok, f"criterion {number}: {text}"


def test_criterion_1_table_reproduction(store):
    start = time.monotonic()
    mismatches = []
    for n, parts, expected in TABLE_ROWS:
        got = jump_format(store.eds(parts, "Q")).render()
        if got != expected:
            mismatches.append((parts, got, expected))
    elapsed = time.monotonic() - start
    ok = not mismatches and elapsed < 600
    report(
        1,
        ok,
        f"all {len(TABLE_ROWS)} table rows over Q match the reference "
        f"({elapsed:.1f}s, budget 600s)" + (f"; mismatches {mismatches}" if mismatches else ""),
    )


def test_criterion_2_example_332(store):
    parts = (3, 3, 2)
    got_q = jump_format(store.eds(parts, "Q")).render()
    got_f2 = jump_format(store.eds(parts, "Fp:2")).render()
    got_z = jump_format(store.eds(parts, "Z1")).render()
    rep_p = modp_obstruction(store.eds(parts, "Q"), store.eds(parts, "Fp:2"), 2)
    rep_z = q1_obstruction(store.eds(parts, "Q"), store.eds(parts, "Z1"), 2)
    ok = (
        got_q == EXAMPLE1_Q
        and got_f2 == EXAMPLE1_F2
        and got_z == EXAMPLE1_Z
        and rep_p.status == "obstructed"
        and rep_z.status == "obstructed"
        and verify_witness(rep_p)
        and verify_witness(rep_z)
    )
    report(
        2,
        ok,
        "(3,3,2) divisors over Q, F2, Z at q=1 match and both obstruction "
        f"tests return obstructed at p=2 [{got_q} | {got_f2} | {got_z}]",
    )


def test_criterion_3_example_4211(store):
    parts = (4, 2, 1, 1)
    got_q = jump_format(store.eds(parts, "Q")).render()
    got_f2 = jump_format(store.eds(parts, "Fp:2")).render()
    got_f3 = jump_format(store.eds(parts, "Fp:3")).render()
    got_z = jump_format(store.eds(parts, "Z1")).render()
    rep_p2 = modp_obstruction(store.eds(parts, "Q"), store.eds(parts, "Fp:2"), 2)
    rep_p3 = modp_obstruction(store.eds(parts, "Q"), store.eds(parts, "Fp:3"), 3)
    rep_z2 = q1_obstruction(store.eds(parts, "Q"), store.eds(parts, "Z1"), 2)
    rep_z3 = q1_obstruction(store.eds(parts, "Q"), store.eds(parts, "Z1"), 3)
    ok = (
        got_q == EXAMPLE2_Q
        and got_f2 == EXAMPLE2_F2
        and got_f3 == EXAMPLE2_F3
        and got_z == EXAMPLE2_Z
        and rep_p2.status == "obstructed"
        and rep_p3.status == "obstructed"
        and rep_z2.status == "obstructed"
        # at p=3 the q=1 comparison carries no 3-power information
        and rep_z3.status == "no-obstruction"
        and all(verify_witness(r) for r in (rep_p2, rep_p3, rep_z2, rep_z3))
    )
    report(
        3,
        ok,
        "(4,2,1,1) divisors over Q, F2, F3, Z at q=1 match; obstructed at "
        "p=2 (both tests) and p=3 (mod-p test)",
    )


def test_criterion_4_hook_theorem(store):
    failures = []
    for n in range(1, HOOK_N_MAX + 1):
        for k in range(0, n):
            parts = (n - k,) + (1,) * k
            predicted = hook_elementary_divisors(n, k)
            count_small = math.comb(n - 2, k) if 0 <= k <= n - 2 else 0
            count_large = math.comb(n - 2, k - 1) if k >= 1 else 0
            if len(predicted) != count_small + count_large:
                failures.append((n, k, "count"))
                continue
            if n >= 2:
                rep = hook_certificate(n, k)
                if not rep["accepted"]:
                    failures.append((n, k, rep.get("error", "certificate rejected")))
                    continue
            eq = store.eds(parts, "Q")
            if eq.divisors != [canonical(to_rational(d)) for d in predicted]:
                failures.append((n, k, "Q divisors"))
                continue
            for p in (2, 3):
                ep = store.eds(parts, f"Fp:{p}")
                if ep.divisors != [canonical(reduce_mod(d, p)) for d in predicted]:
                    failures.append((n, k, f"F{p} divisors"))
    ok = not failures
    report(
        4,
        ok,
        f"hook certificates and independent divisor computations over Q, F2, F3 "
        f"agree with the binomial prediction for all 0 <= k < n <= {HOOK_N_MAX}"
        + (f"; failures {failures}" if failures else ""),
    )


def test_criterion_5_conjugate_duality(store):
    failures = []
    for n in range(1, DUALITY_N_MAX + 1):
        for shape in partitions_of(n):
            from spechtgram.tableaux import conjugate

            e1 = store.eds(shape.parts, "Q")
            e2 = store.eds(conjugate(shape).parts, "Q")
            h = canonical(to_rational(hook_polynomial(shape)))
            m = e1.size
            for i in range(m):
                if canonical(e1.divisors[i] * e2.divisors[m - 1 - i]) != h:
                    failures.append((shape.parts, i))
                    break
    ok = not failures
    report(
        5,
        ok,
        f"mirrored divisor products equal the hook polynomial up to units for "
        f"all partitions of n <= {DUALITY_N_MAX}"
        + (f"; failures {failures}" if failures else ""),
    )


def test_criterion_6_identity_suite():
    results = identity_suite(9)
    bad = [r for r in results if not r.ok]
    ok = not bad
    report(
        6,
        ok,
        f"identity suite: {len(results) - len(bad)}/{len(results)} checks pass"
        + (f"; failing {[r.name for r in bad]}" if bad else ""),
    )


def test_criterion_7_specialization_consistency(store):
    failures = []
    # determinant vs divisor product, over Q, for every matrix of criteria 1-4
    shapes = {parts for _, parts, _ in TABLE_ROWS}
    shapes.add((3, 3, 2))
    shapes.add((4, 2, 1, 1))
    for n in range(2, HOOK_N_MAX + 1):
        for k in range(0, n):
            shapes.add((n - k,) + (1,) * k)
    for parts in sorted(shapes):
        try:
            certify_divisor_product(store.gram(parts).entries, store.eds(parts, "Q"))
        except Exception as err:  # noqa: BLE001 - recorded as a failure
            failures.append((parts, str(err)))
    # for hooks the chain is certified over Z[q,1/q], so the q = 1
    # specialization commutes with the Smith form
    for n in range(2, HOOK_N_MAX + 1):
        for k in range(0, n):
            parts = (n - k,) + (1,) * k
            predicted = hook_elementary_divisors(n, k)
            specialized = sorted(int(eval_at_one(d)) for d in predicted)
            integral = store.eds(parts, "Z1").divisors
            if sorted(integral) != specialized:
                failures.append((parts, "q=1 specialization"))
    # integer cross-check of the determinant at q = 1 for small hooks
    for n in range(2, 9):
        for k in range(0, min(n, 4)):
            parts = (n - k,) + (1,) * k
            g = store.gram(parts)
            det1 = bareiss_det_int([[int(eval_at_one(e)) for e in row] for row in g.entries])
            from spechtgram.pipeline import gram_det_q

            detq = gram_det_q(g)
            if abs(det1) != abs(eval_at_one(detq)):
                failures.append((parts, "determinant at q=1"))
    ok = not failures
    report(
        7,
        ok,
        "divisor products match exact determinants over Q; hook divisor "
        "chains specialize to the integer Smith form at q=1"
        + (f"; failures {failures}" if failures else ""),
    )


def test_criterion_8_simple_module_dimension(store):
    failures = []
    for n, p in [(3, 3), (4, 2), (5, 5), (6, 3)]:
        for k in range(0, min(p, n)):
            parts = (n - k,) + (1,) * k
            rank = gram_rank_at(parts, GF(p), 1, gram=store.gram(parts))
            expected = math.comb(n - 2, k) if k <= n - 2 else 0
            if rank != expected:
                failures.append((n, p, k, rank, expected))
    ok = not failures
    report(
        8,
        ok,
        "Gram ranks at q=1 over F_p equal binom(n-2, k) whenever p | n and "
        "p > k" + (f"; failures {failures}" if failures else ""),
    )
