from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import mf_count, tate_count
from tmfduality.exact_core import FgModule
from tmfduality.group_cohomology import (
    CostGuard,
    bar_oracle,
    cohomology_table,
    coinvariants,
    coinvariants_at,
    dual_cohomology,
    dual_cohomology_at,
    group_cohomology_at,
    homology_at,
    localized_cohomology,
    norm_sequence_check,
    s3_from_c3_at,
)
from tmfduality.lambda_rep import LAMBDA, LAMBDA_DUAL, LAMBDA_DUAL_SGN, LAMBDA_SGN, EquivariantModule, localize

MODULES = [LAMBDA, LAMBDA_SGN, LAMBDA_DUAL, LAMBDA_DUAL_SGN, LAMBDA.suspended(9), LAMBDA_DUAL_SGN.suspended(-9)]
t_values = st.integers(-72, 72)


def _c3_tate_count(s: int, t: int) -> int:
    """F3[a, b^(+-1), d]/(a^2) with a (1,4), b (2,0), d (0,12)."""
    if t < 0:
        return 0
    e = s % 2
    return int(t - 4 * e >= 0 and (t - 4 * e) % 12 == 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(MODULES), st.integers(0, 7), t_values)
def test_fixed_subcomplex_route_matches_c3_subquotients(M, s, t):
    assert group_cohomology_at(M, s, t).same_group(s3_from_c3_at(M, s, t))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([LAMBDA, LAMBDA_SGN]), st.integers(-12, 12), t_values)
def test_tate_is_four_periodic(M, s, t):
    a = group_cohomology_at(M, s, t, tate=True)
    assert a.same_group(group_cohomology_at(M, s + 4, t, tate=True))
    assert a.free_rank == 0 and all(d == 3 for d in a.torsion)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([LAMBDA, LAMBDA_SGN]), st.integers(-9, 9), t_values)
def test_tate_closed_form_negative_degrees(M, s, t):
    want = tate_count(s, t, M.sign)
    assert group_cohomology_at(M, s, t, tate=True).same_group(FgModule(0, (3,) * want))


@settings(max_examples=40, deadline=None)
@given(st.integers(-6, 6), st.integers(0, 24))
def test_c3_tate_cohomology(s, k):
    t = 4 * k
    want = _c3_tate_count(s, t)
    assert group_cohomology_at(LAMBDA, s, t, "C3", tate=True).same_group(FgModule(0, (3,) * want))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30))
def test_c2_invariants_of_lambda(k):
    # tau swaps l1 and l2: orbits of monomials l1^i l2^(n-i)
    n = k
    assert group_cohomology_at(LAMBDA, 0, 4 * n, "C2").free_rank == n // 2 + 1
    assert group_cohomology_at(LAMBDA, 1, 4 * n, "C2").is_zero


def test_ordinary_and_tate_agree_above_zero():
    for s in range(1, 6):
        for t in range(0, 49, 4):
            assert group_cohomology_at(LAMBDA, s, t).same_group(group_cohomology_at(LAMBDA, s, t, tate=True))
    assert group_cohomology_at(LAMBDA, -1, 4).is_zero


def test_twisted_coinvariants():
    """H_0(S3, Lambda_sgn) = d(3, c4, c6) + a b^-1 F3[Delta]; a b^-1 sits in degree 4."""
    for t in range(0, 97):
        tors = (3,) if t >= 4 and (t - 4) % 24 == 0 else ()
        assert coinvariants_at(LAMBDA_SGN, t).same_group(FgModule(mf_count(t - 12), tors)), t


@pytest.mark.parametrize("M", [LAMBDA, LAMBDA_SGN])
def test_norm_sequence_exact(M):
    for t in range(0, 73, 4):
        assert norm_sequence_check(M, t).exact


@pytest.mark.parametrize("M", [LAMBDA, LAMBDA_SGN])
def test_dual_cohomology_routes(M):
    table = dual_cohomology(M, range(0, 5), range(-60, 1))
    # the dual invariants are dual to the ideal (3, c4, c6): same rank as MF
    for t in range(-60, 1, 4):
        direct, via = dual_cohomology_at(M, 0, t)
        assert direct.same_group(via)
    assert table.at(0, -24).free_rank == (mf_count(24) if not M.sign else mf_count(12))


def test_homology_is_tate_in_negative_degrees():
    for h in range(1, 5):
        for t in range(0, 49, 4):
            assert homology_at(LAMBDA, h, t).same_group(group_cohomology_at(LAMBDA, -h - 1, t, tate=True))
    assert homology_at(LAMBDA, -1, 0).is_zero


def test_labels_from_closed_forms():
    tab = cohomology_table(LAMBDA, range(0, 3), range(0, 25))
    assert tab.at(1, 4).labels == ("α",)
    assert tab.at(2, 12).labels == ("β",)
    assert set(tab.at(0, 24).labels) == {"c4^3", "Δ"}
    twisted = cohomology_table(LAMBDA_SGN, [0], [12])
    assert twisted.at(0, 12).labels == ("d",)
    co = coinvariants(LAMBDA, range(0, 17))
    assert co.at(0, 16).labels == ("c4^2", "αβ^-1Δ")
    recs = tab.to_records()
    assert {"s", "t", "freeRank", "torsionDivisors", "basisLabels"} <= set(recs[0])


def test_bar_oracle_guards():
    with pytest.raises(CostGuard):
        bar_oracle(LAMBDA, 4, 4)
    with pytest.raises(CostGuard):
        bar_oracle(LAMBDA, 1, 4 * 45)
    assert bar_oracle(LAMBDA, 2, 12).same_group(FgModule(0, (3,)))


def test_bar_oracle_on_dual_module():
    for t in range(-24, 1, 4):
        for s in range(0, 3):
            assert bar_oracle(LAMBDA_DUAL_SGN, s, t).same_group(group_cohomology_at(LAMBDA_DUAL_SGN, s, t))


def test_delta_localization_keeps_torsion():
    """Delta acts invertibly on the Tate part, so its direct system does not die."""
    r = localized_cohomology(localize(LAMBDA, "Delta"), 1, 4)
    assert all(g.same_group(FgModule(0, (3,))) for g in r.stages)
    assert not r.transitions_vanish


def test_a_module_invariants():
    A = EquivariantModule("A")
    # H^0(C3, A) in degree 0 and 4 (x-degree 1 is sigma_1)
    assert group_cohomology_at(A, 0, 0, "S3").free_rank == 1
    assert group_cohomology_at(A, 0, 4, "C3").free_rank == 1
