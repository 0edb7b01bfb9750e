from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmfduality.exact_core import matmul
from tmfduality.lambda_rep import (
    A_MODULE,
    EquivariantModule,
    GROUP_ELEMENTS,
    IDENTITY,
    L1,
    L2,
    LAMBDA,
    LAMBDA_DUAL,
    LAMBDA_DUAL_SGN,
    LAMBDA_SGN,
    SIGMA,
    TAU,
    GradedPolynomial,
    NotInvariant,
    WindowExceeded,
    a_to_lambda,
    act_on,
    compose,
    discriminant_in_symmetric,
    distinguished_forms,
    lambda_basis,
    localize,
    multiplication_matrix,
    slice_at,
)

MODULES = [LAMBDA, LAMBDA_SGN, LAMBDA_DUAL, LAMBDA_DUAL_SGN]
elements = st.sampled_from(GROUP_ELEMENTS["S3"])


@st.composite
def lambda_polys(draw, nvars=2, max_deg=3):
    coeffs = {}
    for _ in range(draw(st.integers(1, 4))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        coeffs[e] = draw(st.integers(-5, 5))
    return GradedPolynomial.from_dict(coeffs, nvars)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# A grows quadratically in rank, so keep its degrees small
module_degrees = st.one_of(
    st.tuples(st.sampled_from(MODULES), st.integers(-40, 40)),
    st.tuples(st.just(A_MODULE), st.integers(0, 6)),
)


@settings(max_examples=60, deadline=None)
@given(module_degrees)
def test_slices_satisfy_s3_relations(Mk):
    M, k = Mk
    sl = slice_at(M, 4 * k)
    if not sl.rank:
        return
    S, T = [list(r) for r in sl.sigma], [list(r) for r in sl.tau]
    I = _eye(sl.rank)
    assert matmul(S, matmul(S, S)) == I
    assert matmul(T, T) == I
    assert matmul(T, matmul(S, T)) == matmul(S, S)


@settings(max_examples=60, deadline=None)
@given(module_degrees, elements, elements)
def test_slice_matrices_are_a_representation(Mk, g, h):
    M, k = Mk
    sl = slice_at(M, 4 * k)
    if not sl.rank:
        return
    assert sl.matrix(compose(g, h)) == matmul(sl.matrix(g), sl.matrix(h))


@settings(max_examples=60, deadline=None)
@given(lambda_polys(nvars=3), elements)
def test_quotient_map_is_equivariant(p, g):
    assert a_to_lambda(act_on(g, p)) == act_on(g, a_to_lambda(p))


@settings(max_examples=60, deadline=None)
@given(lambda_polys(), lambda_polys(), elements)
def test_action_is_multiplicative(p, q, g):
    assert act_on(g, p * q) == act_on(g, p) * act_on(g, q)


def test_distinguished_forms_relations():
    f = distinguished_forms()
    assert f.c4**3 - f.c6**2 == 1728 * f.Delta
    assert f.Delta == 16 * f.d**2
    assert a_to_lambda(f.sigma1).is_zero()
    assert 32 * a_to_lambda(f.epsilon) == f.c6
    assert -16 * a_to_lambda(f.sigma2) == f.c4
    assert f.epsilon**2 == discriminant_in_symmetric(f.sigma1, f.sigma2, f.sigma3)
    for form, deg in ((f.c4, 8), (f.c6, 12), (f.Delta, 24), (f.d, 12)):
        assert form.is_homogeneous() and form.degree == deg


@pytest.mark.parametrize("g", [SIGMA, TAU])
def test_invariance_of_forms(g):
    f = distinguished_forms()
    for form in (f.c4, f.c6, f.Delta):
        assert act_on(g, form) == form
    assert act_on(g, f.d, sign_twist=True) == f.d
    assert act_on(g, f.epsilon) == f.epsilon


def test_tau_swaps_generators():
    assert act_on(TAU, L1) == L2 and act_on(TAU, L2) == L1
    assert act_on(SIGMA, L1) == L2 - L1
    assert act_on(IDENTITY, L1 * L2) == L1 * L2


def test_ranks():
    assert [LAMBDA.rank(t) for t in (0, 4, 8, 12, 2, -4)] == [1, 2, 3, 4, 0, 0]
    assert LAMBDA_DUAL.rank(-8) == 3
    assert LAMBDA.suspended(9).rank(9) == 1
    assert EquivariantModule("lambda", dual=True, sign=True, shift=-9).rank(-21) == 4
    assert lambda_basis(8) == [(2, 0), (1, 1), (0, 2)]


def test_window_guard():
    with pytest.raises(WindowExceeded):
        slice_at(EquivariantModule(window=40), 44)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([LAMBDA, LAMBDA_SGN]), st.integers(0, 20), elements)
def test_multiplication_by_invariant_commutes_with_action(M, k, g):
    c4 = distinguished_forms().c4
    t = 4 * k
    mult = [list(r) for r in multiplication_matrix(M, c4, t)]
    src, dst = slice_at(M, t), slice_at(M, t + 8)
    assert matmul(dst.matrix(g), mult) == matmul(mult, src.matrix(g))


def test_localization():
    L = localize(LAMBDA, "c4")
    sl = L.slice(0)
    assert sl.ranks == [1, 3, 5, 7, 9]
    assert not L.is_zero
    assert localize(LAMBDA_DUAL, "Delta").is_zero
    assert localize(LAMBDA_DUAL, "Delta").nilpotency_degree(-24) == 2
    with pytest.raises(NotInvariant):
        localize(LAMBDA, L1)
    with pytest.raises(NotInvariant):
        localize(LAMBDA, GradedPolynomial.from_dict({}))
