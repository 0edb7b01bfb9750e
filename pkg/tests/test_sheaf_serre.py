from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmfduality.exact_core import matmul
from tmfduality.lambda_rep import SIGMA, TAU, WindowExceeded, compose
from tmfduality.sheaf_serre import (
    h0_rank,
    h1_action_matrix,
    h1_as_twisted_dual,
    h1_rank,
    koszul_cohomology,
    pairing_equivariance,
    serre_pairing,
)

even_weights = st.integers(-30, 30).map(lambda k: 2 * k)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=40, deadline=None)
@given(st.integers(-60, 60))
def test_koszul_ranks(w):
    c = koszul_cohomology(w)
    assert c.h0.free_rank == h0_rank(w)
    assert c.h1.free_rank == h1_rank(w)
    assert not c.h0.torsion and not c.h1.torsion
    # Serre duality on ranks: H^1(O(w)) ~ H^0(O(-w-4))
    assert h1_rank(w) == h0_rank(-w - 4)


@settings(max_examples=25, deadline=None)
@given(even_weights.filter(lambda w: w <= -4))
def test_h1_action_is_a_representation(w):
    S, T = h1_action_matrix(SIGMA, w), h1_action_matrix(TAU, w)
    I = _eye(len(S))
    assert matmul(S, matmul(S, S)) == I
    assert matmul(T, T) == I
    assert matmul(T, matmul(S, T)) == matmul(S, S)
    assert h1_action_matrix(compose(SIGMA, TAU), w) == matmul(S, T)


def test_orientation_sign_on_canonical_class():
    """tau reverses the cover, so it negates 1/(l1 l2) spanning H^1(O(-4))."""
    assert h1_action_matrix(TAU, -4) == [[-1]]
    assert h1_action_matrix(SIGMA, -4) == [[1]]


@settings(max_examples=25, deadline=None)
@given(even_weights)
def test_h1_is_twisted_dual(w):
    assert h1_as_twisted_dual(w).ok


@pytest.mark.parametrize("w", [0, 2, 8, 24])
def test_pairing_equivariant(w):
    assert serre_pairing(w).is_perfect()
    assert pairing_equivariance(w).ok


def test_pairing_text():
    text = serre_pairing(2).to_text()
    assert text.splitlines()[0].startswith("w=2")
    assert "l1^-2*l2^-1" in text
    assert serre_pairing(-6).to_text() == "w=-6: empty pairing"


def test_odd_weights_vanish():
    c = koszul_cohomology(3)
    assert c.h0.is_zero and c.h1.is_zero
    assert serre_pairing(5).is_perfect()


def test_window_guard():
    with pytest.raises(WindowExceeded):
        koszul_cohomology(400)
