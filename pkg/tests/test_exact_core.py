from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import odd_cokernel, smith_invariants
from tmfduality.exact_core import (
    DyadicScalar,
    FgModule,
    ImageNotInKernel,
    IntMatrix,
    cokernel_odd,
    kernel_basis,
    matmul,
    matvec,
    presented_homology,
    rank_mod_p,
    rank_over_q,
    smith_normal_form,
    subquotient,
)

entries = st.integers(min_value=-12, max_value=12)


@st.composite
def int_matrices(draw, max_side=5):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    return [draw(st.lists(entries, min_size=n, max_size=n)) for _ in range(m)]


dyadics = st.builds(DyadicScalar, st.integers(-1000, 1000), st.integers(-6, 6))


# --------------------------------------------------------------------------
# Z[1/2]
# --------------------------------------------------------------------------


@given(dyadics, dyadics, dyadics)
def test_dyadic_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a) == DyadicScalar(0)


@given(dyadics)
def test_dyadic_canonical_form(a):
    assert a.numerator == 0 and a.exponent == 0 or a.numerator % 2 == 1
    assert DyadicScalar.of(a.to_fraction()) == a


def test_dyadic_rejects_odd_denominators():
    with pytest.raises(ValueError):
        DyadicScalar.of(Fraction(1, 3))
    assert DyadicScalar.of(Fraction(3, 8)).is_unit() is False
    assert DyadicScalar.of(Fraction(1, 8)).is_unit()


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_snf_is_a_decomposition(rows):
    snf = smith_normal_form(rows)
    M = IntMatrix.from_rows(rows)
    assert snf.U @ M @ snf.V == snf.D
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    assert snf.U @ snf.U_inv == IntMatrix.identity(M.rows)
    assert snf.V @ snf.V_inv == IntMatrix.identity(M.cols)
    diag = [abs(d) for d in snf.diagonal if d]
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    # off-diagonal zero
    D = snf.D.tolist()
    assert all(D[i][j] == 0 for i in range(M.rows) for j in range(M.cols) if i != j)


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_snf_matches_sympy(rows):
    ours = sorted(abs(d) for d in smith_normal_form(rows).diagonal if d)
    assert ours == smith_invariants(rows)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_cokernel_matches_sympy(rows):
    free, tors = odd_cokernel(rows, len(rows))
    assert cokernel_odd(rows).same_group(FgModule.from_divisors(free, tors))


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_ranks_match_sympy(rows):
    M = sympy.Matrix(rows)
    assert rank_over_q(rows) == M.rank()
    assert rank_mod_p(rows, 3) == DomainMatrix.from_Matrix(M).convert_to(GF(3)).rank()


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_kernel_basis_is_saturated(rows):
    n = len(rows[0])
    K = kernel_basis(rows, n)
    for v in K:
        assert not any(matvec(rows, v))
    assert len(K) == n - rank_over_q(rows)


def test_snf_known_example():
    diag = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal
    assert [abs(d) for d in diag] == [2, 6, 12]


# --------------------------------------------------------------------------
# modules and homology
# --------------------------------------------------------------------------


def test_fg_module_normalizes_divisors():
    assert FgModule.from_divisors(1, [3, 9, 6, 2, 5]).torsion == (3, 3, 45)
    assert FgModule.from_divisors(0, [2, 4]).is_zero
    with pytest.raises(ValueError):
        FgModule(0, (3, 5))


@given(st.integers(0, 3), st.lists(st.sampled_from([3, 5, 9, 15]), max_size=4), st.integers(0, 3), st.lists(st.sampled_from([3, 9]), max_size=3))
def test_fg_module_sum_and_record_roundtrip(f1, t1, f2, t2):
    a, b = FgModule.from_divisors(f1, t1), FgModule.from_divisors(f2, t2)
    s = a + b
    assert s.free_rank == f1 + f2
    assert FgModule.from_record(s.to_record()) == s


def test_subquotient_rejects_non_complex():
    with pytest.raises(ImageNotInKernel):
        subquotient([[1, 0]], [[1], [0]])


def test_homology_of_multiplication_by_three():
    # Z --3--> Z --0--> 0 : homology Z/3
    h = presented_homology(1, [[3]], None)
    assert h.module.same_group(FgModule(0, (3,)))
    assert h.classify([1]) == [1]
    assert h.classify([4]) == [1]
    assert h.classify([3]) == [0]


@settings(max_examples=40, deadline=None)
@given(int_matrices(max_side=4))
def test_homology_of_composable_pair(a):
    """H(P0 -f-> P1 -g-> P2) with g f = 0 built as f = a kernel sample."""
    n = len(a[0])
    K = kernel_basis(a, n)
    f_cols = [[sum(v[i] * (j + 1) for j, v in enumerate(K)) for i in range(n)]] if K else []
    h = presented_homology(n, f_cols, a)
    ref = subquotient(a, [list(r) for r in zip(*f_cols)] if f_cols else [[] for _ in range(n)], n)
    assert h.module.same_group(ref)
    # every cycle classifies; boundaries are zero
    for v in h.cycles:
        assert h.classify(list(v)) is not None
    for v in f_cols:
        c = h.classify(v)
        assert all(x == 0 for x in c)


def test_matmul_shapes():
    assert matmul([[1, 2]], [[3], [4]]) == [[11]]
