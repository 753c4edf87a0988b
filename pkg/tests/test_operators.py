"""Truncated shifts, Toeplitz matrices, and the innerness gate."""

import numpy as np
import pytest

from hardylab.grids import TruncationGrid
from hardylab.operators import (
    eval_margins,
    innerness_check,
    shift_matrices,
    shift_matrix,
    spectral_norm,
    toeplitz_matrix,
    windowed_norm,
)
from hardylab.symbols import AnalyticSymbol


def phi_symbol():
    return AnalyticSymbol.rational(
        {(1, 1): 2.0, (1, 0): -1.0, (0, 1): -1.0},
        {(0, 0): 2.0, (1, 0): -1.0, (0, 1): -1.0},
        nvars=2,
    )


def test_shift_action_and_top_slice_drop():
    g = TruncationGrid((1, 1))
    m1 = shift_matrix(g, 0)
    np.testing.assert_array_equal(m1 @ g.basis_vector((0, 0)), g.basis_vector((1, 0)))
    np.testing.assert_array_equal(m1 @ g.basis_vector((0, 1)), g.basis_vector((1, 1)))
    assert np.all(m1 @ g.basis_vector((1, 0)) == 0)


def test_shift_is_isometry_below_top_slice():
    g = TruncationGrid((3, 2))
    for t, m in enumerate(shift_matrices(g)):
        defect = np.eye(g.dim) - m.conj().T @ m
        # defect is exactly the projection onto the top slice in variable t
        want = np.zeros((g.dim, g.dim))
        for i in g.top_slice_indices(t):
            want[i, i] = 1.0
        np.testing.assert_array_equal(defect.real, want)
        np.testing.assert_array_equal(defect.imag, np.zeros_like(want))


def test_truncated_shifts_commute_exactly():
    g = TruncationGrid((3, 2), channels=2)
    m1, m2 = shift_matrices(g)
    assert spectral_norm(m1 @ m2 - m2 @ m1) == 0.0
    assert spectral_norm(m1 @ m2.conj().T - m2.conj().T @ m1) == 0.0


def test_toeplitz_first_column_is_taylor_table():
    g = TruncationGrid((1, 1))
    mt = toeplitz_matrix(phi_symbol(), g)
    np.testing.assert_allclose(mt[:, 0], [0.0, -0.5, -0.5, 0.5], atol=1e-15)


def test_toeplitz_constant_symbol_is_block_diagonal():
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    g = TruncationGrid((2, 1))
    mt = toeplitz_matrix(AnalyticSymbol.constant(u, nvars=2), g)
    np.testing.assert_array_equal(mt, np.kron(np.eye(g.dim), u))


def test_toeplitz_multiplication_is_exact_for_analytic_symbols():
    # lower-triangular structure: no truncation cross terms at all
    g = TruncationGrid((3, 3))
    f = phi_symbol()
    b = AnalyticSymbol.blaschke(0.3, 0, nvars=2)
    lhs = toeplitz_matrix(f, g) @ toeplitz_matrix(b, g)
    rhs = toeplitz_matrix(f.matmul(b), g)
    assert spectral_norm(lhs - rhs) <= 1e-13


def test_toeplitz_intertwines_shift_on_low_columns():
    g = TruncationGrid((6,))
    b = AnalyticSymbol.blaschke(0.5, 0, nvars=1)
    mt = toeplitz_matrix(b, g)
    m = shift_matrix(g, 0)
    for j in range(6):
        lhs = m @ mt[:, g.flat_index((j,))]
        rhs = mt[:, g.flat_index((j + 1,))]
        np.testing.assert_allclose(lhs, rhs, atol=1e-15)


def test_eval_margins_floor_at_one():
    assert eval_margins(AnalyticSymbol.monomial((2, 0))) == (2, 1)
    assert eval_margins(AnalyticSymbol.blaschke(0.5, 0, nvars=2)) == (1, 1)
    assert eval_margins(AnalyticSymbol.constant(np.eye(2), nvars=2)) == (1, 1)


def test_innerness_monomial_exact():
    rep = innerness_check(AnalyticSymbol.monomial((1, 1)), TruncationGrid((4, 4)))
    assert rep.verdict
    assert rep.torus_deviation <= 1e-14
    assert rep.isometry_defect <= 1e-14


def test_innerness_rejects_strict_contraction():
    rep = innerness_check(AnalyticSymbol.monomial((1, 0), scale=0.5), TruncationGrid((4, 4)))
    assert not rep.verdict
    assert rep.torus_deviation == pytest.approx(0.75, abs=1e-12)


def test_innerness_rejects_non_inner_average():
    avg = AnalyticSymbol.polynomial({(1, 0): 0.5, (0, 1): 0.5}, nvars=2)
    rep = innerness_check(avg, TruncationGrid((4, 4)))
    assert not rep.verdict
    assert rep.torus_deviation >= 0.5


def test_innerness_phi_torus_clean_but_tail_slow():
    """The rational inner symbol passes on the torus while its truncated
    multiplication matrix is still visibly non-isometric at small caps."""
    rep = innerness_check(phi_symbol(), TruncationGrid((6, 6)), torus_samples=64)
    assert rep.verdict
    assert rep.torus_deviation <= 1e-10
    assert rep.isometry_defect > 0.1


def test_innerness_blaschke():
    rep = innerness_check(AnalyticSymbol.blaschke(0.5, 0, nvars=2), TruncationGrid((6, 6)))
    assert rep.verdict
    assert rep.torus_deviation <= 1e-14


def test_norm_helpers():
    assert spectral_norm(np.zeros((0, 0))) == 0.0
    a = np.diag([3.0, 1.0, 2.0])
    assert spectral_norm(a) == 3.0
    assert windowed_norm(a, np.array([1, 2])) == 2.0
    assert windowed_norm(a, np.array([1]), col_window=np.array([0])) == 0.0
    assert windowed_norm(a, np.array([], dtype=int)) == 0.0
