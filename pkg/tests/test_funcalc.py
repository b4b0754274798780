"""Functional calculus against the SVD/eigendecomposition oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectroid import funcalc as fc
from spectroid.errors import NotNormal, SpectrumMismatch
from spectroid.numkit import op_norm


def rand_rect(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def rand_normal_matrix(rng, n):
    z = rand_rect(rng, n, n)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return q @ np.diag(w) @ q.conj().T


# --- spectrum_of_element ------------------------------------------------------


def test_spectrum_of_row_vector():
    pts = fc.spectrum_of_element(np.array([[3.0, 4.0]]), "A", "B")
    assert np.allclose(pts, [5.0], atol=1e-12)


def test_spectrum_of_diagonal_with_multiplicity():
    pts = fc.spectrum_of_element(np.diag([2.0, 2.0, 3.0]), "A", "A")
    assert np.allclose(pts, [2.0, 3.0], atol=1e-12)


def test_spectrum_of_nilpotent_cross_object():
    x = np.array([[0.0, 1.0], [0.0, 0.0]])
    pts = fc.spectrum_of_element(x, "A", "B")
    assert np.allclose(pts, [1.0], atol=1e-12)


def test_spectrum_same_object_requires_normal():
    x = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotNormal):
        fc.spectrum_of_element(x, "A", "A")


def test_spectrum_of_zero_is_empty():
    assert fc.spectrum_of_element(np.zeros((2, 3)), "A", "B").size == 0


# --- frozen funcalc examples --------------------------------------------------


def test_identity_table_returns_x():
    x = np.array([[3.0, 4.0]])
    f = fc.SpectralFunction.from_table({5.0: 5.0})
    out = fc.funcalc(x, "A", "B", f)
    assert np.allclose(out, x, atol=1e-12)


def test_sqrt_table():
    x = np.array([[3.0, 4.0]])
    f = fc.SpectralFunction.from_table({5.0: np.sqrt(5.0)})
    out = fc.funcalc(x, "A", "B", f)
    assert np.allclose(out, x / np.sqrt(5.0), atol=1e-12)


def test_cube_polynomial_is_matrix_product():
    rng = np.random.default_rng(3)
    x = rand_rect(rng, 6, 4)
    f = fc.SpectralFunction.from_coeffs([0, 0, 0, 1.0])
    out = fc.svd_oracle(x, "A", "B", f)
    assert np.allclose(out, x @ (x.conj().T @ x), atol=1e-9)
    assert np.allclose(fc.funcalc(x, "A", "B", f), out, atol=1e-8)


def test_normal_sign_table():
    x = np.diag([1j, -1j])
    f = fc.SpectralFunction.from_table({1j: 1.0, -1j: -1.0})
    out = fc.svd_oracle(x, "A", "A", f)
    assert np.allclose(out, np.diag([1.0, -1.0]), atol=1e-12)
    assert np.allclose(fc.funcalc(x, "A", "A", f), out, atol=1e-10)


def test_zero_element():
    x = np.zeros((2, 2))
    assert np.allclose(fc.funcalc(x, "A", "B", fc.SpectralFunction()), 0.0)
    with pytest.raises(SpectrumMismatch):
        fc.funcalc(x, "A", "B", fc.SpectralFunction.from_table({1.0: 1.0}))


def test_wrong_table_key_rejected():
    x = np.array([[3.0, 4.0]])
    with pytest.raises(SpectrumMismatch):
        fc.funcalc(x, "A", "B", fc.SpectralFunction.from_table({4.0: 1.0}))
    # superfluous keys are wrong too: the table must cover exactly
    with pytest.raises(SpectrumMismatch):
        fc.funcalc(
            x, "A", "B", fc.SpectralFunction.from_table({5.0: 1.0, 9.0: 2.0})
        )


# --- oracle equivalence -------------------------------------------------------


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_rectangular_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    x = rand_rect(rng, m, n)
    deg = int(rng.integers(1, 6))
    coeffs = np.zeros(deg + 1, dtype=complex)
    coeffs[1:] = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
    f = fc.SpectralFunction.from_coeffs(coeffs)
    got = fc.funcalc(x, "A", "B", f)
    want = fc.svd_oracle(x, "A", "B", f)
    assert op_norm(got - want) <= 1e-8 * (1 + f.max_abs())


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_normal_square_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    x = rand_normal_matrix(rng, n)
    coeffs = np.concatenate(
        [[0], rng.standard_normal(3) + 1j * rng.standard_normal(3)]
    )
    f = fc.SpectralFunction.from_coeffs(coeffs)
    got = fc.funcalc(x, "A", "A", f)
    want = fc.svd_oracle(x, "A", "A", f)
    assert op_norm(got - want) <= 1e-8 * (1 + f.max_abs())


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_identity_function_exact(seed):
    rng = np.random.default_rng(seed)
    x = rand_rect(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)))
    out = fc.funcalc(x, "A", "B", lambda s: s)
    assert op_norm(out - x) <= 1e-10 * (1 + op_norm(x))


def test_rank_deficient_element():
    rng = np.random.default_rng(11)
    # 5x3 of rank 2: both kernels are nontrivial and must be dropped
    x = rand_rect(rng, 5, 2) @ rand_rect(rng, 2, 3)
    f = fc.SpectralFunction.from_coeffs([0, 2.0, 0.5])
    got = fc.funcalc(x, "A", "B", f)
    want = fc.svd_oracle(x, "A", "B", f)
    assert op_norm(got - want) <= 1e-8 * (1 + f.max_abs())


def test_repeated_singular_value():
    # x = 3 * unitary has one class of full rank
    rng = np.random.default_rng(13)
    z = rand_rect(rng, 4, 4)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    x = 3.0 * q
    f = fc.SpectralFunction.from_table({3.0: -1j})
    got = fc.funcalc(x, "A", "B", f)
    assert np.allclose(got, -1j * q, atol=1e-9)


# --- structural properties ----------------------------------------------------


def test_star_functoriality():
    rng = np.random.default_rng(17)
    x = rand_rect(rng, 4, 6)
    f = fc.SpectralFunction.from_coeffs([0, 1.0, 2j, -0.5])

    def f_conj(s):
        return np.conj(f(np.conj(s)))

    lhs = fc.funcalc(x.conj().T, "B", "A", f_conj)
    rhs = fc.funcalc(x, "A", "B", f).conj().T
    assert op_norm(lhs - rhs) <= 1e-9 * (1 + f.max_abs())


def test_isometry_of_the_calculus():
    rng = np.random.default_rng(19)
    x = rand_rect(rng, 5, 5) + np.eye(5) * 0.1
    f = fc.SpectralFunction.from_coeffs([0, 0.3, -1j, 0.2])
    out = fc.funcalc(x, "A", "B", f)
    pts = fc.spectrum_of_element(x, "A", "B")
    best = max(abs(f(complex(s))) for s in pts)
    assert abs(op_norm(out) - best) <= 1e-9 * (1 + best)


def test_indicator_gives_scaled_partial_isometry():
    rng = np.random.default_rng(23)
    x = rand_rect(rng, 4, 4)
    pts = fc.spectrum_of_element(x, "A", "B")
    s = complex(pts[-1])
    table = {complex(p): (s if abs(p - s) < 1e-10 else 0.0) for p in pts}
    f = fc.SpectralFunction.from_table(table)
    out = fc.funcalc(x, "A", "B", f)
    # out = s * u for the singular subspace's partial isometry, so
    # out out* is s^2 times the corresponding spectral projection
    u, sv, vh = np.linalg.svd(x)
    i = int(np.argmin(np.abs(sv - s.real)))
    proj = np.outer(u[:, i], u[:, i].conj())
    assert np.allclose(out @ out.conj().T, (s.real**2) * proj, atol=1e-8)


def test_funcalc_result_in_generated_block():
    from spectroid.cstarcat import generated_by
    from spectroid.numkit import hs_member

    rng = np.random.default_rng(29)
    x = rand_rect(rng, 3, 5)
    f = fc.SpectralFunction.from_coeffs([0, 0, 1.0])
    out = fc.funcalc(x, "A", "B", f)
    cat = generated_by(x)
    member, residual, _ = hs_member(out, cat.block("A", "B"), 1e-9)
    assert member, residual
