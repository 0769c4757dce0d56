import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import linalg

from conftest import random_spd
from logstrain.errors import InvalidArgumentError, NotPositiveDefiniteError, OrientationError
from logstrain.math_utils import random_deformation, random_rotation
from logstrain.tensor_kernels import (as_matrix, det, deviatoric, frobenius_norm, log_stretch,
                                      matrix_exp_sym, matrix_log_psym, polar_decompose,
                                      principal_invariants, relative_log_difference, skew, sym,
                                      spherical, sym_eigen, trace)

SAMPLES = 10_000


def _rel(A, B):
    return frobenius_norm(A - B) / np.maximum(frobenius_norm(B), 1e-300)


@pytest.mark.parametrize("n", [2, 3])
def test_exp_log_round_trip(rng, n):
    P, _ = random_spd(rng, n, SAMPLES)
    back = matrix_exp_sym(matrix_log_psym(P))
    assert np.max(_rel(back, P)) <= 1e-9


@pytest.mark.parametrize("n", [2, 3])
def test_log_is_isotropic(rng, n):
    P, _ = random_spd(rng, n, SAMPLES)
    Q = np.stack([random_rotation(rng, n) for _ in range(SAMPLES)])
    rotated = sym(Q @ P @ np.swapaxes(Q, -1, -2))
    lhs = matrix_log_psym(rotated)
    rhs = Q @ matrix_log_psym(P) @ np.swapaxes(Q, -1, -2)
    scale = np.maximum(1.0, frobenius_norm(rhs))
    assert np.max(frobenius_norm(lhs - rhs) / scale) <= 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_trace_of_log_is_log_of_det(rng, n):
    P, lam = random_spd(rng, n, SAMPLES)
    err = np.abs(trace(matrix_log_psym(P)) - np.linalg.slogdet(P)[1])
    cond = lam.max(axis=1) / lam.min(axis=1)
    assert np.all(err <= 1e-10 + 1e-15 * cond)


@pytest.mark.parametrize("n", [2, 3])
def test_polar_factors(rng, n):
    F = np.stack([random_deformation(rng, n, 0.25, 4.0) for _ in range(SAMPLES)])
    polar = polar_decompose(F)
    R, U = polar.R, polar.U
    eye = np.eye(n)
    orth = frobenius_norm(np.swapaxes(R, -1, -2) @ R - eye)
    assert np.max(orth) <= 1e-12
    assert np.all(det(R) > 0)
    assert np.max(_rel(R @ U, F)) <= 1e-12
    assert np.all(sym_eigen(U).eigenvalues[..., -1] > 0)


def test_polar_matches_scipy(rng):
    for n in (2, 3):
        for _ in range(20):
            F = random_deformation(rng, n, 0.25, 4.0)
            R_ref, U_ref = linalg.polar(F, side='right')
            polar = polar_decompose(F)
            np.testing.assert_allclose(polar.R, R_ref, atol=1e-12)
            np.testing.assert_allclose(polar.U, U_ref, atol=1e-11)


def test_log_and_exp_match_scipy(rng):
    for n in (2, 3):
        P, _ = random_spd(rng, n, 20, 0.1, 10.0)
        for A in P:
            np.testing.assert_allclose(matrix_log_psym(A), linalg.logm(A).real, atol=1e-10)
            S = matrix_log_psym(A)
            np.testing.assert_allclose(matrix_exp_sym(S), linalg.expm(S), rtol=1e-11, atol=1e-12)


def test_log_near_identity_keeps_digits():
    X = 1e-9 * np.array([[0.3, -0.7], [-0.7, 0.1]])
    series = X - 0.5 * X @ X + X @ X @ X / 3.0
    assert np.max(np.abs(matrix_log_psym(np.eye(2) + X) - series)) <= 4e-15


def test_log_of_scalar_matrix():
    np.testing.assert_allclose(matrix_log_psym(4.0 * np.eye(3)), np.log(4.0) * np.eye(3), atol=1e-15)
    np.testing.assert_allclose(matrix_log_psym(np.eye(2)), np.zeros((2, 2)), atol=0.0)


def test_relative_log_difference_limits():
    assert relative_log_difference(2.0, 2.0) == pytest.approx(0.5, rel=1e-15)
    assert relative_log_difference(3.0, 1.0) == pytest.approx(np.log(3.0) / 2.0, rel=1e-14)
    # 跨过级数阈值两侧连续
    below = relative_log_difference(1.0 + 0.99e-3, 1.0 - 0.99e-3)
    above = relative_log_difference(1.0 + 1.01e-3, 1.0 - 1.01e-3)
    assert below == pytest.approx(above, rel=1e-6)


@pytest.mark.parametrize("P", [np.diag([1.0, -1.0]), np.diag([1.0, 0.0]), np.diag([2.0, 1.0, -3.0])])
def test_log_rejects_indefinite(P):
    with pytest.raises(NotPositiveDefiniteError) as info:
        matrix_log_psym(P)
    assert info.value.eigenvalue <= 0


@pytest.mark.parametrize("A", [
    np.array([[1.0, 2.0], [0.0, 1.0]]),
    np.eye(4),
    np.array([[np.nan, 0.0], [0.0, 1.0]]),
    np.ones(3),
])
def test_as_matrix_rejects_bad_input(A):
    with pytest.raises(InvalidArgumentError):
        as_matrix(A, symmetric=True)


def test_log_stretch_orientation():
    with pytest.raises(OrientationError) as info:
        log_stretch(np.diag([1.0, -2.0]))
    assert info.value.det == pytest.approx(-2.0)
    with pytest.raises(OrientationError):
        polar_decompose(np.diag([1.0, 1.0, -1.0]))


def test_eigen_order_and_signs():
    eig = sym_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(eig.eigenvalues, [3.0, 1.0], rtol=1e-15)
    assert np.all(eig.eigenvectors[0] > 0)
    eig3 = sym_eigen(np.diag([1.0, 5.0, 3.0]))
    np.testing.assert_allclose(eig3.eigenvalues, [5.0, 3.0, 1.0], rtol=1e-14)


symmetric_entries = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_subnormal=False)


@settings(max_examples=200, deadline=None)
@given(A=arrays(np.float64, (3, 3), elements=symmetric_entries))
def test_eigen_reconstructs_3d(A):
    A = sym(A)
    eig = sym_eigen(A)
    scale = max(1.0, float(frobenius_norm(A)))
    assert float(frobenius_norm(eig.reconstruct() - A)) <= 1e-10 * scale
    Q = eig.eigenvectors
    assert float(frobenius_norm(Q.T @ Q - np.eye(3))) <= 1e-10
    assert np.all(np.diff(eig.eigenvalues) <= 1e-12 * scale)


@settings(max_examples=200, deadline=None)
@given(A=arrays(np.float64, (2, 2), elements=symmetric_entries))
def test_eigen_reconstructs_2d(A):
    A = sym(A)
    eig = sym_eigen(A)
    scale = max(1.0, float(frobenius_norm(A)))
    assert float(frobenius_norm(eig.reconstruct() - A)) <= 1e-12 * scale


def test_invariants_and_projections(rng):
    for n in (2, 3):
        A = rng.standard_normal((n, n))
        lam = np.linalg.eigvals(A)
        I1, I2, I3 = principal_invariants(A)
        assert I1 == pytest.approx(np.sum(lam).real)
        assert I3 == pytest.approx(np.prod(lam).real)
        pairs = sum(lam[i] * lam[j] for i in range(n) for j in range(i + 1, n))
        assert I2 == pytest.approx(pairs.real)
        assert trace(deviatoric(A)) == pytest.approx(0.0, abs=1e-14)
        np.testing.assert_allclose(deviatoric(A) + spherical(A), A, atol=1e-15)
        np.testing.assert_allclose(sym(A) + skew(A), A, atol=1e-15)
