import numpy as np
import pytest
from hypothesis import given

from crpoint import kernel
from crpoint.errors import NonHermitianError, NonSymmetricError, SingularMatrixError

from conftest import complex_matrices, invertible_matrices


def test_det_identity_and_block_examples():
    assert kernel.det(np.eye(2)) == pytest.approx(1.0)
    A = np.diag([1.0, 0.0])
    B = np.diag([0.0, 1.0])
    M = np.block([[A, B.conj()], [B, A.conj()]])
    assert kernel.det(M) == pytest.approx(-1.0)
    Z, I = np.zeros((2, 2)), np.eye(2)
    assert kernel.det(np.block([[Z, I], [I, Z]])) == pytest.approx(1.0)


@given(complex_matrices(n=4))
def test_det4_cofactor_matches_lu(M):
    ref = np.linalg.det(M)
    assert abs(kernel.det(M) - ref) <= 1e-9 * max(1.0, np.abs(M).max()) ** 4


@given(complex_matrices(n=3))
def test_det3_matches_lu(M):
    assert abs(kernel.det(M) - np.linalg.det(M)) <= 1e-10 * max(1.0, np.abs(M).max()) ** 3


@given(complex_matrices(), complex_matrices(symmetric=True))
def test_block_determinant_is_real(A, B):
    M = np.block([[A, B.conj()], [B, A.conj()]])
    scale = (1 + np.linalg.norm(A, 2) + np.linalg.norm(B, 2)) ** 4
    assert abs(kernel.det(M).imag) < 1e-10 * scale


@pytest.mark.parametrize(
    "c1, c0, expected",
    [(-2, 1, [1, 1]), (0, -1, [1, -1])],
)
def test_quadratic_roots_simple(c1, c0, expected):
    r = kernel.quadratic_roots(c1, c0)
    assert sorted(np.round(np.real(r), 12)) == sorted(expected)


def test_quadratic_roots_from_cosquare():
    A = np.array([[0, 1], [0.5, 0]], dtype=complex)
    C = np.linalg.solve(A.conj().T, A)
    r = kernel.quadratic_roots(-np.trace(C), np.linalg.det(C))
    assert sorted(abs(x) for x in r) == pytest.approx([0.5, 2.0])


@given(st_c1=complex_matrices(n=1), st_c0=complex_matrices(n=1))
def test_quadratic_roots_residual(st_c1, st_c0):
    c1, c0 = complex(st_c1[0, 0]), complex(st_c0[0, 0])
    for lam in kernel.quadratic_roots(c1, c0):
        assert abs(lam * lam + c1 * lam + c0) <= 1e-12 * max(1.0, abs(lam) ** 2)


def _check_takagi(B, U, s):
    assert s[0] >= s[1] >= 0
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-10)
    np.testing.assert_allclose(U @ np.diag(s) @ U.T, B, atol=1e-10 * max(1.0, s[0]))


def test_takagi_examples():
    U, s = kernel.takagi2(np.zeros((2, 2)))
    assert s == (0.0, 0.0)
    np.testing.assert_allclose(U, np.eye(2))
    B = np.diag([-2.0, 3.0]).astype(complex)
    U, s = kernel.takagi2(B)
    assert s == pytest.approx((3.0, 2.0))
    _check_takagi(B, U, s)
    B = np.array([[0, 1], [1, 0]], dtype=complex)
    U, s = kernel.takagi2(B)
    assert s == pytest.approx((1.0, 1.0))
    _check_takagi(B, U, s)


@given(complex_matrices(symmetric=True))
def test_takagi_reconstruction(B):
    U, s = kernel.takagi2(B)
    _check_takagi(B, U, s)


def test_takagi_rejects_nonsymmetric():
    with pytest.raises(NonSymmetricError):
        kernel.takagi2(np.array([[0, 1], [0, 0]], dtype=complex))


def test_polar_examples():
    U, H = kernel.polar2(2 * np.eye(2))
    np.testing.assert_allclose(U, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(H, 2 * np.eye(2), atol=1e-12)
    S = np.array([[0, 1], [1, 0]], dtype=complex)
    U, H = kernel.polar2(S)
    np.testing.assert_allclose(U, S, atol=1e-12)
    np.testing.assert_allclose(H, np.eye(2), atol=1e-12)
    with pytest.raises(SingularMatrixError):
        kernel.polar2(np.ones((2, 2)))


@given(invertible_matrices())
def test_polar_reconstruction(P):
    U, H = kernel.polar2(P)
    np.testing.assert_allclose(U @ H, P, atol=1e-10 * max(1.0, np.abs(P).max()))
    np.testing.assert_allclose(H, H.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(H).min() > 0


def test_herm_eigs3_examples():
    assert kernel.herm_eigs3(np.diag([0.0, 0.0, 1.0])) == pytest.approx((1.0, 0.0, 0.0))
    assert kernel.herm_eigs3(np.eye(3)) == pytest.approx((1.0, 1.0, 1.0))
    L = np.array([[2, 0, -1], [0, 0, 0], [-1, 0, 1]], dtype=complex)
    r5 = np.sqrt(5.0)
    assert kernel.herm_eigs3(L) == pytest.approx(((3 + r5) / 2, (3 - r5) / 2, 0.0), abs=1e-12)
    with pytest.raises(NonHermitianError):
        kernel.herm_eigs3(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex))


@given(complex_matrices(n=3))
def test_herm_eigs3_trace_and_det(M):
    H = M + M.conj().T
    ev = kernel.herm_eigs3(H)
    assert list(ev) == sorted(ev, reverse=True)
    assert sum(ev) == pytest.approx(np.trace(H).real, abs=1e-10 * max(1.0, np.abs(H).max()))
    assert np.prod(ev) == pytest.approx(np.linalg.det(H).real, abs=1e-8 * max(1.0, np.abs(H).max()) ** 3)


def test_bulk_reconstruction_sweep(rng):
    n = 10_000
    B = rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))
    worst = 0.0
    for M in B[:2000]:
        S = 0.5 * (M + M.T)
        U, s = kernel.takagi2(S)
        worst = max(worst, np.abs(U @ np.diag(s) @ U.T - S).max())
        Up, H = kernel.polar2(M)
        worst = max(worst, np.abs(Up @ H - M).max())
    assert worst < 1e-10
