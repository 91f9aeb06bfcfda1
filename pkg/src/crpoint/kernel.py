"""Fixed-size complex linear algebra used by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
(2, 2), (3, 3) or (4, 4).  Batched helpers accept a leading axis.

Fractional powers use the principal branch, i.e. the cut is the negative
real axis and ``sqrt(-1) == 1j``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NonFiniteError, NonHermitianError, NonSymmetricError, SingularMatrixError

ABS_FLOOR = 1e-12


def as_matrix(M, n=None) -> np.ndarray:
    """Coerce to a finite complex square array, optionally of size ``n``."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or (n is not None and M.shape[0] != n):
        raise ValueError(f"expected a square {n or ''}x{n or ''} matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteError("matrix has non-finite entries")
    return M


def opnorm(M) -> float:
    """Spectral norm of a single matrix (closed form for 2x2)."""
    M = np.asarray(M)
    if M.shape == (2, 2):
        # scalar version of opnorm2_batch; array overhead dominates at this size
        a, b, c, d = (complex(v) for v in M.ravel())
        m = max(abs(a), abs(b), abs(c), abs(d))
        if m == 0.0 or not math.isfinite(m):
            return m
        a, b, c, d = (complex(v.real / m, v.imag / m) for v in (a, b, c, d))
        fro2 = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
        dt = abs(a * d - b * c)
        return m * math.sqrt(0.5 * (fro2 + math.sqrt(max(fro2 * fro2 - 4.0 * dt * dt, 0.0))))
    return float(np.linalg.norm(M, 2))


def opnorm2_batch(M: np.ndarray) -> np.ndarray:
    """Spectral norms of a stack of 2x2 matrices, in closed form."""
    M = np.asarray(M)
    # pre-scale by the largest entry so the fourth powers below cannot overflow
    c = np.abs(M).max(axis=(-2, -1))
    c_safe = np.where(c > 0, c, 1.0)
    # split division: complex / subnormal-real overflows in the intermediate
    cs = c_safe[..., None, None]
    N = M.real / cs + 1j * (M.imag / cs) if np.iscomplexobj(M) else M / cs
    fro2 = np.sum(np.abs(N) ** 2, axis=(-2, -1))
    d = np.abs(N[..., 0, 0] * N[..., 1, 1] - N[..., 0, 1] * N[..., 1, 0])
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4.0 * d * d, 0.0))
    return c * np.sqrt(0.5 * (fro2 + disc))


def det(M) -> complex:
    """Determinant by cofactor expansion along the first row.

    Used as the brute-force reference; no pivoting, no elimination.
    """
    M = as_matrix(M)
    return _cofactor(M.tolist())


def _cofactor(rows) -> complex:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0j
    for j, a in enumerate(rows[0]):
        if a == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _cofactor(minor)
        total += term if j % 2 == 0 else -term
    return total


def det2(M: np.ndarray) -> np.ndarray:
    return M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]


def inv2(M: np.ndarray) -> np.ndarray:
    """Closed-form inverse of one or many 2x2 matrices (no singularity check)."""
    d = det2(M)
    out = np.empty_like(M)
    out[..., 0, 0] = M[..., 1, 1]
    out[..., 1, 1] = M[..., 0, 0]
    out[..., 0, 1] = -M[..., 0, 1]
    out[..., 1, 0] = -M[..., 1, 0]
    return out / d[..., None, None]


def adjoint(M: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def quadratic_roots(c1: complex, c0: complex) -> tuple[complex, complex]:
    """Both roots of ``x**2 + c1*x + c0``.

    Uses the cancellation-free pairing ``q = -(c1 +- sqrt(disc))/2``,
    ``roots = (q, c0/q)``.  Roots are returned ordered by decreasing real
    part, ties broken by decreasing imaginary part.
    """
    c1 = complex(c1)
    c0 = complex(c0)
    disc = cmath.sqrt(c1 * c1 - 4.0 * c0)
    if (c1.conjugate() * disc).real >= 0:
        q = -0.5 * (c1 + disc)
    else:
        q = -0.5 * (c1 - disc)
    if q == 0:
        r1 = r2 = 0j
    else:
        r1, r2 = q, c0 / q
    return tuple(sorted((r1, r2), key=lambda r: (-r.real, -r.imag)))


def takagi2(B, tol: float = 1e-12) -> tuple[np.ndarray, tuple[float, float]]:
    """Takagi factorization ``B = U diag(s) U^T`` of a complex symmetric 2x2.

    Writing ``B = X + iY``, the positive eigenpairs of the real symmetric
    4x4 matrix ``[[X, Y], [Y, -X]]`` are ``(s_j, (Re u_j, Im u_j))``.  This
    handles equal singular values without special casing.
    """
    B = as_matrix(B, 2)
    scale = 1.0 + float(np.abs(B).max())
    if abs(B[0, 1] - B[1, 0]) > tol * scale:
        raise NonSymmetricError("takagi2 requires a symmetric matrix (B == B^T)")
    B = 0.5 * (B + B.T)
    if float(np.abs(B).max()) == 0.0:
        return np.eye(2, dtype=complex), (0.0, 0.0)
    X, Y = B.real, B.imag
    M = np.block([[X, Y], [Y, -X]])
    w, V = np.linalg.eigh(M)
    U = np.empty((2, 2), dtype=complex)
    s = []
    for col, idx in enumerate((3, 2)):
        v = V[:2, idx] + 1j * V[2:, idx]
        v /= np.linalg.norm(v)
        # the sign of a Takagi vector is its only freedom; fix it
        k = int(np.argmax(np.abs(v)))
        if v[k].real < 0 or (v[k].real == 0 and v[k].imag < 0):
            v = -v
        U[:, col] = v
        s.append(max(float(w[idx]), 0.0))
    return U, (s[0], s[1])


def sqrtm_psd2(M: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 Hermitian positive definite matrix.

    ``sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))``.
    """
    dd = math.sqrt(max(det2(M).real, 0.0))
    tr = M[0, 0].real + M[1, 1].real
    R = (M + dd * np.eye(2)) / math.sqrt(tr + 2.0 * dd)
    return 0.5 * (R + adjoint(R))


def polar2(P) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition ``P = U H`` of an invertible 2x2."""
    P = as_matrix(P, 2)
    nrm = float(np.abs(P).max())
    if abs(det2(P)) <= ABS_FLOOR * max(nrm * nrm, ABS_FLOOR):
        raise SingularMatrixError("polar2 requires an invertible matrix")
    H = sqrtm_psd2(adjoint(P) @ P)
    U = P @ inv2(H)
    return U, H


def unitary_log2(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-basis ``Z`` and principal eigenphases ``phi`` of a 2x2 unitary.

    ``U = Z diag(exp(i phi)) Z^*`` with ``phi`` in ``(-pi, pi]``.
    """
    # complex Schur form of a normal matrix is diagonal
    from scipy.linalg import schur

    T, Z = schur(U, output="complex")
    phi = np.angle(np.diag(T))
    return Z, phi


def check_hermitian(M, tol: float = 1e-10) -> np.ndarray:
    M = as_matrix(M)
    scale = 1.0 + float(np.abs(M).max())
    if float(np.abs(M - adjoint(M)).max()) > tol * scale:
        raise NonHermitianError("matrix is not Hermitian")
    return 0.5 * (M + adjoint(M))


def herm_eigs3(M, tol: float = 1e-10) -> tuple[float, float, float]:
    """Eigenvalues of a 3x3 Hermitian matrix, in descending order."""
    M = check_hermitian(M, tol)
    if M.shape != (3, 3):
        raise ValueError("herm_eigs3 expects a 3x3 matrix")
    w = np.linalg.eigvalsh(M)
    return float(w[2]), float(w[1]), float(w[0])


def herm_eigs_batch(M: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a stack of Hermitian matrices (no checks)."""
    M = 0.5 * (M + adjoint(M))
    return np.linalg.eigvalsh(M)[..., ::-1]
