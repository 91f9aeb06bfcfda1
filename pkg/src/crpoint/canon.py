"""*-cosquare classification and h-congruence normal forms of 2x2 pairs.

For invertible ``A = [[a, b], [c, d]]`` put ``Delta = ad - bc`` and
``S = a conj(d) + conj(a) d - |b|^2 - |c|^2`` (a real number).  The
cosquare ``A^{-*} A`` has characteristic polynomial

    x^2 - S / conj(Delta) x + Delta / conj(Delta)

and ``sigma = S / |Delta|`` is a complete h-congruence invariant of ``A`` on
the generic strata:

* ``|sigma| < 2``  -> TypeI,   A ~ diag(1, e^{i theta}),  cos(theta) = sigma/2
* ``|sigma| > 2``  -> TypeIII, A ~ [[0, 1], [mu, 0]],     mu + 1/mu = -sigma

(``sigma <= 2`` always holds, so TypeIII means ``sigma < -2``.)
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import DegenerateA, NonGeneric
from .pairs import GroupElement, MatrixPair, act, compose
from .jsonio import matrix_to_json

DEFAULT_TOL = 1e-7


class CosquareTag(str, enum.Enum):
    TYPE_I = "type_i"
    TYPE_II = "type_ii"
    TYPE_III = "type_iii"
    BOUNDARY_THETA_ZERO = "boundary_theta_zero"
    BOUNDARY_THETA_PI = "boundary_theta_pi"
    NEAR_BOUNDARY = "near_boundary"


@dataclass(frozen=True)
class CosquareClass:
    tag: CosquareTag
    theta: float | None = None
    mu: float | None = None
    defect: float | None = None
    sigma: float | None = None

    @property
    def generic(self) -> bool:
        return self.tag in (CosquareTag.TYPE_I, CosquareTag.TYPE_III)

    def to_json(self) -> dict:
        out = {"tag": self.tag.value}
        for key in ("theta", "mu", "defect", "sigma"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def _entries(A):
    A = np.asarray(A, dtype=complex)
    return A[0, 0], A[0, 1], A[1, 0], A[1, 1]


def _check_invertible(A, rel: float = 1e-12):
    A = kernel.as_matrix(A, 2)
    n = kernel.opnorm(A)
    if n == 0.0 or abs(kernel.det2(A)) <= rel * n * n:
        raise DegenerateA("A is singular")
    return A


def cosquare(A) -> np.ndarray:
    """A^{-*} A."""
    A = _check_invertible(A)
    return kernel.inv2(kernel.adjoint(A)) @ A


def char_poly_coeffs(A) -> tuple[complex, complex]:
    """(c1, c0) with the cosquare's characteristic polynomial x^2 + c1 x + c0."""
    a, b, c, d = _entries(A)
    delta = a * d - b * c
    S = (a * d.conjugate() + a.conjugate() * d).real - abs(b) ** 2 - abs(c) ** 2
    return -S / delta.conjugate(), delta / delta.conjugate()


def sigma_invariant(A) -> float:
    a, b, c, d = _entries(A)
    delta = a * d - b * c
    S = (a * d.conjugate() + a.conjugate() * d).real - abs(b) ** 2 - abs(c) ** 2
    return float(S / abs(delta))


def genericity_defect(A) -> float:
    """| |a conj(d) + conj(a) d - |c|^2 - |b|^2| - 2|ad - bc| |."""
    a, b, c, d = _entries(A)
    S = (a * d.conjugate() + a.conjugate() * d).real - abs(b) ** 2 - abs(c) ** 2
    return float(abs(abs(S) - 2.0 * abs(a * d - b * c)))


def classify_cosquare(A, tol: float = DEFAULT_TOL) -> CosquareClass:
    A = _check_invertible(A)
    A = A / kernel.opnorm(A)
    sigma = sigma_invariant(A)
    t = abs(sigma)
    if t < 2.0 - tol:
        return CosquareClass(CosquareTag.TYPE_I, theta=math.acos(sigma / 2.0), sigma=sigma)
    if t > 2.0 + tol:
        mu = float(2.0 / (t + math.sqrt(t * t - 4.0)))
        return CosquareClass(CosquareTag.TYPE_III, mu=mu, sigma=sigma)
    # |t - 2| <= tol: double eigenvalue; diagonalizable or a Jordan block
    C = cosquare(A)
    nil = float(np.abs(C - 0.5 * np.trace(C) * np.eye(2)).max()) / float(np.abs(C).max())
    defect = float(abs(t - 2.0))
    if nil <= 10.0 * math.sqrt(tol):
        tag = CosquareTag.BOUNDARY_THETA_ZERO if sigma > 0 else CosquareTag.BOUNDARY_THETA_PI
        return CosquareClass(tag, theta=0.0 if sigma > 0 else math.pi, defect=defect, sigma=sigma)
    if nil >= 0.1:
        return CosquareClass(CosquareTag.TYPE_II, defect=defect, sigma=sigma)
    return CosquareClass(CosquareTag.NEAR_BOUNDARY, defect=defect, sigma=sigma)


def _null_vector(M: np.ndarray) -> np.ndarray:
    """Unit vector spanning the kernel of a rank-one 2x2 matrix."""
    r0 = M[0]
    r1 = M[1]
    r = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
    v = np.array([-r[1], r[0]], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise NonGeneric("near_boundary", "cosquare eigenvector is undetermined")
    return v / n


def _pencil_vectors(A):
    """Roots of the cosquare polynomial and solutions of A v = lambda A^* v."""
    c1, c0 = char_poly_coeffs(A)
    lams = kernel.quadratic_roots(c1, c0)
    Ah = kernel.adjoint(A)
    vecs = [_null_vector(A - lam * Ah) for lam in lams]
    return lams, vecs


def canonical_A(A, tol: float = DEFAULT_TOL) -> tuple[CosquareClass, GroupElement]:
    """Witness (zeta, P) with zeta P^* A P equal to the canonical form.

    TypeI -> diag(1, e^{i theta}), 0 < theta < pi.
    TypeIII -> [[0, 1], [mu, 0]], 0 < mu < 1.
    """
    A = _check_invertible(A)
    cls = classify_cosquare(A, tol)
    if not cls.generic:
        raise NonGeneric(cls.tag.value)
    lams, vecs = _pencil_vectors(A)
    if cls.tag is CosquareTag.TYPE_I:
        ds = []
        for i, v in enumerate(vecs):
            d = complex(np.conj(v) @ A @ v)
            if abs(d) < tol * kernel.opnorm(A):
                raise NonGeneric("isotropic_eigenvector")
            vecs[i] = v / math.sqrt(abs(d))
            ds.append(cmath.phase(d))
        theta = float((ds[1] - ds[0]) % (2 * math.pi))
        order = (0, 1)
        if theta > math.pi:
            order = (1, 0)
            theta = 2 * math.pi - theta
        P = np.column_stack([vecs[order[0]], vecs[order[1]]])
        zeta = cmath.exp(-1j * ds[order[0]])
        return CosquareClass(CosquareTag.TYPE_I, theta=theta, sigma=cls.sigma), GroupElement(zeta, P)

    # TypeIII: the eigenvectors are isotropic (v^* A v = 0) and pair across
    i_small = 0 if abs(lams[0]) < abs(lams[1]) else 1
    v1, v2 = vecs[i_small], vecs[1 - i_small]
    x = complex(np.conj(v1) @ A @ v2)
    P = np.column_stack([v1, v2 / x])
    lam = complex(kernel.adjoint(P)[1] @ A @ P[:, 0])  # the (2,1) entry, equals lams[i_small]
    mu = float(abs(lam))
    zeta = cmath.exp(-0.5j * cmath.phase(lam))
    P = P @ np.diag([1.0, zeta.conjugate()])
    return CosquareClass(CosquareTag.TYPE_III, mu=mu, sigma=cls.sigma), GroupElement(zeta, P)


def canonical_matrix(cls: CosquareClass) -> np.ndarray:
    if cls.tag is CosquareTag.TYPE_I:
        return np.diag([1.0, cmath.exp(1j * cls.theta)])
    if cls.tag is CosquareTag.TYPE_III:
        return np.array([[0.0, 1.0], [cls.mu, 0.0]], dtype=complex)
    raise NonGeneric(cls.tag.value)


@dataclass(frozen=True, eq=False)
class NormalForm:
    cosquare_class: CosquareClass
    A: np.ndarray
    B_reduced: np.ndarray
    witness: GroupElement

    @property
    def pair(self) -> MatrixPair:
        return MatrixPair(self.A, self.B_reduced)

    def to_json(self) -> dict:
        return {
            "class": self.cosquare_class.to_json(),
            "A": matrix_to_json(self.A),
            "B_reduced": matrix_to_json(self.B_reduced),
            "witness": self.witness.to_json(),
        }


def reduce_B(p: MatrixPair, cls: CosquareClass, tol: float = DEFAULT_TOL) -> NormalForm:
    """Use the stabilizer of a canonical A to normalize the diagonal of B.

    ``p.A`` must already equal ``canonical_matrix(cls)``.  The returned
    witness maps ``p`` to the normal form.
    """
    A0 = canonical_matrix(cls)
    if float(np.abs(p.A - A0).max()) > 1e-8:
        raise ValueError("reduce_B expects A in canonical form")
    B = p.B
    bn = kernel.opnorm(B)
    if bn == 0.0 or min(abs(B[0, 0]), abs(B[1, 1])) < tol * bn:
        raise NonGeneric("zero_B_diagonal")
    if cls.tag is CosquareTag.TYPE_I:
        alpha = -0.5 * cmath.phase(B[0, 0])
        beta = -0.5 * cmath.phase(B[1, 1])
        g = GroupElement(1.0, np.diag([cmath.exp(1j * alpha), cmath.exp(1j * beta)]))
    else:
        abar = (B[1, 1] / B[0, 0].conjugate()) ** 0.25
        a = abar.conjugate()
        g = GroupElement(1.0, np.diag([a, 1.0 / abar]))
    q = act(g, p)
    Bq = q.B.copy()
    if cls.tag is CosquareTag.TYPE_I:
        Bq[0, 0] = Bq[0, 0].real
        Bq[1, 1] = Bq[1, 1].real
    else:
        m = 0.5 * (Bq[0, 0] + Bq[1, 1].conjugate())
        Bq[0, 0], Bq[1, 1] = m, m.conjugate()
    return NormalForm(cls, A0, Bq, g)


def normal_form(p: MatrixPair, tol: float = DEFAULT_TOL) -> NormalForm:
    """classify -> canonical_A -> reduce_B, with a single composed witness."""
    s = p.scale
    if s == 0.0 or abs(kernel.det2(p.A)) <= tol * s * s:
        raise DegenerateA("A is singular relative to the pair scale")
    cls, g1 = canonical_A(p.A, tol)
    q = act(g1, p)
    A0 = canonical_matrix(cls)
    q = MatrixPair(A0, q.B)
    nf = reduce_B(q, cls, tol)
    return NormalForm(cls, nf.A, nf.B_reduced, compose(nf.witness, g1))
