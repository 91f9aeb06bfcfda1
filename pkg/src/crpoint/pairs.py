"""Matrix pairs (A, B), the h-congruence group and the elliptic/hyperbolic sign.

A quadratic complex point ``w = conj(z)^T A z + Re(z^T B z)`` is stored as a
``MatrixPair``.  The group ``S^1 x GL(2,C) / Z_2`` acts by

    (zeta, P) . (A, B) = (zeta P^* A P, conj(zeta) P^T B P).

Composition is chosen so that this is a *left* action::

    act(compose(g2, g1), p) == act(g2, act(g1, p))
    compose((z2, P2), (z1, P1)) == (z2 * z1, P1 @ P2)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import DegeneratePair, FormatError, NonFiniteError, NonSymmetricError, SingularMatrixError
from .jsonio import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json

SYM_TOL = 1e-12
DEFAULT_SIGN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MatrixPair:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = kernel.as_matrix(self.A, 2)
        B = kernel.as_matrix(self.B, 2)
        if abs(B[0, 1] - B[1, 0]) > SYM_TOL * (1.0 + kernel.opnorm(B)):
            raise NonSymmetricError("B must be symmetric (|B - B^T| < 1e-12 (1 + |B|))")
        B = B.copy()
        B[0, 1] = B[1, 0] = 0.5 * (B[0, 1] + B[1, 0])
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def scale(self) -> float:
        """max(|A|, |B|) in the spectral norm."""
        return max(kernel.opnorm(self.A), kernel.opnorm(self.B))

    def normalized(self) -> "MatrixPair":
        s = max(self.scale, 1e-300)
        return MatrixPair(self.A / s, self.B / s)

    def distance(self, other: "MatrixPair") -> float:
        return max(float(np.abs(self.A - other.A).max()), float(np.abs(self.B - other.B).max()))

    def allclose(self, other: "MatrixPair", tol: float = 1e-10) -> bool:
        return self.distance(other) <= tol * max(1.0, self.scale, other.scale)

    def quadratic_form(self, z) -> complex:
        """w = conj(z)^T A z + Re(z^T B z)."""
        z = np.asarray(z, dtype=complex)
        return complex(np.conj(z) @ self.A @ z + (z @ self.B @ z).real)

    def to_json(self) -> dict:
        return {"A": matrix_to_json(self.A), "B": matrix_to_json(self.B)}

    @classmethod
    def from_json(cls, obj) -> "MatrixPair":
        if not isinstance(obj, dict) or set(obj) - {"A", "B"} or not {"A", "B"} <= set(obj):
            raise FormatError('pair must be an object with exactly the keys "A" and "B"')
        try:
            return cls(matrix_from_json(obj["A"]), matrix_from_json(obj["B"]))
        except NonSymmetricError as exc:
            raise FormatError(str(exc)) from exc
        except NonFiniteError as exc:
            raise FormatError(str(exc)) from exc

    def __repr__(self):
        return f"MatrixPair(A={self.A.tolist()}, B={self.B.tolist()})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    """(zeta, P) with |zeta| = 1 and P invertible, modulo P ~ -P."""

    zeta: complex
    P: np.ndarray

    def __post_init__(self):
        z = complex(self.zeta)
        if abs(abs(z) - 1.0) > 1e-12:
            raise ValueError("zeta must have modulus 1")
        P = kernel.as_matrix(self.P, 2)
        if kernel.det2(P) == 0:
            raise SingularMatrixError("P must be invertible")
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "P", P)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, np.eye(2, dtype=complex))

    def equivalent(self, other: "GroupElement", tol: float = 1e-10) -> bool:
        if abs(self.zeta - other.zeta) > tol:
            return False
        d1 = np.abs(self.P - other.P).max()
        d2 = np.abs(self.P + other.P).max()
        return min(d1, d2) <= tol * max(1.0, np.abs(self.P).max())

    def inverse(self) -> "GroupElement":
        return GroupElement(self.zeta.conjugate(), kernel.inv2(self.P))

    def to_json(self) -> dict:
        return {"zeta": complex_to_json(self.zeta), "P": matrix_to_json(self.P)}

    @classmethod
    def from_json(cls, obj) -> "GroupElement":
        try:
            return cls(complex_from_json(obj["zeta"]), matrix_from_json(obj["P"]))
        except (KeyError, TypeError) as exc:
            raise FormatError("group element must have keys zeta and P") from exc


def compose(g2: GroupElement, g1: GroupElement) -> GroupElement:
    """Product with act(compose(g2, g1), p) == act(g2, act(g1, p))."""
    z = g2.zeta * g1.zeta
    return GroupElement(z / abs(z), g1.P @ g2.P)


def act(g: GroupElement, p: MatrixPair) -> MatrixPair:
    P = g.P
    A = g.zeta * kernel.adjoint(P) @ p.A @ P
    B = g.zeta.conjugate() * P.T @ p.B @ P
    return MatrixPair(A, 0.5 * (B + B.T))


class Sign(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SignClass:
    tag: Sign
    det4: float
    det4_normalized: float

    @property
    def sign(self) -> int:
        return {Sign.ELLIPTIC: 1, Sign.HYPERBOLIC: -1, Sign.DEGENERATE: 0}[self.tag]


def block4(A, B) -> np.ndarray:
    """[[A, conj(B)], [B, conj(A)]]; works on stacks of 2x2 matrices."""
    A = np.asarray(A)
    B = np.asarray(B)
    top = np.concatenate([A, np.conj(B)], axis=-1)
    bot = np.concatenate([B, np.conj(A)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def det4_batch(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real parts of the block determinants for stacks of pairs (LU based)."""
    return np.linalg.det(block4(A, B)).real


def det4(p: MatrixPair) -> float:
    """Determinant of [[A, conj B], [B, conj A]].

    The value is real because swapping the block rows and columns turns the
    matrix into its complex conjugate.  The imaginary part is checked and
    dropped.
    """
    d = complex(np.linalg.det(block4(p.A, p.B)))
    scale = (1.0 + kernel.opnorm(p.A) + kernel.opnorm(p.B)) ** 4
    if abs(d.imag) > 1e-10 * scale:
        raise ArithmeticError(f"block determinant has imaginary part {d.imag:.3e}")
    return d.real


def sign_class(p: MatrixPair, tol: float = DEFAULT_SIGN_TOL) -> SignClass:
    """Elliptic / hyperbolic / degenerate, decided on the normalized pair.

    The pair is divided by max(|A|, |B|) and the determinant is compared with
    ``tol * (1 + |A| + |B|)**4`` of the normalized pair.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    na, nb = kernel.opnorm(p.A), kernel.opnorm(p.B)
    s = max(na, nb, 1e-300)
    dn = float(np.linalg.det(block4(p.A / s, p.B / s)).real)
    # det4 is homogeneous of degree 4; the raw value may saturate to +-inf for huge pairs
    with np.errstate(over="ignore"):
        raw = float(dn * np.float64(s) ** 4)
    thresh = tol * (1.0 + na / s + nb / s) ** 4
    if dn > thresh:
        tag = Sign.ELLIPTIC
    elif dn < -thresh:
        tag = Sign.HYPERBOLIC
    else:
        tag = Sign.DEGENERATE
    return SignClass(tag, raw, dn)


def lai_index(classes) -> int:
    """I = e - h."""
    e = h = 0
    for c in classes:
        tag = c.tag if isinstance(c, SignClass) else Sign(c)
        if tag is Sign.DEGENERATE:
            raise DegeneratePair("Lai index is undefined with a degenerate complex point")
        if tag is Sign.ELLIPTIC:
            e += 1
        else:
            h += 1
    return e - h


def _complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_pair(seed, scale: float = 1.0) -> MatrixPair:
    rng = np.random.default_rng(seed)
    A = _complex_normal(rng, (2, 2))
    M = _complex_normal(rng, (2, 2))
    return MatrixPair(scale * A, scale * 0.5 * (M + M.T))


def random_group_element(seed) -> GroupElement:
    rng = np.random.default_rng(seed)
    zeta = np.exp(2j * np.pi * rng.random())
    while True:
        P = _complex_normal(rng, (2, 2))
        if abs(kernel.det2(P)) >= 0.1:
            return GroupElement(zeta, P)


ELLIPTIC_MODEL = MatrixPair(np.zeros((2, 2)), np.eye(2))
HYPERBOLIC_MODEL = MatrixPair(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


def sign_batch(A: np.ndarray, B: np.ndarray, tol: float = DEFAULT_SIGN_TOL) -> np.ndarray:
    """Vectorized ``sign_class(...).sign`` for stacks of pairs (+1, -1, or 0)."""
    s = np.maximum(kernel.opnorm2_batch(A), kernel.opnorm2_batch(B))
    s = np.maximum(s, 1e-300)
    An = A / s[..., None, None]
    Bn = B / s[..., None, None]
    dn = det4_batch(An, Bn)
    thresh = tol * (1.0 + kernel.opnorm2_batch(An) + kernel.opnorm2_batch(Bn)) ** 4
    return np.where(dn > thresh, 1, np.where(dn < -thresh, -1, 0))


def act_batch(zeta: np.ndarray, P: np.ndarray, A: np.ndarray, B: np.ndarray):
    """Group action on stacks: (zeta P^* A P, conj(zeta) P^T B P)."""
    z = np.asarray(zeta)[..., None, None]
    An = z * (kernel.adjoint(P) @ A @ P)
    Bn = np.conj(z) * (np.swapaxes(P, -1, -2) @ B @ P)
    return An, 0.5 * (Bn + np.swapaxes(Bn, -1, -2))
