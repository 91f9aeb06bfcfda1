"""Radially interpolated quadratic surfaces and the no-new-complex-points check.

Given a smooth path (A(s), B(s)) from a center pair (s = 0) to a boundary
pair (s = 1), the surface is

    w = conj(z)^T A(s) z + Re(z^T B(s) z),   s = (|z| / eps)^(1/n),

and it coincides with the boundary quadratic form for |z| >= eps.  Its
complex points off the origin are the zeros of

    V(s, z') = A(s) z' + conj(B(s)) conj(z') + s/(2n) q(s, z') z',
    q = conj(z')^T A'(s) z' + Re(z'^T B'(s) z'),  |z'| = 1,

since df/dconj(z) = |z| V for z = |z| z'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DeltaZero
from .homotopy import HomotopyPath, verify_nondegenerate
from .segments import Reversed

FLAT_LO = 0.1
FLAT_HI = 0.9


# exp(-1/u) underflows below u ~ 1/745; treating it as exactly 0 there avoids 0/0
_PSI_FLOOR = 1.0 / 700.0


def _psi(u):
    u = np.asarray(u, dtype=float)
    pos = u > _PSI_FLOOR
    safe = np.where(pos, u, 1.0)
    return np.where(pos, np.exp(-1.0 / safe), 0.0)


def _dpsi(u):
    u = np.asarray(u, dtype=float)
    pos = u > _PSI_FLOOR
    safe = np.where(pos, u, 1.0)
    return np.where(pos, np.exp(-1.0 / safe) / (safe * safe), 0.0)


def smooth_step(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly increasing between."""
    u = np.clip(np.asarray(u, dtype=float), -1.0, 2.0)
    a, b = _psi(u), _psi(1.0 - u)
    return a / (a + b)


def smooth_step_derivative(u):
    u = np.clip(np.asarray(u, dtype=float), -1.0, 2.0)
    a, b = _psi(u), _psi(1.0 - u)
    da, db = _dpsi(u), -_dpsi(1.0 - u)
    return (da * b - a * db) / (a + b) ** 2


def sigma(t):
    """Global reparametrization: constant 0 on [0, 0.1], 1 on [0.9, 1]."""
    return smooth_step((np.asarray(t, dtype=float) - FLAT_LO) / (FLAT_HI - FLAT_LO))


def sigma_derivative(t):
    return smooth_step_derivative((np.asarray(t, dtype=float) - FLAT_LO) / (FLAT_HI - FLAT_LO)) / (FLAT_HI - FLAT_LO)


class FlatPath:
    """A path reparametrized to be constant near both ends and smooth at junctions.

    Besides the global step ``sigma``, each segment's local parameter is
    passed through ``smooth_step`` so that all derivatives vanish at segment
    junctions; a piecewise closed-form path is then C-infinity as a whole.
    The value set is unchanged, so the certificate of the base path applies.
    """

    def __init__(self, base: HomotopyPath, samples: int = 512, margin: float = 1e-6):
        self.base = base
        self.certificate = verify_nondegenerate(base, samples, margin)

    @property
    def n_segments(self) -> int:
        return self.base.n_segments

    def _split(self, t):
        g = sigma(t)
        K = self.n_segments
        idx = np.minimum((g * K).astype(int), K - 1)
        loc = g * K - idx
        return idx, loc

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        idx, loc = self._split(t)
        s = smooth_step(loc)
        A = np.empty(t.shape + (2, 2), dtype=complex)
        B = np.empty_like(A)
        for k in np.unique(idx):
            m = idx == k
            A[m], B[m] = self.base.segments[k].evaluate(s[m])
        return A, B

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        idx, loc = self._split(t)
        s = smooth_step(loc)
        chain = smooth_step_derivative(loc) * self.n_segments * sigma_derivative(t)
        dA = np.empty(t.shape + (2, 2), dtype=complex)
        dB = np.empty_like(dA)
        for k in np.unique(idx):
            m = idx == k
            a, b = self.base.segments[k].derivative(s[m])
            c = chain[m][..., None, None]
            dA[m], dB[m] = c * a, c * b
        return dA, dB


def flatten(path: HomotopyPath, samples: int = 512, margin: float = 1e-6) -> FlatPath:
    return FlatPath(path, samples, margin)


def reverse_path(path: HomotopyPath) -> HomotopyPath:
    """The same path traversed backwards (center and boundary swapped)."""
    return HomotopyPath([Reversed(s) for s in reversed(path.segments)], path.certificate)


@dataclass
class SurfaceGrid:
    n_s: int = 64
    n_u: int = 32
    n_theta: int = 32

    def s_values(self) -> np.ndarray:
        return np.arange(1, self.n_s + 1) / self.n_s

    def sphere(self) -> np.ndarray:
        """Unit vectors (cos u e^{i t1}, sin u e^{i t2}), shape (M, 2)."""
        u = np.linspace(0.0, 0.5 * math.pi, self.n_u)
        th = np.linspace(0.0, 2.0 * math.pi, self.n_theta, endpoint=False)
        U, T1, T2 = np.meshgrid(u, th, th, indexing="ij")
        z = np.stack([np.cos(U) * np.exp(1j * T1), np.sin(U) * np.exp(1j * T2)], axis=-1)
        return z.reshape(-1, 2)


@dataclass
class SurfaceSpec:
    """Surface data; ``path(0)`` is the center pair and ``path(1)`` the boundary pair."""

    path: FlatPath
    epsilon: float = 1.0
    n: int = 1
    flattened: bool = field(default=True, init=False)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    @classmethod
    def from_connect_path(cls, path: HomotopyPath, epsilon: float = 1.0, n: int = 1, samples: int = 512):
        """Spec for a path from a pair to its model: the model sits at the center."""
        return cls(flatten(reverse_path(path), samples), epsilon, n)


def _s_of(spec: SurfaceSpec, z: np.ndarray) -> np.ndarray:
    r = np.linalg.norm(z, axis=-1)
    return np.minimum((r / spec.epsilon) ** (1.0 / spec.n), 1.0)


def surface_eval(spec: SurfaceSpec, z) -> np.ndarray | complex:
    """w = conj(z)^T A(s) z + Re(z^T B(s) z); accepts one point or a stack."""
    z = np.asarray(z, dtype=complex)
    single = z.ndim == 1
    z = np.atleast_2d(z)
    s = _s_of(spec, z)
    A, B = spec.path.evaluate(s)
    w = np.einsum("ni,nij,nj->n", np.conj(z), A, z) + np.einsum("ni,nij,nj->n", z, B, z).real
    return complex(w[0]) if single else w


def wirtinger_gradient(f, z, h: float = 1e-6, richardson: bool = False) -> np.ndarray:
    """(df/dconj(z_1), df/dconj(z_2)) by central differences; O(h^2), or O(h^4) with Richardson."""
    if not h > 0:
        raise ValueError("h must be positive")
    z = np.asarray(z, dtype=complex)

    def central(step):
        out = np.zeros(len(z), dtype=complex)
        for j in range(len(z)):
            e = np.zeros(len(z), dtype=complex)
            e[j] = step
            dx = (f(z + e) - f(z - e)) / (2 * step)
            dy = (f(z + 1j * e) - f(z - 1j * e)) / (2 * step)
            out[j] = 0.5 * (dx + 1j * dy)
        return out

    if not richardson:
        return central(h)
    return (4.0 * central(0.5 * h) - central(h)) / 3.0


@dataclass
class Bounds:
    delta: float
    m: float
    n_required: int
    delta_point: tuple = ()

    def to_json(self) -> dict:
        return {"delta": self.delta, "m": self.m, "n_required": self.n_required}


def _quantities(spec: SurfaceSpec, s: float, Z: np.ndarray):
    A, B = spec.path.evaluate(s)
    dA, dB = spec.path.derivative(s)
    base = Z @ A.T + np.conj(Z) @ np.conj(B).T
    q = np.einsum("ni,ij,nj->n", np.conj(Z), dA, Z) + np.einsum("ni,ij,nj->n", Z, dB, Z).real
    return base, q


def bounds(spec: SurfaceSpec, grid: SurfaceGrid | None = None, tol: float = 1e-9) -> Bounds:
    """delta = min |A z' + conj(B) conj(z')|, m = max |q| over the grid; n_required > m / (2 delta)."""
    grid = grid or SurfaceGrid()
    Z = grid.sphere()
    delta, m = math.inf, 0.0
    where = ()
    for s in np.concatenate([[0.0], grid.s_values()]):
        base, q = _quantities(spec, s, Z)
        nr = np.linalg.norm(base, axis=1)
        k = int(np.argmin(nr))
        if nr[k] < delta:
            delta = float(nr[k])
            where = (float(s), Z[k])
        m = max(m, float(np.abs(q).max()))
    if delta < tol:
        raise DeltaZero(delta, where[0], where[1])
    n_req = int(math.floor(m / (2.0 * delta))) + 1
    return Bounds(delta, m, n_req, where)


@dataclass
class SurfaceReport:
    delta: float
    m: float
    n_required: int
    n_used: int
    min_inequality: float
    passed: bool
    worst_s: float
    worst_zprime: np.ndarray
    fd_max_error: float | None = None
    fd_points: int = 0

    def to_json(self) -> dict:
        out = {
            "delta": self.delta,
            "m": self.m,
            "n_required": self.n_required,
            "n_used": self.n_used,
            "min_inequality": self.min_inequality,
            "pass": self.passed,
            "worst_point": {"s": self.worst_s, "zprime": [complex(v) for v in self.worst_zprime]},
        }
        if self.fd_max_error is not None:
            out["fd_max_error"] = self.fd_max_error
            out["fd_points"] = self.fd_points
        return out


def inequality_vector(spec: SurfaceSpec, s: float, Z: np.ndarray) -> np.ndarray:
    """V(s, z') for a stack of unit vectors Z."""
    base, q = _quantities(spec, s, Z)
    return base + (s / (2.0 * spec.n)) * q[:, None] * Z


def fd_cross_check(spec: SurfaceSpec, points: int = 100, seed: int = 0, s_range=(0.2, 1.0)) -> float:
    """Max relative gap between V and a finite-difference df/dconj(z) / |z|."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    # |z| = eps s^n must stay well above the float range floor for the squared values
    lo = max(s_range[0], math.exp(-300.0 / spec.n))
    for _ in range(points):
        s = float(rng.uniform(lo, s_range[1]))
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        zp = v / np.linalg.norm(v)
        r = spec.epsilon * s**spec.n
        # keep the stencil inside the ball so the clamp at |z| = eps is not crossed
        r = min(r, spec.epsilon * (1.0 - 1e-3))
        s = (r / spec.epsilon) ** (1.0 / spec.n)
        z = r * zp
        g = wirtinger_gradient(lambda x: surface_eval(spec, x), z, h=1e-4 * r, richardson=True) / r
        V = inequality_vector(spec, s, zp[None, :])[0]
        worst = max(worst, float(np.abs(g - V).max() / max(1.0, np.abs(V).max())))
    return worst


def _sphere_point(u, t1, t2) -> np.ndarray:
    return np.array([[math.cos(u) * np.exp(1j * t1), math.sin(u) * np.exp(1j * t2)]])


def _refine(spec: SurfaceSpec, s0: float, z0: np.ndarray, s_lo: float):
    """Local minimum of |V| started from a grid point; the grid alone can step over isolated zeros."""
    u0 = math.atan2(abs(z0[1]), abs(z0[0]))
    x0 = [s0, u0, float(np.angle(z0[0])), float(np.angle(z0[1]))]

    def f(x):
        s = min(max(x[0], s_lo), 1.0)
        return float(np.linalg.norm(inequality_vector(spec, s, _sphere_point(*x[1:]))))

    res = minimize(f, x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    s = min(max(res.x[0], s_lo), 1.0)
    return float(res.fun), float(s), _sphere_point(*res.x[1:])[0]


def verify_no_new_complex_points(spec: SurfaceSpec, grid: SurfaceGrid | None = None, tol: float = 1e-9,
                                 fd_points: int = 100, seed: int = 0, refine: int = 8) -> SurfaceReport:
    """Minimum of |V(s, z')| over s in (0, 1] and the unit sphere; pass iff above tol.

    The grid minimum is refined by local minimization from the ``refine``
    smallest grid values (one per s level).
    """
    grid = grid or SurfaceGrid()
    b = bounds(spec, grid, tol)
    Z = grid.sphere()
    svals = grid.s_values()
    per_s = []
    for s in svals:
        nv = np.linalg.norm(inequality_vector(spec, s, Z), axis=1)
        k = int(np.argmin(nv))
        per_s.append((float(nv[k]), float(s), Z[k]))
    per_s.sort(key=lambda r: r[0])
    best, ws, wz = per_s[0]
    for val, s, z in per_s[:refine]:
        rv, rs, rz = _refine(spec, s, z, float(svals[0]))
        if rv < best:
            best, ws, wz = rv, rs, rz
    fd = fd_cross_check(spec, fd_points, seed) if fd_points else None
    return SurfaceReport(b.delta, b.m, b.n_required, spec.n, best, best > tol, ws, wz, fd, fd_points)
