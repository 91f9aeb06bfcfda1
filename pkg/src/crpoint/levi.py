"""Levi forms of the local neighborhood functions of the two model complex points.

Points are ``(z1, z2, w)`` in C^3.  With ``g`` a positive weight and ``u``
the distance in ``w`` to the graph,

    elliptic:    f = (1 + |z|^2)   |w - conj(z1)^2 - conj(z2)^2|^2
    hyperbolic:  f = (1 + |z2|^2)  |w - |z1|^2 - conj(z2)^2|^2

The Levi matrix is ``L_jk = d^2 f / dzeta_j dconj(zeta_k)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import norm, qmc

from . import kernel

NUMERIC_FLOOR = 1e-12


class ModelKind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"


def _split(points):
    P = np.asarray(points, dtype=complex)
    return P[..., 0], P[..., 1], P[..., 2]


def graph(kind: ModelKind, z1, z2):
    if ModelKind(kind) is ModelKind.ELLIPTIC:
        return np.conj(z1) ** 2 + np.conj(z2) ** 2
    return np.abs(z1) ** 2 + np.conj(z2) ** 2


def _weight(kind, z1, z2):
    if ModelKind(kind) is ModelKind.ELLIPTIC:
        return 1.0 + np.abs(z1) ** 2 + np.abs(z2) ** 2
    return 1.0 + np.abs(z2) ** 2


def model_f(kind, points):
    """f at one point (shape (3,)) or a stack (..., 3)."""
    z1, z2, w = _split(points)
    u = w - graph(kind, z1, z2)
    out = _weight(kind, z1, z2) * np.abs(u) ** 2
    return float(out) if np.ndim(out) == 0 else out


def levi_closed_form(kind, points) -> np.ndarray:
    """Entry-by-entry Levi matrix.

    The hyperbolic (1,1) entry is ``(2|z1|^2 - (u + conj u)) (1 + |z2|^2)``;
    the weight multiplies both terms (checked against ``levi_fd``).
    """
    kind = ModelKind(kind)
    z1, z2, w = _split(points)
    u = w - graph(kind, z1, z2)
    c = np.conj
    L = np.zeros(np.shape(z1) + (3, 3), dtype=complex)
    if kind is ModelKind.ELLIPTIC:
        g = 1.0 + np.abs(z1) ** 2 + np.abs(z2) ** 2
        au2 = np.abs(u) ** 2
        L[..., 0, 0] = 4 * np.abs(z1) ** 2 * g + au2 - 2 * (z1**2 * u + c(z1) ** 2 * c(u))
        L[..., 0, 1] = 4 * z1 * c(z2) * g - 2 * (z1 * z2 * u + c(z1) * c(z2) * c(u))
        L[..., 0, 2] = c(z1) * u
        L[..., 1, 0] = 4 * c(z1) * z2 * g - 2 * (z1 * z2 * u + c(z1) * c(z2) * c(u))
        L[..., 1, 1] = 4 * np.abs(z2) ** 2 * g + au2 - 2 * (z2**2 * u + c(z2) ** 2 * c(u))
        L[..., 1, 2] = c(z2) * u
        L[..., 2, 0] = z1 * c(u)
        L[..., 2, 1] = z2 * c(u)
        L[..., 2, 2] = g
    else:
        g = 1.0 + np.abs(z2) ** 2
        re2 = u + c(u)
        L[..., 0, 0] = (2 * np.abs(z1) ** 2 - re2) * g
        L[..., 0, 1] = 2 * c(z1) * c(z2) * g - c(z1) * z2 * re2
        L[..., 0, 2] = -c(z1) * g
        L[..., 1, 0] = 2 * z1 * z2 * g - z1 * c(z2) * re2
        L[..., 1, 1] = np.abs(u) ** 2 - 2 * (z2**2 * u + c(z2) ** 2 * c(u)) + 4 * np.abs(z2) ** 2 * g
        L[..., 1, 2] = c(z2) * u
        L[..., 2, 0] = -z1 * g
        L[..., 2, 1] = z2 * c(u)
        L[..., 2, 2] = g
    return L


def levi_hyperbolic_11_ungrouped(points) -> np.ndarray:
    """The (1,1) entry with the weight on the u-term only: 2|z1|^2 - (u + conj u)(1 + |z2|^2).

    Kept for comparison; it disagrees with finite differences.
    """
    z1, z2, w = _split(points)
    u = w - graph(ModelKind.HYPERBOLIC, z1, z2)
    return 2 * np.abs(z1) ** 2 - (u + np.conj(u)) * (1.0 + np.abs(z2) ** 2)


def _real_hessian(f, x: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Hessian in R^6 for a stack of points x (..., 6)."""
    n = x.shape[-1]
    H = np.zeros(x.shape[:-1] + (n, n))
    E = np.eye(n) * h
    f0 = f(x)
    for a in range(n):
        fp = f(x + E[a])
        fm = f(x - E[a])
        H[..., a, a] = (fp - 2 * f0 + fm) / (h * h)
        for b in range(a + 1, n):
            v = (f(x + E[a] + E[b]) - f(x + E[a] - E[b]) - f(x - E[a] + E[b]) + f(x - E[a] - E[b])) / (4 * h * h)
            H[..., a, b] = H[..., b, a] = v
    return H


def _to_real(points):
    P = np.asarray(points, dtype=complex)
    return np.concatenate([P.real, P.imag], axis=-1)


def _to_complex(x):
    return x[..., :3] + 1j * x[..., 3:]


def levi_fd_function(f, points, h: float = 1e-4, richardson: bool = True) -> np.ndarray:
    """Levi matrix of any real function of C^3 from real second differences.

    L_jk = (f_xjxk + f_yjyk + i (f_xjyk - f_yjxk)) / 4.
    """
    x = _to_real(points)
    g = lambda y: f(_to_complex(y))
    H = _real_hessian(g, x, h)
    if richardson:
        H = (4.0 * _real_hessian(g, x, 0.5 * h) - H) / 3.0
    Hxx, Hyy = H[..., :3, :3], H[..., 3:, 3:]
    Hxy, Hyx = H[..., :3, 3:], H[..., 3:, :3]
    L = 0.25 * (Hxx + Hyy + 1j * (Hxy - Hyx))
    return 0.5 * (L + kernel.adjoint(L))


def levi_fd(kind, points, h: float = 1e-4, richardson: bool = True) -> np.ndarray:
    kind = ModelKind(kind)
    return levi_fd_function(lambda p: model_f(kind, p), points, h, richardson)


def sylvester_pd(M, tol: float = 0.0) -> bool:
    """All three leading principal minors exceed tol."""
    M = kernel.check_hermitian(M)
    m1 = M[0, 0].real
    m2 = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]).real
    m3 = np.linalg.det(M).real
    return bool(m1 > tol and m2 > tol and m3 > tol)


def halton_ball(n: int, radius: float, seed: int = 0) -> np.ndarray:
    """n low-discrepancy points in the ball of C^3, shape (n, 3).

    One Halton coordinate sets the radius (r = R u^{1/6}); the other six
    give a direction through the normal quantile map.
    """
    sampler = qmc.Halton(d=7, scramble=True, seed=seed)
    U = sampler.random(n)
    U = np.clip(U, 1e-12, 1 - 1e-12)
    G = norm.ppf(U[:, 1:])
    G /= np.linalg.norm(G, axis=1, keepdims=True)
    r = radius * U[:, 0] ** (1.0 / 6.0)
    x = G * r[:, None]
    return x[:, :3] + 1j * x[:, 3:]


@dataclass
class LeviReport:
    kind: str
    radius: float
    points_scanned: int
    excluded: int
    positive_definite: int
    at_least_two_positive: int
    violations: list = field(default_factory=list)
    min_eigenvalue: float = math.inf
    min_second_eigenvalue: float = math.inf
    min_trace: float = math.inf
    threshold: float = NUMERIC_FLOOR
    spectra: np.ndarray | None = None

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    @property
    def passed(self) -> bool:
        return not self.violations and (self.kind == "elliptic" or self.min_trace > 0)

    def to_json(self) -> dict:
        return {
            "model": self.kind,
            "radius": self.radius,
            "points_scanned": self.points_scanned,
            "excluded": self.excluded,
            "counts": {
                "positive_definite": self.positive_definite,
                "at_least_two_positive": self.at_least_two_positive,
                "violations": self.n_violations,
            },
            "min_eigenvalue": self.min_eigenvalue,
            "min_second_eigenvalue": self.min_second_eigenvalue,
            "min_trace": self.min_trace,
            "threshold": self.threshold,
            "violations": [
                {"point": [complex(v) for v in p], "eigenvalues": list(map(float, e))} for p, e in self.violations
            ],
            "pass": self.passed,
        }


def positivity_scan(kind, radius: float = 0.05, gridsize: int = 7**6, tol: float = 1e-6,
                    seed: int = 0, include_origin: bool = False, extra_points=None,
                    keep_spectra: bool = False) -> LeviReport:
    """Scan the closed-form Levi matrix over a low-discrepancy sample of the ball.

    ``tol`` is the radius of the excluded ball around the origin (the complex
    point).  An eigenvalue counts as positive when it exceeds
    ``NUMERIC_FLOOR * max(1, |L|)``; the elliptic form is only rank-deficient
    in the limit towards the complex point set, so smaller margins near the
    graph are expected and reported through ``min_eigenvalue``.
    """
    kind = ModelKind(kind)
    if radius > 0.1:
        raise ValueError("the positivity claims are local; use radius <= 0.1")
    pts = halton_ball(gridsize, radius, seed)
    if extra_points is not None:
        pts = np.concatenate([pts, np.asarray(extra_points, dtype=complex).reshape(-1, 3)])
    if include_origin:
        pts = np.concatenate([pts, np.zeros((1, 3), dtype=complex)])
    nr = np.linalg.norm(pts, axis=1)
    keep = nr >= tol
    if include_origin:
        keep |= nr == 0
    excluded = int((~keep).sum())
    pts = pts[keep]
    L = levi_closed_form(kind, pts)
    ev = kernel.herm_eigs_batch(L)  # descending
    thr = NUMERIC_FLOOR * np.maximum(1.0, np.abs(ev).max(axis=1))
    pos = ev > thr[:, None]
    npos = pos.sum(axis=1)
    trace = np.trace(L, axis1=1, axis2=2).real
    pd = npos == 3
    two = npos >= 2
    bad = ~pd if kind is ModelKind.ELLIPTIC else ~two
    viol = [(pts[i], ev[i]) for i in np.nonzero(bad)[0]]
    return LeviReport(
        kind=kind.value,
        radius=radius,
        points_scanned=len(pts),
        excluded=excluded,
        positive_definite=int(pd.sum()),
        at_least_two_positive=int(two.sum()),
        violations=viol,
        min_eigenvalue=float(ev[:, 2].min()),
        min_second_eigenvalue=float(ev[:, 1].min()),
        min_trace=float(trace.min()),
        threshold=NUMERIC_FLOOR,
        spectra=ev if keep_spectra else None,
    )


def minor_identity_residual(z2, u) -> np.ndarray | float:
    """|direct 2x2 minor determinant - rearranged sum of squares| of the hyperbolic Levi form."""
    z2 = np.asarray(z2, dtype=complex)
    u = np.asarray(u, dtype=complex)
    a2 = np.abs(z2) ** 2
    g = 1.0 + a2
    au = np.abs(u)
    cross = z2**2 * u + np.conj(z2) ** 2 * np.conj(u)
    m11 = au**2 - 2 * cross + 4 * a2 * g
    direct = (m11 * g - np.conj(z2) * u * z2 * np.conj(u)).real
    rearranged = (
        (au - 2 * a2 * g) ** 2
        + 2 * g * (2 * au * a2 - cross.real)
        + 4 * a2 * g**2 * (1 - a2)
    )
    out = np.abs(direct - rearranged)
    return float(out) if out.ndim == 0 else out


def _distance_to_graph(kind, q: np.ndarray) -> tuple[float, bool]:
    z1, z2, w = q

    def resid(x):
        p1, p2 = x[0] + 1j * x[1], x[2] + 1j * x[3]
        gw = graph(kind, p1, p2)
        d = np.array([p1 - z1, p2 - z2, gw - w])
        return np.concatenate([d.real, d.imag])

    x0 = np.array([z1.real, z1.imag, z2.real, z2.imag])
    res = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return float(np.linalg.norm(res.fun)), bool(res.success)


def _grad_norm(kind, q: np.ndarray, h: float) -> float:
    x = _to_real(q)
    g = np.zeros(6)
    for a in range(6):
        e = np.zeros(6)
        e[a] = h
        g[a] = (model_f(kind, _to_complex(x + e)) - model_f(kind, _to_complex(x - e))) / (2 * h)
    return float(np.linalg.norm(g))


@dataclass
class GrowthBounds:
    c_est: float
    C_est: float
    grad_c_est: float
    grad_C_est: float
    points: int
    skipped: int
    failures: int

    def to_json(self) -> dict:
        return {
            "c_est": self.c_est,
            "C_est": self.C_est,
            "grad_c_est": self.grad_c_est,
            "grad_C_est": self.grad_C_est,
            "points": self.points,
            "skipped": self.skipped,
            "failures": self.failures,
        }


def growth_bounds(kind, radius: float = 0.05, gridsize: int = 2000, seed: int = 0) -> GrowthBounds:
    """min and max of f / dist^2 and |grad f| / dist over a low-discrepancy sample."""
    kind = ModelKind(kind)
    pts = halton_ball(gridsize, radius, seed)
    ratios, gratios = [], []
    skipped = failures = 0
    for q in pts:
        d, ok = _distance_to_graph(kind, q)
        if not ok:
            failures += 1
            continue
        if d < 1e-9:
            skipped += 1
            continue
        ratios.append(model_f(kind, q) / d**2)
        gratios.append(_grad_norm(kind, q, 1e-3 * d) / d)
    r = np.array(ratios)
    gr = np.array(gratios)
    return GrowthBounds(float(r.min()), float(r.max()), float(gr.min()), float(gr.max()), len(r), skipped, failures)
