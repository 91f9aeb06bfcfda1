"""Closed-form homotopy segments ``t -> (A(t), B(t))`` on ``[0, 1]``.

Every segment evaluates on arrays of ``t`` and returns stacks of shape
``t.shape + (2, 2)``.  Derivatives are exact (no finite differences).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import kernel
from .errors import FormatError
from .pairs import GroupElement, MatrixPair


def _t(t) -> np.ndarray:
    return np.asarray(t, dtype=float)


def _stack(t: np.ndarray, e11, e12, e21, e22) -> np.ndarray:
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = e11
    out[..., 0, 1] = e12
    out[..., 1, 0] = e21
    out[..., 1, 1] = e22
    return out


def _const(t: np.ndarray, M) -> np.ndarray:
    return np.broadcast_to(np.asarray(M, dtype=complex), t.shape + (2, 2)).copy()


def bump(t, eta: float) -> np.ndarray:
    """eta * exp(1 - 1/(1 - (2t-1)^2)) on (0, 1), zero elsewhere; bump(1/2) = eta."""
    t = _t(t)
    u = 2.0 * t - 1.0
    inside = np.abs(u) < 1.0
    den = np.where(inside, 1.0 - u * u, 1.0)
    return np.where(inside, eta * np.exp(1.0 - 1.0 / den), 0.0)


def bump_derivative(t, eta: float) -> np.ndarray:
    t = _t(t)
    u = 2.0 * t - 1.0
    inside = np.abs(u) < 1.0
    den = np.where(inside, 1.0 - u * u, 1.0)
    # d/dt exp(1 - 1/(1-u^2)) = exp(...) * (-2u/(1-u^2)^2) * 2
    return np.where(inside, bump(t, eta) * (-4.0 * u / (den * den)), 0.0)


class Segment:
    """Base class.  Subclasses implement ``_eval(t) -> (A, B, dA, dB)``."""

    kind = "segment"

    def evaluate(self, t):
        A, B, _, _ = self._eval(_t(t))
        return A, B

    def derivative(self, t):
        _, _, dA, dB = self._eval(_t(t))
        return dA, dB

    def pair_at(self, t: float) -> MatrixPair:
        A, B = self.evaluate(float(t))
        return MatrixPair(A, B)

    @property
    def start(self) -> MatrixPair:
        return self.pair_at(0.0)

    @property
    def end(self) -> MatrixPair:
        return self.pair_at(1.0)

    def params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def _eval(self, t):
        raise NotImplementedError


class Constant(Segment):
    kind = "constant"

    def __init__(self, pair: MatrixPair):
        self.pair = pair

    def _eval(self, t):
        z = np.zeros(t.shape + (2, 2), dtype=complex)
        return _const(t, self.pair.A), _const(t, self.pair.B), z, z.copy()

    def params(self):
        return {"pair": self.pair.to_json()}

    @classmethod
    def from_params(cls, params):
        return cls(MatrixPair.from_json(params["pair"]))


class Linear(Segment):
    """Straight line ``(1-t) p0 + t p1``; ``label`` names the recipe it implements."""

    kind = "linear"

    def __init__(self, start: MatrixPair, end: MatrixPair, label: str = ""):
        self.p0 = start
        self.p1 = end
        self.label = label

    def _eval(self, t):
        s = t[..., None, None]
        dA = self.p1.A - self.p0.A
        dB = self.p1.B - self.p0.B
        A = self.p0.A + s * dA
        B = self.p0.B + s * dB
        return A, B, _const(t, dA), _const(t, dB)

    def params(self):
        return {"start": self.p0.to_json(), "end": self.p1.to_json(), "label": self.label}

    @classmethod
    def from_params(cls, params):
        return cls(MatrixPair.from_json(params["start"]), MatrixPair.from_json(params["end"]), str(params.get("label", "")))


class _PolarPath:
    """P(t) = U(t) H(t) from I to P with U(t) = Z diag(e^{i t phi}) Z^*, H(t) = (1-t) I + t H."""

    def __init__(self, P):
        U, H = kernel.polar2(P)
        self.Z, self.phi = kernel.unitary_log2(U)
        self.H = H
        self.Zh = kernel.adjoint(self.Z)

    def __call__(self, t):
        e = np.exp(1j * t[..., None] * self.phi)  # (..., 2)
        Ut = (self.Z * e[..., None, :]) @ self.Zh
        dUt = (self.Z * (1j * self.phi * e)[..., None, :]) @ self.Zh
        I = np.eye(2)
        s = t[..., None, None]
        Ht = (1.0 - s) * I + s * self.H
        P = Ut @ Ht
        dP = dUt @ Ht + Ut @ (self.H - I)
        return P, dP


class GroupPath(Segment):
    """The orbit ``t -> g(t) . base`` along a path g(t) from the identity to g."""

    kind = "group_action"

    def __init__(self, base: MatrixPair, g: GroupElement):
        self.base = base
        self.g = g
        self._path = _PolarPath(g.P)
        self._angle = cmath.phase(g.zeta)

    def group_at(self, t):
        t = _t(t)
        P, dP = self._path(t)
        zeta = np.exp(1j * self._angle * t)
        return zeta, P, 1j * self._angle * zeta, dP

    def _eval(self, t):
        zeta, P, dzeta, dP = self.group_at(t)
        A0, B0 = self.base.A, self.base.B
        Ph = kernel.adjoint(P)
        dPh = kernel.adjoint(dP)
        PT = np.swapaxes(P, -1, -2)
        dPT = np.swapaxes(dP, -1, -2)
        z = zeta[..., None, None]
        dz = dzeta[..., None, None]
        core_A = Ph @ A0 @ P
        core_B = PT @ B0 @ P
        A = z * core_A
        B = np.conj(z) * core_B
        dA = dz * core_A + z * (dPh @ A0 @ P + Ph @ A0 @ dP)
        dB = np.conj(dz) * core_B + np.conj(z) * (dPT @ B0 @ P + PT @ B0 @ dP)
        return A, B, dA, dB

    def params(self):
        return {"base": self.base.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_params(cls, params):
        return cls(MatrixPair.from_json(params["base"]), GroupElement.from_json(params["g"]))


class GLPath(Segment):
    """A(t) = A0 G(t) with G(t) the polar path from I to A0^{-1} A1; B fixed.

    Keeps A invertible throughout, which a straight line need not do.
    """

    kind = "gl_path"

    def __init__(self, A0, A1, B):
        self.A0 = kernel.as_matrix(A0, 2)
        self.A1 = kernel.as_matrix(A1, 2)
        self.B = kernel.as_matrix(B, 2)
        self._path = _PolarPath(kernel.inv2(self.A0) @ self.A1)

    def _eval(self, t):
        G, dG = self._path(t)
        z = np.zeros(t.shape + (2, 2), dtype=complex)
        return self.A0 @ G, _const(t, self.B), self.A0 @ dG, z

    def params(self):
        from .jsonio import matrix_to_json

        return {"A0": matrix_to_json(self.A0), "A1": matrix_to_json(self.A1), "B": matrix_to_json(self.B)}

    @classmethod
    def from_params(cls, params):
        from .jsonio import matrix_from_json

        return cls(matrix_from_json(params["A0"]), matrix_from_json(params["A1"]), matrix_from_json(params["B"]))


class Reversed(Segment):
    kind = "reversed"

    def __init__(self, segment: Segment):
        self.segment = segment

    def _eval(self, t):
        A, B, dA, dB = self.segment._eval(1.0 - t)
        return A, B, -dA, -dB

    def params(self):
        return {"segment": self.segment.to_json()}

    @classmethod
    def from_params(cls, params):
        return cls(segment_from_json(params["segment"]))


# --------------------------------------------------------------------------
# catalog of named recipes; every entry returns (A, B, dA, dB)

def _zero(t):
    return np.zeros(t.shape, dtype=complex)


def _one(t):
    return np.ones(t.shape, dtype=complex)


def _rotate(t, phi, end_angle, a, d, b_re, b_im):
    ang = (1.0 - t) * phi + t * end_angle
    e = np.exp(1j * ang)
    b = complex(b_re, b_im)
    A = _stack(t, 1.0, 0.0, 0.0, e)
    dA = _stack(t, 0.0, 0.0, 0.0, 1j * (end_angle - phi) * e)
    B = _stack(t, a, b, b, d)
    return A, B, dA, _stack(t, 0, 0, 0, 0)


def _rotate_to_0(t, phi, a, d, b_re, b_im):
    return _rotate(t, phi, 0.0, a, d, b_re, b_im)


def _rotate_to_pi(t, phi, a, d, b_re, b_im):
    return _rotate(t, phi, math.pi, a, d, b_re, b_im)


def _diagB_shrink_a(t, a, d):
    A = _stack(t, 1, 0, 0, 1)
    return A, _stack(t, (1 - t) * a, 0, 0, d), _stack(t, 0, 0, 0, 0), _stack(t, -a, 0, 0, 0)


def _final_A_shrink(t, d):
    A = _stack(t, 1, 0, 0, (1 - t) / d)
    return A, _stack(t, 0, 0, 0, 1), _stack(t, 0, 0, 0, -1.0 / d), _stack(t, 0, 0, 0, 0)


def _case_e_perturb(t, eps):
    A = _stack(t, 1, 0, 0, -1)
    B = _stack(t, 1 + 1j * eps * t, 1 - 1j * eps * t, 1 - 1j * eps * t, 1 + 1j * eps * t)
    dB = _stack(t, 1j * eps, -1j * eps, -1j * eps, 1j * eps)
    return A, B, _stack(t, 0, 0, 0, 0), dB


def _case_c_shrink(t, b):
    A = _stack(t, 1, 0, 0, -1)
    return A, _stack(t, 0, (1 - t) * b, (1 - t) * b, 0), _stack(t, 0, 0, 0, 0), _stack(t, 0, -b, -b, 0)


def _case_d_lt1(t, b):
    A = _stack(t, 1, 0, 0, -1)
    bt = (1 - t) * b
    return A, _stack(t, 1 + bt, -1, -1, 1 - bt), _stack(t, 0, 0, 0, 0), _stack(t, -b, 0, 0, b)


def _case_d_gt1(t, b):
    k = 1.0 / (1.0 + b)
    A = _stack(t, (1 - t) * k, 0, 0, -(1 - t) * k)
    B = _stack(t, 1, (t - 1) * k, (t - 1) * k, -1 + (2 - 2 * t) * k)
    return A, B, _stack(t, -k, 0, 0, k), _stack(t, 0, k, k, -2 * k)


def _case_a_shrink(t, a, d):
    A = _stack(t, 1, 0, 0, -1)
    return A, _stack(t, (1 - t) * a, 0, 0, (1 - t) * d), _stack(t, 0, 0, 0, 0), _stack(t, -a, 0, 0, -d)


def _case_a_gt1(t, a, d):
    A = _stack(t, (1 - t) / a, 0, 0, -(1 - t) / d)
    return A, _stack(t, 1, 0, 0, 1), _stack(t, -1.0 / a, 0, 0, 1.0 / d), _stack(t, 0, 0, 0, 0)


def _typeII_A(t, tau):
    return _stack(t, 0, 1, tau, 0)


def _phase_align(t, tau, a_abs, alpha0, alpha1, b_abs, beta0, beta1):
    al = (1 - t) * alpha0 + t * alpha1
    be = (1 - t) * beta0 + t * beta1
    a = a_abs * np.exp(1j * al)
    b = b_abs * np.exp(1j * be)
    da = 1j * (alpha1 - alpha0) * a
    db = 1j * (beta1 - beta0) * b
    B = _stack(t, a, b, b, np.conj(a))
    dB = _stack(t, da, db, db, np.conj(da))
    return _typeII_A(t, tau), B, _stack(t, 0, 0, 0, 0), dB


def _typeII_b_to_0(t, tau, a_re, a_im, b_re, b_im):
    a = complex(a_re, a_im)
    b = complex(b_re, b_im)
    B = _stack(t, a, (1 - t) * b, (1 - t) * b, a.conjugate())
    return _typeII_A(t, tau), B, _stack(t, 0, 0, 0, 0), _stack(t, 0, -b, -b, 0)


def _typeII_b_mid(t, tau, a_re, a_im, b0, b1, beta):
    a = complex(a_re, a_im)
    e = cmath.exp(1j * beta)
    b = ((1 - t) * b0 + t * b1) * e
    db = (b1 - b0) * e
    B = _stack(t, a, b, b, a.conjugate())
    return _typeII_A(t, tau), B, _stack(t, 0, 0, 0, 0), _stack(t, 0, db, db, 0)


def _typeII_a_tau_to_0(t, tau, a, beta):
    # a and tau go linearly to 0 while |b|^2 tracks the midpoint |a|^2 + (tau^2 + 1)/2
    e = cmath.exp(1j * beta)
    at = (1 - t) * a
    tt = (1 - t) * tau
    r = np.sqrt(at * at + 0.5 * (tt * tt + 1.0))
    dr = (-a * at - 0.5 * tau * tt) / r
    A = _stack(t, 0, 1, tt, 0)
    B = _stack(t, at, r * e, r * e, at)
    return A, B, _stack(t, 0, 0, -tau, 0), _stack(t, -a, dr * e, dr * e, -a)


def _typeII_a_to_0(t, tau, a_re, a_im):
    a = complex(a_re, a_im)
    B = _stack(t, (1 - t) * a, 0, 0, (1 - t) * a.conjugate())
    return _typeII_A(t, tau), B, _stack(t, 0, 0, 0, 0), _stack(t, -a, 0, 0, -a.conjugate())


def _typeII_shrink_A(t, tau, kappa, alpha_re, alpha_im, o_re, o_im):
    al = complex(alpha_re, alpha_im)
    o = complex(o_re, o_im)
    A = _stack(t, 0, (1 - t) * kappa, (1 - t) * kappa * tau, 0)
    B = _stack(t, (1 - t) * al, o, o, (1 - t) * al.conjugate())
    dA = _stack(t, 0, -kappa, -kappa * tau, 0)
    dB = _stack(t, -al, 0, 0, -al.conjugate())
    return A, B, dA, dB


_R2 = 1.0 / math.sqrt(2.0)


def _offdiag_swap(t, symmetric=True):
    A = _stack(t, 0, 1, 0, 0)
    upper = (1 - t) * _R2
    lower = t + (1 - t) * _R2
    du, dl = -_R2, 1.0 - _R2
    if symmetric:
        m = 0.5 * (upper + lower)
        dm = 0.5 * (du + dl)
        return A, _stack(t, 0, m, m, 0), _stack(t, 0, 0, 0, 0), _stack(t, 0, dm, dm, 0)
    return A, _stack(t, 0, upper, lower, 0), _stack(t, 0, 0, 0, 0), _stack(t, 0, du, dl, 0)


def _hyp_final_bump(t, eta, symmetric=True):
    x = bump(t, eta)
    dx = bump_derivative(t, eta)
    A = _stack(t, t + 1j * x, 1 - t, 0, 0)
    dA = _stack(t, 1 + 1j * dx, -1, 0, 0)
    if symmetric:
        m = 0.5 * (1 - t)
        return A, _stack(t, 0, m, m, t), dA, _stack(t, 0, -0.5, -0.5, 1)
    return A, _stack(t, 0, 0, 1 - t, t), dA, _stack(t, 0, 0, -1, 1)


def _eli1_to_eli3(t):
    e = np.exp(1j * (1 - t) * math.pi)
    A = _stack(t, 1, 0, 0, e)
    return A, _stack(t, 0, 0, 0, 0), _stack(t, 0, 0, 0, -1j * math.pi * e), _stack(t, 0, 0, 0, 0)


def _eli3_to_eli2_bump(t, eta):
    x = bump(t, eta)
    dx = bump_derivative(t, eta)
    w = cmath.exp(0.25j * math.pi)
    A = _stack(t, 1 - t, w * x, -w * x, 1 - t)
    dA = _stack(t, -1, w * dx, -w * dx, -1)
    return A, _stack(t, t, 0, 0, t), dA, _stack(t, 1, 0, 0, 1)


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


def _check_positive(**kw):
    for k, v in kw.items():
        _require(v > 0, f"{k} must be positive")


CATALOG = {
    "rotate-theta-to-0": (_rotate_to_0, ("phi", "a", "d", "b_re", "b_im"), None),
    "rotate-theta-to-pi": (_rotate_to_pi, ("phi", "a", "d", "b_re", "b_im"), None),
    "typeI-neg-diagB-shrink-a": (_diagB_shrink_a, ("a", "d"), None),
    "typeI-neg-final-A-shrink": (_final_A_shrink, ("d",), lambda p: _check_positive(d=p["d"])),
    "case-e-perturb": (_case_e_perturb, ("eps",), None),
    "case-c-shrink": (_case_c_shrink, ("b",), None),
    "case-d-lt1": (_case_d_lt1, ("b",), None),
    "case-d-gt1": (_case_d_gt1, ("b",), lambda p: _require(p["b"] > 1, "case-d-gt1 needs b > 1")),
    "case-a-shrink": (_case_a_shrink, ("a", "d"), None),
    "case-a-gt1": (_case_a_gt1, ("a", "d"), lambda p: _require(p["a"] > 1 and p["d"] > 1, "case-a-gt1 needs a, d > 1")),
    "typeII-phase-align": (_phase_align, ("tau", "a_abs", "alpha0", "alpha1", "b_abs", "beta0", "beta1"), None),
    "typeII-b-to-0": (_typeII_b_to_0, ("tau", "a_re", "a_im", "b_re", "b_im"), None),
    "typeII-b-mid": (_typeII_b_mid, ("tau", "a_re", "a_im", "b0", "b1", "beta"), None),
    "typeII-a-tau-to-0": (_typeII_a_tau_to_0, ("tau", "a", "beta"), None),
    "typeII-a-to-0": (_typeII_a_to_0, ("tau", "a_re", "a_im"), None),
    "typeII-shrink-A": (_typeII_shrink_A, ("tau", "kappa", "alpha_re", "alpha_im", "o_re", "o_im"), None),
    "typeII-offdiag-swap": (_offdiag_swap, ("symmetric",), None),
    "hyp-final-bump": (_hyp_final_bump, ("eta", "symmetric"), None),
    "eli1-to-eli3": (_eli1_to_eli3, (), None),
    "eli3-to-eli2-bump": (_eli3_to_eli2_bump, ("eta",), None),
}

_DEFAULTS = {"symmetric": True}


class Catalog(Segment):
    """A named recipe with real (or boolean) parameters.

    ``typeII-offdiag-swap`` and ``hyp-final-bump`` are naturally written
    with a non-symmetric B.  ``symmetric=False`` keeps that literal form
    (useful for checking its closed-form determinant); the default replaces B by its
    symmetric part, which is what the quadratic form actually sees.
    """

    kind = "catalog"

    def __init__(self, name: str, parameters: dict | None = None):
        if name not in CATALOG:
            raise KeyError(f"unknown catalog segment {name!r}")
        fn, keys, check = CATALOG[name]
        parameters = dict(parameters or {})
        for k in keys:
            if k not in parameters:
                if k in _DEFAULTS:
                    parameters[k] = _DEFAULTS[k]
                else:
                    raise ValueError(f"{name} requires parameter {k!r}")
        extra = set(parameters) - set(keys)
        if extra:
            raise ValueError(f"{name} got unexpected parameters {sorted(extra)}")
        for k, v in parameters.items():
            if isinstance(v, bool):
                continue
            if not isinstance(v, (int, float)) or not math.isfinite(float(v)):
                raise ValueError(f"parameter {k!r} must be a finite real")
            parameters[k] = float(v)
        if check is not None:
            check(parameters)
        self.name = name
        self.parameters = {k: parameters[k] for k in keys}
        self._fn = fn

    @property
    def symmetric(self) -> bool:
        return bool(self.parameters.get("symmetric", True))

    def pair_at(self, t: float) -> MatrixPair:
        if not self.symmetric:
            raise ValueError(f"{self.name} with symmetric=False has a non-symmetric B")
        return super().pair_at(t)

    def _eval(self, t):
        return self._fn(t, **self.parameters)

    def params(self):
        return {"name": self.name, "parameters": dict(self.parameters)}

    @classmethod
    def from_params(cls, params):
        return cls(params["name"], params.get("parameters", {}))


_KINDS = {c.kind: c for c in (Constant, Linear, GroupPath, GLPath, Reversed, Catalog)}


def segment_from_json(obj) -> Segment:
    try:
        cls = _KINDS[obj["kind"]]
        return cls.from_params(obj["params"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed segment: {exc}") from exc
