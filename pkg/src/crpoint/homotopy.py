"""Certified paths of nondegenerate pairs to the elliptic or hyperbolic model.

A path is a list of closed-form segments, each given an equal share of the
global parameter.  ``verify_nondegenerate`` samples the block determinant on
Chebyshev-Lobatto nodes of every segment and refines local minima with a
bounded scalar minimizer, so near-tangential zeros between nodes are not
missed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernel
from .canon import CosquareTag, normal_form
from .errors import DegenerateA, DegeneratePair, FormatError, NonGeneric, PerturbationFailed, SearchFailed
from .pairs import (
    ELLIPTIC_MODEL,
    HYPERBOLIC_MODEL,
    GroupElement,
    MatrixPair,
    Sign,
    SignClass,
    act,
    det4_batch,
    sign_class,
)
from .segments import (
    Catalog,
    Constant,
    GLPath,
    GroupPath,
    Linear,
    Segment,
    segment_from_json,
)

ENDPOINT_TOL = 1e-9


@dataclass
class HomotopyOptions:
    samples: int = 512
    margin: float = 1e-6
    seed: int = 0
    max_retries: int = 20
    eta: float = 0.5
    perturb: float = 0.1
    tol: float = 1e-7


@dataclass
class Certificate:
    samples: int
    min_abs_det4: float
    min_abs_det4_normalized: float
    sign: int
    passed: bool
    worst_t: float
    max_step_variation: float
    margin: float = 1e-6

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "min_abs_det4": self.min_abs_det4,
            "sign": self.sign,
            "passed": self.passed,
            "min_abs_det4_normalized": self.min_abs_det4_normalized,
            "worst_t": self.worst_t,
            "max_step_variation": self.max_step_variation,
            "margin": self.margin,
        }

    @classmethod
    def from_json(cls, obj) -> "Certificate":
        try:
            return cls(
                samples=int(obj["samples"]),
                min_abs_det4=float(obj["min_abs_det4"]),
                min_abs_det4_normalized=float(obj.get("min_abs_det4_normalized", obj["min_abs_det4"])),
                sign=int(obj["sign"]),
                passed=bool(obj.get("passed", True)),
                worst_t=float(obj.get("worst_t", 0.0)),
                max_step_variation=float(obj.get("max_step_variation", 0.0)),
                margin=float(obj.get("margin", 1e-6)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed certificate: {exc}") from exc


@dataclass
class HomotopyPath:
    segments: list[Segment]
    certificate: Certificate | None = None

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a path needs at least one segment")

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def locate(self, t):
        """Segment index and local parameter for global ``t`` (array-valued)."""
        t = np.asarray(t, dtype=float)
        if np.any((t < 0.0) | (t > 1.0)) or np.any(~np.isfinite(t)):
            raise ValueError("t must lie in [0, 1]")
        K = self.n_segments
        idx = np.minimum((t * K).astype(int), K - 1)
        return idx, t * K - idx

    def evaluate(self, t):
        """Stacks (A, B) at global parameters ``t``."""
        t = np.asarray(t, dtype=float)
        idx, loc = self.locate(t)
        A = np.empty(t.shape + (2, 2), dtype=complex)
        B = np.empty_like(A)
        for k in np.unique(idx):
            m = idx == k
            A[m], B[m] = self.segments[k].evaluate(loc[m])
        return A, B

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        idx, loc = self.locate(t)
        K = self.n_segments
        dA = np.empty(t.shape + (2, 2), dtype=complex)
        dB = np.empty_like(dA)
        for k in np.unique(idx):
            m = idx == k
            a, b = self.segments[k].derivative(loc[m])
            dA[m], dB[m] = K * a, K * b
        return dA, dB

    @property
    def start(self) -> MatrixPair:
        return self.segments[0].start

    @property
    def end(self) -> MatrixPair:
        return self.segments[-1].end

    def junction_mismatch(self) -> float:
        worst = 0.0
        for s1, s2 in zip(self.segments, self.segments[1:]):
            worst = max(worst, s1.end.distance(s2.start))
        return worst

    def to_json(self) -> dict:
        out = {"segments": [s.to_json() for s in self.segments]}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "HomotopyPath":
        if not isinstance(obj, dict) or "segments" not in obj:
            raise FormatError('path JSON needs a "segments" list')
        segs = [segment_from_json(s) for s in obj["segments"]]
        cert = Certificate.from_json(obj["certificate"]) if "certificate" in obj else None
        return cls(segs, cert)


def eval_path(path: HomotopyPath, t: float) -> MatrixPair:
    A, B = path.evaluate(float(t))
    return MatrixPair(A, B)


def path_derivative(path: HomotopyPath, t: float):
    dA, dB = path.derivative(float(t))
    return dA, dB


def model_pair(s) -> MatrixPair:
    tag = s.tag if isinstance(s, SignClass) else Sign(s)
    if tag is Sign.ELLIPTIC:
        return ELLIPTIC_MODEL
    if tag is Sign.HYPERBOLIC:
        return HYPERBOLIC_MODEL
    raise DegeneratePair("degenerate pairs have no model")


def group_path(g: GroupElement, base: MatrixPair) -> list[Segment]:
    """Segments moving ``base`` along a path from the identity to ``g``."""
    if g.equivalent(GroupElement.identity(), 0.0):
        return [Constant(base)]
    return [GroupPath(base, g)]


def catalog_segment(name: str, params: dict | None = None) -> Catalog:
    return Catalog(name, params)


# --------------------------------------------------------------------------
# certification

def chebyshev_nodes(N: int) -> np.ndarray:
    k = np.arange(N)
    t = 0.5 * (1.0 - np.cos(math.pi * k / (N - 1)))
    t[0], t[-1] = 0.0, 1.0
    return t


def _det_values(seg: Segment, t):
    A, B = seg.evaluate(t)
    raw = det4_batch(A, B)
    nrm = np.maximum(kernel.opnorm2_batch(A), kernel.opnorm2_batch(B))
    with np.errstate(divide="ignore", invalid="ignore"):
        normed = np.where(nrm > 0, raw / nrm**4, 0.0)
    return raw, normed


def _refine(seg, lo, hi, which):
    def f(x):
        raw, normed = _det_values(seg, np.array([x]))
        return abs((raw if which == 0 else normed)[0])

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    x = float(res.x)
    raw, normed = _det_values(seg, np.array([x]))
    return x, float(raw[0]), float(normed[0])


def _candidates(vals: np.ndarray) -> list[int]:
    """Interior local minima of |vals| worth refining, plus the global one."""
    a = np.abs(vals)
    n = len(a)
    out = {int(np.argmin(a))}
    if n >= 3:
        mid = (a[1:-1] <= a[:-2]) & (a[1:-1] <= a[2:])
        step = np.maximum(np.abs(a[1:-1] - a[:-2]), np.abs(a[2:] - a[1:-1]))
        # a zero can hide between nodes only if the value is comparable to the local variation
        suspicious = mid & (a[1:-1] <= 8.0 * step + 1e-12)
        out.update((np.nonzero(suspicious)[0] + 1).tolist())
    return sorted(out)


def verify_nondegenerate(path: HomotopyPath, N: int = 512, margin: float = 1e-6) -> Certificate:
    """Sample det4 per segment; pass iff the sign is constant and |det4| stays above margin.

    ``margin`` applies to det4 of the pair divided by max(|A|, |B|), so the
    test does not depend on the overall size of the pair.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    nodes = chebyshev_nodes(N)
    K = path.n_segments
    sign = 0
    flipped = False
    min_raw = math.inf
    min_norm = math.inf
    worst_t = 0.0
    max_var = 0.0
    for i, seg in enumerate(path.segments):
        raw, normed = _det_values(seg, nodes)
        if sign == 0:
            sign = int(np.sign(normed[0]))
        if np.any(np.sign(normed) != sign) or sign == 0:
            flipped = True
        if len(normed) > 1:
            max_var = max(max_var, float(np.abs(np.diff(normed)).max()))
        j = int(np.argmin(np.abs(normed)))
        if abs(normed[j]) < min_norm:
            min_norm = float(abs(normed[j]))
            worst_t = (i + nodes[j]) / K
        min_raw = min(min_raw, float(np.abs(raw).min()))
        for which, vals in ((0, raw), (1, normed)):
            for k in _candidates(vals):
                lo = nodes[max(k - 1, 0)]
                hi = nodes[min(k + 1, N - 1)]
                if hi <= lo:
                    continue
                x, r, nv = _refine(seg, lo, hi, which)
                if np.sign(nv) != sign:
                    flipped = True
                min_raw = min(min_raw, abs(r))
                if abs(nv) < min_norm:
                    min_norm = abs(nv)
                    worst_t = (i + x) / K
    passed = (not flipped) and min_norm > margin
    return Certificate(
        samples=N,
        min_abs_det4=float(min_raw),
        min_abs_det4_normalized=float(min_norm),
        sign=sign,
        passed=bool(passed),
        worst_t=float(worst_t),
        max_step_variation=float(max_var),
        margin=margin,
    )


# --------------------------------------------------------------------------
# perturbation off the non-generic strata

def _is_generic(p: MatrixPair, tol: float) -> bool:
    try:
        normal_form(p, tol)
    except (NonGeneric, DegenerateA):
        return False
    return True


def perturb_generic(p: MatrixPair, eta: float = 1e-3, tol: float = 1e-7, seed: int = 0,
                    samples: int = 64) -> MatrixPair:
    """A nearby generic pair joined to ``p`` by a sign-preserving straight segment.

    Tries targeted moves first (rotating A off the cosquare boundary, filling a
    zero diagonal entry of B in the canonical frame, nudging a singular A),
    then random directions, halving ``eta`` on each failure.
    """
    if _is_generic(p, tol):
        return p
    sc = sign_class(p)
    if sc.tag is Sign.DEGENERATE:
        raise DegeneratePair("cannot perturb a degenerate pair")
    s = p.scale
    rng = np.random.default_rng(seed)
    e = eta
    for _ in range(12):
        for q in _perturbation_candidates(p, e, s, tol, rng):
            if not _is_generic(q, tol):
                continue
            if sign_class(q).tag is not sc.tag:
                continue
            cert = verify_nondegenerate(HomotopyPath([Linear(p, q, "perturb")]), samples, 0.0)
            if cert.passed:
                return q
        e *= 0.5
    raise PerturbationFailed("cannot certify sign preservation of the perturbation")


def _perturbation_candidates(p, e, s, tol, rng):
    A, B = p.A, p.B
    cands = []
    if abs(kernel.det2(A)) > tol * s * s:
        # boundary / TypeII cosquare: rotate the second column of A
        cands.append(MatrixPair(A @ np.diag([1.0, np.exp(1j * e)]), B))
        # zero diagonal of B in a canonical frame
        try:
            from .canon import canonical_A, canonical_matrix

            cls, g = canonical_A(A, tol)
            q = act(g, p)
            Bc = q.B.copy()
            for j in range(2):
                if abs(Bc[j, j]) < tol * max(kernel.opnorm(Bc), 1.0):
                    Bc[j, j] = e * s
            back = act(g.inverse(), MatrixPair(canonical_matrix(cls), Bc))
            cands.append(back)
        except (NonGeneric, DegenerateA):
            pass
    else:
        cands.append(MatrixPair(A + e * s * np.diag([1.0, np.exp(0.7j)]), B))
    for _ in range(4):
        dA = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        dB = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        dA *= e * s / np.abs(dA).max()
        dB = 0.5 * (dB + dB.T)
        dB *= e * s / np.abs(dB).max()
        cands.append(MatrixPair(A + dA, B + dB))
    return cands


# --------------------------------------------------------------------------
# constructive routes

class _Builder:
    def __init__(self, p: MatrixPair):
        self.segments: list[Segment] = []
        self.cur = p

    def add(self, seg: Segment, snap: MatrixPair | None = None):
        self.segments.append(seg)
        self.cur = snap if snap is not None else seg.end

    def group(self, g: GroupElement, snap: MatrixPair | None = None):
        seg = GroupPath(self.cur, g)
        self.add(seg, snap)

    def catalog(self, name, **params):
        self.add(Catalog(name, params))


def _takagi_to_identity(B: np.ndarray) -> GroupElement:
    """(1, P) with P^T B P = I for invertible symmetric B."""
    U, (s1, s2) = kernel.takagi2(B)
    return GroupElement(1.0, np.conj(U) @ np.diag([1.0 / math.sqrt(s1), 1.0 / math.sqrt(s2)]))


def _from_B_only(b: _Builder):
    """(0, B) -> (0, I) by a group path."""
    g = _takagi_to_identity(b.cur.B)
    b.group(g, ELLIPTIC_MODEL)


def _from_A_only(b: _Builder, eta: float):
    """(A, 0) -> (I, 0) -> bump -> (0, I)."""
    A = b.cur.A
    eli1 = np.diag([1.0, -1.0])
    if np.abs(A - eli1).max() < 1e-12:
        b.catalog("eli1-to-eli3")
    elif np.abs(A - np.eye(2)).max() > 1e-14:
        b.add(GLPath(A, np.eye(2), np.zeros((2, 2))))
    b.catalog("eli3-to-eli2-bump", eta=eta)


def _typeI_hyperbolic(b: _Builder, theta: float, B: np.ndarray):
    b.catalog("rotate-theta-to-0", phi=theta, a=B[0, 0].real, d=B[1, 1].real,
              b_re=B[0, 1].real, b_im=B[0, 1].imag)
    U, (s1, s2) = kernel.takagi2(b.cur.B)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    # P = conj(U) swap is unitary, so A = I is kept and B becomes diag(s2, s1)
    a, d = s2, s1
    b.group(GroupElement(1.0, np.conj(U) @ swap), MatrixPair(np.eye(2), np.diag([a, d])))
    if not d > 1.0:
        raise NonGeneric("hyperbolic_takagi", "expected the larger Takagi value above 1")
    b.catalog("typeI-neg-diagB-shrink-a", a=a, d=d)
    b.group(GroupElement(1.0, np.diag([1.0, 1.0 / math.sqrt(d)])),
            MatrixPair(np.diag([1.0, 1.0 / d]), np.diag([0.0, 1.0])))
    b.catalog("typeI-neg-final-A-shrink", d=d)


def _shrink_B_is_safe(A: np.ndarray, B: np.ndarray) -> bool:
    """Whether (A, sB), s in [0, 1], avoids det4 = 0.

    For invertible A, det4(A, sB) = |det A|^2 det(I - s^2 K) with
    K = conj(A)^{-1} B A^{-1} conj(B).  A zero in s^2 in (0, 1] is a real
    eigenvalue of K that is at least 1.
    """
    K = kernel.inv2(np.conj(A)) @ B @ kernel.inv2(A) @ np.conj(B)
    ev = np.linalg.eigvals(K)
    for lam in ev:
        if abs(lam.imag) <= 1e-9 * max(1.0, abs(lam)) and lam.real >= 1.0 - 1e-9:
            return False
    return True


def _typeI_elliptic(b: _Builder, theta: float, B: np.ndarray, eta: float):
    b.catalog("rotate-theta-to-pi", phi=theta, a=B[0, 0].real, d=B[1, 1].real,
              b_re=B[0, 1].real, b_im=B[0, 1].imag)
    J = np.diag([1.0, -1.0]).astype(complex)
    Bc = b.cur.B
    if _shrink_B_is_safe(J, Bc):
        b.add(Linear(b.cur, MatrixPair(J, np.zeros((2, 2))), "shrink-B"))
        _from_A_only(b, eta)
    else:
        b.add(Linear(b.cur, MatrixPair(np.zeros((2, 2)), Bc), "shrink-A"))
        _from_B_only(b)


def _nearest(angle: float, targets) -> float:
    return min(targets, key=lambda x: abs(angle - x))


def _typeIII_hyperbolic(b: _Builder, tau: float, B: np.ndarray, eta: float):
    a, bb = complex(B[0, 0]), complex(B[0, 1])
    alpha0, beta0 = math.atan2(a.imag, a.real), math.atan2(bb.imag, bb.real)
    alpha1 = _nearest(alpha0, (-math.pi, 0.0, math.pi))
    beta1 = _nearest(beta0, (-math.pi, 0.0, math.pi))
    b.catalog("typeII-phase-align", tau=tau, a_abs=abs(a), alpha0=alpha0, alpha1=alpha1,
              b_abs=abs(bb), beta0=beta0, beta1=beta1)
    ar = abs(a) * math.cos(alpha1)
    mid = math.sqrt(abs(a) ** 2 + 0.5 * (tau * tau + 1.0))
    b.catalog("typeII-b-mid", tau=tau, a_re=ar, a_im=0.0, b0=abs(bb), b1=mid, beta=beta1)
    b.catalog("typeII-a-tau-to-0", tau=tau, a=ar, beta=beta1)
    r2 = 1.0 / math.sqrt(2.0)
    target = MatrixPair(np.array([[0, 1], [0, 0]]), np.array([[0, r2], [r2, 0]]))
    if math.cos(beta1) < 0:
        b.group(GroupElement(-1j, np.diag([1.0, 1j])), target)
    else:
        b.cur = target
        # snap the endpoint; the segment already ends there up to rounding
    b.catalog("typeII-offdiag-swap", symmetric=True)
    b.catalog("hyp-final-bump", eta=eta, symmetric=True)


def _typeIII_elliptic(b: _Builder, tau: float, B: np.ndarray, eta: float):
    a, bb = complex(B[0, 0]), complex(B[0, 1])
    alpha0, beta0 = math.atan2(a.imag, a.real), math.atan2(bb.imag, bb.real)
    half = 0.5 * math.pi
    alpha1 = _nearest(alpha0, (-half, half))
    beta1 = _nearest(beta0, (-half, half))
    b.catalog("typeII-phase-align", tau=tau, a_abs=abs(a), alpha0=alpha0, alpha1=alpha1,
              b_abs=abs(bb), beta0=beta0, beta1=beta1)
    ar = abs(a) * math.sin(alpha1)
    br = abs(bb) * math.sin(beta1)
    # D(X) = X^2 + X (2|a|^2 - tau^2 - 1) + (|a|^2 + tau)^2 with X = |b|^2
    c1 = 2 * a.real**2 + 2 * a.imag**2 - tau * tau - 1.0
    c0 = (abs(a) ** 2 + tau) ** 2
    disc = c1 * c1 - 4.0 * c0
    big_b = False
    if disc > 0 and c1 < 0:
        x2 = 0.5 * (-c1 + math.sqrt(disc))
        big_b = abs(bb) ** 2 > 0.5 * (-c1) and abs(bb) ** 2 >= x2 * (1 - 1e-12)
    if not big_b:
        b.catalog("typeII-b-to-0", tau=tau, a_re=0.0, a_im=ar, b_re=0.0, b_im=br)
        b.catalog("typeII-a-to-0", tau=tau, a_re=0.0, a_im=ar)
        b.cur = MatrixPair(np.array([[0, 1], [tau, 0]]), np.zeros((2, 2)))
        _from_A_only(b, eta)
        return
    nb = abs(bb)
    sgn = 1.0 if br > 0 else -1.0
    b.group(GroupElement(1.0, np.eye(2) / math.sqrt(nb)),
            MatrixPair(np.array([[0, 1 / nb], [tau / nb, 0]]),
                       np.array([[1j * ar / nb, 1j * sgn], [1j * sgn, -1j * ar / nb]])))
    b.catalog("typeII-shrink-A", tau=tau, kappa=1.0 / nb, alpha_re=0.0, alpha_im=ar / nb,
              o_re=0.0, o_im=sgn)
    b.cur = MatrixPair(np.zeros((2, 2)), np.array([[0, 1j * sgn], [1j * sgn, 0]]))
    _from_B_only(b)


def _constructive(p: MatrixPair, sign: Sign, opts: HomotopyOptions) -> list[Segment]:
    target = model_pair(sign)
    if p.allclose(target, 1e-12):
        return [Constant(target)]
    b = _Builder(p)
    s = p.scale
    if sign is Sign.ELLIPTIC:
        if kernel.opnorm(p.B) <= 1e-12 * s:
            b.cur = MatrixPair(p.A, np.zeros((2, 2)))
            _from_A_only(b, opts.eta)
            return b.segments
        if kernel.opnorm(p.A) <= 1e-12 * s:
            b.cur = MatrixPair(np.zeros((2, 2)), p.B)
            _from_B_only(b)
            return b.segments
    try:
        nf = normal_form(b.cur, opts.tol)
    except (NonGeneric, DegenerateA):
        q = perturb_generic(b.cur, opts.perturb, opts.tol, opts.seed)
        b.add(Linear(b.cur, q, "perturb"))
        nf = normal_form(q, opts.tol)
    b.group(nf.witness, nf.pair)
    cls = nf.cosquare_class
    if cls.tag is CosquareTag.TYPE_I:
        if sign is Sign.HYPERBOLIC:
            _typeI_hyperbolic(b, cls.theta, nf.B_reduced)
        else:
            _typeI_elliptic(b, cls.theta, nf.B_reduced, opts.eta)
    else:
        if sign is Sign.HYPERBOLIC:
            _typeIII_hyperbolic(b, cls.mu, nf.B_reduced, opts.eta)
        else:
            _typeIII_elliptic(b, cls.mu, nf.B_reduced, opts.eta)
    return b.segments


def _random_same_sign(rng, sign: Sign) -> MatrixPair:
    while True:
        A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q = MatrixPair(A, 0.5 * (M + M.T))
        if sign_class(q).tag is sign:
            return q


def _search(p: MatrixPair, sign: Sign, opts: HomotopyOptions, best: Certificate | None):
    """Piecewise-linear paths through random anchors of the same sign."""
    target = model_pair(sign)
    for attempt in range(opts.max_retries):
        rng = np.random.default_rng([opts.seed, attempt])
        anchors = [_random_same_sign(rng, sign) for _ in range(attempt % 3)]
        pts = [p, *anchors, target]
        segs = [Linear(x, y, "search") for x, y in zip(pts, pts[1:])]
        path = HomotopyPath(segs)
        cert = verify_nondegenerate(path, opts.samples, opts.margin)
        if cert.passed:
            path.certificate = cert
            return path
        if best is None or cert.min_abs_det4_normalized > best.min_abs_det4_normalized:
            best = cert
    raise SearchFailed("no certified path found", best)


def _endpoints_ok(path: HomotopyPath, p: MatrixPair, target: MatrixPair) -> bool:
    return (
        path.start.allclose(p, ENDPOINT_TOL)
        and path.end.distance(target) <= ENDPOINT_TOL
        and path.junction_mismatch() <= 1e-10 * max(1.0, p.scale)
    )


def connect_to_model(p: MatrixPair, opts: HomotopyOptions | None = None) -> HomotopyPath:
    """Certified path from ``p`` to the model pair of its sign."""
    opts = opts or HomotopyOptions()
    sc = sign_class(p)
    if sc.tag is Sign.DEGENERATE:
        raise DegeneratePair("pair is degenerate (det4 = 0)")
    target = model_pair(sc)
    best = None
    try:
        segs = _constructive(p, sc.tag, opts)
        path = HomotopyPath(segs)
        cert = verify_nondegenerate(path, opts.samples, opts.margin)
        if cert.passed and cert.sign == sc.sign and _endpoints_ok(path, p, target):
            path.certificate = cert
            return path
        best = cert
    except (NonGeneric, DegenerateA, PerturbationFailed):
        pass
    return _search(p, sc.tag, opts, best)


# --------------------------------------------------------------------------
# closed-form block determinants of the two normal-form families

def typeI_det_formula(phi, a, d, b):
    """det4 of (diag(1, e^{i phi}), [[a, b], [b, d]]) with real a, d."""
    b = np.asarray(b, dtype=complex)
    ab2 = np.abs(b) ** 2
    return (ab2**2 - a * d * (b**2 + np.conj(b) ** 2).real - 2 * ab2 * np.cos(phi)
            + (1 - a * a) * (1 - d * d))


def typeIII_det_formula(tau, a, b):
    """det4 of ([[0, 1], [tau, 0]], [[a, b], [b, conj(a)]])."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    A2, B2 = np.abs(a) ** 2, np.abs(b) ** 2
    alpha, beta = np.angle(a), np.angle(b)
    return (B2**2 - B2 * tau**2 - B2 - 2 * A2 * B2 * np.cos(2 * beta) + A2**2
            - 2 * A2 * tau * np.cos(2 * alpha) + tau**2)
