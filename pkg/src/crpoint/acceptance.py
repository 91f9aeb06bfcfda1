"""The eight acceptance criteria as plain functions.

Each returns a ``CriterionResult``.  ``tests/test_acceptance.py`` and the
``selftest`` subcommand both call ``run_all``.  ``scale`` shrinks every
sample count proportionally for quick runs (1.0 is the full criterion).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .canon import DEFAULT_TOL, classify_cosquare, normal_form
from .errors import DegenerateA, NonGeneric
from .homotopy import (
    HomotopyOptions,
    HomotopyPath,
    catalog_segment,
    connect_to_model,
    model_pair,
    typeI_det_formula,
    typeIII_det_formula,
    verify_nondegenerate,
)
from .levi import (
    ModelKind,
    growth_bounds,
    halton_ball,
    levi_closed_form,
    levi_fd,
    minor_identity_residual,
    positivity_scan,
)
from .pairs import (
    ELLIPTIC_MODEL,
    HYPERBOLIC_MODEL,
    MatrixPair,
    Sign,
    act,
    act_batch,
    block4,
    det4,
    det4_batch,
    random_group_element,
    random_pair,
    sign_batch,
    sign_class,
)
from .segments import Constant, bump
from .surface import SurfaceSpec, bounds, flatten, verify_no_new_complex_points


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    details: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.seconds <= self.limit

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_time else "FAIL"
        info = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{status}] {self.number}. {self.name} ({self.seconds:.1f}s / {self.limit:.0f}s) {info}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "pass": bool(self.passed and self.within_time),
            "seconds": self.seconds,
            "limit_seconds": self.limit,
            "details": self.details,
        }


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _n(full: int, scale: float, minimum: int = 1) -> int:
    return max(minimum, int(round(full * scale)))


def _timed(number, name, limit, fn):
    t0 = time.perf_counter()
    passed, details = fn()
    return CriterionResult(number, name, bool(passed), time.perf_counter() - t0, limit, details)


def criterion_sign_oracle(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n = _n(10_000, scale)
        mismatches = 0
        worst_imag = 0.0
        for i in range(n):
            p = random_pair((seed, 1, i))
            exact = kernel.det(block4(p.A, p.B))
            sc = p.scale
            worst_imag = max(worst_imag, abs(exact.imag) / sc**4)
            tag = sign_class(p).tag
            want = Sign.ELLIPTIC if exact.real > 0 else Sign.HYPERBOLIC
            if tag is not want:
                mismatches += 1
        return mismatches == 0 and worst_imag < 1e-10, {"pairs": n, "mismatches": mismatches, "max_rel_imag": worst_imag}

    return _timed(1, "sign classifier vs cofactor determinant", 5.0, run)


def criterion_det_formulas(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n = _n(10_000, scale)
        rng = np.random.default_rng((seed, 2))
        phi = rng.uniform(0, math.pi, n)
        a, d = rng.normal(size=n), rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        A = np.zeros((n, 2, 2), complex)
        A[:, 0, 0], A[:, 1, 1] = 1.0, np.exp(1j * phi)
        B = np.zeros((n, 2, 2), complex)
        B[:, 0, 0], B[:, 1, 1] = a, d
        B[:, 0, 1] = B[:, 1, 0] = b
        D = det4_batch(A, B)
        e1 = float(np.max(np.abs(D - typeI_det_formula(phi, a, d, b)) / np.maximum(1.0, np.abs(D))))
        tau = rng.uniform(0, 1, n)
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        A = np.zeros((n, 2, 2), complex)
        A[:, 0, 1], A[:, 1, 0] = 1.0, tau
        B = np.zeros((n, 2, 2), complex)
        B[:, 0, 0], B[:, 1, 1] = a, np.conj(a)
        B[:, 0, 1] = B[:, 1, 0] = b
        D = det4_batch(A, B)
        e2 = float(np.max(np.abs(D - typeIII_det_formula(tau, a, b)) / np.maximum(1.0, np.abs(D))))
        return max(e1, e2) < 1e-9, {"draws": n, "typeI_rel_err": e1, "typeIII_rel_err": e2}

    return _timed(2, "closed-form determinant polynomials", 5.0, run)


def _random_group_batch(rng, n):
    zeta = np.exp(2j * math.pi * rng.random(n))
    P = (rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))) / math.sqrt(2.0)
    bad = np.abs(kernel.det2(P)) < 0.1
    while bad.any():
        k = int(bad.sum())
        P[bad] = (rng.standard_normal((k, 2, 2)) + 1j * rng.standard_normal((k, 2, 2))) / math.sqrt(2.0)
        bad = np.abs(kernel.det2(P)) < 0.1
    return zeta, P


def criterion_group_invariance(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n_pairs = _n(100, scale)
        n_g = _n(1000, scale)
        rng = np.random.default_rng((seed, 3))
        flips = 0
        worst = 0.0
        for i in range(n_pairs):
            p = random_pair((seed, 3, i))
            s0 = sign_class(p).sign
            zeta, P = _random_group_batch(rng, n_g)
            A, B = act_batch(zeta, P, p.A, p.B)
            flips += int(np.count_nonzero(sign_batch(A, B) != s0))
            d0 = det4(p)
            d = det4_batch(A, B)
            pred = d0 * np.abs(kernel.det2(P)) ** 4
            worst = max(worst, float(np.max(np.abs(d - pred) / np.abs(pred))))
        return flips == 0 and worst < 1e-8, {"pairs": n_pairs, "elements": n_g, "sign_changes": flips, "det_scale_rel_err": worst}

    return _timed(3, "group invariance", 10.0, run)


def criterion_normal_form(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n = _n(1000, scale)
        worst_fit = 0.0
        worst_inv = 0.0
        skipped = 0
        done = 0
        i = 0
        while done < n:
            p = random_pair((seed, 4, i))
            i += 1
            try:
                nf = normal_form(p)
            except (NonGeneric, DegenerateA):
                skipped += 1
                continue
            q = act(nf.witness, p)
            worst_fit = max(worst_fit, q.distance(nf.pair) / max(1.0, nf.pair.scale))
            g = random_group_element((seed, 4, i, 1))
            c2 = classify_cosquare(act(g, p).A, DEFAULT_TOL)
            c1 = nf.cosquare_class
            if c2.tag is not c1.tag:
                worst_inv = math.inf
            else:
                v1 = c1.theta if c1.theta is not None else c1.mu
                v2 = c2.theta if c2.theta is not None else c2.mu
                worst_inv = max(worst_inv, abs(v1 - v2))
            done += 1
        return worst_fit < 1e-8 and worst_inv < 1e-7, {
            "pairs": n, "skipped_non_generic": skipped, "witness_err": worst_fit, "invariant_err": worst_inv}

    return _timed(4, "normal-form soundness", 30.0, run)


def criterion_homotopy(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n = _n(1000, scale)
        opts = HomotopyOptions(seed=seed)
        failures = 0
        worst_margin = math.inf
        worst_end = 0.0
        counts = {"elliptic": 0, "hyperbolic": 0}
        for i in range(n):
            p = random_pair((seed, 5, i))
            sc = sign_class(p)
            counts[sc.tag.value] += 1
            try:
                path = connect_to_model(p, opts)
            except Exception:  # noqa: BLE001 - any failure counts against the criterion
                failures += 1
                continue
            c = path.certificate
            end = max(path.start.distance(p), path.end.distance(model_pair(sc)))
            worst_end = max(worst_end, end)
            worst_margin = min(worst_margin, c.min_abs_det4_normalized)
            if not (c.passed and c.sign == sc.sign and c.samples == 512 and end <= 1e-9):
                failures += 1
        t = np.linspace(0.0, 1.0, 2001)
        x = bump(t, 0.5)
        A, B = catalog_segment("eli3-to-eli2-bump", {"eta": 0.5}).evaluate(t)
        e_ell = float(np.abs(det4_batch(A, B) - ((1 - 2 * t) ** 2 + x**2 * (x**2 + 2 * t**2))).max())
        A, B = catalog_segment("hyp-final-bump", {"eta": 0.5, "symmetric": False}).evaluate(t)
        raw = np.linalg.det(block4(A, B)).real
        e_hyp = float(np.abs(raw + ((1 - 2 * t) ** 2 + t**2 * x**2)).max())
        c0 = verify_nondegenerate(HomotopyPath([catalog_segment("eli3-to-eli2-bump", {"eta": 0.0})]), 512)
        rejected = (not c0.passed) and abs(c0.worst_t - 0.5) < 1e-6
        ok = failures == 0 and e_ell < 1e-9 and e_hyp < 1e-9 and rejected
        return ok, {
            "pairs": n, **counts, "failures": failures, "min_norm_det4": worst_margin,
            "endpoint_err": worst_end, "bump_ell_err": e_ell, "bump_hyp_err": e_hyp,
            "eta0_rejected_at_half": rejected}

    return _timed(5, "homotopy certification", 300.0, run)


def criterion_surface(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        exact = True
        for P in (ELLIPTIC_MODEL, HYPERBOLIC_MODEL):
            spec = SurfaceSpec(flatten(HomotopyPath([Constant(P)])))
            b = bounds(spec)
            exact &= abs(b.delta - 1.0) <= 1e-12 and abs(b.m) <= 1e-12 and b.n_required == 1
        n_paths = _n(10, scale)
        fd_per_path = max(1, _n(100, scale) // n_paths)
        failed = 0
        worst_fd = 0.0
        i = 0
        done = 0
        while done < n_paths:
            p = random_pair((seed, 6, i))
            i += 1
            path = connect_to_model(p, HomotopyOptions(seed=seed))
            if path.n_segments < 2:
                continue
            spec = SurfaceSpec.from_connect_path(path)
            spec.n = bounds(spec).n_required
            rep = verify_no_new_complex_points(spec, fd_points=fd_per_path, seed=seed + i)
            failed += int(not rep.passed)
            worst_fd = max(worst_fd, rep.fd_max_error)
            done += 1
        return exact and failed == 0 and worst_fd < 1e-6, {
            "model_bounds_exact": exact, "paths": n_paths, "failed": failed,
            "fd_points": fd_per_path * n_paths, "fd_max_err": worst_fd}

    return _timed(6, "no new complex points", 120.0, run)


def criterion_levi(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        n = _n(1000, scale)
        fd_err = 0.0
        for k in ModelKind:
            pts = halton_ball(n, 0.1, seed + 7)
            fd_err = max(fd_err, float(np.abs(levi_closed_form(k, pts) - levi_fd(k, pts)).max()))
        grid = _n(7**6, scale, 1000)
        ell = positivity_scan(ModelKind.ELLIPTIC, 0.05, grid, seed=seed)
        hyp = positivity_scan(ModelKind.HYPERBOLIC, 0.05, grid, seed=seed)
        rng = np.random.default_rng((seed, 7))
        m = _n(10_000, scale)
        r = rng.uniform(0, 1, m) ** 0.5 * 0.999
        z2 = r * np.exp(2j * math.pi * rng.random(m))
        u = rng.normal(size=m) + 1j * rng.normal(size=m)
        resid = float(np.max(minor_identity_residual(z2, u)))
        ok = fd_err < 1e-6 and ell.n_violations == 0 and hyp.n_violations == 0 and hyp.min_trace > 0 and resid < 1e-10
        return ok, {
            "fd_max_err": fd_err, "scan_points": grid, "elliptic_violations": ell.n_violations,
            "elliptic_min_eig": ell.min_eigenvalue, "hyperbolic_violations": hyp.n_violations,
            "hyperbolic_min_2nd_eig": hyp.min_second_eigenvalue, "hyperbolic_min_trace": hyp.min_trace,
            "minor_residual": resid}

    return _timed(7, "Levi forms", 60.0, run)


def criterion_growth(seed: int = 0, scale: float = 1.0) -> CriterionResult:
    def run():
        out = {}
        ok = True
        for k in ModelKind:
            g = growth_bounds(k, 0.05, _n(2000, scale, 50), seed)
            ok &= g.c_est > 0 and g.C_est < 1e3 and math.isfinite(g.C_est)
            out[f"{k.value}_c"] = g.c_est
            out[f"{k.value}_C"] = g.C_est
        return ok, out

    return _timed(8, "growth bounds", 60.0, run)


CRITERIA = [
    criterion_sign_oracle,
    criterion_det_formulas,
    criterion_group_invariance,
    criterion_normal_form,
    criterion_homotopy,
    criterion_surface,
    criterion_levi,
    criterion_growth,
]


def run_all(seed: int = 0, scale: float = 1.0, only=None, report=None) -> list[CriterionResult]:
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        res = fn(seed, scale)
        if report is not None:
            report(res)
        results.append(res)
    return results
