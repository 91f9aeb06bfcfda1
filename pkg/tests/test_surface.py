import numpy as np
import pytest

from crpoint.errors import DeltaZero
from crpoint.homotopy import HomotopyPath, catalog_segment, connect_to_model
from crpoint.pairs import ELLIPTIC_MODEL, HYPERBOLIC_MODEL, MatrixPair, random_pair
from crpoint.segments import Constant, Linear
from crpoint.surface import (
    FLAT_HI,
    FLAT_LO,
    SurfaceGrid,
    SurfaceSpec,
    bounds,
    flatten,
    sigma,
    sigma_derivative,
    smooth_step,
    surface_eval,
    verify_no_new_complex_points,
    wirtinger_gradient,
)

SMALL = SurfaceGrid(24, 12, 12)
Z = np.zeros((2, 2))


def _constant_spec(p, n=1, eps=1.0):
    return SurfaceSpec(flatten(HomotopyPath([Constant(p)])), eps, n)


def test_sigma_is_a_flat_step():
    t = np.linspace(0, 1, 1001)
    g = sigma(t)
    assert np.all(g[t <= FLAT_LO] == 0) and np.all(g[t >= FLAT_HI] == 1)
    # strictly increasing in exact arithmetic; floats saturate near the ends
    assert np.all(np.diff(g) >= 0)
    assert np.all(np.diff(g[(t > 0.2) & (t < 0.8)]) > 0)
    h = 1e-6
    tt = np.linspace(0.02, 0.98, 97)
    np.testing.assert_allclose(sigma_derivative(tt), (sigma(tt + h) - sigma(tt - h)) / (2 * h), atol=1e-6)
    assert smooth_step(0.0) == 0 and smooth_step(1.0) == 1


def test_flatten_is_stationary_at_the_ends():
    path = connect_to_model(random_pair(3))
    flat = flatten(path)
    for t in (0.0, 0.05, 0.95, 1.0):
        dA, dB = flat.derivative(t)
        assert np.abs(dA).max() == 0 and np.abs(dB).max() == 0
    A, B = flat.evaluate(0.05)
    np.testing.assert_allclose(A, path.start.A, atol=1e-14)
    assert flat.certificate.min_abs_det4 == pytest.approx(path.certificate.min_abs_det4, abs=1e-9)


def test_flat_derivative_matches_finite_differences():
    flat = flatten(connect_to_model(random_pair(4)))
    t = np.linspace(0.11, 0.89, 41)
    h = 1e-6
    A1, B1 = flat.evaluate(t + h)
    A0, B0 = flat.evaluate(t - h)
    dA, dB = flat.derivative(t)
    scale = max(1.0, np.abs(dA).max(), np.abs(dB).max())
    np.testing.assert_allclose(dA, (A1 - A0) / (2 * h), atol=1e-5 * scale)
    np.testing.assert_allclose(dB, (B1 - B0) / (2 * h), atol=1e-5 * scale)


def test_surface_eval_examples():
    spec = _constant_spec(ELLIPTIC_MODEL, eps=0.5)
    assert surface_eval(spec, [0, 0]) == 0
    assert surface_eval(spec, [0.5, 0]) == pytest.approx(0.25)
    spec = _constant_spec(HYPERBOLIC_MODEL, eps=0.5)
    assert surface_eval(spec, [0.3, 0]) == pytest.approx(0.09)


def test_surface_matches_boundary_pair_outside_the_ball():
    path = connect_to_model(random_pair(6))
    spec = SurfaceSpec.from_connect_path(path, epsilon=0.7, n=3)
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        z = 0.7 * v / np.linalg.norm(v)
        assert surface_eval(spec, z) == pytest.approx(path.start.quadratic_form(z), abs=1e-12)
        assert surface_eval(spec, 1.5 * z) == pytest.approx(path.start.quadratic_form(1.5 * z), abs=1e-12)


def test_wirtinger_gradient_examples():
    g = wirtinger_gradient(lambda z: abs(z[0]) ** 2, np.array([1.0 + 0j, 0j]))
    np.testing.assert_allclose(g, [1, 0], atol=1e-8)
    z = np.array([0.3 - 0.7j, 0.2j])
    g = wirtinger_gradient(lambda x: (x[0] ** 2).real, z)
    np.testing.assert_allclose(g, [np.conj(z[0]), 0], atol=1e-8)
    with pytest.raises(ValueError):
        wirtinger_gradient(lambda x: 0.0, z, h=0)


@pytest.mark.parametrize("model", [ELLIPTIC_MODEL, HYPERBOLIC_MODEL], ids=["elliptic", "hyperbolic"])
def test_constant_model_bounds(model):
    b = bounds(_constant_spec(model))
    assert b.delta == pytest.approx(1.0, abs=1e-12)
    assert b.m == pytest.approx(0.0, abs=1e-12)
    assert b.n_required == 1
    rep = verify_no_new_complex_points(_constant_spec(model), SMALL, fd_points=20)
    assert rep.passed and rep.min_inequality == pytest.approx(1.0, abs=1e-12)


def test_degenerate_path_raises_delta_zero():
    path = HomotopyPath([Linear(ELLIPTIC_MODEL, HYPERBOLIC_MODEL, "cross")])
    with pytest.raises(DeltaZero):
        bounds(SurfaceSpec(flatten(path), 1.0, 1), SMALL)


def test_certified_bridge_passes_at_required_n():
    p = MatrixPair(np.diag([1.0, -1.0]), Z)
    path = connect_to_model(p)
    spec = SurfaceSpec.from_connect_path(path)
    b = bounds(spec)
    spec.n = b.n_required
    rep = verify_no_new_complex_points(spec, fd_points=100)
    assert rep.passed and rep.fd_max_error < 1e-6
    js = rep.to_json()
    assert set(js) >= {"delta", "m", "n_required", "n_used", "min_inequality", "pass", "worst_point"}


def test_small_n_can_create_complex_points():
    # B shrinks quickly near s = 2/3; with small n the correction term cancels B
    path = HomotopyPath([Linear(MatrixPair(Z, np.eye(2)), MatrixPair(Z, 0.01 * np.eye(2)), "shrink")])
    spec = SurfaceSpec(flatten(path), 1.0, 2)
    rep = verify_no_new_complex_points(spec, fd_points=0)
    assert not rep.passed and rep.min_inequality < 1e-9
    assert 0.5 < rep.worst_s < 0.9
    spec.n = rep.n_required
    assert verify_no_new_complex_points(spec, fd_points=0).passed


def test_monotone_in_n():
    path = HomotopyPath([catalog_segment("eli3-to-eli2-bump", {"eta": 2.0})])
    spec = SurfaceSpec(flatten(path), 1.0, 1)
    mins = []
    for n in (1, 4, 16, 64):
        spec.n = n
        rep = verify_no_new_complex_points(spec, SMALL, fd_points=0)
        mins.append(rep.passed)
    assert all(b or not a for a, b in zip(mins, mins[1:]))


def test_scale_equivariance():
    path = connect_to_model(random_pair(12))
    s1 = SurfaceSpec.from_connect_path(path, epsilon=1.0, n=2)
    s2 = SurfaceSpec.from_connect_path(path, epsilon=0.25, n=2)
    rng = np.random.default_rng(1)
    z = rng.standard_normal((30, 2)) * 0.3 + 1j * rng.standard_normal((30, 2)) * 0.3
    np.testing.assert_allclose(surface_eval(s2, 0.25 * z), 0.0625 * surface_eval(s1, z), atol=1e-13)


def test_spec_validation():
    flat = flatten(HomotopyPath([Constant(ELLIPTIC_MODEL)]))
    with pytest.raises(ValueError):
        SurfaceSpec(flat, 0.0, 1)
    with pytest.raises(ValueError):
        SurfaceSpec(flat, 1.0, 0)
