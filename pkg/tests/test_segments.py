import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crpoint.jsonio import dumps
from crpoint.pairs import GroupElement, MatrixPair, random_group_element, random_pair
from crpoint.segments import (
    CATALOG,
    Catalog,
    Constant,
    GLPath,
    GroupPath,
    Linear,
    Reversed,
    bump,
    bump_derivative,
    segment_from_json,
)

PARAMS = {
    "rotate-theta-to-0": {"phi": 2.5, "a": 0.2, "d": 0.3, "b_re": 0.1, "b_im": -0.2},
    "rotate-theta-to-pi": {"phi": 0.7, "a": 0.2, "d": 0.3, "b_re": 0.1, "b_im": 0.05},
    "typeI-neg-diagB-shrink-a": {"a": 0.4, "d": 1.3},
    "typeI-neg-final-A-shrink": {"d": 1.3},
    "case-e-perturb": {"eps": 0.1},
    "case-c-shrink": {"b": 0.6},
    "case-d-lt1": {"b": 0.6},
    "case-d-gt1": {"b": 1.6},
    "case-a-shrink": {"a": 0.5, "d": 0.3},
    "case-a-gt1": {"a": 1.5, "d": 1.3},
    "typeII-phase-align": {"tau": 0.4, "a_abs": 0.3, "alpha0": 0.2, "alpha1": 0.0,
                           "b_abs": 0.5, "beta0": 1.0, "beta1": 0.5},
    "typeII-b-to-0": {"tau": 0.4, "a_re": 0.3, "a_im": 0.1, "b_re": 0.2, "b_im": 0.1},
    "typeII-b-mid": {"tau": 0.4, "a_re": 0.3, "a_im": 0.0, "b0": 0.9, "b1": 1.1, "beta": 0.3},
    "typeII-a-tau-to-0": {"tau": 0.4, "a": 0.3, "beta": 0.3},
    "typeII-a-to-0": {"tau": 0.4, "a_re": 0.3, "a_im": -0.2},
    "typeII-shrink-A": {"tau": 0.4, "kappa": 1.2, "alpha_re": 0.1, "alpha_im": 0.2, "o_re": 0.7, "o_im": 0.3},
    "typeII-offdiag-swap": {},
    "hyp-final-bump": {"eta": 0.5},
    "eli1-to-eli3": {},
    "eli3-to-eli2-bump": {"eta": 0.5},
}


def _segments():
    p, q = random_pair(1), random_pair(2)
    g = random_group_element(3)
    out = [Constant(p), Linear(p, q, "x"), GroupPath(p, g), GLPath(p.A + 2 * np.eye(2), np.eye(2), p.B),
           Reversed(GroupPath(q, g))]
    out += [Catalog(name, PARAMS[name]) for name in CATALOG]
    return out


def test_every_catalog_entry_has_parameters():
    assert set(PARAMS) == set(CATALOG)


def test_bump_shape():
    assert bump(0.5, 0.7) == pytest.approx(0.7)
    t = np.array([0.0, 1.0, -0.2, 1.3])
    assert np.all(bump(t, 0.7) == 0)
    assert np.all(bump_derivative(t, 0.7) == 0)
    tt = np.linspace(0.01, 0.99, 99)
    h = 1e-6
    fd = (bump(tt + h, 0.7) - bump(tt - h, 0.7)) / (2 * h)
    np.testing.assert_allclose(bump_derivative(tt, 0.7), fd, atol=1e-7)


@pytest.mark.parametrize("seg", _segments(), ids=lambda s: getattr(s, "name", s.kind))
def test_closed_form_derivative(seg):
    t = np.linspace(0.02, 0.98, 25)
    h = 1e-5
    A1, B1 = seg.evaluate(t + h)
    A0, B0 = seg.evaluate(t - h)
    dA, dB = seg.derivative(t)
    np.testing.assert_allclose(dA, (A1 - A0) / (2 * h), atol=1e-6)
    np.testing.assert_allclose(dB, (B1 - B0) / (2 * h), atol=1e-6)


@pytest.mark.parametrize("seg", _segments(), ids=lambda s: getattr(s, "name", s.kind))
def test_symmetry_and_json_round_trip(seg):
    t = np.linspace(0, 1, 33)
    A, B = seg.evaluate(t)
    assert np.abs(B - np.swapaxes(B, -1, -2)).max() < 1e-10
    back = segment_from_json(json.loads(dumps(seg.to_json())))
    A2, B2 = back.evaluate(t)
    np.testing.assert_allclose(A2, A, atol=1e-15)
    np.testing.assert_allclose(B2, B, atol=1e-15)


def test_group_path_examples():
    base = random_pair(4)
    seg = GroupPath(base, GroupElement.identity())
    A, B = seg.evaluate(np.linspace(0, 1, 5))
    assert np.abs(A - base.A).max() < 1e-14 and np.abs(B - base.B).max() < 1e-14
    seg = GroupPath(base, GroupElement(1.0, 2 * np.eye(2)))
    for t in np.linspace(0, 1, 7):
        np.testing.assert_allclose(seg.group_at(t)[1], (1 + t) * np.eye(2), atol=1e-14)
    seg = GroupPath(base, GroupElement(1j, [[0, 1], [1, 0]]))
    for t in np.linspace(0, 1, 7):
        assert abs(abs(np.linalg.det(seg.group_at(t)[1])) - 1) < 1e-12
    zeta, P = seg.group_at(1.0)[:2]
    assert GroupElement(complex(zeta), P).equivalent(GroupElement(1j, [[0, 1], [1, 0]]), 1e-12)


@given(st.integers(0, 2**31), st.integers(0, 2**31))
def test_group_path_endpoints(pseed, gseed):
    from crpoint.pairs import act

    p, g = random_pair(pseed), random_group_element(gseed)
    seg = GroupPath(p, g)
    assert seg.start.allclose(p, 1e-12)
    assert seg.end.allclose(act(g, p), 1e-10)
    dets = np.linalg.det(seg.group_at(np.linspace(0, 1, 64))[1])
    assert np.abs(dets).min() > 0


def test_catalog_validation():
    with pytest.raises(KeyError):
        Catalog("no-such-recipe", {})
    with pytest.raises(ValueError):
        Catalog("eli3-to-eli2-bump", {})
    with pytest.raises(ValueError):
        Catalog("eli3-to-eli2-bump", {"eta": 0.5, "extra": 1.0})
    with pytest.raises(ValueError):
        Catalog("eli3-to-eli2-bump", {"eta": float("nan")})
    with pytest.raises(ValueError):
        Catalog("case-d-gt1", {"b": 0.5})
    with pytest.raises(ValueError):
        Catalog("hyp-final-bump", {"eta": 0.5, "symmetric": False}).pair_at(0.5)


def test_bump_determinant_formulas():
    from crpoint.pairs import block4, det4_batch

    t = np.linspace(0, 1, 1001)
    x = bump(t, 0.5)
    A, B = Catalog("eli3-to-eli2-bump", {"eta": 0.5}).evaluate(t)
    np.testing.assert_allclose(det4_batch(A, B), (1 - 2 * t) ** 2 + x**2 * (x**2 + 2 * t**2), atol=1e-9)
    A, B = Catalog("hyp-final-bump", {"eta": 0.5, "symmetric": False}).evaluate(t)
    np.testing.assert_allclose(np.linalg.det(block4(A, B)).real, -((1 - 2 * t) ** 2 + t**2 * x**2), atol=1e-9)


def test_rotation_segments_hit_their_targets():
    seg = Catalog("rotate-theta-to-0", PARAMS["rotate-theta-to-0"])
    np.testing.assert_allclose(seg.end.A, np.eye(2), atol=1e-15)
    seg = Catalog("rotate-theta-to-pi", PARAMS["rotate-theta-to-pi"])
    np.testing.assert_allclose(seg.end.A, np.diag([1, -1]), atol=1e-15)
    assert MatrixPair(seg.start.A, seg.start.B).allclose(seg.pair_at(0.0))
