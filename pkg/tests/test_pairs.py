import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crpoint.errors import DegeneratePair, FormatError, NonSymmetricError
from crpoint.jsonio import dumps
from crpoint.pairs import (
    ELLIPTIC_MODEL,
    HYPERBOLIC_MODEL,
    GroupElement,
    MatrixPair,
    Sign,
    act,
    block4,
    compose,
    det4,
    lai_index,
    random_group_element,
    random_pair,
    sign_class,
)

from conftest import complex_matrices, invertible_matrices, unit_phases

FIXTURES = Path(__file__).parent / "fixtures"


def _scale(p):
    return (1 + np.linalg.norm(p.A, 2) + np.linalg.norm(p.B, 2)) ** 4


@st.composite
def pairs(draw):
    return MatrixPair(draw(complex_matrices()), draw(complex_matrices(symmetric=True)))


@st.composite
def group_elements(draw):
    return GroupElement(draw(unit_phases()), draw(invertible_matrices()))


def test_det4_examples():
    assert det4(MatrixPair(np.eye(2), np.zeros((2, 2)))) == pytest.approx(1.0)
    assert det4(HYPERBOLIC_MODEL) == pytest.approx(-1.0)
    tau = 0.5
    assert det4(MatrixPair([[0, 1], [tau, 0]], np.zeros((2, 2)))) == pytest.approx(tau**2)


def test_sign_class_models():
    assert sign_class(ELLIPTIC_MODEL).tag is Sign.ELLIPTIC
    assert sign_class(HYPERBOLIC_MODEL).tag is Sign.HYPERBOLIC
    sc = sign_class(MatrixPair(np.diag([1, 1j]), np.zeros((2, 2))))
    assert sc.tag is Sign.ELLIPTIC
    assert sc.det4 == pytest.approx(1.0)


def test_sign_class_degenerate_is_a_value():
    sc = sign_class(MatrixPair(np.diag([1.0, 0.0]), np.zeros((2, 2))))
    assert sc.tag is Sign.DEGENERATE


@pytest.mark.parametrize("s", [1e-100, 1.0, 1e80])
def test_sign_class_is_scale_free(s):
    p = random_pair(3)
    q = MatrixPair(s * p.A, s * p.B)
    assert sign_class(q).tag is sign_class(p).tag
    assert sign_class(q).det4_normalized == pytest.approx(sign_class(p).det4_normalized, rel=1e-10)


@given(pairs())
def test_det4_is_real_and_matches_lu(p):
    M = block4(p.A, p.B)
    d = np.linalg.det(M)
    assert abs(d.imag) < 1e-10 * _scale(p)
    assert det4(p) == pytest.approx(d.real, abs=1e-10 * _scale(p))


def test_act_identity_and_swap():
    p = random_pair(1)
    assert act(GroupElement.identity(), p).allclose(p, 1e-14)
    th, a, d = 0.8, 0.3, 1.7
    q = MatrixPair(np.diag([1, np.exp(1j * th)]), np.diag([a, d]))
    r = act(GroupElement(1.0, [[0, 1], [1, 0]]), q)
    np.testing.assert_allclose(r.A, np.diag([np.exp(1j * th), 1]), atol=1e-15)
    np.testing.assert_allclose(r.B, np.diag([d, a]), atol=1e-15)


@given(pairs(), group_elements())
def test_act_respects_plus_minus_P(p, g):
    neg = GroupElement(g.zeta, -g.P)
    assert act(g, p).allclose(act(neg, p), 1e-12)
    assert g.equivalent(neg)


@given(pairs(), group_elements(), group_elements())
def test_left_action(p, g1, g2):
    lhs = act(g2, act(g1, p))
    rhs = act(compose(g2, g1), p)
    assert lhs.distance(rhs) <= 1e-10 * max(1.0, lhs.scale)


@given(pairs(), group_elements())
def test_det4_scaling_law(p, g):
    d0 = det4(p)
    d1 = det4(act(g, p))
    expected = abs(np.linalg.det(g.P)) ** 4 * d0
    scale = _scale(act(g, p)) + abs(np.linalg.det(g.P)) ** 4 * _scale(p)
    assert abs(d1 - expected) <= 1e-8 * max(abs(expected), 1e-6 * scale)


@given(pairs(), group_elements())
def test_sign_invariance(p, g):
    if abs(det4(p)) > 1e-6 * _scale(p):
        assert sign_class(act(g, p)).tag is sign_class(p).tag


def test_lai_index():
    E, H = sign_class(ELLIPTIC_MODEL), sign_class(HYPERBOLIC_MODEL)
    assert lai_index([E, E, H]) == 1
    assert lai_index([]) == 0
    assert lai_index([H, H]) == -2
    with pytest.raises(DegeneratePair):
        lai_index([E, sign_class(MatrixPair(np.zeros((2, 2)), np.zeros((2, 2))))])


def test_random_generators_deterministic_and_valid():
    assert random_pair(7).allclose(random_pair(7), 0.0)
    assert random_group_element(7).equivalent(random_group_element(7), 0.0)
    for seed in range(10_000):
        g = random_group_element(seed)
        assert abs(abs(g.zeta) - 1) < 1e-12
        assert abs(np.linalg.det(g.P)) >= 0.1
    for seed in range(10_000):
        p = random_pair(seed)
        assert np.array_equal(p.B, p.B.T)


def test_golden_fixtures():
    ref = json.loads((FIXTURES / "random_pair_seed0.json").read_text())
    assert dumps(random_pair(0, 1.0).to_json()) == dumps(ref)
    ref = json.loads((FIXTURES / "random_group_element_seed0.json").read_text())
    assert dumps(random_group_element(0).to_json()) == dumps(ref)


def test_json_round_trip_and_rejection():
    p = random_pair(2)
    assert MatrixPair.from_json(json.loads(dumps(p.to_json()))).allclose(p, 0.0)
    bad = p.to_json()
    bad["B"][0][1] = [5.0, 0.0]
    with pytest.raises(FormatError, match="symmetric"):
        MatrixPair.from_json(bad)
    with pytest.raises(FormatError):
        MatrixPair.from_json({"A": p.to_json()["A"]})
    with pytest.raises(NonSymmetricError):
        MatrixPair(np.eye(2), [[0, 1], [0, 0]])
