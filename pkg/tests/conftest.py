import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, n=2, symmetric=False):
    re = np.array(draw(st.lists(finite, min_size=n * n, max_size=n * n))).reshape(n, n)
    im = np.array(draw(st.lists(finite, min_size=n * n, max_size=n * n))).reshape(n, n)
    M = re + 1j * im
    if symmetric:
        M = 0.5 * (M + M.T)
    return M


@st.composite
def invertible_matrices(draw, min_abs_det=0.1):
    M = draw(complex_matrices())
    if abs(np.linalg.det(M)) < min_abs_det * max(1.0, np.abs(M).max()) ** 2:
        M = M + 2.0 * np.eye(2)
    if abs(np.linalg.det(M)) < 1e-3:
        M = np.eye(2) + 0.1 * M
    return M


@st.composite
def unit_phases(draw):
    return np.exp(1j * draw(st.floats(-np.pi, np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
