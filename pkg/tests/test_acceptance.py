"""The eight acceptance criteria at full size.

Each test prints one ``[PASS]``/``[FAIL]`` line with the measured quantities
and the runtime against its budget.  ``CRPOINT_ACCEPTANCE_SCALE`` shrinks the
sample counts for quick local runs (budgets are then not meaningful).
"""

import os

import pytest

from crpoint import acceptance

SEED = 0
SCALE = float(os.environ.get("CRPOINT_ACCEPTANCE_SCALE", "1.0"))

CASES = [
    (1, acceptance.criterion_sign_oracle),
    (2, acceptance.criterion_det_formulas),
    (3, acceptance.criterion_group_invariance),
    (4, acceptance.criterion_normal_form),
    (5, acceptance.criterion_homotopy),
    (6, acceptance.criterion_surface),
    (7, acceptance.criterion_levi),
    (8, acceptance.criterion_growth),
]


@pytest.mark.slow
@pytest.mark.parametrize("number, criterion", CASES, ids=[f"criterion_{n}" for n, _ in CASES])
def test_criterion(number, criterion, capsys):
    res = criterion(SEED, SCALE)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.number == number
    assert res.passed, res.line()
    if SCALE == 1.0:
        assert res.within_time, res.line()
