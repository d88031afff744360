"""The fourteen acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line; the lines are also collected and
repeated in the terminal summary.
"""

import pytest

from rmtpoly.acceptance import CRITERIA

RESULTS = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    RESULTS.append(result.line())
    print(result.line())
    assert result.passed, result.detail
