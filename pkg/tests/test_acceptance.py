"""Acceptance gate: one test per criterion, each printing its pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or use the
CLI equivalent ``monodromy-lab selftest``.
"""

import pytest

from monodromy_lab.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(
        "[%s] %-24s %6.2fs  %s"
        % ("PASS" if result.passed else "FAIL", result.name, result.seconds, result.detail)
    )
    assert result.passed, "%s: %s" % (result.name, result.detail)
