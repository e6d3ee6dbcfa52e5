"""Reproduction criteria, one test per criterion with its pinned tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see the pass/fail lines.
"""

import pytest

from chebarch import acceptance


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(check):
    result = check()
    print()
    print(result.line())
    for line in result.details:
        print("    " + line)
    assert result.passed, "\n".join(result.details)


def test_harness_flags_tampered_tolerance():
    result = acceptance.power_accounting({"savings_abs": -1.0})
    assert not result.passed
    assert any("FAIL savings vs 10 points" in d for d in result.details)


def test_harness_rejects_unknown_tolerance():
    with pytest.raises(KeyError):
        acceptance.run_all({"not_a_tolerance": 1.0})
