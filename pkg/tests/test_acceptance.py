"""Acceptance gate: one test per criterion, each reporting a pass/FAIL line."""
import pytest

from darbouxlab.verify import CHECKS

SUMMARY: list[str] = []


@pytest.mark.parametrize("check", CHECKS, ids=[c.key for c in CHECKS])
def test_criterion(check):
    result = check(1.0)
    SUMMARY.append(result.line())
    print(result.line())
    for claim in result.claims:
        print(f"    {claim}")
    assert result.error is None, result.error
    assert result.passed, result.line()
