"""Acceptance gate: every criterion runs at its stated tolerance (exact
equality throughout) and prints one pass/fail line."""

import pytest

from confcohom import selftest


@pytest.mark.parametrize("name,criterion", selftest.CRITERIA, ids=[n for n, _ in selftest.CRITERIA])
def test_criterion(name, criterion):
    ok, detail = criterion()
    print("%s %s: %s" % ("PASS" if ok else "FAIL", name, detail))
    assert ok, "%s: %s" % (name, detail)
