"""Acceptance suite: runs every check in novascout.selfcheck at its stated
tolerance and prints one PASS/FAIL line per criterion (visible with -s or in
the captured output on failure). `novascout verify` runs the same checks."""

import pytest

from novascout.selfcheck import CRITERIA

_BY_NAME = dict(CRITERIA)


@pytest.mark.parametrize("name", [name for name, _ in CRITERIA])
def test_acceptance_criterion(name):
    passed, detail = _BY_NAME[name]()
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"
