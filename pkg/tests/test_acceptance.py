"""Acceptance gate: one test per headline criterion.

Each test prints the same pass/fail line as the CLI's verify-all command
and fails if the criterion does, carrying the evidence string along.
"""

import time

import pytest

from anncap.acceptance import CRITERIA


@pytest.mark.parametrize(
    ("index", "name", "fn"),
    [(i, name, fn) for i, (name, fn) in enumerate(CRITERIA, start=1)],
    ids=[f"criterion-{i}-{name.replace(' ', '-')}" for i, (name, _) in enumerate(CRITERIA, start=1)],
)
def test_criterion(index, name, fn, capsys):
    ok, detail = fn()
    line = f"criterion {index} ({name}): {'PASS' if ok else 'FAIL'} - {detail}"
    with capsys.disabled():
        print(line)
    assert ok, line


def test_suite_is_complete_and_quick():
    assert len(CRITERIA) == 10
    # re-run the cheapest criterion to confirm the harness stays responsive
    t0 = time.perf_counter()
    ok, _ = CRITERIA[3][1]()  # exact measure identities
    assert ok
    assert time.perf_counter() - t0 < 60.0
