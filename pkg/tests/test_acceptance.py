"""Executable acceptance gate: every criterion must pass at its stated
tolerance (all tolerances are exact) within its stated runtime budget."""

import time

import pytest

from sphecke.acceptance import CRITERIA, DEFAULT_SEED

# per-criterion runtime budgets in seconds, where stated
BUDGETS = {1: 60, 2: 10, 3: 30, 4: 60, 6: 60, 9: 120}


@pytest.mark.parametrize("index,name",
                         [(i, name) for i, (name, _) in
                          enumerate(CRITERIA, start=1)])
def test_criterion(index, name):
    fn = CRITERIA[index - 1][1]
    start = time.time()
    if index == 4:
        ok, detail = fn(DEFAULT_SEED)
    else:
        ok, detail = fn()
    elapsed = time.time() - start
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {index} {name}: "
          f"{detail} ({elapsed:.2f}s)")
    assert ok, f"criterion {index} ({name}) failed: {detail}"
    if index in BUDGETS:
        assert elapsed <= BUDGETS[index], \
            f"criterion {index} exceeded its {BUDGETS[index]}s budget"
