"""The ten acceptance criteria, one test each.

Every test prints a single `criterion N name: PASS|FAIL` line.  Run the file
directly (`python tests/test_acceptance.py`) to get just those lines.
Set ACCEPTANCE_SEED to change the seed of the random batteries.
"""

import os
import sys
import time

import pytest

from linimp.suite import CRITERIA, SuiteConfig, run_criterion

CONFIG = SuiteConfig(seed=int(os.environ.get("ACCEPTANCE_SEED", "0")))


def verdict_line(name: str) -> tuple[str, object]:
    number, _ = CRITERIA[name]
    start = time.perf_counter()
    report = run_criterion(name, CONFIG)
    elapsed = time.perf_counter() - start
    failures = report.failures()
    line = f"criterion {number:2d} {name}: {'PASS' if report.ok else 'FAIL'} ({len(report.checks)} checks, {elapsed:.1f}s)"
    if failures:
        line += f" failing: {', '.join(c.name for c in failures[:4])}"
        if len(failures) > 4:
            line += f" and {len(failures) - 4} more"
    return line, report


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name, capsys):
    line, report = verdict_line(name)
    with capsys.disabled():
        print(f"\n{line}")
    assert report.ok, "\n".join(f"{c.name}: {c.detail}" for c in report.failures())


if __name__ == "__main__":
    ok = True
    for name in CRITERIA:
        line, report = verdict_line(name)
        ok &= report.ok
        print(line)
    sys.exit(0 if ok else 1)
