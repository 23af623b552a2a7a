"""Acceptance criteria 1-11, one test each.

Every criterion prints a PASS/FAIL line; the lines are also collected and
shown in the pytest terminal summary.  Run directly for the table alone:
``python3 tests/test_acceptance.py``.
"""

import pytest

from zeckauto import bench

RESULTS = []


@pytest.mark.parametrize("cid", [c[0] for c in bench.CRITERIA],
                         ids=[f"criterion{c[0]:02d}" for c in bench.CRITERIA])
def test_criterion(cid):
    r = bench.run_criterion(cid)
    RESULTS.append(r)
    print(r.line())
    assert r.passed, r.detail


def test_whole_bench_within_budget():
    # every criterion above ran once; their sum is the desk-scale budget
    total = sum(r.seconds for r in RESULTS)
    assert len(RESULTS) == len(bench.CRITERIA)
    assert total < 60, f"bench took {total:.1f}s"


if __name__ == "__main__":
    import sys

    report = bench.run()
    print(bench.format_report(report))
    sys.exit(0 if report["passed"] else 1)
