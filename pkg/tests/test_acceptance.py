"""The acceptance criteria; prints one PASS/FAIL line per criterion (run with -s to see them)."""
import pytest

from qdiff.acceptance import CRITERIA, run_criterion

RESULTS = {}
CRITERIA_KEYS = [k for k, _, _ in CRITERIA]


@pytest.mark.parametrize("key", [k for k, _, _ in CRITERIA])
def test_criterion(key):
    res = run_criterion(key)
    RESULTS[key] = res
    print()
    print(res.line())
    for d in res.details:
        print("    " + d)
    assert res.ok, "\n".join(res.details)


def test_summary():
    lines = [RESULTS[k].line() if k in RESULTS else f"[FAIL] {k}: not run" for k, _, _ in CRITERIA]
    print()
    print("\n".join(lines))
    assert len(CRITERIA) == 13
    assert all(line.startswith("[PASS]") for line in lines)
