"""The acceptance gate: every criterion at its stated tolerance, one line each."""

import pytest

from supercurves import acceptance

SEED = 7


@pytest.mark.parametrize("criterion", acceptance.CRITERIA,
                         ids=[fn.__name__ for fn in acceptance.CRITERIA])
def test_criterion(criterion, capsys):
    result = criterion(SEED)
    status = "PASS" if result["passed"] else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] {result['name']}: {result['detail']} ({result['elapsed']}s)")
    assert result["passed"], f"{result['name']}: {result['detail']}"
