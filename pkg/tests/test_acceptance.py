"""All ten acceptance criteria at full bounds, compared with exact equality.

Each criterion prints one ``[PASS]``/``[FAIL]`` line to the terminal, even
under output capture, followed by any failing checks.
"""
import pytest

from cyclefact.verify import GROUPS, Bounds, run_group

FULL = Bounds.full()


@pytest.mark.slow
@pytest.mark.parametrize("number", [n for n, _, _ in GROUPS], ids=lambda n: f"criterion_{n}")
def test_criterion(number, capsys):
    result = run_group(number, FULL)
    with capsys.disabled():
        print(f"\n{result.line()} [{result.seconds:.1f}s]")
        for check in result.failures:
            print(f"    {check.label}: expected {check.expected}, got {check.actual}")
    assert result.passed, result.line()
