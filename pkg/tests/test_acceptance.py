"""The eleven acceptance criteria at their stated tolerances.

Each criterion prints one ``pass``/``FAIL`` line (also under pytest's output
capture). Run directly with ``python3 tests/test_acceptance.py`` for the
table alone.
"""

import pytest

from symbreak.acceptance import CRITERIA, run_suite
from symbreak.cli import main

EXPECTED_COUNT = 11


def test_suite_has_exactly_eleven_criteria():
    assert len(CRITERIA) == EXPECTED_COUNT


@pytest.mark.parametrize("number", range(1, EXPECTED_COUNT + 1))
def test_criterion(number, capsys):
    (result,) = run_suite([number])
    with capsys.disabled():
        print("\n" + result.line())
    assert result.number == number
    assert result.passed, result.detail


def test_verify_command_reports_every_line_pass(capsys):
    status = main(["verify"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert status == 0
    assert len(lines) == EXPECTED_COUNT
    assert all(line.split()[1] == "pass" for line in lines)


if __name__ == "__main__":
    results = run_suite()
    for r in results:
        print(r.line())
    raise SystemExit(0 if all(r.passed for r in results) else 1)
