"""Acceptance criteria 1 to 11, one line per criterion.

Run with pytest, or directly: `python tests/test_acceptance.py [seed]`.
"""
import sys

import pytest

from boxperfect.suite import CHECKS, run_check

SEED = 0


NUMBERS = [c[0] for c in CHECKS]


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(number, capsys):
    result = run_check(number, SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.line()


def main(argv: list[str]) -> int:
    seed = int(argv[0]) if argv else SEED
    failed = 0
    for number in NUMBERS:
        result = run_check(number, seed)
        print(result.line(), flush=True)
        failed += not result.ok
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
