from fractions import Fraction

import pytest
from hypothesis import strategies as st

from padic_coherent.padic import PAdicPoint, Word

PRIMES = (2, 3, 5)


def words(p: int, max_len: int = 6):
    return st.lists(st.integers(0, p - 1), max_size=max_len).map(lambda ds: Word(tuple(ds), p))


def rationals(max_num: int = 10**4, max_den: int = 10**4):
    return st.builds(
        Fraction, st.integers(-max_num, max_num), st.integers(1, max_den)
    )


def points(p: int, max_len: int = 4):
    return st.builds(PAdicPoint, words(p, max_len), words(p, max_len))


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {msg}")


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE
