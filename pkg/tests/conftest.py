from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bailey_lab.transforms import ParamsA, ParamsC

F = Fraction


def small_rationals(bound=9, nonzero=True):
    nums = st.integers(-bound, bound)
    if nonzero:
        nums = nums.filter(lambda n: n != 0)
    return st.builds(Fraction, nums, st.integers(1, bound))


@pytest.fixture
def a1():
    return ParamsA(F(1, 2), F(1, 3), (F(1),))


@pytest.fixture
def c1():
    return ParamsC(F(1, 2), (F(1, 3),))


ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((criterion, ok, detail))
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
