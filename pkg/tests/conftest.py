import numpy as np
import pytest

from rmstream import DayPattern


def make_days(values_2d) -> list[DayPattern]:
    return [DayPattern(day_index=i, values=tuple(float(v) for v in row))
            for i, row in enumerate(values_2d)]


def random_days(rng, n, m, scale=1.0) -> list[DayPattern]:
    return make_days(rng.random((n, m)) * scale)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# One verdict line per acceptance criterion, printed after capture ends so
# the gate can be read off any pytest run.
acceptance_results: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_results:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_results:
            terminalreporter.write_line(line)
