from pathlib import Path

import pytest

from sftweyl.core import DEFAULT_WINDOW, TruncationWindow
from sftweyl.identities import GeometryData
from sftweyl.testing import sig1 as _sig1
from sftweyl.textio import parse_series

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def sig():
    return _sig1()


@pytest.fixture(scope="session")
def w():
    return DEFAULT_WINDOW


@pytest.fixture(scope="session")
def P(sig):
    def parse(text, window=DEFAULT_WINDOW):
        return parse_series(text, sig, window)

    return parse


@pytest.fixture(scope="session")
def geo1(sig):
    return GeometryData.build(sig, d={"g1": 1, "g2": 0})


@pytest.fixture(scope="session")
def small():
    return TruncationWindow(hbar_min=-2, hbar_max=1, max_pq_letters=3, max_t_letters=0,
                            max_z_total=1)


# acceptance bookkeeping: lines are printed live and again in the summary

ACCEPTANCE_LINES = []


def pytest_sessionstart(session):
    import time

    session.config._sft_start = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the suite-time criterion measures everything before it
    last = [it for it in items if it.name == "test_criterion_10_io_and_suite_time"]
    items[:] = [it for it in items if it not in last] + last


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
