import sys
from pathlib import Path

import pytest

from kazhdanw.liealg import polarize
from kazhdanw.poly import PolyRing

sys.path.insert(0, str(Path(__file__).parent))

VERDICTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and (report.when == "call" or report.failed):
        number, title = marker.args
        _, ok, seconds = VERDICTS.get(number, (title, True, 0.0))
        VERDICTS[number] = (title, ok and report.passed, seconds + call.duration)


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number, (title, ok, seconds) in sorted(VERDICTS.items()):
            verdict = "PASS" if ok else "FAIL"
            terminalreporter.write_line(f"criterion {number:>2}  {verdict}  {title} ({seconds:.1f}s)")


@pytest.fixture(scope="session")
def sl2():
    return polarize("sl2", "principal")


@pytest.fixture(scope="session")
def sl3p():
    return polarize("sl3", "principal")


@pytest.fixture(scope="session")
def sl3m():
    return polarize("sl3", "minimal")


@pytest.fixture(scope="session")
def all_pols(sl2, sl3p, sl3m):
    return [("sl2/principal", sl2), ("sl3/principal", sl3p), ("sl3/minimal", sl3m)]


class Vars:
    """Attribute access to the variables of a polarization's polynomial ring."""

    def __init__(self, pol):
        self.ring = PolyRing.from_polarization(pol)

    def __getattr__(self, name):
        return self.ring.var(self.ring.names.index(name))

    def __call__(self, c):
        return self.ring.const(c)


@pytest.fixture(scope="session")
def v2(sl2):
    return Vars(sl2)
