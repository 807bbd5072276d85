import pytest

from mallestat.fields_q.corpus import Corpus
from mallestat.fields_q.cubic import enumerate_cubic


@pytest.fixture(scope="session")
def cubics_1e4():
    return Corpus("cubic", 10 ** 4, enumerate_cubic(10 ** 4))


@pytest.fixture(scope="session")
def cubics_1e5():
    return Corpus("cubic", 10 ** 5, enumerate_cubic(10 ** 5))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
