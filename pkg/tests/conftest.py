import random
import sys

import pytest

from anticyclo.padic import padic_context


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def Z5():
    return padic_context(5, 6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
