import sys

import numpy as np
import pytest

from graphregen.topology import build_repair_tree, running_example, select_helpers


@pytest.fixture(scope="session")
def graph():
    return running_example()


@pytest.fixture(scope="session")
def tree(graph):
    return build_repair_tree(graph, 0, select_helpers(graph, 0, 6))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not getattr(module, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        ok, detail = module.RESULTS[n]
        terminalreporter.write_line(f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
