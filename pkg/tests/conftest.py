from __future__ import annotations

import itertools
import sys
from pathlib import Path

import pytest

from tempograph.graph import Snapshot

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = {
    "C3": [(1, 2), (2, 3), (3, 1)],
    "P3": [(1, 2), (2, 3)],
    "STAR": [(1, 0), (2, 0), (3, 0)],
    "COC": [(1, 3), (2, 3), (1, 4), (2, 4)],
    "K4u": list(itertools.permutations(range(4), 2)),
}


def snap(edges, nodes=None) -> Snapshot:
    src = [u for u, _ in edges]
    dst = [v for _, v in edges]
    return Snapshot.from_edges(src, dst, nodes=nodes)


@pytest.fixture
def c3():
    return snap(FIXTURES["C3"])


@pytest.fixture
def p3():
    return snap(FIXTURES["P3"])


@pytest.fixture
def star():
    return snap(FIXTURES["STAR"])


@pytest.fixture
def coc():
    return snap(FIXTURES["COC"])


@pytest.fixture
def k4():
    return snap(FIXTURES["K4u"])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
