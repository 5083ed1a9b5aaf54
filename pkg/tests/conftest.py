import sys
from pathlib import Path

import pytest

from mcgs.graph import Graph, read_edge_list

HERE = Path(__file__).parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE))


def star5():
    return Graph.from_edges(6, [(0, i) for i in range(1, 6)])


def path4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def tri():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def barbell():
    return Graph.from_edges(8, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 7)])


def parachute():
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (2, 4), (2, 5)])


def chainrim():
    return Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])


def data_graph(name):
    return read_edge_list(DATA / f"{name}.txt")


@pytest.fixture(scope="session")
def karate():
    return data_graph("karate")


@pytest.fixture(scope="session")
def lesmis_toy():
    return data_graph("lesmis_toy")


@pytest.fixture(scope="session")
def fb_synth():
    return data_graph("fb_synth")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
