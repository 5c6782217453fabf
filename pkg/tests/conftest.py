import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dgscert.census import census  # noqa: E402
from dgscert.graph import Graph, parse_graph6  # noqa: E402

import golden  # noqa: E402
from _record import LINES  # noqa: E402


def random_graph(rng: random.Random, n: int, density: float = 0.5) -> Graph:
    edges = [(i, j) for j in range(1, n) for i in range(j) if rng.random() < density]
    return Graph.from_edges(n, edges)


def random_corpus(seed: int, count: int, lo: int, hi: int) -> list[Graph]:
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(lo, hi)) for _ in range(count)]


@pytest.fixture(scope="session")
def golden_pair() -> tuple[Graph, Graph]:
    return Graph.from_adjacency(golden.A), Graph.from_adjacency(golden.A_MATE)


@pytest.fixture(scope="session")
def census_reports():
    """Censuses for n = 1..7, computed once per session."""
    return {n: census(n) for n in range(1, 8)}


@pytest.fixture(scope="session")
def census_graphs(census_reports) -> list[Graph]:
    """One representative per isomorphism class, n <= 7."""
    return [parse_graph6(row["graph6"]) for r in census_reports.values() for row in r.verdict_audit]


@pytest.fixture(scope="session")
def random_graphs_12() -> list[Graph]:
    return random_corpus(1729, 1000, 1, 12)


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
