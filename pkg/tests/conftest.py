import json
from itertools import combinations

import numpy as np
import pytest

from motifclust.cli import data_path
from motifclust.graph import Graph, read_edge_list


@pytest.fixture(scope="session")
def karate():
    return read_edge_list(data_path("karate.edges"), base=1)


@pytest.fixture(scope="session")
def factions():
    """Ground-truth factions as sets of 0-based ids."""
    gt = json.loads(data_path("ground_truth_karate.json").read_text())["communities"]
    return {name: {v - 1 for v in members} for name, members in gt.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def two_triangles() -> Graph:
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def brute_triangles(g: Graph):
    return [t for t in combinations(range(g.n), 3) if all(g.adj[a, b] for a, b in combinations(t, 2))]


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                lines.append((rep.nodeid.split("::", 1)[1], status.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if status == 'PASSED' else 'FAIL'}  {name}")
