from __future__ import annotations

import pytest

from clustercut.generators import complete_graph, cycle_graph, petersen_graph, random_regular_graph

ACCEPTANCE_LINES: list[str] = []


def regular_corpus() -> list:
    """Seeded d-regular graphs with n <= 10 and d in {2, 3, 4}, plus a few named ones."""
    graphs = [cycle_graph(4), cycle_graph(5), complete_graph(4), complete_graph(5), petersen_graph()]
    seed = 0
    for d in (2, 3, 4):
        for n in range(d + 1, 11):
            if (n * d) % 2:
                continue
            for _ in range(3):
                graphs.append(random_regular_graph(n, d, seed))
                seed += 1
    return graphs


@pytest.fixture(scope="session")
def corpus():
    return regular_corpus()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
