import pytest

from dhg import Digraph


def make_graph(vertices, edges):
    """Digraph from oracle-style (names, name pairs)."""
    index = {v: i for i, v in enumerate(vertices)}
    return Digraph(vertices, [(index[u], index[v]) for u, v in edges])


CYCLE3 = (["v0", "v1", "v2"], [("v0", "v1"), ("v1", "v2"), ("v2", "v0")])
DIAMOND = (["a", "b", "c", "d"], [("a", "b"), ("b", "d"), ("a", "c"), ("c", "d")])
PATH5 = ([f"p{i}" for i in range(5)], [(f"p{i}", f"p{i + 1}") for i in range(4)])


@pytest.fixture
def cycle3():
    return make_graph(*CYCLE3)


@pytest.fixture
def diamond():
    return make_graph(*DIAMOND)


@pytest.fixture
def path5():
    return make_graph(*PATH5)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
