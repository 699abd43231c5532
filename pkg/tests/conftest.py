from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sliceprio.fileio import fixture_path, read_coverage, read_faults, read_graph, read_weights
from sliceprio.graph import DependenceGraph, Edge, EdgeKind, Node, NodeKind

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# the property suites that back acceptance criteria run at least this many cases
PROPERTY_EXAMPLES = 1000
property_settings = settings(max_examples=PROPERTY_EXAMPLES, deadline=None,
                             suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])

DEP_KINDS = [k for k in EdgeKind if k is not EdgeKind.CONTAINMENT]


@st.composite
def flat_graphs(draw, max_nodes=50, kinds=DEP_KINDS, min_nodes=1):
    """Statement nodes with random typed edges; no containment."""
    n = draw(st.integers(min_nodes, max_nodes))
    ids = [f"n{i}" for i in range(n)]
    edges = draw(st.lists(
        st.tuples(st.sampled_from(ids), st.sampled_from(ids), st.sampled_from(kinds)),
        max_size=min(4 * n, 160), unique=True))
    return DependenceGraph([Node(i, NodeKind.STATEMENT) for i in ids],
                           [Edge(s, d, k) for s, d, k in edges])


@st.composite
def hierarchical_asgs(draw, max_nodes=50):
    """Package/class/method/statement tree plus random dependence edges."""
    nodes = [Node("P", NodeKind.PACKAGE)]
    edges = []

    def add(nid, kind, parent):
        nodes.append(Node(nid, kind, parent=parent))
        edges.append(Edge(parent, nid, EdgeKind.CONTAINMENT))

    if draw(st.booleans()):
        add("P.sub", NodeKind.PACKAGE, "P")
    for c in range(draw(st.integers(1, 3))):
        owner = draw(st.sampled_from([n.id for n in nodes if n.kind is NodeKind.PACKAGE]))
        cls = f"C{c}"
        add(cls, NodeKind.CLASS, owner)
        for a in range(draw(st.integers(0, 2))):
            add(f"{cls}.a{a}", NodeKind.ATTRIBUTE, cls)
        for m in range(draw(st.integers(0, 3))):
            mid = f"{cls}.m{m}"
            add(mid, NodeKind.METHOD, cls)
            if draw(st.booleans()):
                add(f"{mid}.fin", NodeKind.FORMAL_IN, mid)
            for s in range(draw(st.integers(0, 4))):
                add(f"{mid}.s{s}", NodeKind.STATEMENT, mid)
            if draw(st.booleans()):
                add(f"{mid}.fout", NodeKind.FORMAL_OUT, mid)
            if len(nodes) >= max_nodes - 4:
                break
    ids = [n.id for n in nodes]
    extra = draw(st.lists(st.tuples(st.sampled_from(ids), st.sampled_from(ids),
                                    st.sampled_from(DEP_KINDS)), max_size=3 * len(ids), unique=True))
    edges += [Edge(s, d, k) for s, d, k in extra if Edge(s, d, k) not in edges]
    return DependenceGraph(nodes, edges)


@pytest.fixture(scope="session")
def eoosdg():
    return read_graph(fixture_path("triangle-shape-eoosdg"))


@pytest.fixture(scope="session")
def example_asg():
    return read_graph(fixture_path("triangle-shape-asg"))


@pytest.fixture(scope="session")
def figure2():
    """(weight map, acc values) of the published node table."""
    return read_weights(fixture_path("figure2-weights"))


@pytest.fixture(scope="session")
def table3():
    return read_coverage(fixture_path("table3-coverage"))


@pytest.fixture(scope="session")
def table1():
    return read_faults(fixture_path("table1-faults"))


# one line per acceptance criterion, filled in by test_acceptance and printed at the end
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
