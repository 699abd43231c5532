import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DEP_KINDS, flat_graphs, property_settings
from oracles import closure_matrix, floyd_warshall
from sliceprio.graph import (
    BACKWARD,
    FORWARD,
    NO_FILTER,
    DependenceGraph,
    Edge,
    EdgeFilter,
    EdgeKind,
    InvalidCriterionError,
    Node,
    NodeKind,
    UnknownNodeError,
    closure,
    induced_subgraph,
    reachable,
    validate,
)

S = NodeKind.STATEMENT
D = EdgeKind.DATA_DEP


def stmts(*ids):
    return [Node(i, S) for i in ids]


def codes(g):
    return sorted(d.code for d in validate(g))


def test_empty_graph_is_valid():
    assert validate(DependenceGraph()) == []


def test_dangling_endpoint():
    g = DependenceGraph(stmts("a"), [("a", "b", D)])
    diags = validate(g)
    assert [d.code for d in diags] == ["dangling-endpoint"]
    assert "b" in diags[0].message and diags[0].subject == ("a", "b")


def test_containment_cycle():
    nodes = [Node("a", NodeKind.PACKAGE, parent="b"), Node("b", NodeKind.PACKAGE, parent="a")]
    g = DependenceGraph(nodes, [("a", "b", EdgeKind.CONTAINMENT), ("b", "a", EdgeKind.CONTAINMENT)])
    assert "containment-cycle" in codes(g)


def test_duplicates_reported():
    g = DependenceGraph(stmts("a", "a", "b"), [("a", "b", D), ("a", "b", D)])
    assert codes(g) == ["duplicate-edge", "duplicate-node"]


def test_multigraph_edges_of_different_kinds_are_fine():
    g = DependenceGraph(stmts("a", "b"), [("a", "b", D), ("a", "b", EdgeKind.CALL)])
    assert validate(g) == []
    assert len(g.out_edges("a")) == 2


@pytest.mark.parametrize("nodes, edges, expected", [
    # parent field without the edge
    ([Node("p", NodeKind.PACKAGE), Node("c", NodeKind.CLASS, parent="p")], [], ["containment-mismatch"]),
    # edge without the parent field
    ([Node("p", NodeKind.PACKAGE), Node("c", NodeKind.CLASS)], [("p", "c", EdgeKind.CONTAINMENT)],
     ["containment-mismatch"]),
    ([Node("c", NodeKind.CLASS, parent="ghost")], [], ["missing-parent"]),
    # formal parameter under a class
    ([Node("p", NodeKind.PACKAGE), Node("c", NodeKind.CLASS, parent="p"),
      Node("f", NodeKind.FORMAL_IN, parent="c")],
     [("p", "c", EdgeKind.CONTAINMENT), ("c", "f", EdgeKind.CONTAINMENT)], ["parameter-parent"]),
    # actual parameter under a method
    ([Node("p", NodeKind.PACKAGE), Node("c", NodeKind.CLASS, parent="p"),
      Node("m", NodeKind.METHOD, parent="c"), Node("a", NodeKind.ACTUAL_IN, parent="m")],
     [("p", "c", EdgeKind.CONTAINMENT), ("c", "m", EdgeKind.CONTAINMENT), ("m", "a", EdgeKind.CONTAINMENT)],
     ["parameter-parent"]),
    # containment tree rooted at a class
    ([Node("c", NodeKind.CLASS), Node("m", NodeKind.METHOD, parent="c")],
     [("c", "m", EdgeKind.CONTAINMENT)], ["containment-root"]),
])
def test_containment_diagnostics(nodes, edges, expected):
    assert codes(DependenceGraph(nodes, edges)) == expected


def test_two_containment_parents():
    nodes = [Node("p", NodeKind.PACKAGE), Node("q", NodeKind.PACKAGE), Node("c", NodeKind.CLASS, parent="p")]
    g = DependenceGraph(nodes, [("p", "c", EdgeKind.CONTAINMENT), ("q", "c", EdgeKind.CONTAINMENT)])
    assert "multiple-parents" in codes(g)


def test_fixture_graphs_validate(eoosdg, example_asg):
    assert validate(eoosdg) == []
    assert validate(example_asg) == []
    assert len(eoosdg) == 89 and len(example_asg) == 33


# ---- reachability ----------------------------------------------------------

def chain():
    return DependenceGraph(stmts("a", "b", "c"), [("a", "b", D), ("b", "c", D)])


def test_chain_forward():
    nodes, edges = reachable(chain(), "a")
    assert nodes == {"a", "b", "c"}
    assert edges == {Edge("a", "b", D), Edge("b", "c", D)}


def test_chain_forward_all_excluded():
    assert reachable(chain(), "a", FORWARD, EdgeFilter.kinds(D)) == (frozenset({"a"}), frozenset())


def test_diamond_backward():
    edges = [("a", "b", D), ("a", "c", D), ("b", "d", D), ("c", "d", D)]
    g = DependenceGraph(stmts(*"abcd"), edges)
    nodes, walked = reachable(g, "d", BACKWARD)
    # oracle: column of the closure matrix
    index, m = closure_matrix(list("abcd"), [(s, d, k) for s, d, k in edges])
    assert nodes == {x for x in "abcd" if m[index[x], index["d"]]}
    assert walked == {Edge(*e) for e in edges}


def test_explicit_edge_exclusion():
    g = DependenceGraph(stmts("a", "b", "c"), [("a", "b", D), ("a", "c", D)])
    f = EdgeFilter(excluded_edges=frozenset({Edge("a", "b", D)}))
    assert reachable(g, "a", FORWARD, f)[0] == {"a", "c"}


def test_unknown_start_is_an_invalid_criterion():
    with pytest.raises(InvalidCriterionError):
        reachable(chain(), "zz")
    with pytest.raises(UnknownNodeError):
        closure(chain(), ["a", "zz"])


def test_bad_direction():
    with pytest.raises(ValueError):
        reachable(chain(), "a", "sideways")


def test_cycle_terminates():
    g = DependenceGraph(stmts("a", "b"), [("a", "b", D), ("b", "a", D)])
    assert reachable(g, "b")[0] == {"a", "b"}


def test_multi_source_closure_is_union():
    g = DependenceGraph(stmts(*"abcde"), [("a", "b", D), ("c", "d", D)])
    nodes, edges = closure(g, ["a", "c"])
    assert nodes == {"a", "b", "c", "d"} and len(edges) == 2


# ---- induced subgraph ------------------------------------------------------

def triangle():
    return DependenceGraph(stmts("a", "b", "c"), [("a", "b", D), ("b", "c", D), ("c", "a", D)])


def test_induced_identity_and_empty():
    g = triangle()
    assert induced_subgraph(g, g.nodes) == g
    assert len(induced_subgraph(g, [])) == 0


def test_induced_triangle():
    sub = induced_subgraph(triangle(), {"a", "b"})
    assert set(sub) == {"a", "b"}
    assert sub.edges == {Edge("a", "b", D)}


def test_induced_drops_dangling_parent():
    nodes = [Node("p", NodeKind.PACKAGE), Node("c", NodeKind.CLASS, parent="p")]
    g = DependenceGraph(nodes, [("p", "c", EdgeKind.CONTAINMENT)])
    sub = induced_subgraph(g, {"c"})
    assert sub.node("c").parent is None
    assert validate(sub) == []


def test_induced_unknown_id():
    with pytest.raises(UnknownNodeError):
        induced_subgraph(triangle(), {"a", "nope"})


def test_graph_is_read_only():
    g = triangle()
    with pytest.raises(TypeError):
        g.nodes["x"] = Node("x", S)  # type: ignore[index]


# ---- properties ------------------------------------------------------------

@property_settings
@given(flat_graphs(max_nodes=50), st.data())
def test_reachable_matches_floyd_warshall(g, data):
    start = data.draw(st.sampled_from(sorted(g)))
    index, r = floyd_warshall(sorted(g), g.edges)
    ids = sorted(g)
    expected = {ids[j] for j in range(len(ids)) if r[index[start]][j]}
    assert reachable(g, start, FORWARD)[0] == expected
    assert start in reachable(g, start, BACKWARD)[0]


@given(flat_graphs(max_nodes=30), st.data())
def test_reachable_monotone_in_filter(g, data):
    start = data.draw(st.sampled_from(sorted(g)))
    small = data.draw(st.frozensets(st.sampled_from(DEP_KINDS)))
    extra = data.draw(st.frozensets(st.sampled_from(DEP_KINDS)))
    direction = data.draw(st.sampled_from([FORWARD, BACKWARD]))
    a = reachable(g, start, direction, EdgeFilter(small))[0]
    b = reachable(g, start, direction, EdgeFilter(small | extra))[0]
    assert b <= a


@given(flat_graphs(max_nodes=30), st.data())
def test_traversed_edges_leave_visited_nodes(g, data):
    start = data.draw(st.sampled_from(sorted(g)))
    nodes, edges = reachable(g, start, FORWARD, NO_FILTER)
    assert edges == {e for e in g.edges if e.src in nodes}


@given(flat_graphs(max_nodes=30), st.data())
def test_induced_idempotent(g, data):
    keep = data.draw(st.sets(st.sampled_from(sorted(g))))
    once = induced_subgraph(g, keep)
    assert induced_subgraph(once, keep) == once
