import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import flat_graphs, hierarchical_asgs, property_settings
from oracles import floyd_warshall, psi_sizes
from sliceprio.acc import (
    AccReport,
    MetricError,
    acc_raw,
    compute_acc,
    compute_raw,
    coupling_ratio,
    inflow,
    outflow,
    report_from_values,
    rollup,
    slice_acc,
)
from sliceprio.graph import DependenceGraph, Edge, EdgeKind, Node, NodeKind, UnknownNodeError

D = EdgeKind.DATA_DEP


def stmts(*ids):
    return [Node(i, NodeKind.STATEMENT) for i in ids]


def gadget(n_in, n_out, total=33):
    """Node X with a chain of n_in predecessors, n_out successors, and
    isolated fillers up to ``total`` nodes."""
    ins = [f"i{k}" for k in range(n_in)]
    outs = [f"o{k}" for k in range(n_out)]
    fill = [f"z{k}" for k in range(total - 1 - n_in - n_out)]
    path = ins + ["X"] + outs
    edges = [Edge(a, b, D) for a, b in zip(path, path[1:])]
    return DependenceGraph(stmts(*path, *fill), edges)


# flow counts read off the worked example: (outflow, inflow, printed ACC)
WORKED = {
    "24": (20, 4, 0.75),
    "25": (3, 14, 0.5312),
    "27": (12, 7, 0.5937),
    "f3": (13, 12, 0.7812),
    "29": (12, 13, 0.7812),
    "f27_1.out": (10, 14, 0.75),
    "33": (3, 24, 0.8437),
    "f3.out": (1, 28, 0.9062),
    "34": (2, 27, 0.9062),
}


@pytest.mark.parametrize("node", sorted(WORKED))
def test_worked_example_counts(node):
    out_n, in_n, printed = WORKED[node]
    g = gadget(in_n, out_n)
    assert len(inflow(g, "X")) == in_n
    assert len(outflow(g, "X")) == out_n
    assert acc_raw(g, "X") == pytest.approx(printed, abs=1e-4)
    assert compute_raw(g)["X"].acc_raw == pytest.approx(printed, abs=1e-4)
    assert coupling_ratio(in_n + out_n, 33) == pytest.approx(printed, abs=1e-4)


def test_chain_flows():
    g = DependenceGraph(stmts("a", "b", "c"), [Edge("a", "b", D), Edge("b", "c", D)])
    assert inflow(g, "c") == {"a", "b"}
    assert outflow(g, "a") == {"b", "c"}
    assert inflow(g, "a") == frozenset()


def test_isolated_node_in_pair():
    g = DependenceGraph(stmts("a", "b"))
    assert acc_raw(g, "a") == 0.0


def test_self_excluded_on_cycle():
    g = DependenceGraph(stmts("a", "b"), [Edge("a", "b", D), Edge("b", "a", D)])
    assert inflow(g, "a") == {"b"}
    r = compute_raw(g)
    assert r["a"].psi_size == 1 and r["a"].acc_raw == 1.0


def test_single_node_asg_is_undefined():
    g = DependenceGraph(stmts("a"))
    with pytest.raises(MetricError):
        acc_raw(g, "a")
    with pytest.raises(MetricError):
        compute_raw(g)


def test_unknown_node():
    with pytest.raises(UnknownNodeError):
        inflow(DependenceGraph(stmts("a", "b")), "q")


# ---- roll-up ---------------------------------------------------------------

# raw values as printed in the worked example
PRINTED_RAW = {
    "24": 0.75, "25": 0.5312, "26": 0.5312, "27": 0.5937, "f3": 0.7812, "f4": 0.7812,
    "29": 0.7812, "30": 0.7812, "f27_1.out": 0.75, "f27_2.out": 0.75,
    "33": 0.84375, "f3.out": 0.90625, "34": 0.90625,
}


@pytest.fixture
def example_raw(example_asg, figure2):
    _, fig_acc = figure2
    raw = {n: fig_acc[n] for n in example_asg}
    raw.update(PRINTED_RAW)
    return report_from_values(raw)


def test_example_membership(example_asg):
    assert set(example_asg.children("27")) == {"f3", "f4", "29", "30", "f27_1.out", "f27_2.out"}
    assert set(example_asg.children("33")) == {"f3.out", "34"}
    assert set(example_asg.children("24")) == {"25", "26", "27", "33"}


def test_rollup_worked_example(example_asg, example_raw):
    r = rollup(example_asg, example_raw)
    assert r["27"].acc_updated == pytest.approx(0.7455, abs=1e-4)
    assert r["33"].acc_updated == pytest.approx(0.88542, abs=1e-4)
    assert r["24"].acc_updated == pytest.approx(0.688664, abs=1e-4)
    # statements keep their raw value
    assert r["29"].acc_updated == r["29"].acc_raw


def test_rollup_by_hand_oracle(example_asg, example_raw):
    raw = example_raw.raw_values()
    m27 = (raw["27"] + sum(raw[n] for n in ["f3", "f4", "29", "30", "f27_1.out", "f27_2.out"])) / 7
    m33 = (raw["33"] + raw["f3.out"] + raw["34"]) / 3
    c24 = (raw["24"] + raw["25"] + raw["26"] + m27 + m33) / 5
    assert rollup(example_asg, example_raw)["24"].acc_updated == pytest.approx(c24, abs=1e-12)


def test_memberless_method_keeps_raw():
    nodes = [Node("P", NodeKind.PACKAGE), Node("C", NodeKind.CLASS, parent="P"),
             Node("M", NodeKind.METHOD, parent="C")]
    g = DependenceGraph(nodes, [Edge("P", "C", EdgeKind.CONTAINMENT), Edge("C", "M", EdgeKind.CONTAINMENT)])
    r = rollup(g, report_from_values({"P": 0.2, "C": 0.4, "M": 0.6}))
    assert r["M"].acc_updated == 0.6
    assert r["C"].acc_updated == pytest.approx(0.5)
    assert r["P"].acc_updated == pytest.approx(0.35)


def test_subpackage_rolls_up_first():
    nodes = [Node("P", NodeKind.PACKAGE), Node("Q", NodeKind.PACKAGE, parent="P"),
             Node("C", NodeKind.CLASS, parent="Q")]
    g = DependenceGraph(nodes, [Edge("P", "Q", EdgeKind.CONTAINMENT), Edge("Q", "C", EdgeKind.CONTAINMENT)])
    r = rollup(g, report_from_values({"P": 0.0, "Q": 0.0, "C": 1.0}))
    assert r["Q"].acc_updated == pytest.approx(0.5)
    assert r["P"].acc_updated == pytest.approx(0.25)


def test_rollup_needs_every_node(example_asg):
    with pytest.raises(UnknownNodeError):
        rollup(example_asg, report_from_values({"24": 0.5}))


# ---- slice mean ------------------------------------------------------------

def test_slice_acc_simple():
    assert slice_acc({"a": 0.5, "b": 0.5, "c": 0.5}) == 0.5
    assert slice_acc({"a": 0.0, "b": 1.0}) == 0.5
    with pytest.raises(MetricError):
        slice_acc({})


def test_slice_acc_figure2(figure2):
    _, acc = figure2
    values = dict(acc, **{"24": 0.688664})
    # independent summation: exact rationals, then one division
    expected = float(sum(Fraction(str(v)) for v in values.values()) / len(values))
    assert slice_acc(values) == pytest.approx(expected, abs=1e-12)
    # frozen from the exact-fraction sum above
    assert slice_acc(values) == pytest.approx(0.78296502, abs=1e-8)


# ---- whole-graph path vs oracles ------------------------------------------

@property_settings
@given(flat_graphs(max_nodes=50, min_nodes=2))
def test_acc_raw_matches_closure_oracle(g):
    ids = sorted(g)
    expected = psi_sizes(ids, g.edges)
    report = compute_raw(g)
    for n in ids:
        assert report[n].psi_size == expected[n]
        assert report[n].acc_raw == expected[n] / (len(ids) - 1)
        assert 0.0 <= report[n].acc_raw <= 1.0
        assert (report[n].acc_raw == 1.0) == (expected[n] == len(ids) - 1)


@given(flat_graphs(max_nodes=25, min_nodes=2), st.data())
def test_per_node_matches_whole_graph(g, data):
    n = data.draw(st.sampled_from(sorted(g)))
    r = compute_raw(g)[n]
    assert len(inflow(g, n)) == r.inflow_size
    assert len(outflow(g, n)) == r.outflow_size
    assert acc_raw(g, n) == r.acc_raw


@property_settings
@given(flat_graphs(max_nodes=50, min_nodes=2))
def test_flow_symmetry(g):
    ids = sorted(g)
    out = {n: outflow(g, n) for n in ids}
    inn = {n: inflow(g, n) for n in ids}
    for n in ids:
        for m in ids:
            assert (m in out[n]) == (n in inn[m])


@given(flat_graphs(max_nodes=30, min_nodes=2), st.data())
def test_adding_an_edge_never_shrinks_psi(g, data):
    ids = sorted(g)
    a, b = data.draw(st.sampled_from(ids)), data.draw(st.sampled_from(ids))
    bigger = DependenceGraph(g.node_list, list(g.edges) + [Edge(a, b, D)])
    before, after = compute_raw(g), compute_raw(bigger)
    assert all(after[n].psi_size >= before[n].psi_size for n in ids)


@property_settings
@given(hierarchical_asgs(max_nodes=50))
def test_rollup_bounds(g):
    r = compute_acc(g)
    hierarchy = g.ids_of_kind(NodeKind.METHOD, NodeKind.CLASS, NodeKind.PACKAGE)
    for n in g:
        a = r[n]
        assert 0.0 <= a.acc_raw <= 1.0
        assert -1e-12 <= a.acc_updated <= 1.0 + 1e-12
        if n not in hierarchy:
            assert a.acc_updated == a.acc_raw
    assert r.slice_acc == pytest.approx(math.fsum(r.values().values()) / len(g))


def test_report_accessors(example_asg):
    r = compute_acc(example_asg)
    assert isinstance(r, AccReport) and len(r) == 33
    assert set(r.values()) == set(r.raw_values()) == set(example_asg)


def test_bitset_matches_floyd_on_example(example_asg):
    ids = sorted(example_asg)
    index, reach = floyd_warshall(ids, example_asg.edges)
    r = compute_raw(example_asg)
    for n in ids:
        i = index[n]
        assert r[n].outflow_size == sum(reach[i]) - 1
