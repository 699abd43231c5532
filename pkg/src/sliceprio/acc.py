"""Affected component coupling (ACC) over an affected slice graph.

For a node ``n`` of an ASG with ``N`` nodes, ``psi(n)`` is every other node
connected to ``n`` by a directed path in either direction, and
``acc(n) = |psi(n)| / (N - 1)``.  Methods, classes and packages are then
re-scored as the mean of their own value and their members' values,
bottom-up.

Whole-graph scoring uses a transitive closure over the strongly connected
component condensation with Python ints as bitsets; the per-node
:func:`inflow` / :func:`outflow` helpers walk the graph directly.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .graph import (
    BACKWARD,
    FORWARD,
    DependenceGraph,
    GraphError,
    NodeKind,
    UnknownNodeError,
    closure,
)

METHOD_MEMBER_KINDS = frozenset({NodeKind.FORMAL_IN, NodeKind.FORMAL_OUT, NodeKind.STATEMENT})
CLASS_MEMBER_KINDS = frozenset({NodeKind.ATTRIBUTE, NodeKind.METHOD})
PACKAGE_MEMBER_KINDS = frozenset({NodeKind.CLASS, NodeKind.PACKAGE})


class MetricError(GraphError):
    pass


@dataclass(frozen=True)
class NodeAcc:
    inflow_size: int
    outflow_size: int
    psi_size: int
    acc_raw: float
    acc_updated: float

    @property
    def acc(self) -> float:
        return self.acc_updated


@dataclass(frozen=True)
class AccReport:
    nodes: Mapping[str, NodeAcc]
    slice_acc: float

    def values(self) -> dict[str, float]:
        """Final per-node ACC (rolled-up where applicable)."""
        return {k: v.acc_updated for k, v in self.nodes.items()}

    def raw_values(self) -> dict[str, float]:
        return {k: v.acc_raw for k, v in self.nodes.items()}

    def __getitem__(self, node_id: str) -> NodeAcc:
        return self.nodes[node_id]

    def __len__(self) -> int:
        return len(self.nodes)


def _require(asg: DependenceGraph, n: str) -> None:
    if n not in asg:
        raise UnknownNodeError(n)


def inflow(asg: DependenceGraph, n: str) -> frozenset[str]:
    """Nodes with a path to ``n`` (``n`` itself excluded)."""
    _require(asg, n)
    nodes, _ = closure(asg, (n,), BACKWARD)
    return nodes - {n}


def outflow(asg: DependenceGraph, n: str) -> frozenset[str]:
    """Nodes reachable from ``n`` (``n`` itself excluded)."""
    _require(asg, n)
    nodes, _ = closure(asg, (n,), FORWARD)
    return nodes - {n}


def coupling_ratio(psi_size: int, n_nodes: int) -> float:
    if n_nodes < 2:
        raise MetricError(f"ACC needs at least 2 nodes, ASG has {n_nodes}")
    return psi_size / (n_nodes - 1)


def acc_raw(asg: DependenceGraph, n: str) -> float:
    psi = inflow(asg, n) | outflow(asg, n)
    return coupling_ratio(len(psi), len(asg))


# ---- whole-graph closure ---------------------------------------------------

def _scc(order: list[str], succ: Mapping[str, list[str]]) -> list[list[str]]:
    """Tarjan, iterative.  Components come out in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    for root in order:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _reach_bits(order: list[str], bit: Mapping[str, int],
                succ: Mapping[str, list[str]]) -> dict[str, int]:
    comps = _scc(order, succ)
    comp_of = {v: i for i, comp in enumerate(comps) for v in comp}
    reach: list[int] = []
    for i, comp in enumerate(comps):
        # successors' components were all finished earlier (reverse topo order)
        acc = 0
        for v in comp:
            acc |= bit[v]
            for w in succ.get(v, ()):
                j = comp_of[w]
                if j != i:
                    acc |= reach[j]
        reach.append(acc)
    return {v: reach[comp_of[v]] for v in order}


def flow_bitsets(asg: DependenceGraph) -> tuple[list[str], dict[str, int], dict[str, int]]:
    """(node order, forward reach bits, backward reach bits); each set includes the node."""
    order = list(asg)
    bit = {v: 1 << i for i, v in enumerate(order)}
    succ: dict[str, list[str]] = {v: [] for v in order}
    pred: dict[str, list[str]] = {v: [] for v in order}
    for e in asg.edges:
        if e.src in bit and e.dst in bit:
            succ[e.src].append(e.dst)
            pred[e.dst].append(e.src)
    return order, _reach_bits(order, bit, succ), _reach_bits(order, bit, pred)


def compute_raw(asg: DependenceGraph) -> AccReport:
    """Per-node flows and raw ACC; ``acc_updated`` mirrors ``acc_raw``."""
    n = len(asg)
    if n < 2:
        raise MetricError(f"ACC needs at least 2 nodes, ASG has {n}")
    order, fwd, bwd = flow_bitsets(asg)
    nodes: dict[str, NodeAcc] = {}
    for i, v in enumerate(order):
        me = 1 << i
        out_b = fwd[v] & ~me
        in_b = bwd[v] & ~me
        psi = (out_b | in_b).bit_count()
        a = psi / (n - 1)
        nodes[v] = NodeAcc(in_b.bit_count(), out_b.bit_count(), psi, a, a)
    return AccReport(nodes, _mean(x.acc_updated for x in nodes.values()))


# ---- hierarchy roll-up -----------------------------------------------------

def _members(asg: DependenceGraph, owner: str, kinds: frozenset[NodeKind]) -> list[str]:
    return [c for c in asg.children(owner) if c in asg and asg.kind(c) in kinds]


def _depth(asg: DependenceGraph, n: str) -> int:
    d, seen = 0, {n}
    p = asg.node(n).parent
    while p is not None and p in asg:
        if p in seen:
            raise MetricError(f"containment cycle through {p!r}")
        seen.add(p)
        d += 1
        p = asg.node(p).parent
    return d


def rollup(asg: DependenceGraph, raw: AccReport) -> AccReport:
    """Average hierarchy nodes with their members: methods, then classes, then packages.

    Classes see their methods' rolled-up values, packages see their
    classes' and subpackages' rolled-up values.  Subpackages are settled
    before their parents.
    """
    for n in asg:
        if n not in raw.nodes:
            raise UnknownNodeError(n, "ACC entry for node")
    value = {k: v.acc_raw for k, v in raw.nodes.items()}

    def average(owner: str, kinds: frozenset[NodeKind]) -> None:
        members = _members(asg, owner, kinds)
        if members:
            value[owner] = (value[owner] + sum(value[m] for m in members)) / (len(members) + 1)

    for m in sorted(asg.ids_of_kind(NodeKind.METHOD)):
        average(m, METHOD_MEMBER_KINDS)
    for c in sorted(asg.ids_of_kind(NodeKind.CLASS)):
        average(c, CLASS_MEMBER_KINDS)
    packages = sorted(asg.ids_of_kind(NodeKind.PACKAGE), key=lambda p: (-_depth(asg, p), p))
    for p in packages:
        average(p, PACKAGE_MEMBER_KINDS)

    nodes = {k: replace(v, acc_updated=value[k]) for k, v in raw.nodes.items()}
    return AccReport(nodes, _mean(value[k] for k in nodes))


def slice_acc(report: AccReport | Mapping[str, float]) -> float:
    """Mean ACC over all ASG nodes."""
    vals = report.values() if isinstance(report, AccReport) else report
    vals = list(vals.values())
    if not vals:
        raise MetricError("slice ACC of an empty report is undefined")
    return _mean(vals)


def compute_acc(asg: DependenceGraph) -> AccReport:
    """Raw scores, roll-up and slice mean in one call."""
    return rollup(asg, compute_raw(asg))


def report_from_values(raw_values: Mapping[str, float]) -> AccReport:
    """Wrap externally supplied raw ACC values (flow sizes unknown, set to -1)."""
    nodes = {k: NodeAcc(-1, -1, -1, float(v), float(v)) for k, v in raw_values.items()}
    return AccReport(nodes, _mean(nodes[k].acc_raw for k in nodes) if nodes else 0.0)


def _mean(xs: Iterable[float]) -> float:
    xs = list(xs)
    return sum(xs) / len(xs)
