"""Hierarchical-decomposition slicing and affected-slice-graph construction.

The slice is built in three sweeps over the dependence graph:

1. forward from the change point, ignoring ``MethodOverridden`` edges;
2. backward from every forward-marked node, ignoring polymorphic call,
   inherited membership and the two ``*Out`` parameter edge kinds;
3. backward again from everything reached so far, this time ignoring the
   ``*In`` parameter edge kinds and every edge already walked in sweep 2.

Seeds are members of their own closures, so ``q1 <= q2 <= q3``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import (
    BACKWARD,
    FORWARD,
    DependenceGraph,
    Edge,
    EdgeFilter,
    EdgeKind,
    InvalidCriterionError,
    NodeKind,
    NO_FILTER,
    closure,
    induced_subgraph,
)

FORWARD_EXCLUDED = frozenset({EdgeKind.METHOD_OVERRIDDEN})
PASS1_EXCLUDED = frozenset({
    EdgeKind.POLYMORPHIC_CALL,
    EdgeKind.INHERITED_MEMBERSHIP,
    EdgeKind.PARAMETER_OUT,
    EdgeKind.GENERIC_OUT,
})
PASS2_EXCLUDED = frozenset({EdgeKind.PARAMETER_IN, EdgeKind.GENERIC_IN})

CRITERION_KINDS = frozenset({
    NodeKind.STATEMENT,
    NodeKind.FORMAL_IN,
    NodeKind.FORMAL_OUT,
    NodeKind.ACTUAL_IN,
    NodeKind.ACTUAL_OUT,
    NodeKind.ATTRIBUTE,
})


@dataclass(frozen=True)
class SlicingCriterion:
    """Change point, already resolved from ``(statement, variable)`` to a node."""

    node: str

    def check(self, graph: DependenceGraph) -> None:
        if self.node not in graph:
            raise InvalidCriterionError(self.node)
        kind = graph.kind(self.node)
        if kind not in CRITERION_KINDS:
            raise InvalidCriterionError(self.node, f"{kind.value} nodes cannot be slicing criteria")


@dataclass(frozen=True)
class HdSlice:
    q1: frozenset[str]
    q2: frozenset[str]
    q3: frozenset[str]
    q: frozenset[str]
    packages: frozenset[str]
    classes: frozenset[str]
    methods: frozenset[str]
    statements: frozenset[str]

    def levels(self) -> dict[str, frozenset[str]]:
        return {"P1": self.packages, "C1": self.classes, "M1": self.methods, "S1": self.statements}


def _criterion(criterion: SlicingCriterion | str) -> SlicingCriterion:
    return criterion if isinstance(criterion, SlicingCriterion) else SlicingCriterion(criterion)


def forward_mark(graph: DependenceGraph, criterion: SlicingCriterion | str,
                 ignore: EdgeFilter = NO_FILTER) -> frozenset[str]:
    """Q1: everything the change can reach."""
    criterion = _criterion(criterion)
    criterion.check(graph)
    filt = EdgeFilter(FORWARD_EXCLUDED).union(ignore)
    nodes, _ = closure(graph, (criterion.node,), FORWARD, filt)
    return nodes


def backward_pass1(graph: DependenceGraph, q1: Iterable[str],
                   ignore: EdgeFilter = NO_FILTER) -> tuple[frozenset[str], frozenset[Edge]]:
    """Q2 and the edges walked to find it."""
    filt = EdgeFilter(PASS1_EXCLUDED).union(ignore)
    return closure(graph, q1, BACKWARD, filt)


def backward_pass2(graph: DependenceGraph, q2: Iterable[str], e1: Iterable[Edge],
                   ignore: EdgeFilter = NO_FILTER) -> frozenset[str]:
    """Q3: backward again, skipping ``*In`` edges and every edge in ``e1``."""
    filt = EdgeFilter(PASS2_EXCLUDED, frozenset(e1)).union(ignore)
    nodes, _ = closure(graph, q2, BACKWARD, filt)
    return nodes


def decompose(graph: DependenceGraph, q: Iterable[str]) -> tuple[frozenset[str], ...]:
    """Split ``q`` into (packages, classes, methods, everything else)."""
    rest = set(q)
    levels = []
    for kind in (NodeKind.PACKAGE, NodeKind.CLASS, NodeKind.METHOD):
        level = frozenset(n for n in rest if graph.kind(n) is kind)
        rest -= level
        levels.append(level)
    levels.append(frozenset(rest))
    return tuple(levels)


def hd_slice(graph: DependenceGraph, criterion: SlicingCriterion | str,
             ignore: Iterable[EdgeKind] = ()) -> HdSlice:
    """Full slice for a change at ``criterion``.

    ``ignore`` names extra edge kinds dropped from all three sweeps, for
    graphs whose producer wants e.g. Containment or Summary edges left out.
    """
    extra = EdgeFilter(frozenset(ignore))
    q1 = forward_mark(graph, criterion, extra)
    q2, e1 = backward_pass1(graph, q1, extra)
    q3 = backward_pass2(graph, q2, e1, extra)
    q = q1 | q2 | q3
    p1, c1, m1, s1 = decompose(graph, q)
    return HdSlice(q1, q2, q3, q, p1, c1, m1, s1)


def build_asg(graph: DependenceGraph, slice_: HdSlice) -> DependenceGraph:
    """The affected slice graph: the subgraph induced by the slice."""
    return induced_subgraph(graph, slice_.q)
