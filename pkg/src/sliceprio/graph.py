"""Dependence-graph data model, validation and reachability primitives.

A :class:`DependenceGraph` is an immutable multigraph of typed nodes and
typed directed edges.  Containment (package > class > method > statement)
is recorded twice: as the ``parent`` field of each node and as
``Containment`` edges running parent -> child.  :func:`validate` checks
that the two agree.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple


class NodeKind(str, Enum):
    PACKAGE = "Package"
    CLASS = "Class"
    METHOD = "Method"
    STATEMENT = "Statement"
    FORMAL_IN = "FormalIn"
    FORMAL_OUT = "FormalOut"
    ACTUAL_IN = "ActualIn"
    ACTUAL_OUT = "ActualOut"
    ATTRIBUTE = "Attribute"


class EdgeKind(str, Enum):
    CONTROL_DEP = "ControlDep"
    DATA_DEP = "DataDep"
    TYPE_DEP = "TypeDep"
    CALL = "Call"
    PARAMETER_IN = "ParameterIn"
    PARAMETER_OUT = "ParameterOut"
    GENERIC_IN = "GenericIn"
    GENERIC_OUT = "GenericOut"
    POLYMORPHIC_CALL = "PolymorphicCall"
    INHERITED_MEMBERSHIP = "InheritedMembership"
    METHOD_OVERRIDDEN = "MethodOverridden"
    CONTAINMENT = "Containment"
    SUMMARY = "Summary"


FORMAL_KINDS = frozenset({NodeKind.FORMAL_IN, NodeKind.FORMAL_OUT})
ACTUAL_KINDS = frozenset({NodeKind.ACTUAL_IN, NodeKind.ACTUAL_OUT})
PARAMETER_KINDS = FORMAL_KINDS | ACTUAL_KINDS
HIERARCHY_KINDS = frozenset({NodeKind.PACKAGE, NodeKind.CLASS, NodeKind.METHOD})

FORWARD = "forward"
BACKWARD = "backward"


class GraphError(Exception):
    """Base class for graph-level errors."""


class UnknownNodeError(GraphError, KeyError):
    def __init__(self, node_id: str, what: str = "node"):
        super().__init__(f"unknown {what} id {node_id!r}")
        self.node_id = node_id

    def __str__(self) -> str:
        return self.args[0]


class InvalidCriterionError(UnknownNodeError):
    """The slicing criterion does not name a usable node."""

    def __init__(self, node_id: str, reason: str = "not in graph"):
        GraphError.__init__(self, f"invalid slicing criterion {node_id!r}: {reason}")
        self.node_id = node_id


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    label: str = ""
    parent: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, NodeKind):
            object.__setattr__(self, "kind", NodeKind(self.kind))


class Edge(NamedTuple):
    src: str
    dst: str
    kind: EdgeKind


@dataclass(frozen=True)
class EdgeFilter:
    """Edges to skip during traversal.

    An edge is skipped if its kind is in ``excluded`` or the exact triple
    is in ``excluded_edges``.
    """

    excluded: frozenset[EdgeKind] = frozenset()
    excluded_edges: frozenset[Edge] = frozenset()

    def allows(self, edge: Edge) -> bool:
        return edge.kind not in self.excluded and edge not in self.excluded_edges

    @classmethod
    def kinds(cls, *kinds: EdgeKind) -> "EdgeFilter":
        return cls(excluded=frozenset(kinds))

    def union(self, other: "EdgeFilter") -> "EdgeFilter":
        return EdgeFilter(self.excluded | other.excluded,
                          self.excluded_edges | other.excluded_edges)


NO_FILTER = EdgeFilter()


class DependenceGraph:
    """Immutable typed multigraph.

    Construction never fails on invariant violations (dangling endpoints,
    duplicates, cycles); those are reported by :func:`validate`.  Duplicate
    node ids keep the last definition for lookup purposes.
    """

    __slots__ = ("_node_list", "_edge_list", "_nodes", "_edges", "_succ", "_pred", "_children")

    def __init__(self, nodes: Iterable[Node] = (), edges: Iterable[Edge] = ()):
        self._node_list: tuple[Node, ...] = tuple(nodes)
        self._edge_list: tuple[Edge, ...] = tuple(Edge(e[0], e[1], EdgeKind(e[2])) for e in edges)
        self._nodes: dict[str, Node] = {n.id: n for n in self._node_list}
        self._edges: frozenset[Edge] = frozenset(self._edge_list)
        succ: dict[str, list[Edge]] = {}
        pred: dict[str, list[Edge]] = {}
        for e in self._edges_sorted():
            succ.setdefault(e.src, []).append(e)
            pred.setdefault(e.dst, []).append(e)
        self._succ = succ
        self._pred = pred
        children: dict[str, list[str]] = {}
        for n in self._nodes.values():
            if n.parent is not None:
                children.setdefault(n.parent, []).append(n.id)
        self._children = children

    def _edges_sorted(self) -> list[Edge]:
        # deterministic adjacency order regardless of input order
        return sorted(self._edges, key=lambda e: (e.src, e.dst, e.kind.value))

    # ---- queries ---------------------------------------------------------

    @property
    def nodes(self) -> Mapping[str, Node]:
        return MappingProxyType(self._nodes)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    @property
    def node_list(self) -> tuple[Node, ...]:
        """Nodes exactly as supplied (duplicates included)."""
        return self._node_list

    @property
    def edge_list(self) -> tuple[Edge, ...]:
        """Edges exactly as supplied (duplicates included)."""
        return self._edge_list

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[str]:
        return iter(self._nodes)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def kind(self, node_id: str) -> NodeKind:
        return self.node(node_id).kind

    def out_edges(self, node_id: str) -> list[Edge]:
        return self._succ.get(node_id, [])

    def in_edges(self, node_id: str) -> list[Edge]:
        return self._pred.get(node_id, [])

    def children(self, node_id: str) -> list[str]:
        """Containment children, read from the ``parent`` fields."""
        return list(self._children.get(node_id, ()))

    def ids_of_kind(self, *kinds: NodeKind) -> set[str]:
        return {n.id for n in self._nodes.values() if n.kind in kinds}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependenceGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((frozenset(self._nodes.values()), self._edges))

    def __repr__(self) -> str:
        return f"DependenceGraph(nodes={len(self._nodes)}, edges={len(self._edges)})"


# ---- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    subject: tuple[str, ...] = field(default_factory=tuple)

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def validate(graph: DependenceGraph) -> list[Diagnostic]:
    """Check every structural invariant; return one diagnostic per violation."""
    out: list[Diagnostic] = []
    nodes = graph.nodes

    seen: set[str] = set()
    for n in graph.node_list:
        if n.id in seen:
            out.append(Diagnostic("duplicate-node", f"node id {n.id!r} defined more than once", (n.id,)))
        seen.add(n.id)

    seen_edges: set[Edge] = set()
    for e in graph.edge_list:
        if e in seen_edges:
            out.append(Diagnostic("duplicate-edge", f"edge {_fmt(e)} listed more than once", tuple(e[:2])))
        seen_edges.add(e)
        for end in (e.src, e.dst):
            if end not in nodes:
                out.append(Diagnostic("dangling-endpoint",
                                      f"edge {_fmt(e)} refers to missing node {end!r}", (e.src, e.dst)))

    for n in nodes.values():
        if n.parent is None:
            continue
        if n.parent not in nodes:
            out.append(Diagnostic("missing-parent", f"node {n.id!r} has unknown parent {n.parent!r}", (n.id,)))
            continue
        if Edge(n.parent, n.id, EdgeKind.CONTAINMENT) not in graph.edges:
            out.append(Diagnostic("containment-mismatch",
                                  f"node {n.id!r} names parent {n.parent!r} but no Containment edge exists",
                                  (n.parent, n.id)))
        pkind = nodes[n.parent].kind
        if n.kind in FORMAL_KINDS and pkind is not NodeKind.METHOD:
            out.append(Diagnostic("parameter-parent",
                                  f"formal parameter {n.id!r} must be contained by a Method, not {pkind.value}",
                                  (n.id,)))
        elif n.kind in ACTUAL_KINDS and pkind is not NodeKind.STATEMENT:
            out.append(Diagnostic("parameter-parent",
                                  f"actual parameter {n.id!r} must be contained by a Statement, not {pkind.value}",
                                  (n.id,)))

    parents_by_edge: dict[str, list[str]] = {}
    for e in sorted(graph.edges, key=lambda e: (e.src, e.dst)):
        if e.kind is not EdgeKind.CONTAINMENT or e.src not in nodes or e.dst not in nodes:
            continue
        parents_by_edge.setdefault(e.dst, []).append(e.src)
        if nodes[e.dst].parent != e.src:
            out.append(Diagnostic("containment-mismatch",
                                  f"Containment edge {_fmt(e)} disagrees with parent field of {e.dst!r}",
                                  (e.src, e.dst)))
    for child, parents in parents_by_edge.items():
        if len(parents) > 1:
            out.append(Diagnostic("multiple-parents",
                                  f"node {child!r} has {len(parents)} Containment parents", (child,)))

    for cycle in _containment_cycles(nodes):
        out.append(Diagnostic("containment-cycle", "containment cycle " + " -> ".join(cycle), tuple(cycle)))

    roots_with_children = {n.parent for n in nodes.values()
                           if n.parent in nodes and nodes[n.parent].parent is None}
    for r in sorted(r for r in roots_with_children if r is not None):
        if nodes[r].kind is not NodeKind.PACKAGE:
            out.append(Diagnostic("containment-root",
                                  f"containment root {r!r} is a {nodes[r].kind.value}, expected Package", (r,)))
    return out


def _containment_cycles(nodes: dict[str, Node]) -> list[list[str]]:
    state: dict[str, int] = {}  # 1 = on current chain, 2 = done
    cycles = []
    for start in sorted(nodes):
        chain: list[str] = []
        cur: str | None = start
        while cur is not None and cur in nodes and state.get(cur, 0) == 0:
            state[cur] = 1
            chain.append(cur)
            cur = nodes[cur].parent
        if cur is not None and state.get(cur) == 1:
            cyc = chain[chain.index(cur):]
            cycles.append(cyc + [cur])
        for c in chain:
            state[c] = 2
    return cycles


def _fmt(e: Edge) -> str:
    return f"{e.src} -> {e.dst} ({e.kind.value})"


# ---- traversal -------------------------------------------------------------

def reachable(graph: DependenceGraph, start: str, direction: str = FORWARD,
              filter: EdgeFilter = NO_FILTER) -> tuple[frozenset[str], frozenset[Edge]]:
    """Nodes reachable from ``start`` (inclusive) and the edges traversed.

    An edge counts as traversed when it is not filtered out and its source,
    in the direction of travel, was visited.
    """
    if start not in graph:
        raise InvalidCriterionError(start)
    return closure(graph, (start,), direction, filter)


def closure(graph: DependenceGraph, seeds: Iterable[str], direction: str = FORWARD,
            filter: EdgeFilter = NO_FILTER) -> tuple[frozenset[str], frozenset[Edge]]:
    """Multi-source form of :func:`reachable`.

    Equal to the union of the single-source results, computed in one sweep.
    """
    if direction == FORWARD:
        step, far = graph.out_edges, 1
    elif direction == BACKWARD:
        step, far = graph.in_edges, 0
    else:
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}, got {direction!r}")

    visited: set[str] = set()
    queue: deque[str] = deque()
    for s in seeds:
        if s not in graph:
            raise UnknownNodeError(s)
        if s not in visited:
            visited.add(s)
            queue.append(s)
    traversed: set[Edge] = set()
    while queue:
        cur = queue.popleft()
        for e in step(cur):
            if not filter.allows(e):
                continue
            traversed.add(e)
            nxt = e[far]
            if nxt not in visited and nxt in graph:
                visited.add(nxt)
                queue.append(nxt)
    return frozenset(visited), frozenset(traversed)


def induced_subgraph(graph: DependenceGraph, keep: Iterable[str]) -> DependenceGraph:
    """Subgraph on ``keep``; parents outside ``keep`` are cleared."""
    keep = set(keep)
    for k in keep:
        if k not in graph:
            raise UnknownNodeError(k)
    nodes = []
    for n in graph.nodes.values():
        if n.id not in keep:
            continue
        if n.parent is not None and n.parent not in keep:
            n = Node(n.id, n.kind, n.label, None)
        nodes.append(n)
    edges = [e for e in graph.edges if e.src in keep and e.dst in keep]
    return DependenceGraph(nodes, edges)
