"""Seeded random dependence graphs, suites and fault matrices.

Used by the property and scaling tests and by the FPANC vs ANC comparison
on bundles whose faults sit mostly on strongly coupled nodes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .acc import compute_acc
from .graph import DependenceGraph, Edge, EdgeKind, Node, NodeKind
from .prioritize import FaultMatrix, TestCase
from .slicer import build_asg, hd_slice

# dependence kinds that may join two statements of any method
_INTRA_KINDS = (EdgeKind.CONTROL_DEP, EdgeKind.DATA_DEP, EdgeKind.DATA_DEP, EdgeKind.TYPE_DEP)


def hierarchical_graph(seed: int, packages: int = 1, classes: int = 3, methods: int = 3,
                       statements: int = 6, density: float = 1.5,
                       call_prob: float = 0.3, loop_prob: float = 0.1) -> DependenceGraph:
    """A well-formed EOOSDG with ``classes`` per package, ``methods`` per
    class and ``statements`` per method.

    Each method gets one formal-in and one formal-out node.  ``density`` is
    the mean number of intra-method dependence edges per statement.  They
    run forward in statement order except for a ``loop_prob`` share of back
    edges.  With probability ``call_prob`` a statement calls some other
    method through a matching actual-in / actual-out pair.
    """
    rng = random.Random(seed)
    nodes: list[Node] = []
    edges: list[Edge] = []

    def add(nid: str, kind: NodeKind, parent: str | None) -> str:
        nodes.append(Node(nid, kind, nid, parent))
        if parent is not None:
            edges.append(Edge(parent, nid, EdgeKind.CONTAINMENT))
        return nid

    method_ids: list[str] = []
    stmts_of: dict[str, list[str]] = {}
    attrs: list[str] = []
    for p in range(packages):
        pkg = add(f"P{p}", NodeKind.PACKAGE, None)
        for c in range(classes):
            cls = add(f"{pkg}.C{c}", NodeKind.CLASS, pkg)
            attrs.append(add(f"{cls}.a", NodeKind.ATTRIBUTE, cls))
            for m in range(methods):
                mid = add(f"{cls}.m{m}", NodeKind.METHOD, cls)
                method_ids.append(mid)
                fin = add(f"{mid}.in", NodeKind.FORMAL_IN, mid)
                stmts = [add(f"{mid}.s{s}", NodeKind.STATEMENT, mid) for s in range(statements)]
                fout = add(f"{mid}.out", NodeKind.FORMAL_OUT, mid)
                stmts_of[mid] = stmts
                edges.append(Edge(fin, stmts[0], EdgeKind.DATA_DEP))
                edges.append(Edge(stmts[-1], fout, EdgeKind.DATA_DEP))
                for i in range(1, len(stmts)):
                    edges.append(Edge(stmts[i - 1], stmts[i], EdgeKind.CONTROL_DEP))
                extra = int(round(density * len(stmts))) - (len(stmts) - 1)
                for _ in range(max(0, extra)):
                    if len(stmts) < 2:
                        break
                    i, j = sorted(rng.sample(range(len(stmts)), 2))
                    if rng.random() < loop_prob:  # loop-carried dependence
                        i, j = j, i
                    edges.append(Edge(stmts[i], stmts[j], rng.choice(_INTRA_KINDS)))

    for mid in method_ids:
        for s in stmts_of[mid]:
            if rng.random() < 0.1:
                a = rng.choice(attrs)
                edges.append(Edge(a, s, EdgeKind.DATA_DEP) if rng.random() < 0.5
                             else Edge(s, a, EdgeKind.DATA_DEP))
            if len(method_ids) < 2 or rng.random() >= call_prob:
                continue
            callee = rng.choice([m for m in method_ids if m != mid])
            ain = add(f"{s}.ai", NodeKind.ACTUAL_IN, s)
            aout = add(f"{s}.ao", NodeKind.ACTUAL_OUT, s)
            edges += [
                Edge(s, ain, EdgeKind.CONTROL_DEP),
                Edge(s, aout, EdgeKind.CONTROL_DEP),
                Edge(s, callee, EdgeKind.CALL),
                Edge(ain, f"{callee}.in", EdgeKind.PARAMETER_IN),
                Edge(f"{callee}.out", aout, EdgeKind.PARAMETER_OUT),
                Edge(ain, aout, EdgeKind.SUMMARY),
            ]
    return DependenceGraph(nodes, _dedupe(edges))


def dense_asg(n: int, out_degree: int = 8, seed: int = 0) -> DependenceGraph:
    """Flat graph of ``n`` statements under one method, ``out_degree`` random
    dependence edges per node.  Mostly forward edges with a few back edges
    so that sizeable cycles occur."""
    rng = random.Random(seed)
    nodes = [Node("P", NodeKind.PACKAGE), Node("C", NodeKind.CLASS, parent="P"),
             Node("M", NodeKind.METHOD, parent="C")]
    edges = [Edge("P", "C", EdgeKind.CONTAINMENT), Edge("C", "M", EdgeKind.CONTAINMENT)]
    ids = [f"s{i}" for i in range(n)]
    for s in ids:
        nodes.append(Node(s, NodeKind.STATEMENT, parent="M"))
        edges.append(Edge("M", s, EdgeKind.CONTAINMENT))
    for i in range(n):
        for _ in range(out_degree):
            j = rng.randrange(n)
            if j == i:
                continue
            if j < i and rng.random() > 0.05:
                i_, j_ = j, i
            else:
                i_, j_ = i, j
            edges.append(Edge(ids[i_], ids[j_], rng.choice(_INTRA_KINDS)))
    return DependenceGraph(nodes, _dedupe(edges))


def _dedupe(edges: list[Edge]) -> list[Edge]:
    return list(dict.fromkeys(edges))


@dataclass(frozen=True)
class Bundle:
    """Everything one comparison run needs."""

    graph: DependenceGraph
    criterion: str
    tests: tuple[TestCase, ...]
    faults: FaultMatrix
    fault_nodes: dict[str, str]


def bundle(seed: int, n_tests: int = 12, n_faults: int = 8, coverage: float = 0.25,
           bias: float = 4.0, detect_prob: float = 0.9) -> Bundle:
    """A graph, a change point, a suite and a fault matrix.

    The change point is the statement whose slice is largest among a few
    random picks.  Faults are planted on slice statements with probability
    proportional to ``acc ** bias``; a test detects a fault when it covers
    the faulty node and a ``detect_prob`` coin comes up.  Every fault is
    made detectable by at least one test.
    """
    rng = random.Random(seed)
    g = hierarchical_graph(seed, packages=1 + rng.randrange(2), classes=3, methods=3,
                           statements=5 + rng.randrange(4))
    stmts = sorted(g.ids_of_kind(NodeKind.STATEMENT))
    best = None
    for c in rng.sample(stmts, min(6, len(stmts))):
        s = hd_slice(g, c)
        if best is None or len(s.q) > len(best[1].q):
            best = (c, s)
    assert best is not None
    criterion, sl = best
    asg = build_asg(g, sl)
    acc = compute_acc(asg).values()

    # coverage is drawn over all executable nodes, not only the slice
    executable = sorted(g.ids_of_kind(NodeKind.STATEMENT, NodeKind.FORMAL_IN, NodeKind.FORMAL_OUT,
                                      NodeKind.ACTUAL_IN, NodeKind.ACTUAL_OUT))
    tests = []
    for t in range(n_tests):
        k = max(1, int(rng.uniform(0.3, 1.7) * coverage * len(executable)))
        tests.append(TestCase(f"T{t + 1}", frozenset(rng.sample(executable, min(k, len(executable))))))

    candidates = sorted(n for n in sl.statements if n in acc)
    pool = candidates or sorted(sl.q)
    weights = [max(acc.get(n, 0.0), 1e-9) ** bias for n in pool]
    fault_nodes: dict[str, str] = {}
    rows: dict[str, list[str]] = {}
    for f in range(n_faults):
        fid = f"F{f + 1}"
        node = rng.choices(pool, weights)[0]
        fault_nodes[fid] = node
        covering = [t.id for t in tests if node in t.covered]
        if not covering:
            # make the fault reachable by one test, picked at random
            i = rng.randrange(len(tests))
            tests[i] = TestCase(tests[i].id, tests[i].covered | {node})
            covering = [tests[i].id]
        detecting = [t for t in covering if rng.random() < detect_prob] or [rng.choice(covering)]
        rows[fid] = detecting
    return Bundle(g, criterion, tuple(tests), FaultMatrix.from_rows([t.id for t in tests], rows), fault_nodes)
