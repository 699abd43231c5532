"""Reading and writing graphs, coverage, fault matrices and weight maps.

Graph files are JSON::

    {"nodes": [{"id": "24", "kind": "Class", "label": "Triangle", "parent": "1"}, ...],
     "edges": [{"src": "1", "dst": "24", "kind": "Containment"}, ...]}

The tabular formats are comma-separated, UTF-8, one record per line, with
``#`` starting a comment line:

* coverage: ``T6,1,2,3,4,6,7`` (test id, then covered node ids);
* faults: header ``fault,T1,T2,...`` then ``f1,1,0,0,0,1,1`` per fault;
* weights: header ``node,acc,weight`` (``acc`` optional).
"""
from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .graph import DependenceGraph, Edge, EdgeKind, Node, NodeKind
from .prioritize import FaultMatrix, TestCase
from .weights import WeightMap, WeightMode

PathLike = str | Path


class FormatError(ValueError):
    """A file could not be parsed; ``location`` says where."""

    def __init__(self, message: str, path: PathLike | None = None, line: int | None = None,
                 column: int | None = None):
        where = str(path) if path is not None else "<input>"
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.column = column


# ---- graph -----------------------------------------------------------------

def graph_from_dict(doc: Mapping, path: PathLike | None = None) -> DependenceGraph:
    if not isinstance(doc, Mapping) or "nodes" not in doc or "edges" not in doc:
        raise FormatError("graph document needs top-level 'nodes' and 'edges'", path)
    if not isinstance(doc["nodes"], list) or not isinstance(doc["edges"], list):
        raise FormatError("'nodes' and 'edges' must be lists", path)
    nodes = []
    for i, rec in enumerate(doc["nodes"]):
        try:
            nodes.append(Node(str(rec["id"]), NodeKind(rec["kind"]), str(rec.get("label", "")),
                              None if rec.get("parent") is None else str(rec["parent"])))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"bad node record #{i}: {_why(exc)}", path) from None
    edges = []
    for i, rec in enumerate(doc["edges"]):
        try:
            edges.append(Edge(str(rec["src"]), str(rec["dst"]), EdgeKind(rec["kind"])))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"bad edge record #{i}: {_why(exc)}", path) from None
    return DependenceGraph(nodes, edges)


def graph_to_dict(graph: DependenceGraph) -> dict:
    nodes = []
    for n in graph.node_list:
        rec: dict = {"id": n.id, "kind": n.kind.value}
        if n.label:
            rec["label"] = n.label
        if n.parent is not None:
            rec["parent"] = n.parent
        nodes.append(rec)
    edges = [{"src": e.src, "dst": e.dst, "kind": e.kind.value} for e in graph.edge_list]
    return {"nodes": nodes, "edges": edges}


def loads_graph(text: str, path: PathLike | None = None) -> DependenceGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, path, exc.lineno, exc.colno) from None
    return graph_from_dict(doc, path)


def dumps_graph(graph: DependenceGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=1) + "\n"


def read_graph(path: PathLike) -> DependenceGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"), path)


def write_graph(graph: DependenceGraph, path: PathLike) -> None:
    Path(path).write_text(dumps_graph(graph), encoding="utf-8")


# ---- delimited formats -----------------------------------------------------

def _rows(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        row = next(csv.reader([line]))
        yield lineno, [c.strip() for c in row]


def loads_coverage(text: str, path: PathLike | None = None) -> list[TestCase]:
    tests: list[TestCase] = []
    seen: set[str] = set()
    for lineno, row in _rows(text):
        tid = row[0]
        if not tid:
            raise FormatError("empty test id", path, lineno)
        if tid in seen:
            raise FormatError(f"duplicate test id {tid!r}", path, lineno)
        seen.add(tid)
        tests.append(TestCase(tid, frozenset(c for c in row[1:] if c)))
    if not tests:
        raise FormatError("coverage file has no test rows", path)
    return tests


def dumps_coverage(tests: Sequence[TestCase]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for t in tests:
        w.writerow([t.id, *sorted(t.covered, key=natural_key)])
    return buf.getvalue()


def read_coverage(path: PathLike) -> list[TestCase]:
    return loads_coverage(Path(path).read_text(encoding="utf-8"), path)


def loads_faults(text: str, path: PathLike | None = None) -> FaultMatrix:
    rows = list(_rows(text))
    if not rows:
        raise FormatError("fault file is empty", path)
    (hline, header), body = rows[0], rows[1:]
    tests = header[1:]
    if not tests:
        raise FormatError("header names no tests", path, hline)
    if len(set(tests)) != len(tests):
        raise FormatError("duplicate test column", path, hline)
    faults: list[str] = []
    detects = set()
    for lineno, row in body:
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} fields, got {len(row)}", path, lineno)
        fid = row[0]
        if fid in faults:
            raise FormatError(f"duplicate fault id {fid!r}", path, lineno)
        faults.append(fid)
        for t, mark in zip(tests, row[1:]):
            if mark not in ("0", "1"):
                raise FormatError(f"mark for {fid}/{t} must be 0 or 1, got {mark!r}", path, lineno)
            if mark == "1":
                detects.add((t, fid))
    return FaultMatrix(tuple(tests), tuple(faults), frozenset(detects))


def dumps_faults(matrix: FaultMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fault", *matrix.tests])
    for f in matrix.faults:
        w.writerow([f, *("1" if (t, f) in matrix.detects else "0" for t in matrix.tests)])
    return buf.getvalue()


def read_faults(path: PathLike) -> FaultMatrix:
    return loads_faults(Path(path).read_text(encoding="utf-8"), path)


def loads_weights(text: str, path: PathLike | None = None) -> tuple[WeightMap, dict[str, float]]:
    """Weight map plus whatever ACC values the file carries."""
    rows = list(_rows(text))
    if not rows:
        raise FormatError("weight file is empty", path)
    hline, header = rows[0]
    cols = [h.lower() for h in header]
    if "node" not in cols or "weight" not in cols:
        raise FormatError("header must name 'node' and 'weight' columns", path, hline)
    ni, wi = cols.index("node"), cols.index("weight")
    ai = cols.index("acc") if "acc" in cols else None
    weights: dict[str, int] = {}
    acc: dict[str, float] = {}
    for lineno, row in rows[1:]:
        try:
            node = row[ni]
            weights[node] = int(row[wi])
            if ai is not None and row[ai] != "":
                acc[node] = float(row[ai])
        except (IndexError, ValueError) as exc:
            raise FormatError(_why(exc), path, lineno) from None
        if weights[node] not in (1, 2, 3):
            raise FormatError(f"weight must be 1, 2 or 3, got {weights[node]}", path, lineno)
    return WeightMap(weights, WeightMode.INJECTED), acc


def dumps_weights(weights: WeightMap, acc: Mapping[str, float] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "acc", "weight"] if acc is not None else ["node", "weight"])
    for node in sorted(weights.weights, key=natural_key):
        if acc is not None:
            w.writerow([node, f"{acc[node]:.10g}" if node in acc else "", weights[node]])
        else:
            w.writerow([node, weights[node]])
    return buf.getvalue()


def read_weights(path: PathLike) -> tuple[WeightMap, dict[str, float]]:
    return loads_weights(Path(path).read_text(encoding="utf-8"), path)


def parse_ordering(spec: str) -> list[str]:
    """Test ids from a comma/whitespace separated string or a file of them."""
    p = Path(spec)
    text = p.read_text(encoding="utf-8") if p.is_file() else spec
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    return [tok for tok in " ".join(lines).replace(",", " ").split() if tok]


# ---- bundled fixtures ------------------------------------------------------

FIXTURES = {
    "triangle-shape-eoosdg": "triangle_shape_eoosdg.json",
    "triangle-shape-asg": "triangle_shape_asg.json",
    "figure2-weights": "figure2_weights.csv",
    "table1-faults": "table1_faults.csv",
    "table3-coverage": "table3_coverage.csv",
}


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture, by short name or file name."""
    fname = FIXTURES.get(name, name)
    ref = resources.files("sliceprio") / "fixtures" / fname
    with resources.as_file(ref) as p:
        if not p.exists():
            raise FileNotFoundError(f"no bundled fixture {name!r}")
        return p


def natural_key(s: str) -> tuple:
    """Sort key putting numeric ids first, in numeric order."""
    return (0, int(s), s) if s.isdigit() else (1, 0, s)


def _why(exc: BaseException) -> str:
    if isinstance(exc, KeyError):
        return f"missing field {exc.args[0]!r}"
    return str(exc)
