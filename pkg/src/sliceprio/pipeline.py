"""End-to-end run: slice, score, band, prioritize, and the report document."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .acc import AccReport, compute_acc, report_from_values
from .fileio import natural_key
from .graph import DependenceGraph
from .prioritize import (
    FaultMatrix,
    PrioritizedSuite,
    TestCase,
    apfd,
    percent_detected_curve,
    prioritize,
)
from .slicer import HdSlice, build_asg, hd_slice
from .weights import WeightMap, WeightMode, assign_weights

DECIMALS = 6


class StageError(Exception):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class Run:
    graph: DependenceGraph
    criterion: str | None = None
    slice: HdSlice | None = None
    asg: DependenceGraph | None = None
    acc: AccReport | None = None
    weights: WeightMap | None = None
    seed: int = 0
    suite: PrioritizedSuite | None = None
    evaluation: dict | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc
        finally:
            self.timings[name] = time.perf_counter() - t0


def run_slice(run: Run, ignore=()) -> Run:
    """Slice when a criterion is given; otherwise the graph already is the ASG."""
    with run.stage("slice"):
        if run.criterion is None:
            run.asg = run.graph
        else:
            run.slice = hd_slice(run.graph, run.criterion, ignore)
            run.asg = build_asg(run.graph, run.slice)
    return run


def run_acc(run: Run) -> Run:
    assert run.asg is not None
    with run.stage("acc"):
        run.acc = compute_acc(run.asg)
    return run


def run_weights(run: Run, mode: WeightMode | str = WeightMode.KMEANS, seed: int = 0,
                injected: WeightMap | None = None, injected_acc: Mapping[str, float] | None = None) -> Run:
    run.seed = seed
    with run.stage("weights"):
        if injected is not None:
            run.weights = injected
            if injected_acc:
                run.acc = report_from_values(injected_acc)
        else:
            assert run.acc is not None
            run.weights = assign_weights(run.acc, mode, seed)
    return run


def run_prioritize(run: Run, tests: Sequence[TestCase]) -> Run:
    assert run.weights is not None
    with run.stage("prioritization"):
        run.suite = prioritize(tests, run.weights)
    return run


def run_evaluate(run: Run, faults: FaultMatrix, permissive: bool = False) -> Run:
    assert run.suite is not None
    with run.stage("evaluation"):
        order = run.suite.order
        run.evaluation = {"apfd": apfd(order, faults, permissive),
                          "curve": percent_detected_curve(order, faults, permissive)}
    return run


# ---- report document -------------------------------------------------------

def _r(x: float) -> float:
    return round(float(x), DECIMALS)


def _ids(xs) -> list[str]:
    return sorted(xs, key=natural_key)


def slice_section(s: HdSlice) -> dict:
    parts = {"Q1": s.q1, "Q2": s.q2, "Q3": s.q3, "Q": s.q, **s.levels()}
    return {"sets": {k: _ids(v) for k, v in parts.items()},
            "counts": {k: len(v) for k, v in parts.items()}}


def node_rows(run: Run) -> list[dict]:
    ids = list(run.asg) if run.asg is not None else list(run.weights.weights if run.weights else [])
    rows = []
    for n in _ids(ids):
        row: dict = {"id": n}
        if run.asg is not None and n in run.asg:
            row["kind"] = run.asg.kind(n).value
        if run.acc is not None and n in run.acc.nodes:
            a = run.acc[n]
            if a.inflow_size >= 0:
                row.update(inflow_size=a.inflow_size, outflow_size=a.outflow_size, psi_size=a.psi_size)
            row.update(acc_raw=_r(a.acc_raw), acc_updated=_r(a.acc_updated))
        if run.weights is not None and n in run.weights:
            row.update(weight=run.weights[n], band=run.weights.band(n).value)
        rows.append(row)
    return rows


def build_report(run: Run) -> dict:
    doc: dict = {"criterion": run.criterion}
    if run.slice is not None:
        doc["slice"] = slice_section(run.slice)
    if run.asg is not None:
        doc["asg"] = {"nodes": len(run.asg), "edges": len(run.asg.edges)}
    doc["nodes"] = node_rows(run)
    if run.acc is not None:
        doc["slice_acc"] = _r(run.acc.slice_acc)
    if run.weights is not None:
        w = run.weights
        doc["weighting"] = {
            "mode": w.mode.value,
            "seed": run.seed if w.mode is WeightMode.KMEANS else None,
            "boundaries": [_r(b) for b in w.boundaries] if w.boundaries else None,
            "centroids": [_r(c) for c in w.centroids] if w.centroids else None,
        }
    if run.suite is not None:
        doc["tests"] = [{"rank": e.rank, "id": e.test_id, "wtc": e.weights.wtc, "wtm": e.weights.wtm,
                         "wtw": e.weights.wtw, "wt": e.weights.wt}
                        for e in run.suite if e.weights is not None]
        doc["order"] = run.suite.order
        doc["ties"] = [list(t) for t in run.suite.ties]
    if run.evaluation is not None:
        doc["evaluation"] = {"apfd": _r(run.evaluation["apfd"]),
                             "curve": [_r(c) for c in run.evaluation["curve"]]}
    if run.suite is not None:
        doc["prioritization_sec"] = _r(prioritization_time(run))
    doc["timings_sec"] = {k: _r(v) for k, v in run.timings.items()}
    return doc


def prioritization_time(run: Run) -> float:
    """Weight computation plus ordering; slicing and ACC are not counted."""
    return run.timings.get("weights", 0.0) + run.timings.get("prioritization", 0.0)
