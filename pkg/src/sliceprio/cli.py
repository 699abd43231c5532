"""Command-line interface.

Exit statuses: 0 success, 1 data invariant violation, 2 unreadable or
unparseable input, 3 computation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .fileio import (
    FormatError,
    natural_key,
    parse_ordering,
    read_coverage,
    read_faults,
    read_graph,
    read_weights,
)
from .graph import EdgeKind, GraphError, validate
from .pipeline import (
    Run,
    StageError,
    build_report,
    node_rows,
    prioritization_time,
    run_acc,
    run_evaluate,
    run_prioritize,
    run_slice,
    run_weights,
)
from .prioritize import PrioritizationError, anc_prioritize, apfd, percent_detected_curve

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_COMPUTE = 3

log = logging.getLogger("sliceprio")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


# ---- helpers ---------------------------------------------------------------

def _load(reader, path: str | Path, what: str):
    try:
        return reader(path)
    except FormatError as exc:
        raise CliError(f"cannot parse {what}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"cannot read {what} {path}: {exc.strerror or exc}", EXIT_PARSE) from None


def _graph(path: str, check: bool = True):
    g = _load(read_graph, path, "graph")
    if check:
        problems = validate(g)
        if problems:
            raise CliError("graph is invalid:\n" + "\n".join(f"  {d}" for d in problems), EXIT_INVALID)
    return g


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6f}"
    return "" if x is None else str(x)


def _table(out: TextIO, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    out.write("\t".join(header) + "\n")
    for r in rows:
        out.write("\t".join(_fmt(x) for x in r) + "\n")


def _write_report(run: Run, path: str | None, extra: dict | None = None) -> None:
    if not path:
        return
    doc = build_report(run)
    if extra:
        doc.update(extra)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    log.info("report written to %s", path)


def _figures_dir(args) -> Path | None:
    return Path(args.figures) if getattr(args, "figures", None) else None


def _prepare(args, need_weights: bool = True) -> Run:
    """Load the graph and run slice -> ACC -> weights as the flags ask."""
    run = Run(_graph(args.graph), getattr(args, "criterion", None))
    ignore = [EdgeKind(k) for k in getattr(args, "ignore_edge_kind", None) or ()]
    run_slice(run, ignore)
    injected = getattr(args, "inject_weights", None)
    if injected:
        wm, acc = _load(read_weights, injected, "weight map")
        missing = [n for n in run.asg if n not in wm]
        if missing:
            log.warning("injected weight map lacks %d ASG node(s): %s", len(missing),
                        ", ".join(sorted(missing, key=natural_key)))
        run_weights(run, injected=wm, injected_acc=acc)
        return run
    run_acc(run)
    if need_weights:
        run_weights(run, args.weights, args.seed)
    return run


# ---- subcommands -----------------------------------------------------------

def cmd_validate(args, out: TextIO) -> int:
    g = _graph(args.graph, check=False)
    problems = validate(g)
    for d in problems:
        out.write(f"{d}\n")
    if problems:
        return EXIT_INVALID
    out.write(f"ok\t{len(g)} nodes\t{len(g.edges)} edges\n")
    return EXIT_OK


def cmd_slice(args, out: TextIO) -> int:
    run = Run(_graph(args.graph), args.criterion)
    run_slice(run, [EdgeKind(k) for k in args.ignore_edge_kind or ()])
    s = run.slice
    assert s is not None
    parts = {"Q1": s.q1, "Q2": s.q2, "Q3": s.q3, "Q": s.q, **s.levels()}
    _table(out, ["set", "count", "nodes"],
           [(k, len(v), " ".join(sorted(v, key=natural_key))) for k, v in parts.items()])
    _write_report(run, args.report)
    return EXIT_OK


def cmd_acc(args, out: TextIO) -> int:
    run = _prepare(args, need_weights=False)
    rows = node_rows(run)
    _table(out, ["node", "kind", "inflow", "outflow", "psi", "acc_raw", "acc_updated"],
           [(r["id"], r.get("kind"), r.get("inflow_size"), r.get("outflow_size"), r.get("psi_size"),
             r.get("acc_raw"), r.get("acc_updated")) for r in rows])
    out.write(f"# slice_acc\t{run.acc.slice_acc:.6f}\n")
    _write_report(run, args.report)
    return EXIT_OK


def cmd_weights(args, out: TextIO) -> int:
    run = _prepare(args)
    w = run.weights
    _table(out, ["node", "acc", "weight", "band"],
           [(r["id"], r.get("acc_updated"), r.get("weight"), r.get("band")) for r in node_rows(run)])
    if w.boundaries:
        out.write(f"# mode\t{w.mode.value}\tboundaries\t{w.boundaries[0]:.6f}\t{w.boundaries[1]:.6f}\n")
    figs = _figures_dir(args)
    if figs and run.acc is not None:
        from . import plotting
        plotting.acc_clusters(run.acc.values(), w, figs / "acc_bands.png")
    _write_report(run, args.report)
    return EXIT_OK


def cmd_prioritize(args, out: TextIO) -> int:
    tests = _load(read_coverage, args.coverage, "coverage")
    run = _prepare(args)
    run_prioritize(run, tests)
    faults = _load(read_faults, args.faults, "fault matrix") if args.faults else None
    if faults is not None:
        run_evaluate(run, faults, args.permissive)

    _table(out, ["rank", "test", "wtc", "wtm", "wtw", "wt"],
           [(e.rank, e.test_id, *e.weights.as_tuple()) for e in run.suite])
    for group in run.suite.ties:
        out.write(f"# tie\t{' '.join(group)}\n")
    if run.evaluation:
        out.write(f"# apfd\t{run.evaluation['apfd']:.5f}\n")
    out.write(f"# prioritization_sec\t{prioritization_time(run):.6f}\n")

    figs = _figures_dir(args)
    if figs:
        from . import plotting
        plotting.test_weights(run.suite, figs / "test_weights.png")
        if run.acc is not None:
            plotting.acc_clusters(run.acc.values(), run.weights, figs / "acc_bands.png")
        if run.evaluation:
            plotting.detection_curves({"prioritized": run.evaluation["curve"]}, figs / "detection_curve.png")
    _write_report(run, args.report)
    return EXIT_OK


def cmd_evaluate(args, out: TextIO) -> int:
    order = parse_ordering(args.ordering)
    faults = _load(read_faults, args.faults, "fault matrix")
    score = apfd(order, faults, args.permissive)
    curve = percent_detected_curve(order, faults, args.permissive)
    out.write(f"APFD\t{score:.5f}\n")
    _table(out, ["position", "test", "pct_detected"],
           [(i + 1, t, f"{c:g}") for i, (t, c) in enumerate(zip(order, curve))])
    figs = _figures_dir(args)
    if figs:
        from . import plotting
        plotting.detection_curves({"ordering": curve}, figs / "detection_curve.png")
    return EXIT_OK


def cmd_compare(args, out: TextIO) -> int:
    tests = _load(read_coverage, args.coverage, "coverage")
    faults = _load(read_faults, args.faults, "fault matrix")
    run = _prepare(args)
    run_prioritize(run, tests)
    orders = {
        "FPANC": run.suite.order,
        "ANC": anc_prioritize(tests, run.asg, args.anc_decay).order,
        "input-order": [t.id for t in tests],
    }
    scores = {k: apfd(v, faults, args.permissive) for k, v in orders.items()}
    best = max(scores.values())
    _table(out, ["strategy", "apfd", "best", "order"],
           [(k, f"{scores[k]:.5f}", "*" if scores[k] == best else "", " ".join(v)) for k, v in orders.items()])
    figs = _figures_dir(args)
    if figs:
        from . import plotting
        plotting.apfd_bars(scores, figs / "apfd_comparison.png")
        plotting.detection_curves({k: percent_detected_curve(v, faults, args.permissive)
                                   for k, v in orders.items()}, figs / "detection_curves.png")
    _write_report(run, args.report, {"comparison": {k: {"apfd": round(scores[k], 6), "order": v}
                                                    for k, v in orders.items()}})
    return EXIT_OK


# ---- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sliceprio", description=__doc__.splitlines()[0] if __doc__ else None)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, criterion_required: bool = False):
        sp.add_argument("graph", help="graph file (JSON)")
        if criterion_required:
            sp.add_argument("criterion", help="node id of the changed statement")
        else:
            sp.add_argument("-c", "--criterion",
                            help="node id of the changed statement; omit if GRAPH already is the ASG")
        sp.add_argument("--ignore-edge-kind", action="append", choices=[k.value for k in EdgeKind],
                        metavar="KIND", help="drop this edge kind from all slicing sweeps (repeatable)")

    def weight_args(sp):
        sp.add_argument("--weights", choices=["kmeans", "threshold"], default="kmeans",
                        help="banding mode (default: kmeans)")
        sp.add_argument("--seed", type=int, default=0, help="k-means seed; 0 = deterministic start")
        sp.add_argument("--inject-weights", metavar="PATH",
                        help="node,acc,weight file used instead of computing ACC and bands")

    def out_args(sp, figures: bool = True):
        sp.add_argument("--report", metavar="PATH", help="write the JSON run report here")
        if figures:
            sp.add_argument("--figures", metavar="DIR", help="write PNG figures into this directory")

    sp = sub.add_parser("validate", help="check a graph file")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("slice", help="hierarchical-decomposition slice from a change point")
    graph_args(sp, criterion_required=True)
    out_args(sp, figures=False)
    sp.set_defaults(func=cmd_slice)

    sp = sub.add_parser("acc", help="affected component coupling per ASG node")
    graph_args(sp)
    out_args(sp, figures=False)
    sp.set_defaults(func=cmd_acc, inject_weights=None)

    sp = sub.add_parser("weights", help="fault-proneness weights per ASG node")
    graph_args(sp)
    weight_args(sp)
    out_args(sp)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("prioritize", help="order a test suite by covered node weights")
    graph_args(sp)
    sp.add_argument("--coverage", required=True, help="coverage file: test id, covered node ids")
    weight_args(sp)
    sp.add_argument("--faults", help="optional fault matrix to score the order")
    sp.add_argument("--permissive", action="store_true", help="undetected faults count as position n+1")
    out_args(sp)
    sp.set_defaults(func=cmd_prioritize)

    sp = sub.add_parser("evaluate", help="APFD and detection curve of an ordering")
    sp.add_argument("ordering", help="comma-separated test ids, or a file of them")
    sp.add_argument("faults", help="fault matrix file")
    sp.add_argument("--permissive", action="store_true", help="undetected faults count as position n+1")
    sp.add_argument("--figures", metavar="DIR", help="write PNG figures into this directory")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("compare", help="APFD of FPANC vs ANC vs input order")
    graph_args(sp)
    sp.add_argument("--coverage", required=True)
    sp.add_argument("--faults", required=True)
    weight_args(sp)
    sp.add_argument("--anc-decay", choices=["halve", "subtract"], default="halve",
                    help="how ANC lowers a covered node's weight (default: halve)")
    sp.add_argument("--permissive", action="store_true")
    out_args(sp)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    except StageError as exc:
        print(f"error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return EXIT_COMPUTE
    except (GraphError, PrioritizationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
