"""Command-line entry point.

Exit codes: 0 success, 1 usage/configuration error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import __version__
from .baselines import bvc_slices, uniform_slices
from .core import OutOfOrderTimestamp
from .ingest import FORMATS, IngestConfig, NodeGroups, ParseError, read_network, synth_stream, write_stream
from .layout import ORDERS, LayoutSpec, render
from .slicer import ANCHOR_ROUNDINGS, WINDOW_AXES, ScheduleIOError, SlicerConfig, export_schedule, slice_stream
from .stats import compare_report, ecdf, render_table, spread_of, strategy_row, write_json, write_rows_csv, write_series

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3
METHODS = ("nonuniform", "uniform", "bvc", "none")


class UsageError(Exception):
    pass


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="edge stream file (.gz accepted)")
    p.add_argument("--format", choices=FORMATS, default="sociopatterns")
    p.add_argument("--time-divisor", type=int, default=1, help="raw time units per original timestamp")
    p.add_argument("--no-rebase", action="store_true", help="keep timestamps instead of shifting the first to 0")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--sort-buffer", action="store_true", help="sort the whole file before streaming (offline)")


def _add_method(p: argparse.ArgumentParser, default: str = "nonuniform") -> None:
    p.add_argument("--method", choices=METHODS, default=default)
    p.add_argument("--wsize", type=int, default=100, help="window size in original timestamps")
    p.add_argument("--ff", type=float, default=0.99, help="fading factor alpha")
    p.add_argument("--delta", type=float, default=0.2, help="weight of the current resolution")
    p.add_argument("--window-axis", choices=WINDOW_AXES, default="original")
    p.add_argument("--anchor", choices=ANCHOR_ROUNDINGS, default="ceil")
    p.add_argument("--literal-fallback", action="store_true",
                   help="only fall back to the mean resolution when the update rule floors to 0")
    p.add_argument("--tau", type=int, default=1, help="uniform resolution")
    p.add_argument("--slices", type=int, default=None, help="BVC slice count (default: span - 1)")
    p.add_argument("--bvc-granularity", choices=("event", "timestamp"), default="event")


def _add_layout(p: argparse.ArgumentParser) -> None:
    p.add_argument("--layout", choices=("msv", "tam"), default="tam")
    p.add_argument("--order", choices=ORDERS, default="appearance")
    p.add_argument("--order-file")
    p.add_argument("--groups-file", help="node/group file overriding groups found in the input")
    p.add_argument("--only-groups", help="comma separated group labels to draw")
    p.add_argument("--elide-gaps", type=int, default=None, metavar="K")
    p.add_argument("--cell", type=int, default=4)
    p.add_argument("--palette", default=",".join(("#1f5fa8", "#d95f02")))
    p.add_argument("--intensity", action="store_true", help="TAM opacity follows log event count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronoslice", description="Online nonuniform timeslicing of edge streams.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slice", help="slice a stream and export the schedule")
    _add_input(p)
    _add_method(p)
    p.add_argument("--schedule", required=True, help="JSON-lines schedule output")
    p.add_argument("--summary", help="summary JSON output")
    p.add_argument("--events", help="remapped events CSV output")

    p = sub.add_parser("render", help="draw an MSV or TAM layout to SVG")
    _add_input(p)
    _add_method(p)
    _add_layout(p)
    p.add_argument("--svg", required=True)

    p = sub.add_parser("stats", help="spread and ECDF for one strategy")
    _add_input(p)
    _add_method(p)
    p.add_argument("--json", required=True, dest="json_out")
    p.add_argument("--series", help="plot-ready CSV of spread and ECDF")

    p = sub.add_parser("compare", help="ours vs uniform, BVC and resolution 1")
    _add_input(p)
    _add_method(p)
    p.add_argument("--uniform", type=int, action="append", default=[], metavar="TAU",
                   help="uniform resolution to include (repeatable)")
    p.add_argument("--json", dest="json_out")
    p.add_argument("--csv", dest="csv_out")

    p = sub.add_parser("synth", help="write a synthetic piecewise-rate stream")
    p.add_argument("--segments", required=True, help="span:rate:pool[,span:rate:pool...]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=FORMATS, default="csv")
    return parser


def validate(args: argparse.Namespace) -> List[str]:
    """Every violated parameter constraint, not just the first."""
    errors = []
    if getattr(args, "time_divisor", 1) < 1:
        errors.append("--time-divisor must be >= 1")
    method = getattr(args, "method", None)
    if method is not None:
        if args.wsize < 1:
            errors.append("--wsize must be >= 1")
        if not 0 < args.ff <= 1:
            errors.append("--ff must lie in (0, 1]")
        if not 0 <= args.delta <= 1:
            errors.append("--delta must lie in [0, 1]")
        if args.tau < 1:
            errors.append("--tau must be >= 1")
        if args.slices is not None and args.slices < 1:
            errors.append("--slices must be >= 1")
    for tau in getattr(args, "uniform", []):
        if tau < 1:
            errors.append(f"--uniform {tau}: must be >= 1")
    if getattr(args, "layout", None):
        if args.cell < 1:
            errors.append("--cell must be >= 1")
        if args.elide_gaps is not None and args.elide_gaps < 2:
            errors.append("--elide-gaps must be >= 2")
        if args.order == "external-file" and not args.order_file:
            errors.append("--order external-file needs --order-file")
        if not [c for c in args.palette.split(",") if c]:
            errors.append("--palette must list at least one colour")
    return errors


def _load(args):
    config = IngestConfig(format=args.format, directed=args.directed, strict_order=not args.sort_buffer,
                          sort_buffer=args.sort_buffer, time_divisor=args.time_divisor, rebase=not args.no_rebase)
    return read_network(args.input, config)


def _slicer_config(args) -> SlicerConfig:
    return SlicerConfig(w_size=args.wsize, alpha=args.ff, delta=args.delta, window_axis=args.window_axis,
                        empty_window_fallback=not args.literal_fallback, anchor_rounding=args.anchor,
                        directed=args.directed)


def _run_method(args, events, method: Optional[str] = None, tau: Optional[int] = None):
    method = method or args.method
    if method == "nonuniform":
        return slice_stream(events, _slicer_config(args))
    if method == "uniform":
        return uniform_slices(events, tau or args.tau, directed=args.directed)
    if method == "bvc":
        return bvc_slices(events, args.slices, args.bvc_granularity, directed=args.directed)
    return uniform_slices(events, 1, directed=args.directed)


def _method_label(args) -> str:
    if args.method == "nonuniform":
        return f"ours(w={args.wsize},ff={args.ff})"
    if args.method == "uniform":
        return f"res-{args.tau}"
    return "bvc" if args.method == "bvc" else "res-1"


def cmd_slice(args) -> None:
    net = _load(args)
    result = _run_method(args, net.events)
    summary = export_schedule(result.records, args.schedule, args.summary,
                              extra={"events_in": result.events_in, "merged": result.merged,
                                     "events_drawn": len(result.events)})
    if args.events:
        with open(args.events, "w", encoding="utf-8") as fh:
            fh.write("source,target,t_display,slice_index\n")
            for e in result.events:
                fh.write(f"{e.source},{e.target},{e.t_display},{e.slice_index}\n")
    print(f"{len(result.records)} slices, {summary['display_total']} display timestamps")


def cmd_render(args) -> None:
    net = _load(args)
    result = _run_method(args, net.events)
    groups = NodeGroups.read(args.groups_file) if args.groups_file else (net.groups or None)
    spec = LayoutSpec(kind=args.layout, order=args.order, groups=groups,
                      group_filter=args.only_groups.split(",") if args.only_groups else None,
                      order_file=args.order_file, gap_elision_threshold=args.elide_gaps,
                      slice_palette=[c for c in args.palette.split(",") if c], cell=args.cell,
                      intensity=args.intensity, title=_method_label(args))
    span = None
    if result.records:
        span = (result.records[0].display_span[0], result.records[-1].display_span[1])
    canvas = render(result.events, spec, span)
    canvas.save(args.svg)
    print(f"{canvas.marks} marks, {canvas.width}x{canvas.height} px")


def cmd_stats(args) -> None:
    net = _load(args)
    result = _run_method(args, net.events)
    series = spread_of(result)
    rep = ecdf(series)
    doc = strategy_row(_method_label(args), result)
    doc["ecdf"] = rep.as_dict()
    write_json(doc, args.json_out)
    if args.series:
        n = len(series)
        write_series({
            "t_display": list(range(series.start, series.start + n)),
            "count": series.counts.tolist(),
            "norm": series.normalized.tolist(),
            "ecdf_count": rep.sorted_counts.tolist(),
            "ecdf_fraction": rep.cumulative.tolist(),
        }, args.series)
    print(f"empty fraction {rep.empty_fraction:.3f}, q3 {rep.q3:g} of max {rep.max_count}")


def cmd_compare(args) -> None:
    net = _load(args)
    results = {
        f"ours(w={args.wsize},ff={args.ff})": _run_method(args, net.events, "nonuniform"),
        "res-1": _run_method(args, net.events, "uniform", 1),
    }
    for tau in args.uniform:
        results[f"res-{tau}"] = _run_method(args, net.events, "uniform", tau)
    results["bvc"] = _run_method(args, net.events, "bvc")
    report = compare_report(results)
    report["network"] = {"nodes": net.meta.node_count, "edges": net.meta.edge_count,
                         "timestamps": net.meta.timestamp_count, "self_edges_dropped": net.self_edges}
    if args.json_out:
        write_json(report, args.json_out)
    if args.csv_out:
        write_rows_csv(report["strategies"], args.csv_out)
    print(render_table(report))


def _parse_segments(text: str):
    segments = []
    for chunk in text.split(","):
        try:
            span, rate, pool = chunk.split(":")
            segments.append((int(span), float(rate), int(pool)))
        except ValueError:
            raise UsageError(f"bad segment {chunk!r}, expected span:rate:pool") from None
    return segments


def cmd_synth(args) -> None:
    events = synth_stream(_parse_segments(args.segments), args.seed)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        write_stream(events, fh, args.format)
    print(f"{len(events)} events")


COMMANDS = {"slice": cmd_slice, "render": cmd_render, "stats": cmd_stats, "compare": cmd_compare, "synth": cmd_synth}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    errors = validate(args)
    if errors:
        print("chronoslice: " + "; ".join(errors), file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"chronoslice: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OutOfOrderTimestamp, ValueError) as exc:
        print(f"chronoslice: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ScheduleIOError, OSError) as exc:
        print(f"chronoslice: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
