"""MSV and TAM timeline layouts rendered to SVG.

Rows are nodes, columns are display timestamps. MSV draws every (merged)
event as a vertical segment between its endpoint rows plus a dot on each end;
TAM drops the segments and draws one square per active node and column. Marks
take their colour from the slice that produced them, so a colour change marks a
resolution change.
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape, quoteattr

from .core import NodeId, RemappedEvent, TemporalEdge
from .ingest import NodeGroups

DEFAULT_PALETTE = ("#1f5fa8", "#d95f02")
ORDERS = ("appearance", "degree", "lexicographic", "external-file")


class UnknownNode(UserWarning):
    """An external order file did not list a node that occurs in the data."""


@dataclass
class LayoutSpec:
    kind: str = "tam"
    order: str = "appearance"
    groups: Optional[NodeGroups] = None
    group_filter: Optional[Sequence[str]] = None
    order_file: Optional[Union[str, Path]] = None
    gap_elision_threshold: Optional[int] = None
    slice_palette: Sequence[str] = DEFAULT_PALETTE
    cell: int = 4
    margin: int = 20
    label_width: int = 48
    intensity: bool = False
    title: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in ("msv", "tam"):
            raise ValueError(f"kind must be 'msv' or 'tam', got {self.kind!r}")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}, got {self.order!r}")
        if not self.slice_palette:
            raise ValueError("palette must not be empty")
        if self.gap_elision_threshold is not None and self.gap_elision_threshold < 2:
            raise ValueError("gap_elision_threshold must be >= 2")
        if self.cell < 1 or self.margin < 0 or self.label_width < 0:
            raise ValueError("cell must be positive and margins non-negative")
        if self.order == "external-file" and self.order_file is None:
            raise ValueError("order 'external-file' needs order_file")


@dataclass
class RowAssignment:
    rows: Dict[NodeId, int]
    bands: List[Tuple[str, int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


def read_order_file(path: Union[str, Path]) -> List[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip() and not line.startswith("#")]


def _base_order(events: Sequence, order: str, order_file=None) -> List[NodeId]:
    appearance: Dict[NodeId, None] = {}
    neighbours: Dict[NodeId, set] = defaultdict(set)
    for e in events:
        appearance.setdefault(e.source)
        appearance.setdefault(e.target)
        if order == "degree":
            neighbours[e.source].add(e.target)
            neighbours[e.target].add(e.source)
    nodes = list(appearance)
    if order == "appearance":
        return nodes
    if order == "lexicographic":
        return sorted(nodes, key=str)
    if order == "degree":
        return sorted(nodes, key=lambda n: (-len(neighbours[n]), str(n)))
    listed = read_order_file(order_file) if isinstance(order_file, (str, Path)) else list(order_file)
    present = set(nodes)
    ordered = [n for n in listed if n in present]
    missing = [n for n in nodes if n not in set(listed)]
    if missing:
        warnings.warn(f"{len(missing)} node(s) missing from order file, appended at the end: "
                      f"{', '.join(map(str, missing[:5]))}{' ...' if len(missing) > 5 else ''}", UnknownNode)
    return ordered + missing


def order_nodes(
    events: Iterable[Union[TemporalEdge, RemappedEvent]],
    order: str = "appearance",
    groups: Optional[NodeGroups] = None,
    order_file=None,
) -> RowAssignment:
    """Assign each node a row.

    With ``groups`` the nodes of one group occupy a contiguous band (bands in
    group-name order, ungrouped nodes last), and the chosen order applies inside
    every band. Degree ties fall back to the node id.
    """
    events = list(events)
    base = _base_order(events, order, order_file)
    if not groups:
        return RowAssignment({n: i for i, n in enumerate(base)}, [])
    by_group: Dict[str, List[NodeId]] = defaultdict(list)
    for n in base:
        by_group[groups.get(n, "")].append(n)
    names = sorted(g for g in by_group if g) + ([""] if "" in by_group else [])
    rows: Dict[NodeId, int] = {}
    bands = []
    for g in names:
        first = len(rows)
        for n in by_group[g]:
            rows[n] = len(rows)
        bands.append((g or "other", first, len(rows) - 1))
    return RowAssignment(rows, bands)


def column_map(display_ts: Iterable[int], start: int, stop: int, threshold: Optional[int]) -> Tuple[Dict[int, int], List[Tuple[int, int, int]], int]:
    """Map display timestamps in ``[start, stop)`` to drawing columns.

    Runs of at least ``threshold`` empty timestamps collapse into one break
    column. Returns the mapping for occupied and kept timestamps, the list of
    breaks as ``(column, first_ts, run_length)`` and the column count.
    """
    occupied = set(display_ts)
    cols: Dict[int, int] = {}
    breaks = []
    col = 0
    t = start
    while t < stop:
        if threshold and t not in occupied:
            run = t
            while run < stop and run not in occupied:
                run += 1
            if run - t >= threshold:
                breaks.append((col, t, run - t))
                col += 1
                t = run
                continue
        cols[t] = col
        col += 1
        t += 1
    return cols, breaks, col


class Canvas:
    """Minimal SVG document with deterministic serialisation."""

    def __init__(self, width: int, height: int) -> None:
        self.width = width
        self.height = height
        self.elements: List[str] = []
        self.marks = 0

    @staticmethod
    def _num(v: float) -> str:
        return str(int(v)) if float(v).is_integer() else f"{v:.2f}"

    def _attrs(self, extra: dict) -> str:
        return "".join(f" {k.replace('_', '-')}={quoteattr(str(v))}" for k, v in extra.items() if v is not None)

    def rect(self, x, y, w, h, fill, **extra) -> None:
        n = self._num
        self.elements.append(f'<rect x="{n(x)}" y="{n(y)}" width="{n(w)}" height="{n(h)}" fill="{fill}"{self._attrs(extra)}/>')

    def line(self, x1, y1, x2, y2, stroke, **extra) -> None:
        n = self._num
        self.elements.append(f'<line x1="{n(x1)}" y1="{n(y1)}" x2="{n(x2)}" y2="{n(y2)}" stroke="{stroke}"{self._attrs(extra)}/>')

    def circle(self, cx, cy, r, fill, **extra) -> None:
        n = self._num
        self.elements.append(f'<circle cx="{n(cx)}" cy="{n(cy)}" r="{n(r)}" fill="{fill}"{self._attrs(extra)}/>')

    def text(self, x, y, s, size=10, anchor="start", **extra) -> None:
        n = self._num
        self.elements.append(f'<text x="{n(x)}" y="{n(y)}" font-size="{size}" font-family="sans-serif" '
                             f'text-anchor="{anchor}"{self._attrs(extra)}>{escape(str(s))}</text>')

    def to_svg(self) -> str:
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n')
        return head + "\n".join(self.elements) + "\n</svg>\n"

    def save(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_svg())


def _prepare(events, spec: LayoutSpec, display_span: Optional[Tuple[int, int]]):
    events = list(events)
    if spec.groups and spec.group_filter:
        keep = set(spec.group_filter)
        events = [e for e in events if spec.groups.get(e.source) in keep and spec.groups.get(e.target) in keep]
    rows = order_nodes(events, spec.order, spec.groups, spec.order_file)
    if display_span is None:
        lo = min((e.t_display for e in events), default=0)
        hi = max((e.t_display for e in events), default=-1)
    else:
        lo, hi = display_span
    cols, breaks, ncols = column_map((e.t_display for e in events), lo, hi + 1, spec.gap_elision_threshold)
    top = spec.margin + (14 if spec.title else 0)
    left = spec.margin + (spec.label_width if spec.groups else 0)
    width = left + ncols * spec.cell + spec.margin
    height = top + max(len(rows), 1) * spec.cell + spec.margin + 12
    canvas = Canvas(width, height)
    canvas.rect(0, 0, width, height, "#ffffff")
    if spec.title:
        canvas.text(spec.margin, spec.margin + 4, spec.title, size=12)
    return events, rows, cols, breaks, ncols, canvas, left, top


def _frame(canvas: Canvas, spec: LayoutSpec, rows: RowAssignment, breaks, ncols, left, top, lo) -> None:
    c = spec.cell
    bottom = top + len(rows) * c
    for label, first, last in rows.bands:
        y0 = top + first * c
        if first > 0:
            canvas.line(left, y0, left + ncols * c, y0, "#999999", stroke_width="0.5")
        canvas.text(left - 4, y0 + (last - first + 1) * c / 2 + 3, label, size=9, anchor="end")
    for col, t0, run in breaks:
        x = left + col * c
        canvas.rect(x, top, c, max(bottom - top, c), "#eeeeee", data_break=f"{t0}+{run}")
        canvas.text(x + c / 2, bottom + 10, f"//{run}", size=8, anchor="middle")
    canvas.line(left, bottom + 1, left + ncols * c, bottom + 1, "#333333", stroke_width="0.5")
    canvas.text(left, bottom + 10, str(lo), size=8)


def render_msv(
    events: Iterable[RemappedEvent],
    spec: Optional[LayoutSpec] = None,
    display_span: Optional[Tuple[int, int]] = None,
) -> Canvas:
    """Massive Sequence View: one vertical segment per merged event."""
    spec = spec or LayoutSpec(kind="msv")
    events, rows, cols, breaks, ncols, canvas, left, top = _prepare(events, spec, display_span)
    lo = display_span[0] if display_span else min((e.t_display for e in events), default=0)
    _frame(canvas, spec, rows, breaks, ncols, left, top, lo)
    c = spec.cell
    r = max(c / 3, 0.5)
    palette = spec.slice_palette
    for e in events:
        x = left + cols[e.t_display] * c + c / 2
        y1 = top + rows.rows[e.source] * c + c / 2
        y2 = top + rows.rows[e.target] * c + c / 2
        colour = palette[e.slice_index % len(palette)]
        canvas.line(x, min(y1, y2), x, max(y1, y2), colour, stroke_width="0.6", stroke_opacity="0.6",
                    data_slice=e.slice_index)
        canvas.circle(x, y1, r, colour)
        canvas.circle(x, y2, r, colour)
        canvas.marks += 1
    return canvas


def render_tam(
    events: Iterable[RemappedEvent],
    spec: Optional[LayoutSpec] = None,
    display_span: Optional[Tuple[int, int]] = None,
) -> Canvas:
    """Temporal Activity Map: one square per active (node, display timestamp)."""
    spec = spec or LayoutSpec(kind="tam")
    events, rows, cols, breaks, ncols, canvas, left, top = _prepare(events, spec, display_span)
    lo = display_span[0] if display_span else min((e.t_display for e in events), default=0)
    _frame(canvas, spec, rows, breaks, ncols, left, top, lo)
    cells: Dict[Tuple[NodeId, int], List[int]] = {}
    for e in events:
        for node in (e.source, e.target):
            entry = cells.setdefault((node, e.t_display), [e.slice_index, 0])
            entry[1] += 1
    peak = max((v[1] for v in cells.values()), default=1)
    c = spec.cell
    palette = spec.slice_palette
    for (node, t), (slice_index, count) in cells.items():
        extra = {"data_slice": slice_index}
        if spec.intensity:
            extra["fill_opacity"] = f"{0.25 + 0.75 * math.log1p(count) / math.log1p(peak):.3f}"
        canvas.rect(left + cols[t] * c, top + rows.rows[node] * c, c, c, palette[slice_index % len(palette)], **extra)
        canvas.marks += 1
    return canvas


def render(events: Iterable[RemappedEvent], spec: LayoutSpec, display_span: Optional[Tuple[int, int]] = None) -> Canvas:
    if spec.kind == "msv":
        return render_msv(events, spec, display_span)
    return render_tam(events, spec, display_span)
