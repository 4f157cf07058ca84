"""Reference slicing strategies: uniform bins and balanced visual complexity.

Both produce the same :class:`~chronoslice.core.RemappedEvent` /
:class:`~chronoslice.slicer.SliceRecord` pair as the online slicer, so layouts,
stats and schedule export treat every strategy alike. The ``t_display`` of a
baseline event is its column index, counted from 0.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .core import RemappedEvent, TemporalEdge, pair_key
from .slicer import SliceRecord, SliceResult


class DegenerateHistogram(ValueError):
    """An equal-mass split was requested over a histogram with no events."""


@dataclass(frozen=True)
class UniformConfig:
    tau: int = 1
    t_start: int = 0

    def __post_init__(self) -> None:
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")


def uniform_remap(t_orig: int, config: UniformConfig) -> int:
    """Snap ``t_orig`` down to the start of its ``tau``-wide bin.

    The result stays on the original axis.

    >>> uniform_remap(5, UniformConfig(tau=2))
    4
    """
    return (t_orig - config.t_start) // config.tau * config.tau + config.t_start


def uniform_column(t_orig: int, config: UniformConfig) -> int:
    return (t_orig - config.t_start) // config.tau


@dataclass
class EventHistogram:
    """Events per original timestamp from ``first_t`` on."""

    first_t: int
    bins: np.ndarray

    @property
    def total(self) -> int:
        return int(self.bins.sum())

    @classmethod
    def from_events(cls, events: Iterable[TemporalEdge]) -> "EventHistogram":
        ts = np.fromiter((e.t_orig for e in events), dtype=np.int64)
        if ts.size == 0:
            return cls(0, np.zeros(0, dtype=np.int64))
        first = int(ts.min())
        return cls(first, np.bincount(ts - first))


def bvc_boundaries(hist: EventHistogram, slice_count: int) -> List[int]:
    """Start timestamps of ``slice_count`` contiguous slices of near-equal mass.

    Slice ``k`` starts right after the first timestamp whose cumulative count
    reaches ``k * total / slice_count``. A single timestamp is never split, so
    bursts create zero-width slices (repeated boundaries). For an empty
    histogram with more than one slice, :class:`DegenerateHistogram` is raised;
    :func:`equal_width_boundaries` is the usual fallback.
    """
    if slice_count < 1:
        raise ValueError("slice_count must be >= 1")
    total = hist.total
    if total == 0 and slice_count > 1:
        raise DegenerateHistogram("cannot equalise an empty histogram")
    cum = np.cumsum(hist.bins)
    starts = [hist.first_t]
    for k in range(1, slice_count):
        # exact comparison: cum * K >= k * total
        idx = int(np.searchsorted(cum * slice_count, k * total, side="left"))
        starts.append(hist.first_t + idx + 1)
    return starts


def equal_width_boundaries(first_t: int, span: int, slice_count: int) -> List[int]:
    return [first_t + (k * span) // slice_count for k in range(slice_count)]


def bvc_remap(t_orig: int, boundaries: Sequence[int]) -> int:
    """Index of the slice holding ``t_orig``; spans are closed on the left.

    A timestamp equal to a repeated boundary lands in the last slice that
    starts there.
    """
    return max(0, bisect.bisect_right(boundaries, t_orig) - 1)


def _merge(events, columns, slice_of, directed):
    out: List[RemappedEvent] = []
    seen: set = set()
    current = None
    merged = 0
    for e, col in zip(events, columns):
        if col != current:
            seen.clear()
            current = col
        key = pair_key(e.source, e.target, directed)
        if key in seen:
            merged += 1
            continue
        seen.add(key)
        out.append(RemappedEvent(e.source, e.target, col, slice_of(col)))
    return out, merged


def uniform_slices(
    events: Sequence[TemporalEdge],
    tau: int,
    t_start: Optional[int] = None,
    t_end: Optional[int] = None,
    directed: bool = False,
) -> SliceResult:
    """Constant resolution over the whole span, recorded as a single slice."""
    if not events:
        return SliceResult([], [], 0, 0)
    t_start = events[0].t_orig if t_start is None else t_start
    t_end = events[-1].t_orig if t_end is None else t_end
    cfg = UniformConfig(tau, t_start)
    columns = [uniform_column(e.t_orig, cfg) for e in events]
    out, merged = _merge(events, columns, lambda c: 0, directed)
    last_col = uniform_column(t_end, cfg)
    record = SliceRecord(0, t_start, t_end + 1, tau, 0, (0, last_col))
    return SliceResult(out, [record], len(events), merged)


def bvc_slices(
    events: Sequence[TemporalEdge],
    slice_count: Optional[int] = None,
    granularity: str = "event",
    directed: bool = False,
) -> SliceResult:
    """Offline equal-mass slicing.

    ``slice_count`` defaults to the original timestamp span minus one. With
    ``granularity="timestamp"`` slices follow :func:`bvc_boundaries` exactly.
    With ``"event"`` (default) the ``j``-th event of the stream goes to slice
    ``floor(j * K / M)``, so the events of a burst timestamp are spread over
    several consecutive slices and every slice carries ``M / K`` events up to
    rounding.
    """
    if not events:
        return SliceResult([], [], 0, 0)
    hist = EventHistogram.from_events(events)
    span = len(hist.bins)
    if slice_count is None:
        slice_count = max(1, span - 1)
    total = len(events)
    if granularity == "timestamp":
        try:
            starts = bvc_boundaries(hist, slice_count)
        except DegenerateHistogram:
            starts = equal_width_boundaries(hist.first_t, span, slice_count)
        columns = [bvc_remap(e.t_orig, starts) for e in events]
    elif granularity == "event":
        columns = [j * slice_count // total for j in range(total)]
    else:
        raise ValueError(f"unknown granularity {granularity!r}")
    out, merged = _merge(events, columns, lambda c: c, directed)

    first_t = [None] * slice_count
    last_t = [None] * slice_count
    for e, c in zip(events, columns):
        if first_t[c] is None:
            first_t[c] = e.t_orig
        last_t[c] = e.t_orig
    records = []
    prev_end = hist.first_t
    for k in range(slice_count):
        if first_t[k] is None:
            t_ini, t_end = prev_end, prev_end
        else:
            t_ini, t_end = first_t[k], last_t[k] + 1
        prev_end = t_end
        records.append(SliceRecord(k, t_ini, t_end, max(1, t_end - t_ini), k, (k, k)))
    return SliceResult(out, records, total, merged)
