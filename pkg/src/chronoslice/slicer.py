"""Online nonuniform timeslicing.

The stream is cut into consecutive windows of ``w_size`` original timestamps.
While a window is open its events are remapped with the resolution chosen at
the end of the previous window; when the window closes, a fading sum over its
per-timestamp event counts picks the resolution for the next one. The first
window always runs at resolution 1 (cold start).

Only O(w_size) counters, a running resolution mean, the last accepted event's
coordinates and the set of pairs already drawn in the current display
timestamp are kept. Events can be dropped by the caller as soon as
:meth:`StreamingSlicer.process_event` returns.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .core import OutOfOrderTimestamp, RemappedEvent, TemporalEdge, pair_key

WINDOW_AXES = ("original", "display")
ANCHOR_ROUNDINGS = ("ceil", "floor")


class ScheduleIOError(OSError):
    """Writing or reading a schedule document failed."""


@dataclass(frozen=True)
class SlicerConfig:
    """Parameters of the online slicer.

    ``window_axis`` selects whether a window spans ``w_size`` original
    timestamps (default) or ``w_size`` display timestamps at the current
    resolution. ``empty_window_fallback`` sends windows without any event
    straight to the mean-of-history resolution instead of evaluating the
    update rule with a zero fading sum. ``anchor_rounding`` controls how the
    distance between the previous window's last event and the new window start
    is converted to display timestamps; ``"ceil"`` guarantees each new slice
    starts on a fresh display timestamp.
    """

    w_size: int = 100
    alpha: float = 0.99
    delta: float = 0.2
    window_axis: str = "original"
    empty_window_fallback: bool = True
    anchor_rounding: str = "ceil"
    directed: bool = False

    def __post_init__(self) -> None:
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))

    def violations(self) -> List[str]:
        errors = []
        if not isinstance(self.w_size, int) or self.w_size < 1:
            errors.append(f"w_size must be a positive integer, got {self.w_size!r}")
        if not 0 < self.alpha <= 1:
            errors.append(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if not 0 <= self.delta <= 1:
            errors.append(f"delta must lie in [0, 1], got {self.delta!r}")
        if self.window_axis not in WINDOW_AXES:
            errors.append(f"window_axis must be one of {WINDOW_AXES}, got {self.window_axis!r}")
        if self.anchor_rounding not in ANCHOR_ROUNDINGS:
            errors.append(f"anchor_rounding must be one of {ANCHOR_ROUNDINGS}, got {self.anchor_rounding!r}")
        return errors


@dataclass(frozen=True)
class SliceRecord:
    """One committed window.

    ``t_end_orig`` is exclusive. ``display_span`` holds the first and last
    display timestamp owned by this slice; a slice that owns no column (possible
    inside long inactive stretches) has ``last == first - 1``.
    """

    index: int
    t_ini: int
    t_end_orig: int
    sigma: int
    t_ref: int
    display_span: Tuple[int, int]

    @property
    def display_width(self) -> int:
        return self.display_span[1] - self.display_span[0] + 1

    def to_json(self) -> str:
        d = asdict(self)
        d["display_span"] = list(self.display_span)
        return json.dumps(d, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "SliceRecord":
        return cls(
            index=int(d["index"]),
            t_ini=int(d["t_ini"]),
            t_end_orig=int(d["t_end_orig"]),
            sigma=int(d["sigma"]),
            t_ref=int(d["t_ref"]),
            display_span=(int(d["display_span"][0]), int(d["display_span"][1])),
        )


class ResolutionHistory:
    """Append-only record of adopted resolutions, stored as a running sum."""

    __slots__ = ("total", "count")

    def __init__(self, initial: Iterable[int] = ()) -> None:
        self.total = 0
        self.count = 0
        for sigma in initial:
            self.append(sigma)

    def append(self, sigma: int) -> None:
        self.total += sigma
        self.count += 1

    def __len__(self) -> int:
        return self.count

    def floor_mean(self) -> int:
        return self.total // self.count


@dataclass
class WindowState:
    """Mutable state of the currently open window."""

    t_ini: int
    counts: List[int]
    active_count: int = 0
    sigma_current: int = 1
    resolution_history: ResolutionHistory = field(default_factory=lambda: ResolutionHistory([1]))


def fading_sum(counts: Sequence[int], active_count: int, alpha: float) -> float:
    """Exponentially faded, activity-normalised event mass of a window.

    The last position carries weight 1, the one before it ``alpha`` and so on.
    Every count is divided by the number of positions holding at least one
    event. An all-zero window returns 0.

    >>> fading_sum([4, 2], 2, 0.5)
    2.0
    """
    if active_count == 0:
        return 0.0
    fs = 0.0
    for x in counts:
        fs = x / active_count + alpha * fs
    return fs


def next_resolution(
    sigma_current: int,
    delta: float,
    fading: float,
    history: Union[Sequence[int], ResolutionHistory],
    force_fallback: bool = False,
) -> int:
    """Blend the current resolution with the window's fading sum.

    When the blend floors to zero (or ``force_fallback`` is set) the floored
    mean of all past resolutions is used, never less than 1.
    """
    sigma = math.floor(delta * sigma_current + (1 - delta) * fading)
    if sigma == 0 or force_fallback:
        if isinstance(history, ResolutionHistory):
            mean = history.floor_mean()
        else:
            mean = sum(history) // len(history)
        sigma = max(1, mean)
    return sigma


def compute_t_ref(
    t_ini: int,
    last_event_t_orig: Optional[int],
    last_event_t_display: Optional[int],
    sigma_prev: int,
    t_start: int = 0,
    rounding: str = "floor",
) -> int:
    """Display anchor of a window starting at ``t_ini``.

    The gap between the last remapped event and the window start is measured
    in units of that event's resolution. Without any previous event the anchor
    is ``t_start``.
    """
    if last_event_t_orig is None:
        return t_start
    steps = t_ini - last_event_t_orig
    if rounding == "ceil":
        offset = -((-steps) // sigma_prev)
    else:
        offset = steps // sigma_prev
    return offset + last_event_t_display


def remap_timestamp(t_orig: int, t_ini: int, sigma: int, t_ref: int) -> int:
    """Display timestamp of an event inside the window starting at ``t_ini``."""
    return (t_orig - t_ini) // sigma + t_ref


class StreamingSlicer:
    """Single-pass slicer over a time-ordered :class:`TemporalEdge` stream.

    Feed events with :meth:`process_event` and call :meth:`finish` once the
    stream ends. Committed windows come back as :class:`SliceRecord` objects in
    order.
    """

    def __init__(self, config: Optional[SlicerConfig] = None) -> None:
        self.config = config or SlicerConfig()
        self.state: Optional[WindowState] = None
        self.t_start: Optional[int] = None
        self.t_ref = 0
        self.slice_index = 0
        self.window_len = self.config.w_size
        # coordinates of the last accepted event: (t_orig, t_display, sigma)
        self._last: Optional[Tuple[int, int, int]] = None
        self._seen: set = set()
        self._seen_t: Optional[int] = None
        self._finished = False
        self.events_in = 0
        self.events_out = 0
        self.merged = 0
        self.peak_dedup = 0

    def _open(self, t: int) -> None:
        self.t_start = t
        self.t_ref = t
        self.state = WindowState(t_ini=t, counts=[0] * self.config.w_size)
        self.window_len = self.config.w_size

    def _position(self, t: int) -> int:
        st = self.state
        if self.config.window_axis == "display":
            return (t - st.t_ini) // st.sigma_current
        return t - st.t_ini

    def _anchor(self, t: int) -> int:
        last = self._last
        return compute_t_ref(t, last[0], last[1], last[2], self.t_start, self.config.anchor_rounding)

    def _commit(self) -> SliceRecord:
        cfg, st = self.config, self.state
        fs = fading_sum(st.counts, st.active_count, cfg.alpha)
        sigma_next = next_resolution(
            st.sigma_current,
            cfg.delta,
            fs,
            st.resolution_history,
            force_fallback=cfg.empty_window_fallback and st.active_count == 0,
        )
        t_end = st.t_ini + self.window_len
        t_ref_next = self._anchor(t_end)
        record = SliceRecord(
            index=self.slice_index,
            t_ini=st.t_ini,
            t_end_orig=t_end,
            sigma=st.sigma_current,
            t_ref=self.t_ref,
            display_span=(self.t_ref, max(self.t_ref, t_ref_next) - 1),
        )
        st.resolution_history.append(sigma_next)
        st.sigma_current = sigma_next
        st.t_ini = t_end
        st.counts = [0] * cfg.w_size
        st.active_count = 0
        self.window_len = cfg.w_size * sigma_next if cfg.window_axis == "display" else cfg.w_size
        self.t_ref = t_ref_next
        self.slice_index += 1
        return record

    def process_event(self, event: TemporalEdge) -> Tuple[Optional[RemappedEvent], List[SliceRecord]]:
        """Remap one event, committing every window that closed before it.

        Returns ``(None, records)`` when the event duplicates a pair already
        drawn at the same display timestamp.
        """
        if self._finished:
            raise RuntimeError("slicer already finished")
        t = event.t_orig
        if self.state is None:
            self._open(t)
        elif t < self._last[0]:
            raise OutOfOrderTimestamp(t, self._last[0])
        records = []
        st = self.state
        while t >= st.t_ini + self.window_len:
            records.append(self._commit())
        pos = self._position(t)
        if st.counts[pos] == 0:
            st.active_count += 1
        st.counts[pos] += 1
        self.events_in += 1

        t_display = remap_timestamp(t, st.t_ini, st.sigma_current, self.t_ref)
        self._last = (t, t_display, st.sigma_current)
        if t_display != self._seen_t:
            self._seen.clear()
            self._seen_t = t_display
        key = pair_key(event.source, event.target, self.config.directed)
        if key in self._seen:
            self.merged += 1
            return None, records
        self._seen.add(key)
        self.peak_dedup = max(self.peak_dedup, len(self._seen))
        self.events_out += 1
        return RemappedEvent(event.source, event.target, t_display, self.slice_index), records

    def finish(self) -> List[SliceRecord]:
        """Close the final (possibly shorter) window."""
        if self._finished:
            return []
        self._finished = True
        self._seen.clear()
        if self.state is None:
            return []
        st = self.state
        t_end = self._last[0] + 1
        record = SliceRecord(
            index=self.slice_index,
            t_ini=st.t_ini,
            t_end_orig=t_end,
            sigma=st.sigma_current,
            t_ref=self.t_ref,
            display_span=(self.t_ref, self._last[1]),
        )
        return [record]

    def retained_size(self) -> dict:
        """Sizes of every container the slicer holds (for memory assertions)."""
        st = self.state
        return {
            "counts": len(st.counts) if st else 0,
            "history_entries": 2,
            "dedup": len(self._seen),
            "peak_dedup": self.peak_dedup,
        }


@dataclass
class SliceResult:
    """Everything a full slicing run produced."""

    events: List[RemappedEvent]
    records: List[SliceRecord]
    events_in: int = 0
    merged: int = 0


def iter_slices(
    events: Iterable[TemporalEdge], config: Optional[SlicerConfig] = None
) -> Iterator[Union[RemappedEvent, SliceRecord]]:
    """Stream remapped events and slice records interleaved in emission order."""
    slicer = StreamingSlicer(config)
    for event in events:
        remapped, records = slicer.process_event(event)
        yield from records
        if remapped is not None:
            yield remapped
    yield from slicer.finish()


def slice_stream(events: Iterable[TemporalEdge], config: Optional[SlicerConfig] = None) -> SliceResult:
    """Run the slicer over a whole stream and collect its output."""
    slicer = StreamingSlicer(config)
    out: List[RemappedEvent] = []
    records: List[SliceRecord] = []
    for event in events:
        remapped, committed = slicer.process_event(event)
        records.extend(committed)
        if remapped is not None:
            out.append(remapped)
    records.extend(slicer.finish())
    return SliceResult(out, records, slicer.events_in, slicer.merged)


def schedule_summary(records: Sequence[SliceRecord]) -> dict:
    """Display total and resolution envelope of a schedule.

    The envelope skips the cold-start window whenever later windows exist.
    """
    if not records:
        return {
            "slices": 0,
            "display_total": 0,
            "cold_start_width": 0,
            "sigma_min": None,
            "sigma_mean": None,
            "sigma_max": None,
        }
    adaptive = records[1:] or records
    sigmas = [r.sigma for r in adaptive]
    return {
        "slices": len(records),
        "display_total": records[-1].display_span[1] - records[0].display_span[0] + 1,
        "cold_start_width": records[0].display_width,
        "sigma_min": min(sigmas),
        "sigma_mean": sum(sigmas) / len(sigmas),
        "sigma_max": max(sigmas),
    }


def export_schedule(
    records: Sequence[SliceRecord],
    path: Union[str, Path, IO[str]],
    summary_path: Union[str, Path, None] = None,
    extra: Optional[dict] = None,
) -> dict:
    """Write records as JSON lines and return (and optionally write) the summary."""
    summary = schedule_summary(records)
    if extra:
        summary.update(extra)
    try:
        if hasattr(path, "write"):
            for r in records:
                path.write(r.to_json() + "\n")
        else:
            with open(path, "w", encoding="utf-8") as fh:
                for r in records:
                    fh.write(r.to_json() + "\n")
        if summary_path is not None:
            with open(summary_path, "w", encoding="utf-8") as fh:
                json.dump(summary, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        raise ScheduleIOError(f"cannot write schedule: {exc}") from exc
    return summary


def load_schedule(path: Union[str, Path]) -> List[SliceRecord]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [SliceRecord.from_dict(json.loads(line)) for line in fh if line.strip()]
    except OSError as exc:
        raise ScheduleIOError(f"cannot read schedule: {exc}") from exc
