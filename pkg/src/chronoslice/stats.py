"""Distribution statistics for comparing slicing strategies."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .core import RemappedEvent
from .slicer import SliceRecord, SliceResult, schedule_summary


@dataclass
class SpreadSeries:
    """Drawn events per display timestamp, zeros included."""

    start: int
    counts: np.ndarray

    @property
    def normalized(self) -> np.ndarray:
        peak = self.counts.max() if self.counts.size else 0
        if peak == 0:
            return np.zeros(self.counts.shape, dtype=float)
        return self.counts / peak

    def __len__(self) -> int:
        return int(self.counts.size)


@dataclass
class EcdfReport:
    sorted_counts: np.ndarray
    cumulative: np.ndarray
    quartiles: tuple
    empty_fraction: float
    max_count: int

    @property
    def q3(self) -> float:
        return self.quartiles[2]

    @property
    def q3_fraction_of_max(self) -> float:
        return self.q3 / self.max_count if self.max_count else 0.0

    def as_dict(self) -> dict:
        return {
            "timestamps": int(self.sorted_counts.size),
            "empty_fraction": self.empty_fraction,
            "max_count": self.max_count,
            "q1": self.quartiles[0],
            "median": self.quartiles[1],
            "q3": self.quartiles[2],
            "q3_fraction_of_max": self.q3_fraction_of_max,
        }


def spread(events: Iterable[RemappedEvent], n_display: Optional[int] = None, start: int = 0) -> SpreadSeries:
    """Count events per display timestamp over ``[start, start + n_display)``.

    Without ``n_display`` the span ends at the last event.

    >>> spread([RemappedEvent("a", "b", 0, 0), RemappedEvent("a", "c", 0, 0), RemappedEvent("a", "b", 2, 0)]).counts
    array([2, 0, 1])
    """
    ts = np.fromiter((e.t_display for e in events), dtype=np.int64) - start
    if n_display is None:
        n_display = int(ts.max()) + 1 if ts.size else 0
    if ts.size and (ts.min() < 0 or ts.max() >= n_display):
        raise ValueError("event outside the display span")
    return SpreadSeries(start, np.bincount(ts, minlength=n_display))


def spread_of(result: SliceResult) -> SpreadSeries:
    """Spread over the full display span described by a result's records."""
    if not result.records:
        return SpreadSeries(0, np.zeros(0, dtype=np.int64))
    first = result.records[0].display_span[0]
    total = schedule_summary(result.records)["display_total"]
    return spread(result.events, total, first)


def ecdf(series: Union[SpreadSeries, Sequence[int]]) -> EcdfReport:
    counts = np.asarray(series.counts if isinstance(series, SpreadSeries) else series)
    if counts.size == 0:
        raise ValueError("empty series")
    ordered = np.sort(counts)
    n = ordered.size
    q = tuple(float(v) for v in np.percentile(ordered, [25, 50, 75]))
    return EcdfReport(
        sorted_counts=ordered,
        cumulative=np.arange(1, n + 1) / n,
        quartiles=q,
        empty_fraction=float(np.count_nonzero(ordered == 0) / n),
        max_count=int(ordered[-1]),
    )


def coefficient_of_variation(counts: Sequence[int]) -> float:
    counts = np.asarray(counts, dtype=float)
    mean = counts.mean()
    return float(counts.std() / mean) if mean else 0.0


def cold_start_fraction(records: Sequence[SliceRecord]) -> float:
    total = schedule_summary(records)["display_total"]
    return records[0].display_width / total if total else 0.0


def strategy_row(name: str, result: SliceResult) -> dict:
    summary = schedule_summary(result.records)
    series = spread_of(result)
    row = {
        "strategy": name,
        "display_total": summary["display_total"],
        "slices": summary["slices"],
        "sigma_min": summary["sigma_min"],
        "sigma_mean": summary["sigma_mean"],
        "sigma_max": summary["sigma_max"],
        "events_drawn": int(series.counts.sum()),
        "merged": result.merged,
    }
    if len(series):
        rep = ecdf(series)
        row.update(empty_fraction=rep.empty_fraction, cv=coefficient_of_variation(series.counts),
                   max_count=rep.max_count, q3=rep.q3)
    return row


def compare_report(results: Mapping[str, SliceResult]) -> dict:
    """One row per strategy, all run on the same input."""
    return {"strategies": [strategy_row(name, res) for name, res in results.items()]}


_TABLE_COLUMNS = ("strategy", "display_total", "sigma_min", "sigma_mean", "sigma_max", "empty_fraction", "cv")


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def render_table(report: dict) -> str:
    rows = [[_fmt(r.get(c)) for c in _TABLE_COLUMNS] for r in report["strategies"]]
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(_TABLE_COLUMNS)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(_TABLE_COLUMNS, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def write_json(obj: dict, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_rows_csv(rows: Sequence[dict], path: Union[str, Path]) -> None:
    keys: list = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def write_series(columns: Dict[str, Sequence], path: Union[str, Path]) -> None:
    """Plot-ready CSV with one column per named series (equal lengths)."""
    names = list(columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*(columns[n] for n in names)):
            writer.writerow([f"{v:.6g}" if isinstance(v, float) else v for v in row])
