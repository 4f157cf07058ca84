"""Reading edge-stream files into validated :class:`TemporalEdge` streams.

Three line-oriented formats are understood:

``sociopatterns``
    whitespace separated ``t i j [Ci Cj]``; the optional class columns become
    node groups.
``csv``
    comma separated with a header naming ``source``, ``target`` and ``time``
    (``t`` and ``timestamp`` are accepted for the last one).
``jsonl``
    one object per line with ``source``, ``target`` and ``time`` keys.

Timestamps are floor-divided by ``time_divisor`` and, unless ``rebase`` is off,
shifted so the first accepted event sits at 0. Inactive timestamps are kept.
"""

from __future__ import annotations

import csv
import gzip
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import NetworkMeta, OutOfOrderTimestamp, StreamFilter, TemporalEdge

FORMATS = ("sociopatterns", "csv", "jsonl")
DATA_ENV = "CHRONOSLICE_DATA"


class ParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class IngestConfig:
    format: str = "sociopatterns"
    directed: bool = False
    strict_order: bool = True
    sort_buffer: bool = False
    time_divisor: int = 1
    rebase: bool = True
    resolution_unit: str = "1 tick"

    def __post_init__(self) -> None:
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))

    def violations(self) -> List[str]:
        errors = []
        if self.format not in FORMATS:
            errors.append(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.time_divisor < 1:
            errors.append(f"time_divisor must be >= 1, got {self.time_divisor}")
        if self.strict_order and self.sort_buffer:
            errors.append("strict_order and sort_buffer are mutually exclusive")
        return errors


@dataclass
class NodeGroups:
    """Node id to group label (school class, department, ...)."""

    labels: Dict[str, str] = field(default_factory=dict)

    def __getitem__(self, node: str) -> str:
        return self.labels[node]

    def get(self, node: str, default: Optional[str] = None) -> Optional[str]:
        return self.labels.get(node, default)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, node: object) -> bool:
        return node in self.labels

    def group_names(self) -> List[str]:
        return sorted(set(self.labels.values()))

    def members(self, group: str) -> List[str]:
        return [n for n, g in self.labels.items() if g == group]

    def unused(self, seen: Iterable[str]) -> List[str]:
        """Grouped nodes that never occurred in the stream."""
        seen = set(seen)
        return sorted(n for n in self.labels if n not in seen)

    @classmethod
    def read(cls, path: Union[str, Path]) -> "NodeGroups":
        """Read a two-column ``node group`` file (whitespace or comma separated)."""
        labels = {}
        with _open_text(path) as fh:
            for line in fh:
                parts = line.replace(",", " ").split()
                if len(parts) >= 2:
                    labels[parts[0]] = parts[1]
        return cls(labels)


def _open_text(path: Union[str, Path]) -> IO[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def _parse_time(token, lineno: int) -> int:
    try:
        value = float(token)
    except (TypeError, ValueError):
        raise ParseError(f"bad timestamp {token!r}", lineno) from None
    if value != int(value):
        raise ParseError(f"non-integer timestamp {token!r}", lineno)
    return int(value)


def _raw_records(reader: IO[str], config: IngestConfig, groups: NodeGroups) -> Iterator[Tuple[int, str, str, int]]:
    """Yield ``(raw_time, source, target, line)`` tuples in file order."""
    if config.format == "sociopatterns":
        for lineno, line in enumerate(reader, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) not in (3, 5):
                raise ParseError(f"expected 3 or 5 fields, got {len(parts)}", lineno)
            t = _parse_time(parts[0], lineno)
            if len(parts) == 5:
                groups.labels.setdefault(parts[1], parts[3])
                groups.labels.setdefault(parts[2], parts[4])
            yield t, parts[1], parts[2], lineno
    elif config.format == "csv":
        rows = csv.reader(reader)
        header = next(rows, None)
        if header is None:
            return
        header = [h.strip().lower() for h in header]
        try:
            si, ti = header.index("source"), header.index("target")
        except ValueError:
            raise ParseError("header must name source and target columns", 1) from None
        for name in ("time", "t", "timestamp"):
            if name in header:
                ci = header.index(name)
                break
        else:
            raise ParseError("header must name a time column", 1)
        for lineno, row in enumerate(rows, 2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
            yield _parse_time(row[ci], lineno), row[si].strip(), row[ti].strip(), lineno
    else:
        for lineno, line in enumerate(reader, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                yield _parse_time(obj["time"], lineno), str(obj["source"]), str(obj["target"]), lineno
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(f"bad record: {exc}", lineno) from None


class EdgeStream:
    """Lazily parsed, validated and ordered edge stream.

    Iterate it once. ``meta`` and ``groups`` fill in as events are consumed;
    they are complete after exhaustion.
    """

    def __init__(self, reader: IO[str], config: IngestConfig) -> None:
        self.config = config
        self.groups = NodeGroups()
        self.filter = StreamFilter(strict=config.strict_order)
        self.filter.meta.resolution_unit = config.resolution_unit
        self.raw_origin: Optional[int] = None
        self._reader = reader
        self._consumed = False

    @property
    def meta(self) -> NetworkMeta:
        return self.filter.meta

    @property
    def self_edge_count(self) -> int:
        return self.filter.self_edge_count

    def _records(self) -> Iterator[Tuple[int, str, str, int]]:
        records = _raw_records(self._reader, self.config, self.groups)
        if self.config.sort_buffer:
            records = iter(sorted(records, key=lambda r: r[0]))
        return records

    def __iter__(self) -> Iterator[TemporalEdge]:
        if self._consumed:
            raise RuntimeError("stream already consumed")
        self._consumed = True
        div = self.config.time_divisor
        origin = None
        for raw_t, source, target, lineno in self._records():
            t = raw_t // div
            if origin is None:
                origin = t if self.config.rebase else 0
                self.raw_origin = raw_t
            if t < origin and self.config.strict_order:
                raise OutOfOrderTimestamp(t - origin, self.filter._previous_t, lineno)
            try:
                edge = TemporalEdge(source, target, t - origin)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            try:
                accepted = self.filter.accept(edge)
            except OutOfOrderTimestamp as exc:
                raise OutOfOrderTimestamp(exc.t_orig, exc.previous_t, lineno) from None
            if accepted is not None:
                yield accepted


def parse_stream(reader: Union[IO[str], str, Path], config: Optional[IngestConfig] = None) -> EdgeStream:
    """Wrap a text reader (or a path, ``.gz`` allowed) as an :class:`EdgeStream`."""
    config = config or IngestConfig()
    if isinstance(reader, (str, Path)):
        reader = _open_text(reader)
    return EdgeStream(reader, config)


@dataclass
class LoadedNetwork:
    events: List[TemporalEdge]
    meta: NetworkMeta
    groups: NodeGroups
    self_edges: int = 0
    raw_origin: Optional[int] = None


def read_network(source: Union[IO[str], str, Path], config: Optional[IngestConfig] = None) -> LoadedNetwork:
    """Parse a whole file into memory (offline convenience)."""
    stream = parse_stream(source, config)
    events = list(stream)
    return LoadedNetwork(events, stream.meta, stream.groups, stream.self_edge_count, stream.raw_origin)


def write_stream(events: Iterable[TemporalEdge], fh: IO[str], format: str = "csv", groups: Optional[NodeGroups] = None) -> None:
    """Serialise events so that :func:`parse_stream` reads them back unchanged."""
    if format == "csv":
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source", "target", "time"])
        for e in events:
            writer.writerow([e.source, e.target, e.t_orig])
    elif format == "sociopatterns":
        for e in events:
            if groups is not None and e.source in groups and e.target in groups:
                fh.write(f"{e.t_orig}\t{e.source}\t{e.target}\t{groups[e.source]}\t{groups[e.target]}\n")
            else:
                fh.write(f"{e.t_orig}\t{e.source}\t{e.target}\n")
    elif format == "jsonl":
        for e in events:
            fh.write(json.dumps({"source": e.source, "target": e.target, "time": e.t_orig}) + "\n")
    else:
        raise ValueError(f"unknown format {format!r}")


def synth_stream(segments: Sequence[Tuple[int, float, int]], seed: int = 0) -> List[TemporalEdge]:
    """Piecewise-constant random contact stream.

    Each segment is ``(span, rate, pool)``: ``span`` consecutive timestamps,
    ``rate`` events per timestamp among nodes ``n0 .. n{pool-1}``. Integer
    rates are exact; fractional rates draw Poisson counts.
    """
    rng = np.random.default_rng(seed)
    events: List[TemporalEdge] = []
    t = 0
    for span, rate, pool in segments:
        if rate and pool < 2:
            raise ValueError("a segment with events needs at least two nodes")
        for _ in range(span):
            n = int(rate) if float(rate).is_integer() else int(rng.poisson(rate))
            for _ in range(n):
                a, b = rng.choice(pool, size=2, replace=False)
                events.append(TemporalEdge(f"n{a}", f"n{b}", t))
            t += 1
    return events


def data_dir() -> Path:
    """Dataset directory: ``$CHRONOSLICE_DATA`` or the repository's ``data/``."""
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def find_dataset(*names: str) -> Optional[Path]:
    base = data_dir()
    for name in names:
        for candidate in (base / name, base / f"{name}.gz"):
            if candidate.exists():
                return candidate
    return None


PRIMARY_SCHOOL = IngestConfig(format="sociopatterns", time_divisor=20, resolution_unit="20 s")
ENRON = IngestConfig(format="csv", time_divisor=1, resolution_unit="1 day")


def load_primary_school() -> LoadedNetwork:
    path = find_dataset("primaryschool.csv", "Primary_School.csv")
    if path is None:
        raise FileNotFoundError(f"primaryschool.csv not found in {data_dir()} (set {DATA_ENV})")
    return read_network(path, PRIMARY_SCHOOL)


def load_enron() -> LoadedNetwork:
    """Per-day aggregated Enron contacts (``source,target,time`` with day indices)."""
    path = find_dataset("enron.csv")
    if path is None:
        raise FileNotFoundError(f"enron.csv not found in {data_dir()} (set {DATA_ENV})")
    return read_network(path, ENRON)
