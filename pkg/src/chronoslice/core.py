"""Shared event types and the ingestion filter for time-ordered edge streams."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Optional, Union

NodeId = Union[str, int]


class OutOfOrderTimestamp(ValueError):
    """Raised when an event arrives with a timestamp earlier than its predecessor."""

    def __init__(self, t_orig: int, previous_t: int, line: Optional[int] = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"timestamp {t_orig} arrived after {previous_t}{where}")
        self.t_orig = t_orig
        self.previous_t = previous_t
        self.line = line


@dataclass(frozen=True)
class TemporalEdge:
    """One contact between two nodes at a discrete original timestamp."""

    source: NodeId
    target: NodeId
    t_orig: int

    def __post_init__(self) -> None:
        if self.t_orig < 0:
            raise ValueError(f"negative timestamp {self.t_orig}")


@dataclass(frozen=True)
class RemappedEvent:
    """An edge placed on the display axis by some slicing strategy."""

    source: NodeId
    target: NodeId
    t_display: int
    slice_index: int


@dataclass
class NetworkMeta:
    """Running size and span of the stream seen so far.

    ``t_end`` stays ``None`` until at least one event is accepted. Counts only
    grow.
    """

    node_count: int = 0
    edge_count: int = 0
    t_start: Optional[int] = None
    t_end: Optional[int] = None
    resolution_unit: str = "1 tick"

    @property
    def timestamp_count(self) -> int:
        """Number of original timestamps spanned, inactive ones included."""
        if self.t_start is None or self.t_end is None:
            return 0
        return self.t_end - self.t_start + 1


def pair_key(source: NodeId, target: NodeId, directed: bool = False) -> Hashable:
    """Key used to merge repeated edges inside one display timestamp."""
    if directed:
        return (source, target)
    return frozenset((source, target))


def validate_and_filter(raw_event: TemporalEdge, previous_t: Optional[int], strict: bool = True) -> Optional[TemporalEdge]:
    """Return the event if it may enter the stream, ``None`` for a self-edge.

    Equal timestamps are fine. A timestamp below ``previous_t`` raises
    :class:`OutOfOrderTimestamp` in strict mode and is passed through otherwise
    (the caller is then responsible for ordering, e.g. via a sort buffer).
    """
    if raw_event.source == raw_event.target:
        return None
    if strict and previous_t is not None and raw_event.t_orig < previous_t:
        raise OutOfOrderTimestamp(raw_event.t_orig, previous_t)
    return raw_event


@dataclass
class StreamFilter:
    """Stateful wrapper around :func:`validate_and_filter`.

    Tracks the previous timestamp, counts dropped self-edges and maintains a
    :class:`NetworkMeta`. Node ids get a dense index in first-appearance order,
    which is the only per-node state kept.
    """

    strict: bool = True
    meta: NetworkMeta = field(default_factory=NetworkMeta)
    self_edge_count: int = 0
    node_index: dict = field(default_factory=dict)
    _previous_t: Optional[int] = None

    def accept(self, raw_event: TemporalEdge) -> Optional[TemporalEdge]:
        event = validate_and_filter(raw_event, self._previous_t, strict=self.strict)
        if event is None:
            self.self_edge_count += 1
            return None
        if self._previous_t is None or event.t_orig > self._previous_t:
            self._previous_t = event.t_orig
        for node in (event.source, event.target):
            if node not in self.node_index:
                self.node_index[node] = len(self.node_index)
        meta = self.meta
        meta.node_count = len(self.node_index)
        meta.edge_count += 1
        if meta.t_start is None:
            meta.t_start = event.t_orig
        meta.t_end = event.t_orig if meta.t_end is None else max(meta.t_end, event.t_orig)
        return event

    def __call__(self, events: Iterable[TemporalEdge]) -> Iterator[TemporalEdge]:
        for raw in events:
            event = self.accept(raw)
            if event is not None:
                yield event
