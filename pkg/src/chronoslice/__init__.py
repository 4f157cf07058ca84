"""Online nonuniform timeslicing and timeline layouts for temporal networks."""

__version__ = "0.1.0"

from .core import NetworkMeta, OutOfOrderTimestamp, RemappedEvent, StreamFilter, TemporalEdge, validate_and_filter
from .slicer import (
    SliceRecord,
    SlicerConfig,
    StreamingSlicer,
    compute_t_ref,
    export_schedule,
    fading_sum,
    next_resolution,
    remap_timestamp,
    schedule_summary,
    slice_stream,
)
from .baselines import EventHistogram, UniformConfig, bvc_boundaries, bvc_remap, bvc_slices, uniform_remap, uniform_slices
from .ingest import IngestConfig, NodeGroups, parse_stream, read_network, synth_stream
from .stats import compare_report, ecdf, spread, spread_of
