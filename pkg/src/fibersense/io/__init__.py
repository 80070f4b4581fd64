"""File formats: wf1 waterfalls, tr1 traces, series CSVs and manifests."""

from .manifest import hash_file, read_manifest, verify_manifest, write_manifest
from .seriescsv import (
    read_position_series_csv,
    read_series_csv,
    write_position_series_csv,
    write_series_csv,
)
from .tracefile import TraceWriter, open_trace
from .waterfall import (
    WaterfallWriter,
    open_waterfall,
    read_header,
    read_waterfall,
    write_waterfall,
)

__all__ = [
    "hash_file",
    "read_manifest",
    "verify_manifest",
    "write_manifest",
    "read_position_series_csv",
    "read_series_csv",
    "write_position_series_csv",
    "write_series_csv",
    "TraceWriter",
    "open_trace",
    "WaterfallWriter",
    "open_waterfall",
    "read_header",
    "read_waterfall",
    "write_waterfall",
]
