"""The ``wf1`` waterfall container.

Layout: one newline-terminated JSON header line, then the matrix as
row-major little-endian float32. The header carries the schema version,
unit tag and both axes, so every file is self-describing:

    {"schema": "wf1", "unit": "radian",
     "axes": [{"kind": "time", "t0": "...", "dt_s": ..., "count": ...},
              {"kind": "position", "start_m": ..., "spacing_m": ..., "count": ...}]}

The same container stores spectrum stacks (position x frequency rows) and
spectrograms (time x frequency); readers check the axis kinds they need.
"""

import hashlib
import json

import numpy as np

from ..core.grids import FrequencyGrid, PositionGrid, TimeGrid, format_utc, parse_utc
from ..core.series import Waterfall
from ..errors import FormatError, ValidationError

SCHEMA = "wf1"


def _axis_to_json(axis):
    if isinstance(axis, TimeGrid):
        return {"kind": "time", "t0": format_utc(axis.t0), "dt_s": axis.dt_s,
                "count": axis.count}
    if isinstance(axis, PositionGrid):
        return {"kind": "position", "start_m": axis.start_m,
                "spacing_m": axis.spacing_m, "count": axis.count}
    if isinstance(axis, FrequencyGrid):
        return {"kind": "frequency", "start_hz": axis.start_hz,
                "step_hz": axis.step_hz, "count": axis.count}
    raise ValidationError(f"unsupported axis type {type(axis)!r}")


def _axis_from_json(obj):
    kind = obj.get("kind")
    if kind == "time":
        return TimeGrid(parse_utc(obj["t0"]), float(obj["dt_s"]), int(obj["count"]))
    if kind == "position":
        return PositionGrid(float(obj["start_m"]), float(obj["spacing_m"]), int(obj["count"]))
    if kind == "frequency":
        return FrequencyGrid(float(obj["start_hz"]), float(obj["step_hz"]), int(obj["count"]))
    raise FormatError(f"unknown axis kind {kind!r}")


def _header_bytes(row_axis, col_axis, unit):
    hdr = {"schema": SCHEMA, "unit": unit,
           "axes": [_axis_to_json(row_axis), _axis_to_json(col_axis)]}
    return (json.dumps(hdr, sort_keys=True) + "\n").encode("utf-8")


class WaterfallWriter:
    """Streaming writer: append row chunks, hash as you go.

    The number of appended rows must total ``row_axis.count`` by ``close``.
    """

    def __init__(self, path, row_axis, col_axis, unit):
        self.path = str(path)
        self.row_axis = row_axis
        self.col_axis = col_axis
        self._rows_written = 0
        self._sha = hashlib.sha256()
        header = _header_bytes(row_axis, col_axis, unit)
        self._fh = open(self.path, "wb")
        self._fh.write(header)
        self._sha.update(header)
        self._nbytes = len(header)

    def append(self, chunk):
        chunk = np.ascontiguousarray(chunk, dtype="<f4")
        if chunk.ndim != 2 or chunk.shape[1] != self.col_axis.count:
            raise ValidationError("chunk column count mismatch")
        if not np.all(np.isfinite(chunk)):
            raise ValidationError("chunk contains non-finite values")
        buf = chunk.tobytes()
        self._fh.write(buf)
        self._sha.update(buf)
        self._nbytes += len(buf)
        self._rows_written += chunk.shape[0]
        if self._rows_written > self.row_axis.count:
            raise ValidationError("more rows appended than the row axis declares")

    def close(self):
        self._fh.close()
        if self._rows_written != self.row_axis.count:
            raise ValidationError(
                f"wrote {self._rows_written} rows, header declares {self.row_axis.count}"
            )
        return {"sha256": self._sha.hexdigest(), "bytes": self._nbytes}

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        else:
            self._fh.close()


def write_waterfall(path, w: Waterfall):
    """Write an in-memory waterfall; returns {sha256, bytes}."""
    with WaterfallWriter(path, w.time, w.axis, w.unit) as wr:
        wr.append(w.values)
        return wr.close()


def read_header(path):
    """Parse and validate the header; returns (header dict, payload offset)."""
    with open(path, "rb") as fh:
        line = fh.readline(1 << 20)
    if not line.endswith(b"\n"):
        raise FormatError(f"{path}: missing header line")
    try:
        hdr = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: bad header: {exc}") from None
    if hdr.get("schema") != SCHEMA:
        raise FormatError(
            f"{path}: schema {hdr.get('schema')!r} is not {SCHEMA!r}; refusing to migrate"
        )
    return hdr, len(line)


def open_waterfall(path):
    """Memory-map a wf1 file; returns (row_axis, col_axis, unit, values).

    Verifies the payload length and reports the byte offset at which a
    truncated payload ends.
    """
    import os

    hdr, offset = read_header(path)
    axes = hdr.get("axes", [])
    if len(axes) != 2:
        raise FormatError(f"{path}: header must declare exactly two axes")
    row_axis = _axis_from_json(axes[0])
    col_axis = _axis_from_json(axes[1])
    expected = row_axis.count * col_axis.count * 4
    actual = os.path.getsize(path) - offset
    if actual != expected:
        raise FormatError(
            f"{path}: float payload truncated at byte offset {offset + actual} "
            f"(expected {offset + expected} bytes total)"
        )
    values = np.memmap(path, dtype="<f4", mode="r", offset=offset,
                       shape=(row_axis.count, col_axis.count))
    return row_axis, col_axis, hdr.get("unit", "dimensionless"), values


def read_waterfall(path, mmap=False) -> Waterfall:
    """Load a time x (position|frequency) waterfall.

    With ``mmap`` the values stay on disk (reads stream through the page
    cache); the finiteness invariant was enforced by the writer.
    """
    row_axis, col_axis, unit, values = open_waterfall(path)
    if not isinstance(row_axis, TimeGrid):
        raise FormatError(f"{path}: expected a time row axis, got {type(row_axis).__name__}")
    if not mmap:
        values = np.array(values)
    return Waterfall(row_axis, col_axis, values, unit, validate=not mmap)
