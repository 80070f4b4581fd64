"""The ``tr1`` raw trace container for dual-photodiode records.

One JSON header line, then interleaved 2-channel little-endian float32
frames (px, py) at a fixed sample rate.
"""

import hashlib
import json
import os

import numpy as np

from ..core.grids import TimeGrid, format_utc, parse_utc
from ..errors import FormatError, ValidationError

SCHEMA = "tr1"
CHANNELS = ("px", "py")


class TraceWriter:
    def __init__(self, path, time: TimeGrid):
        self.path = str(path)
        self.time = time
        self._rows = 0
        self._sha = hashlib.sha256()
        header = (json.dumps(
            {"schema": SCHEMA, "channels": list(CHANNELS),
             "t0": format_utc(time.t0), "sample_rate_hz": 1.0 / time.dt_s,
             "count": time.count},
            sort_keys=True) + "\n").encode("utf-8")
        self._fh = open(self.path, "wb")
        self._fh.write(header)
        self._sha.update(header)
        self._nbytes = len(header)

    def append(self, px, py):
        px = np.asarray(px, dtype="<f4")
        py = np.asarray(py, dtype="<f4")
        if px.shape != py.shape or px.ndim != 1:
            raise ValidationError("px/py chunks must be 1-D and equal length")
        if not (np.all(np.isfinite(px)) and np.all(np.isfinite(py))):
            raise ValidationError("trace chunk contains non-finite values")
        buf = np.column_stack([px, py]).astype("<f4").tobytes()
        self._fh.write(buf)
        self._sha.update(buf)
        self._nbytes += len(buf)
        self._rows += len(px)

    def close(self):
        self._fh.close()
        if self._rows != self.time.count:
            raise ValidationError(
                f"wrote {self._rows} samples, header declares {self.time.count}"
            )
        return {"sha256": self._sha.hexdigest(), "bytes": self._nbytes}

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        else:
            self._fh.close()


def open_trace(path):
    """Memory-map a tr1 file; returns (TimeGrid, values[N, 2])."""
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
    count = int(hdr["count"])
    offset = len(line)
    expected = count * 2 * 4
    actual = os.path.getsize(path) - offset
    if actual != expected:
        raise FormatError(
            f"{path}: float payload truncated at byte offset {offset + actual} "
            f"(expected {offset + expected} bytes total)"
        )
    grid = TimeGrid(parse_utc(hdr["t0"]), 1.0 / float(hdr["sample_rate_hz"]), count)
    values = np.memmap(path, dtype="<f4", mode="r", offset=offset, shape=(count, 2))
    return grid, values
