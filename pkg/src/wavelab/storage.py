"""Serialization: fields to CSV/binary, forcings from CSV, report tables.

The binary field dump starts with a 16-byte header (4-byte magic "WLF1",
uint32 dimension n, uint32 nt, uint32 nr, little endian), followed by
three float64 values (t_max, r_max, support radius; NaN when absent) and
the nt*nr float64 samples in row-major order.

Sampled forcings load from a CSV of (s, rho, value) rows on a regular
grid, with the declared support box carried in a JSON sidecar.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from pathlib import Path

import numpy as np

from wavelab.grids import Grid, RadialField
from wavelab.radial import RadialForcing, SupportBox

MAGIC = b"WLF1"
_HEADER = struct.Struct("<4sIII")


def field_to_csv(field: RadialField, path) -> None:
    """Columns t, r, value; one row per grid node."""
    tt, rr = field.grid.meshes()
    data = np.column_stack([tt.ravel(), rr.ravel(), field.values.ravel()])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "r", "value"])
        for row in data:
            writer.writerow([repr(float(x)) for x in row])


def field_from_csv(path, n: int = 3, support_radius=None) -> RadialField:
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    t = np.unique(rows[:, 0])
    r = np.unique(rows[:, 1])
    grid = Grid(t_max=float(t[-1]), r_max=float(r[-1]), nt=len(t), nr=len(r))
    values = rows[:, 2].reshape(len(t), len(r))
    return RadialField(grid, values, support_radius=support_radius, n=n)


def field_to_binary(field: RadialField, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, field.n, field.grid.nt, field.grid.nr))
        sr = field.support_radius if field.support_radius is not None else math.nan
        np.array([field.grid.t_max, field.grid.r_max, sr], dtype="<f8").tofile(fh)
        field.values.astype("<f8").tofile(fh)


def field_from_binary(path) -> RadialField:
    with open(path, "rb") as fh:
        magic, n, nt, nr = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != MAGIC:
            raise ValueError(f"bad magic {magic!r}; not a field dump")
        meta = np.fromfile(fh, dtype="<f8", count=3)
        values = np.fromfile(fh, dtype="<f8", count=nt * nr).reshape(nt, nr)
    grid = Grid(t_max=float(meta[0]), r_max=float(meta[1]), nt=int(nt), nr=int(nr))
    sr = None if math.isnan(meta[2]) else float(meta[2])
    return RadialField(grid, values, support_radius=sr, n=int(n))


def forcing_to_csv(values: np.ndarray, grid: Grid, support: SupportBox,
                   csv_path, sidecar_path) -> None:
    """Sampled forcing as (s, rho, value) CSV plus JSON support sidecar."""
    field = RadialField(grid, values)
    field_to_csv(field, csv_path)
    meta = {
        "s_lo": _json_num(support.s_lo),
        "s_hi": _json_num(support.s_hi),
        "d_lo": _json_num(support.d_lo),
        "d_hi": _json_num(support.d_hi),
    }
    Path(sidecar_path).write_text(json.dumps(meta, indent=2, sort_keys=True))


def forcing_from_csv(csv_path, sidecar_path) -> RadialForcing:
    meta = json.loads(Path(sidecar_path).read_text())
    support = SupportBox(
        s_lo=_from_json_num(meta["s_lo"]),
        s_hi=_from_json_num(meta["s_hi"]),
        d_lo=_from_json_num(meta["d_lo"]),
        d_hi=_from_json_num(meta["d_hi"]),
    )
    field = field_from_csv(csv_path)
    return RadialForcing.from_field(field, support, name=str(csv_path))


def write_csv(path, header: list[str], rows) -> None:
    """Plain CSV with repr-formatted floats for byte-stable output."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([
                repr(float(x)) if isinstance(x, (int, float, np.floating)) else str(x)
                for x in row
            ])


def trace_rows(trace) -> list:
    return [(m, a, b, ratio) for (m, a, b, ratio) in trace.rows()]


def _json_num(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _from_json_num(x) -> float:
    if isinstance(x, str):
        return float(x)
    return float(x)
