"""Output artifacts: full-precision CSV tables, legacy VTK grids and run manifests."""

from __future__ import annotations

import datetime as _dt
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__


def _stamp(label: str) -> str:
    now = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"# nsbem {__version__} {label} {now}"


def write_csv(path, columns: Sequence[str], data: np.ndarray, label: str = "") -> Path:
    """Write a numeric table with 17 significant digits.

    The first line is a comment carrying the version and a UTC timestamp;
    the second holds the column names.  Everything after the first line is
    a deterministic function of ``data``.

    Parameters
    ----------
    columns : sequence of str
    data : ndarray (rows, len(columns)), real
    label : str
        Free text placed in the comment line.
    """
    data = np.asarray(data, dtype=float).reshape(-1, len(columns))
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(_stamp(label) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in data:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Inverse of :func:`write_csv`: column names and data."""
    lines = Path(path).read_text().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    columns = body[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]])
    return columns, data.reshape(-1, len(columns))


def complex_columns(name: str, values: np.ndarray) -> tuple[list[str], np.ndarray]:
    """Split complex ``values`` (rows, m) into ``re_``/``im_`` columns."""
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None]
    suffixes = [""] if values.shape[1] == 1 else ["_x", "_y", "_z"][: values.shape[1]]
    cols, data = [], []
    for j, suf in enumerate(suffixes):
        cols += [f"re_{name}{suf}", f"im_{name}{suf}"]
        data += [values[:, j].real, values[:, j].imag]
    return cols, np.stack(data, axis=1)


def write_vtk_structured_points(
    path, values: np.ndarray, origin, spacing, shape, name: str = "magnitude",
    title: str = "nsbem field",
) -> Path:
    """Legacy ASCII VTK ``STRUCTURED_POINTS`` file with one scalar array.

    ``values`` are ordered with ``x`` varying fastest, then ``y``, then ``z``.
    Non-finite values are written as 0.
    """
    values = np.asarray(values, dtype=float).ravel()
    nx, ny, nz = (int(s) for s in shape)
    if values.size != nx * ny * nz:
        raise ValueError("values do not match the grid shape")
    values = np.where(np.isfinite(values), values, 0.0)
    header = [
        "# vtk DataFile Version 3.0",
        title[:255],
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} {nz}",
        "ORIGIN " + " ".join(f"{v:.17g}" for v in origin),
        "SPACING " + " ".join(f"{v:.17g}" for v in spacing),
        f"POINT_DATA {values.size}",
        f"SCALARS {name} double 1",
        "LOOKUP_TABLE default",
    ]
    path = Path(path)
    with path.open("w") as fh:
        fh.write("\n".join(header) + "\n")
        for start in range(0, values.size, 6):
            fh.write(" ".join(f"{v:.17g}" for v in values[start:start + 6]) + "\n")
    return path


def write_manifest(path, payload: dict) -> Path:
    """JSON run manifest; adds the version and a UTC timestamp."""
    record = {
        "nsbem_version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    record.update(payload)
    path = Path(path)
    path.write_text(json.dumps(record, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
