"""Map and table writers: lossless CSV plus a 16-bit PGM preview."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .imaging import ImagingMap


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_map_csv(image: ImagingMap, path) -> None:
    pts = image.grid.points
    vals = image.values.ravel()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "value"])
        for (x, y), v in zip(pts, vals):
            w.writerow([_fmt(x), _fmt(y), _fmt(v)])


def read_map_csv(path) -> np.ndarray:
    """Values from a map CSV as a (n_y, n_x) array in row-major order."""
    xs, ys, vs = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for x, y, v in reader:
            xs.append(float(x))
            ys.append(float(y))
            vs.append(float(v))
    n_x = len(set(xs))
    n_y = len(set(ys))
    return np.array(vs).reshape(n_y, n_x)


def render_pgm(values: np.ndarray) -> bytes:
    """Binary P5, 16-bit, min-max normalised; highest y row first."""
    v = np.asarray(values, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        scaled = np.rint((v - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(v)
    data = scaled[::-1].astype(">u2").tobytes()
    n_y, n_x = v.shape
    return f"P5\n{n_x} {n_y}\n65535\n".encode("ascii") + data


def write_pgm(values: np.ndarray, path) -> None:
    Path(path).write_bytes(render_pgm(values))


def pgm_from_csv(csv_path, pgm_path) -> None:
    write_pgm(read_map_csv(csv_path), pgm_path)


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_table_csv(table: np.ndarray, xs, Ls, path) -> None:
    """Rows per x, columns per L."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"] + [f"L={L}" for L in Ls])
        for x, row in zip(xs, table):
            w.writerow([_fmt(x)] + [_fmt(v) for v in row])
