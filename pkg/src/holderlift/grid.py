"""Paths sampled on the uniform grid t_i = i/m of [0, 1].

A path is continued to all of [0, 1] by piecewise-linear interpolation, so
its sup norm and its modulus of continuity are attained at grid nodes.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class GridPath:
    """Values of a continuous path at the m + 1 nodes i/m."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValidationError(f"a GridPath needs at least 2 values in one dimension, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("GridPath values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.size - 1

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    @classmethod
    def from_function(cls, func, m: int) -> "GridPath":
        return cls(func(np.arange(m + 1) / m))

    @classmethod
    def zeros(cls, m: int) -> "GridPath":
        return cls(np.zeros(m + 1))

    def __call__(self, t):
        """Piecewise-linear evaluation at t in [0, 1]."""
        return np.interp(t, self.t, self.values)

    def __neg__(self):
        return GridPath(-self.values)

    def __add__(self, other):
        _check_same_m(self, other)
        return GridPath(self.values + other.values)

    def __sub__(self, other):
        return subtract(self, other)

    def __mul__(self, c):
        return GridPath(float(c) * self.values)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GridPath) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def to_json(self) -> dict:
        return {"m": self.m, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "GridPath":
        try:
            m, values = int(obj["m"]), obj["values"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"GridPath JSON needs 'm' and 'values': {exc}") from None
        if len(values) != m + 1:
            raise ValidationError(f"expected {m + 1} values for m={m}, got {len(values)}")
        return cls(values)


def _check_same_m(f: GridPath, g: GridPath):
    if f.m != g.m:
        raise ValidationError(f"grid resolution mismatch: m={f.m} vs m={g.m}")


def sup_norm(f: GridPath) -> float:
    """max_t |f(t)|, exact for the piecewise-linear extension."""
    return float(np.max(np.abs(f.values)))


def subtract(f: GridPath, g: GridPath) -> GridPath:
    _check_same_m(f, g)
    return GridPath(f.values - g.values)


# -- CSV / JSON ingestion ---------------------------------------------------

def _header(m: int) -> list[str]:
    return [f"t{i}" for i in range(m + 1)]


def paths_to_csv(paths: np.ndarray | Sequence[GridPath], header: bool = True) -> str:
    """One row per path; floats use the shortest round-trip representation."""
    arr = np.asarray([p.values if isinstance(p, GridPath) else p for p in paths], dtype=float)
    if arr.ndim != 2:
        raise ValidationError("expected a 2-D block of paths")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(_header(arr.shape[1] - 1))
    for row in arr.tolist():
        writer.writerow([repr(x) for x in row])
    return buf.getvalue()


def paths_from_csv(text: str) -> np.ndarray:
    """Parse CSV rows of m + 1 reals; a leading 't0..tm' header is optional."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError("no paths in CSV input")
    if rows[0][0].strip().startswith("t"):
        rows = rows[1:]
    try:
        arr = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"non-numeric CSV entry: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ValidationError("CSV rows must all have the same length m + 1 >= 2")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("CSV paths must be finite")
    return arr


def read_paths_csv(path: str | Path) -> list[GridPath]:
    return [GridPath(row) for row in paths_from_csv(Path(path).read_text())]


def write_paths_csv(path: str | Path, paths: Iterable[GridPath] | np.ndarray) -> None:
    Path(path).write_text(paths_to_csv(list(paths)))


def read_path_json(path: str | Path) -> GridPath:
    return GridPath.from_json(json.loads(Path(path).read_text()))
