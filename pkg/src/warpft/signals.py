"""Grids and sampled complex signals, plus their CSV/JSON forms."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from warpft.errors import NumericFailure, UsageError

# raw coordinate -> warped partner
WARPED_NAME = {"x": "W", "k": "K", "t": "T", "omega": "Omega"}
RAW_NAME = {v: k for k, v in WARPED_NAME.items()}
COORDS = frozenset(WARPED_NAME) | frozenset(RAW_NAME)


def fmt(value):
    """17 significant digits, lowercase exponent; refuses nan/inf."""
    value = float(value)
    if not np.isfinite(value):
        raise NumericFailure("refusing to write a non-finite number")
    return "%.17g" % value


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid ``start + step * arange(count)``."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))
        if int(self.count) != self.count:
            raise UsageError("grid count must be an integer")
        object.__setattr__(self, "count", int(self.count))
        if not (np.isfinite(self.start) and np.isfinite(self.step) and self.step > 0):
            raise UsageError("grid needs a finite start and a step > 0")
        if self.count < 2:
            raise UsageError("grid needs at least 2 nodes")
        if not np.isfinite(self.start + self.step * (self.count - 1)):
            raise UsageError("grid end is not finite")

    @classmethod
    def from_range(cls, lo, hi, count):
        """``count`` nodes from ``lo`` to ``hi`` inclusive (like ``linspace``)."""
        return cls(lo, (hi - lo) / (count - 1), count)

    @property
    def nodes(self):
        return self.start + self.step * np.arange(self.count)

    @property
    def stop(self):
        return self.start + self.step * (self.count - 1)

    def to_dict(self):
        return {"start": self.start, "step": self.step, "count": self.count}

    @classmethod
    def from_dict(cls, d):
        try:
            if "step" in d:
                return cls(d["start"], d["step"], d["count"])
            return cls.from_range(d["start"], d["stop"], d["count"])
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed grid {d!r}") from exc


def trapezoid_weights(nodes):
    """Trapezoid-rule weights for (possibly non-uniform) nodes."""
    nodes = np.asarray(nodes, dtype=float)
    w = np.zeros_like(nodes)
    gaps = np.diff(nodes)
    w[:-1] += 0.5 * gaps
    w[1:] += 0.5 * gaps
    return w


def _check_nodes(nodes):
    if nodes.ndim != 1 or nodes.size < 2:
        raise UsageError("need a 1-D node list with at least 2 nodes")
    if not np.all(np.isfinite(nodes)):
        raise UsageError("nodes must be finite")
    if not np.all(np.diff(nodes) > 0):
        raise UsageError("nodes must be strictly increasing")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples on a labelled 1-D grid.

    ``coord`` names the variable the nodes are expressed in. A warped label
    (``W``, ``K``, ``T``, ``Omega``) means the node values are already warp
    values; a raw label (``x``, ``k``, ``t``, ``omega``) means they are
    physical coordinates.
    """

    coord: str
    nodes: np.ndarray
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.coord not in COORDS:
            raise UsageError(f"unknown coordinate label {self.coord!r}")
        nodes = np.asarray(self.nodes, dtype=float)
        samples = np.asarray(self.samples, dtype=np.complex128)
        _check_nodes(nodes)
        if samples.shape != nodes.shape:
            raise UsageError("sample count must equal node count")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_function(cls, coord, grid, func):
        nodes = grid.nodes if isinstance(grid, GridSpec) else np.asarray(grid, float)
        return cls(coord, nodes, func(nodes))

    @property
    def is_warped(self):
        return self.coord in RAW_NAME

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write("coord,re,im\n")
        for u, s in zip(self.nodes, self.samples):
            buf.write(f"{fmt(u)},{fmt(s.real)},{fmt(s.imag)}\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path, coord):
        """Read ``coord,re,im`` rows; the label is supplied by the caller."""
        rows = _read_csv(path, ["coord", "re", "im"])
        return cls(coord, rows[:, 0], rows[:, 1] + 1j * rows[:, 2])


def _read_csv(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        head = next(reader, None)
        if head is None or [h.strip() for h in head] != header:
            raise UsageError(f"{path}: expected header {','.join(header)}")
        try:
            rows = [[float(v) for v in row] for row in reader if row]
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from exc
    arr = np.array(rows, dtype=float).reshape(-1, len(header))
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{path}: non-finite values")
    return arr
