"""Per-vertex time series records and their CSV form.

One container serves quantum probabilities, quantum phases, and classical
walker counts.  The CSV layout is `t,v<i>,v<j>,...` with one row per step;
run metadata travels in a JSON sidecar next to the CSV.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = ["VertexSeries", "write_series_csv", "read_series_csv"]

KINDS = ("quantum_probability", "quantum_phase", "classical_count")


@dataclass
class VertexSeries:
    """Time-indexed observable values at a set of recorded vertices.

    values has one row per recorded step and one column per vertex in
    recorded_vertices.  transient marks how many leading steps every
    statistic must ignore; the rows themselves are kept.
    """

    kind: str
    times: np.ndarray
    values: np.ndarray
    recorded_vertices: np.ndarray
    transient: int
    degrees: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.values.shape != (len(self.times), len(self.recorded_vertices)):
            raise ValueError("values shape does not match times x vertices")
        if not 0 <= self.transient < len(self.times):
            raise ValueError("transient must lie inside the recorded window")

    @property
    def sample_count(self) -> int:
        return len(self.times) - int(np.searchsorted(self.times, self.transient))

    def post_transient(self) -> np.ndarray:
        """View of the rows with t >= transient, as float64."""
        start = int(np.searchsorted(self.times, self.transient))
        return np.asarray(self.values[start:], dtype=float)

    def column(self, v: int) -> np.ndarray:
        """Post-transient samples at vertex v."""
        idx = np.flatnonzero(self.recorded_vertices == v)
        if idx.size == 0:
            raise KeyError(f"vertex {v} was not recorded")
        return self.post_transient()[:, idx[0]]


def _format(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_series_csv(series: VertexSeries, path) -> None:
    """Write the series and a `<path>.meta.json` sidecar atomically."""
    header = "t," + ",".join(f"v{int(v)}" for v in series.recorded_vertices)
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(header + "\n")
        for t, row in zip(series.times, series.values):
            fh.write(str(int(t)) + "," + ",".join(_format(x) for x in row) + "\n")
    os.replace(tmp, path)

    meta = dict(series.meta)
    meta["kind"] = series.kind
    meta["transient"] = int(series.transient)
    meta["recorded_vertices"] = [int(v) for v in series.recorded_vertices]
    if series.degrees is not None:
        meta["degrees"] = [int(k) for k in series.degrees]
    sidecar = f"{path}.meta.json"
    tmp = f"{sidecar}.tmp"
    with open(tmp, "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, sidecar)


def read_series_csv(path) -> VertexSeries:
    """Load a series CSV plus its sidecar back into a VertexSeries."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header[0] != "t" or any(not c.startswith("v") for c in header[1:]):
            raise ValueError(f"{path} does not look like a vertex-series CSV")
        vertices = np.array([int(c[1:]) for c in header[1:]], dtype=np.int64)
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    times = data[:, 0].astype(np.int64)
    values = data[:, 1:]

    sidecar = f"{path}.meta.json"
    meta: dict = {}
    if os.path.exists(sidecar):
        with open(sidecar) as fh:
            meta = json.load(fh)
    kind = meta.get("kind", "quantum_probability")
    transient = int(meta.get("transient", 0))
    degrees = meta.get("degrees")
    return VertexSeries(
        kind=kind, times=times, values=values, recorded_vertices=vertices,
        transient=transient,
        degrees=None if degrees is None else np.asarray(degrees, dtype=np.int64),
        meta={k: v for k, v in meta.items()
              if k not in ("kind", "transient", "recorded_vertices", "degrees")},
    )
