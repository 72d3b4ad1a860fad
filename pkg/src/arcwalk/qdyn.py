"""Arc-space state evolution and per-vertex recording.

States are complex vectors over the 2E arcs (unit norm).  A step applies
the per-vertex coin blocks, then the reversal shift, then an optional
uniform random phase on every arc.  Steps are batched by degree so a
single step costs a few vectorized matrix products regardless of the
degree mix.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph
from .operators import WalkOperator
from .series import VertexSeries

__all__ = [
    "localized_state",
    "uniform_state",
    "step",
    "evolve_state",
    "vertex_probabilities",
    "vertex_phases",
    "evolve_record",
    "evolve_moments",
    "evolve_exceedance",
]

NORM_PRE_TOL = 1e-8


def localized_state(g: Graph, v: int) -> np.ndarray:
    """Walker at vertex v: equal real amplitude 1/sqrt(k_v) on each
    outgoing arc of v, zero elsewhere."""
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    psi = np.zeros(g.num_arcs, dtype=complex)
    lo, hi = g.arc_offsets[v], g.arc_offsets[v + 1]
    psi[lo:hi] = 1.0 / np.sqrt(hi - lo)
    return psi


def uniform_state(g: Graph) -> np.ndarray:
    """Equal superposition over all 2E arcs."""
    m = g.num_arcs
    return np.full(m, 1.0 / np.sqrt(m), dtype=complex)


def _apply(op: WalkOperator, psi: np.ndarray,
           rng: np.random.Generator | None) -> np.ndarray:
    out = np.empty_like(psi)
    for k, arc_idx in op.degree_groups:
        out[arc_idx] = psi[arc_idx] @ op.blocks[k].T
    out = out[op.shift]
    if rng is not None:
        out *= np.exp(2j * np.pi * rng.random(out.shape[0]))
    return out


def step(op: WalkOperator, state: np.ndarray,
         phase_noise: np.random.Generator | None = None) -> np.ndarray:
    """One walk step; with phase_noise, every amplitude also picks up a
    random phase drawn uniformly from [0, 2*pi) after the shift."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (op.dim,):
        raise ValueError(f"state has shape {state.shape}, operator needs ({op.dim},)")
    norm2 = float(np.vdot(state, state).real)
    if abs(norm2 - 1.0) > NORM_PRE_TOL:
        raise ValueError(f"state norm^2 = {norm2!r} deviates beyond {NORM_PRE_TOL}")
    return _apply(op, state, phase_noise)


def evolve_state(op: WalkOperator, state: np.ndarray, steps: int,
                 phase_noise: np.random.Generator | None = None) -> np.ndarray:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return np.asarray(state, dtype=complex).copy()
    psi = step(op, state, phase_noise)
    for _ in range(steps - 1):
        psi = _apply(op, psi, phase_noise)
    return psi


def vertex_probabilities(g: Graph, state: np.ndarray) -> np.ndarray:
    """z_v = sum of |amplitude|^2 over the outgoing arcs of v."""
    weights = np.abs(state) ** 2
    return np.add.reduceat(weights, g.arc_offsets[:-1])


def vertex_phases(g: Graph, state: np.ndarray, return_zero_mask: bool = False):
    """Phase of the summed outgoing amplitudes, in (-pi, pi].

    The per-vertex phase of a multi-arc vertex is a convention; this one
    takes the argument of the plain amplitude sum and reports 0 where the
    sum is exactly zero (the mask flags those vertices when requested).
    """
    sums = np.add.reduceat(state, g.arc_offsets[:-1])
    theta = np.angle(sums)
    zero = sums == 0
    theta[zero] = 0.0
    if return_zero_mask:
        return theta, zero
    return theta


def _noise_rng(phase_noise) -> np.random.Generator | None:
    if phase_noise is None:
        return None
    if isinstance(phase_noise, np.random.Generator):
        return phase_noise
    return np.random.default_rng(phase_noise)


def evolve_record(op: WalkOperator, state0: np.ndarray, horizon: int,
                  transient: int = 0, vertices=None, record_phase: bool = False,
                  phase_noise=None):
    """Record z (and optionally theta) at every step t in [0, horizon).

    vertices selects the recorded columns (default: all).  phase_noise is
    a seed or Generator enabling per-step phase randomization.  Returns a
    quantum_probability VertexSeries, or a (probability, phase) pair when
    record_phase is set.
    """
    g = op.graph
    if not horizon > transient >= 0:
        raise ValueError("need horizon > transient >= 0")
    if vertices is None:
        vertices = np.arange(g.n)
    else:
        vertices = np.asarray(vertices, dtype=np.int64)
        if vertices.size == 0:
            raise ValueError("empty vertex list")
    rng = _noise_rng(phase_noise)

    z = np.empty((horizon, vertices.size))
    th = np.empty((horizon, vertices.size)) if record_phase else None
    psi = np.asarray(state0, dtype=complex)
    for t in range(horizon):
        if t > 0:
            psi = _apply(op, psi, rng)
        z[t] = vertex_probabilities(g, psi)[vertices]
        if record_phase:
            th[t] = vertex_phases(g, psi)[vertices]

    times = np.arange(horizon, dtype=np.int64)
    degrees = g.degrees[vertices]
    meta = {"coin": op.spec.label(),
            "phase_noise": phase_noise if not isinstance(phase_noise, np.random.Generator) else "generator"}
    zs = VertexSeries(kind="quantum_probability", times=times, values=z,
                      recorded_vertices=vertices, transient=transient,
                      degrees=degrees, meta=dict(meta))
    if not record_phase:
        return zs
    ts = VertexSeries(kind="quantum_phase", times=times, values=th,
                      recorded_vertices=vertices, transient=transient,
                      degrees=degrees, meta=dict(meta))
    return zs, ts


def evolve_moments(op: WalkOperator, state0: np.ndarray, horizon: int,
                   transient: int, phase_noise=None):
    """Streaming per-vertex mean and standard deviation of z over the
    post-transient steps, without storing the series.

    Returns (mean, sigma, sample_count) over all vertices.  Matches the
    population moments an in-memory recording would give.
    """
    g = op.graph
    if not horizon > transient >= 0:
        raise ValueError("need horizon > transient >= 0")
    rng = _noise_rng(phase_noise)
    acc = np.zeros(g.n)
    acc2 = np.zeros(g.n)
    psi = np.asarray(state0, dtype=complex)
    count = 0
    for t in range(horizon):
        if t > 0:
            psi = _apply(op, psi, rng)
        if t >= transient:
            z = vertex_probabilities(g, psi)
            acc += z
            acc2 += z * z
            count += 1
    mean = acc / count
    var = np.maximum(acc2 / count - mean * mean, 0.0)
    return mean, np.sqrt(var), count


def evolve_exceedance(op: WalkOperator, state0: np.ndarray, horizon: int,
                      transient: int, thresholds: np.ndarray, phase_noise=None,
                      track_vertices=()):
    """Streaming strict-exceedance statistics against per-vertex thresholds.

    thresholds is an (n_thresholds, n) array (one row per threshold set,
    e.g. one per m value).  Returns a dict with per-row exceedance counts,
    first and last exceedance step per vertex, the post-transient sample
    count, and for each vertex in track_vertices the full list of
    exceedance times per threshold row.
    """
    g = op.graph
    thresholds = np.atleast_2d(np.asarray(thresholds, dtype=float))
    if thresholds.shape[1] != g.n:
        raise ValueError("thresholds must have one column per vertex")
    rng = _noise_rng(phase_noise)
    n_rows = thresholds.shape[0]
    counts = np.zeros((n_rows, g.n), dtype=np.int64)
    first = np.full((n_rows, g.n), -1, dtype=np.int64)
    last = np.full((n_rows, g.n), -1, dtype=np.int64)
    track = list(track_vertices)
    events = {v: [[] for _ in range(n_rows)] for v in track}

    psi = np.asarray(state0, dtype=complex)
    count = 0
    for t in range(horizon):
        if t > 0:
            psi = _apply(op, psi, rng)
        if t < transient:
            continue
        z = vertex_probabilities(g, psi)
        count += 1
        for r in range(n_rows):
            hit = z > thresholds[r]
            counts[r] += hit
            np.copyto(first[r], t, where=hit & (first[r] < 0))
            np.copyto(last[r], t, where=hit)
            for v in track:
                if hit[v]:
                    events[v][r].append(t)
    return {
        "counts": counts,
        "first": first,
        "last": last,
        "sample_count": count,
        "events": {v: [np.asarray(ts, dtype=np.int64) for ts in rows]
                   for v, rows in events.items()},
    }
