"""Classical random-walk ensembles and their analytic baselines.

W non-interacting walkers hop synchronously to uniformly random
neighbors.  The stationary occupation of a vertex is Binomial(W, k/2E),
which gives the classical flux-fluctuation relation sigma = sqrt(mean)
for k << 2E and an exact exceedance oracle.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .graphs import Graph
from .series import VertexSeries

__all__ = ["simulate_crw", "stationary_mean", "binomial_exceedance"]


def _count_dtype(walkers: int):
    for dt in (np.uint8, np.uint16, np.uint32):
        if walkers <= np.iinfo(dt).max:
            return dt
    return np.int64


def simulate_crw(g: Graph, walkers: int, horizon: int, transient: int = 0,
                 start_vertex: int = 0, seed: int = 0) -> VertexSeries:
    """Per-vertex walker counts w_i(t) for t in [0, horizon).

    All walkers start on start_vertex at t=0 and the total count is
    conserved exactly at every step.
    """
    if walkers < 1:
        raise ValueError("need at least one walker")
    if not horizon > transient >= 0:
        raise ValueError("need horizon > transient >= 0")
    if not 0 <= start_vertex < g.n:
        raise IndexError(f"start vertex {start_vertex} out of range")

    rng = np.random.default_rng(seed)
    heads = g.heads
    offsets = g.arc_offsets
    degrees = g.degrees

    counts = np.empty((horizon, g.n), dtype=_count_dtype(walkers))
    positions = np.full(walkers, start_vertex, dtype=np.int64)
    counts[0] = np.bincount(positions, minlength=g.n)
    for t in range(1, horizon):
        picks = (rng.random(walkers) * degrees[positions]).astype(np.int64)
        positions = heads[offsets[positions] + picks]
        counts[t] = np.bincount(positions, minlength=g.n)

    return VertexSeries(
        kind="classical_count",
        times=np.arange(horizon, dtype=np.int64),
        values=counts,
        recorded_vertices=np.arange(g.n),
        transient=transient,
        degrees=degrees.copy(),
        meta={"walkers": walkers, "seed": seed, "start_vertex": start_vertex},
    )


def stationary_mean(g: Graph, walkers: int) -> np.ndarray:
    """Stationary expected counts W * k_i / 2E; sums to W exactly."""
    return walkers * g.degrees / g.num_arcs


def binomial_exceedance(walkers: int, p, q):
    """Exact P(w > q) for w ~ Binomial(walkers, p), strict on integers.

    Accepts scalar or array p and q (broadcast together).
    """
    if walkers < 1:
        raise ValueError("need at least one walker")
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("p must lie in [0, 1]")
    out = stats.binom.sf(np.floor(q), walkers, p)
    if np.ndim(out) == 0:
        return float(out)
    return out
