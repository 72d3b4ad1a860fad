"""Dense spectral analysis of the walk unitary.

The decomposition is done with a complex Schur factorization, which
returns an exactly orthonormal eigenbasis even when the spectrum is
degenerate (the Grover coin piles eigenvalues onto +-1).  Eigenphases are
grouped into degeneracy classes and all projector algebra is done per
class, so time-averaged predictions stay correct under degeneracy.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .graphs import Graph

__all__ = [
    "SpectralData",
    "eigendecompose",
    "limiting_distribution",
    "idempotent_quadratic_form",
    "class_projector",
    "eigenvector_weight_spread",
    "predicted_mean_sigma",
    "eigenphase_spacing_density",
    "offdiagonal_signal",
    "offdiagonal_from_density",
    "write_eigenphase_csv",
]

UNITARY_INPUT_TOL = 1e-10
RESIDUAL_TOL = 1e-8
DEFAULT_DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class SpectralData:
    """Sorted eigenphases in (-pi, pi], orthonormal eigenvectors (columns),
    and the partition of eigenindices into degeneracy classes."""

    eigenphases: np.ndarray
    eigenvectors: np.ndarray
    classes: list

    @property
    def dim(self) -> int:
        return self.eigenphases.size

    def class_ids(self) -> np.ndarray:
        ids = np.empty(self.dim, dtype=np.int64)
        for c, members in enumerate(self.classes):
            ids[members] = c
        return ids


def _group_circular(phases: np.ndarray, tol: float) -> list:
    """Partition sorted phases into runs closer than tol, wrapping at pi."""
    m = phases.size
    classes = []
    start = 0
    for i in range(1, m):
        if phases[i] - phases[i - 1] > tol:
            classes.append(np.arange(start, i))
            start = i
    classes.append(np.arange(start, m))
    if len(classes) > 1:
        wrap = phases[0] + 2 * np.pi - phases[-1]
        if wrap <= tol:
            classes[0] = np.concatenate([classes[-1], classes[0]])
            classes.pop()
    return classes


def eigendecompose(u: np.ndarray, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> SpectralData:
    """Eigenphases, orthonormal eigenvectors, and degeneracy classes of a
    dense unitary.

    Raises ValueError if u is not unitary to 1e-10, and a numerical error
    if the factorization residual exceeds 1e-8.
    """
    u = np.asarray(u, dtype=complex)
    m = u.shape[0]
    if u.shape != (m, m):
        raise ValueError("input must be square")
    defect = float(np.abs(u.conj().T @ u - np.eye(m)).max())
    if defect > UNITARY_INPUT_TOL:
        raise ValueError(f"input is not unitary (defect {defect:.3e})")

    t, q = linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    q = q[:, order]

    residual = float(np.abs(u @ q - q * np.exp(1j * phases)).max())
    if residual > RESIDUAL_TOL:
        raise np.linalg.LinAlgError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_TOL}")

    classes = _group_circular(phases, degeneracy_tol)
    return SpectralData(eigenphases=phases, eigenvectors=q, classes=classes)


def class_projector(sd: SpectralData, class_index: int) -> np.ndarray:
    """Dense spectral idempotent of one degeneracy class."""
    qc = sd.eigenvectors[:, sd.classes[class_index]]
    return qc @ qc.conj().T


def limiting_distribution(sd: SpectralData, x: np.ndarray, g: Graph) -> np.ndarray:
    """Long-time average of z_v(t) from initial state x, for every vertex.

    Equals sum over classes of <x| F D_v F |x> with F the class projector;
    evaluated as the per-vertex weight of each projected state, so no
    dense idempotent is ever materialized.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (sd.dim,):
        raise ValueError(f"state has shape {x.shape}, expected ({sd.dim},)")
    out = np.zeros(g.n)
    for members in sd.classes:
        qc = sd.eigenvectors[:, members]
        fx = qc @ (qc.conj().T @ x)
        out += np.add.reduceat(np.abs(fx) ** 2, g.arc_offsets[:-1])
    return out


def idempotent_quadratic_form(sd: SpectralData, x: np.ndarray, v: int,
                              g: Graph) -> float:
    """Scalar limiting value at one vertex; see limiting_distribution."""
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range")
    return float(limiting_distribution(sd, x, g)[v])


def eigenvector_weight_spread(sd: SpectralData, g: Graph, k: int) -> float:
    """Relative spread across eigenvectors of the weight a degree class
    carries: std over r of w_r = sum over arcs of degree-k vertices of
    |v_ir|^2, divided by its mean.

    The degree-averaged mean-flux derivation assumes this quantity is
    nearly independent of r; the number reported here is the diagnostic
    for how well that holds on a given graph (no validity threshold is
    implied).
    """
    sel = np.zeros(g.num_arcs, dtype=bool)
    for v in np.flatnonzero(g.degrees == k):
        sel[g.arc_offsets[v]:g.arc_offsets[v + 1]] = True
    if not sel.any():
        raise ValueError(f"no vertices of degree {k}")
    weights = (np.abs(sd.eigenvectors[sel, :]) ** 2).sum(axis=0)
    return float(weights.std() / weights.mean())


def predicted_mean_sigma(g: Graph, k: int) -> tuple[float, float]:
    """Analytic (mean, sigma) of z at a degree-k vertex: (k/2E, sqrt(k)/2E).

    The pair satisfies sigma = sqrt(mean)/sqrt(2E) identically, the
    quantum flux-fluctuation relation.
    """
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    m = g.num_arcs
    return k / m, np.sqrt(k) / m


def eigenphase_spacing_density(sd: SpectralData, bins: int = 64,
                               chunk: int = 512):
    """Density of pairwise eigenphase differences over [0, 2*pi).

    Every ordered pair (r, s) with r != s contributes (theta_s - theta_r)
    mod 2*pi, so the histogram is symmetric under omega -> 2*pi - omega
    and integrates to one.  Returns (density, bin_edges) like np.histogram.
    """
    if bins < 8:
        raise ValueError("need at least 8 bins")
    m = sd.dim
    if m < 2:
        raise ValueError("need at least two eigenphases")
    edges = np.linspace(0.0, 2 * np.pi, bins + 1)
    hist = np.zeros(bins, dtype=np.int64)
    phases = sd.eigenphases
    for lo in range(0, m, chunk):
        block = phases[lo:lo + chunk, None] - phases[None, :]
        block = np.mod(-block, 2 * np.pi)  # theta_s - theta_r for r in rows
        counts, _ = np.histogram(block, bins=edges)
        hist += counts
    # drop the r == s diagonal, which lands in bin 0 with difference 0
    hist[0] -= m
    total = m * (m - 1)
    width = edges[1] - edges[0]
    return hist / (total * width), edges


def offdiagonal_signal(sd: SpectralData, t: int) -> complex:
    """Exact pair sum over r != s of exp(i*t*(theta_s - theta_r)).

    Computed as |sum_r e^{i t theta_r}|^2 - M, which is numerically real;
    returned as complex for symmetry with the definition.
    """
    s = np.exp(1j * t * sd.eigenphases).sum()
    return complex(s.conjugate() * s - sd.dim)


def offdiagonal_from_density(sd: SpectralData, t: int, bins: int = 64):
    """Approximate the pair sum from the binned spacing density.

    Evaluates M(M-1) * integral of Omega(omega) * e^{i t omega} by the
    midpoint rule on the histogram from eigenphase_spacing_density and
    reports (exact, approximation, relative deviation).
    """
    density, edges = eigenphase_spacing_density(sd, bins=bins)
    mid = 0.5 * (edges[:-1] + edges[1:])
    width = edges[1] - edges[0]
    m = sd.dim
    approx = m * (m - 1) * np.sum(density * np.exp(1j * t * mid)) * width
    exact = offdiagonal_signal(sd, t)
    scale = max(abs(exact), 1.0)
    return exact, approx, abs(approx - exact) / scale


def write_eigenphase_csv(sd: SpectralData, path) -> None:
    """Write `r,theta_r,class_id` rows, one per eigenphase."""
    ids = sd.class_ids()
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write("r,theta_r,class_id\n")
        for r, (phase, cid) in enumerate(zip(sd.eigenphases, ids)):
            fh.write(f"{r},{float(phase)!r},{int(cid)}\n")
    os.replace(tmp, path)
