"""Coin blocks, shift permutation, and the one-step walk unitary U = S C.

The coin acts first (block-diagonal over vertices, each block of order
k_v), then the shift swaps every arc with its reversal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph

__all__ = [
    "TWO_PI",
    "CoinSpec",
    "WalkOperator",
    "fourier_coin",
    "grover_coin",
    "assemble_walk_operator",
    "dense_unitary",
    "DENSE_GUARD",
]

TWO_PI = 2.0 * np.pi
UNITARITY_TOL = 1e-12
DENSE_GUARD = 8192


@dataclass(frozen=True)
class CoinSpec:
    """Uniform coin family: 'fourier' with a phase parameter, or 'grover'."""

    kind: str
    theta: float = TWO_PI

    def __post_init__(self):
        if self.kind not in ("fourier", "grover"):
            raise ValueError(f"unknown coin kind {self.kind!r}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")

    @classmethod
    def fourier(cls, theta: float = TWO_PI) -> "CoinSpec":
        return cls("fourier", theta)

    @classmethod
    def grover(cls) -> "CoinSpec":
        return cls("grover", 0.0)

    def block(self, k: int) -> np.ndarray:
        if self.kind == "fourier":
            return fourier_coin(k, self.theta)
        return grover_coin(k)

    def label(self) -> str:
        if self.kind == "fourier":
            return f"fourier(theta={self.theta!r})"
        return "grover"


def fourier_coin(k: int, theta: float = TWO_PI) -> np.ndarray:
    """Order-k coin with entries exp(i*a*b*theta/k)/sqrt(k).

    For theta = 2*pi this is the discrete Fourier transform matrix and is
    unitary; other theta values generally are not, which is caught at
    operator assembly.
    """
    if k < 1:
        raise ValueError(f"coin order must be >= 1, got {k}")
    a = np.arange(k)
    return np.exp(1j * theta / k * np.outer(a, a)) / np.sqrt(k)


def grover_coin(k: int) -> np.ndarray:
    """Order-k reflection coin: diagonal (2-k)/k, off-diagonal 2/k."""
    if k < 1:
        raise ValueError(f"coin order must be >= 1, got {k}")
    return np.full((k, k), 2.0 / k) - np.eye(k)


def _unitarity_defect(b: np.ndarray) -> float:
    k = b.shape[0]
    return float(np.abs(b.conj().T @ b - np.eye(k)).max())


@dataclass(frozen=True)
class WalkOperator:
    """One-step walk unitary in factored form.

    blocks maps each degree present in the graph to its coin matrix; all
    vertices of equal degree share a block because the coin family is
    uniform.  degree_groups precomputes, per degree d, the arc indices of
    all degree-d vertices as an (m, d) matrix so a step is a handful of
    batched matrix products.
    """

    graph: Graph
    spec: CoinSpec
    blocks: dict[int, np.ndarray]
    degree_groups: list[tuple[int, np.ndarray]] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.graph.num_arcs

    @property
    def shift(self) -> np.ndarray:
        return self.graph.reversal

    def vertex_block(self, v: int) -> np.ndarray:
        return self.blocks[int(self.graph.degrees[v])]


def assemble_walk_operator(g: Graph, spec: CoinSpec) -> WalkOperator:
    """Build coin blocks for every degree and check them against the
    unitarity tolerance (1e-12 on max entry of B^dag B - I)."""
    blocks: dict[int, np.ndarray] = {}
    for k in np.unique(g.degrees):
        b = spec.block(int(k))
        defect = _unitarity_defect(b)
        if defect > UNITARITY_TOL:
            raise ValueError(
                f"coin block of order {k} is not unitary "
                f"(defect {defect:.3e} > {UNITARITY_TOL}); "
                f"the fourier coin is unitary at theta = 2*pi (the DFT)")
        b.setflags(write=False)
        blocks[int(k)] = b

    groups = []
    for k in np.unique(g.degrees):
        vids = np.flatnonzero(g.degrees == k)
        starts = g.arc_offsets[vids]
        arc_idx = (starts[:, None] + np.arange(int(k))[None, :]).astype(np.int64)
        arc_idx.setflags(write=False)
        groups.append((int(k), arc_idx))
    return WalkOperator(graph=g, spec=spec, blocks=blocks, degree_groups=groups)


def dense_unitary(op: WalkOperator, max_dim: int = DENSE_GUARD,
                  force: bool = False) -> np.ndarray:
    """Materialize U = S_dense @ C_dense on the 2E-dimensional arc space.

    Guarded at max_dim arcs; pass force=True to override for larger
    graphs at your own memory risk.
    """
    g = op.graph
    m = g.num_arcs
    if m > max_dim and not force:
        raise ValueError(
            f"dense unitary of order {m} exceeds the guard {max_dim}; "
            f"pass force=True to override")
    c = np.zeros((m, m), dtype=complex)
    for v in range(g.n):
        lo, hi = g.arc_offsets[v], g.arc_offsets[v + 1]
        c[lo:hi, lo:hi] = op.vertex_block(v)
    s = np.zeros((m, m))
    s[g.reversal, np.arange(m)] = 1.0
    return s @ c
