"""Graph families with arc-space indexing for coined walks.

An undirected graph is stored as a list of directed arcs (two per edge),
grouped contiguously by tail vertex.  The reversal permutation maps each
arc (u, v) to its opposite (v, u); it is the shift permutation of the
walk operators and must be a fixed-point-free involution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "build_ring",
    "build_periodic_lattice",
    "build_scale_free",
    "degree_histogram",
    "is_connected",
    "validate_graph",
    "save_edgelist",
    "load_edgelist",
    "graph_hash",
    "fit_power_law_exponent",
]


@dataclass(frozen=True)
class Graph:
    """Immutable arc-indexed undirected graph.

    Attributes
    ----------
    n : int
        Vertex count; vertices are labeled 0..n-1.
    arcs : (2E, 2) int array
        Directed arcs as (tail, head) rows.  Arcs with the same tail are
        contiguous; the per-vertex order is fixed by the builder.
    degrees : (n,) int array
        Undirected degree of each vertex.
    arc_offsets : (n+1,) int array
        CSR pointers: the outgoing arcs of vertex v occupy
        arcs[arc_offsets[v]:arc_offsets[v+1]].
    reversal : (2E,) int array
        Permutation sending the index of arc (u, v) to the index of (v, u).
    """

    n: int
    arcs: np.ndarray
    degrees: np.ndarray
    arc_offsets: np.ndarray
    reversal: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("arcs", "degrees", "arc_offsets", "reversal"):
            getattr(self, name).setflags(write=False)

    @property
    def num_arcs(self) -> int:
        return self.arcs.shape[0]

    @property
    def num_edges(self) -> int:
        return self.arcs.shape[0] // 2

    @property
    def tails(self) -> np.ndarray:
        return self.arcs[:, 0]

    @property
    def heads(self) -> np.ndarray:
        return self.arcs[:, 1]

    def out_arcs(self, v: int) -> np.ndarray:
        """Indices of the arcs leaving vertex v, in the builder's order."""
        return np.arange(self.arc_offsets[v], self.arc_offsets[v + 1])

    def neighbors(self, v: int) -> np.ndarray:
        return self.arcs[self.arc_offsets[v]:self.arc_offsets[v + 1], 1]


def _graph_from_arcs(n: int, arcs: np.ndarray, meta: dict | None = None) -> Graph:
    """Assemble CSR offsets and the reversal permutation from an arc list.

    The arc list must already be grouped by tail vertex.
    """
    arcs = np.asarray(arcs, dtype=np.int64)
    degrees = np.bincount(arcs[:, 0], minlength=n)
    arc_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=arc_offsets[1:])

    index = {(int(u), int(v)): a for a, (u, v) in enumerate(arcs)}
    reversal = np.empty(arcs.shape[0], dtype=np.int64)
    for a, (u, v) in enumerate(arcs):
        reversal[a] = index[(int(v), int(u))]

    return Graph(n=n, arcs=arcs, degrees=degrees, arc_offsets=arc_offsets,
                 reversal=reversal, meta=meta or {})


def _arcs_head_sorted(n: int, adjacency: list[list[int]]) -> np.ndarray:
    arcs = []
    for v in range(n):
        for u in sorted(adjacency[v]):
            arcs.append((v, u))
    return np.asarray(arcs, dtype=np.int64)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_ring(n: int) -> Graph:
    """Cycle on n >= 3 vertices.

    Outgoing arcs of each vertex are ordered (left neighbor, right
    neighbor), i.e. (v, v-1) then (v, v+1) modulo n, so the walk operator
    is exactly translation invariant and the global arc index 2v+c matches
    the interleaved minus/plus single-line convention.
    """
    if n < 3:
        raise ValueError(f"ring needs n >= 3, got {n}")
    arcs = np.empty((2 * n, 2), dtype=np.int64)
    for v in range(n):
        arcs[2 * v] = (v, (v - 1) % n)
        arcs[2 * v + 1] = (v, (v + 1) % n)
    return _graph_from_arcs(n, arcs, meta={"family": "ring", "n": n})


def build_periodic_lattice(sides: list[int]) -> Graph:
    """Torus lattice with the given side lengths (1 to 3 dimensions).

    Vertices are row-major over coordinates.  Outgoing arcs of a vertex
    are ordered by axis, minus direction before plus, so lattices of every
    dimension share the ring's translation-invariant arc layout.
    """
    sides = [int(s) for s in sides]
    d = len(sides)
    if d not in (1, 2, 3):
        raise ValueError(f"lattice dimension must be 1, 2 or 3, got {d}")
    if any(s < 3 for s in sides):
        raise ValueError(f"every side must be >= 3, got {sides}")

    n = int(np.prod(sides))
    strides = np.ones(d, dtype=np.int64)
    for a in range(d - 2, -1, -1):
        strides[a] = strides[a + 1] * sides[a + 1]

    arcs = np.empty((2 * d * n, 2), dtype=np.int64)
    coords = np.empty(d, dtype=np.int64)
    pos = 0
    for v in range(n):
        rem = v
        for a in range(d):
            coords[a], rem = divmod(rem, strides[a])
        for a in range(d):
            for step in (-1, +1):
                c = coords[a]
                u = v + ((c + step) % sides[a] - c) * strides[a]
                arcs[pos] = (v, u)
                pos += 1
    return _graph_from_arcs(n, arcs, meta={"family": "lattice", "sides": sides})


def _truncated_power_law_degrees(n: int, exponent: float, k_min: int, k_max: int,
                                 rng: np.random.Generator) -> np.ndarray:
    ks = np.arange(k_min, k_max + 1)
    pmf = ks.astype(float) ** (-exponent)
    pmf /= pmf.sum()
    cdf = np.cumsum(pmf)
    degrees = ks[np.searchsorted(cdf, rng.random(n), side="right")]
    # handshake lemma: force an even stub count by redrawing single entries
    guard = 0
    while degrees.sum() % 2 != 0:
        i = int(rng.integers(n))
        degrees[i] = ks[np.searchsorted(cdf, rng.random(), side="right")]
        guard += 1
        if guard > 10_000:
            raise RuntimeError("could not reach an even degree sum")
    return degrees


def _rewire_to_simple(edges: list[tuple[int, int]], rng: np.random.Generator,
                      max_passes: int = 200) -> list[tuple[int, int]] | None:
    """Remove self-loops and multi-edges by degree-preserving double swaps."""
    def canon(u, v):
        return (u, v) if u <= v else (v, u)

    counts = Counter(canon(u, v) for u, v in edges)
    edges = list(edges)

    def bad(i):
        u, v = edges[i]
        return u == v or counts[canon(u, v)] > 1

    for _ in range(max_passes):
        bad_idx = [i for i in range(len(edges)) if bad(i)]
        if not bad_idx:
            return edges
        for i in bad_idx:
            if not bad(i):
                continue
            u, v = edges[i]
            for _ in range(100):
                j = int(rng.integers(len(edges)))
                if j == i:
                    continue
                x, y = edges[j]
                if rng.random() < 0.5:
                    x, y = y, x
                # propose (u,x) and (v,y)
                if u == x or v == y:
                    continue
                if counts[canon(u, x)] > 0 or counts[canon(v, y)] > 0:
                    continue
                counts[canon(u, v)] -= 1
                counts[canon(x, y)] -= 1
                counts[canon(u, x)] += 1
                counts[canon(v, y)] += 1
                edges[i] = (u, x)
                edges[j] = (v, y)
                break
    return None


def build_scale_free(n: int, exponent: float = 2.3, min_degree: int = 2,
                     seed: int = 0, max_retries: int = 60) -> Graph:
    """Simple connected graph with a power-law degree distribution.

    Degrees are drawn from a discrete power law with the given exponent,
    truncated to [min_degree, sqrt(n)], and wired with a configuration
    model.  Self-loops and multi-edges are removed by degree-preserving
    rewiring; draws that cannot be made simple and connected are retried.

    Raises
    ------
    RuntimeError
        If no connected simple realization is found within max_retries.
    """
    if n < 50:
        raise ValueError(f"scale-free generation needs n >= 50, got {n}")
    if exponent <= 2:
        raise ValueError(f"exponent must be > 2, got {exponent}")
    if min_degree < 2:
        raise ValueError(f"min_degree must be >= 2, got {min_degree}")

    rng = np.random.default_rng(seed)
    k_max = max(min_degree + 1, int(round(np.sqrt(n))))

    for _ in range(max_retries):
        degrees = _truncated_power_law_degrees(n, exponent, min_degree, k_max, rng)
        stubs = np.repeat(np.arange(n), degrees)
        rng.shuffle(stubs)
        edges = [(int(stubs[i]), int(stubs[i + 1])) for i in range(0, len(stubs), 2)]
        edges = _rewire_to_simple(edges, rng)
        if edges is None:
            continue
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        g = _graph_from_arcs(n, _arcs_head_sorted(n, adjacency),
                             meta={"family": "scale_free", "n": n,
                                   "exponent": exponent, "min_degree": min_degree,
                                   "seed": seed})
        if is_connected(g):
            return g
    raise RuntimeError(
        f"no connected simple scale-free graph after {max_retries} retries "
        f"(n={n}, exponent={exponent})")


# ---------------------------------------------------------------------------
# Queries and checks
# ---------------------------------------------------------------------------

def degree_histogram(g: Graph) -> dict[int, int]:
    """Map degree -> number of vertices with that degree."""
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(k): int(c) for k, c in zip(values, counts)}


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability of every vertex from vertex 0."""
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    count = 1
    while frontier:
        nxt = []
        for v in frontier:
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    nxt.append(int(u))
        frontier = nxt
    return count == g.n


def validate_graph(g: Graph) -> None:
    """Check all structural invariants; raise ValueError on the first failure."""
    m = g.num_arcs
    if g.degrees.sum() != m:
        raise ValueError("degree sum does not equal arc count")
    if m % 2 != 0:
        raise ValueError("arc count must be even (two arcs per edge)")
    if np.any(g.degrees < 1):
        raise ValueError("every vertex must have degree >= 1")
    rev = g.reversal
    if np.any(rev[rev] != np.arange(m)):
        raise ValueError("reversal is not an involution")
    if np.any(rev == np.arange(m)):
        raise ValueError("reversal has a fixed point (self-loop)")
    if np.any(g.arcs[rev, 0] != g.arcs[:, 1]) or np.any(g.arcs[rev, 1] != g.arcs[:, 0]):
        raise ValueError("reversal does not map (u,v) to (v,u)")
    for v in range(g.n):
        lo, hi = g.arc_offsets[v], g.arc_offsets[v + 1]
        if hi - lo != g.degrees[v]:
            raise ValueError(f"offset range of vertex {v} disagrees with its degree")
        if np.any(g.arcs[lo:hi, 0] != v):
            raise ValueError(f"arc range of vertex {v} contains a foreign tail")
    if not is_connected(g):
        raise ValueError("graph is not connected")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def save_edgelist(g: Graph, path) -> None:
    """Write one 'u v' line per undirected edge, after a '# n=<n>' header."""
    lines = [f"# n={g.n}"]
    for u, v in g.arcs:
        if u < v:
            lines.append(f"{u} {v}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_edgelist(path) -> Graph:
    """Read an edge-list file written by save_edgelist and validate it.

    Arc order of the loaded graph is head-sorted per vertex, which may
    differ from a builder's order even for the same edge set.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# n="):
            raise ValueError(f"missing '# n=<n>' header in {path}")
        n = int(header[4:])
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u_s, v_s = line.split()
            u, v = int(u_s), int(v_s)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adjacency[u].append(v)
            adjacency[v].append(u)
    for v in range(n):
        if len(set(adjacency[v])) != len(adjacency[v]):
            raise ValueError(f"duplicate edge at vertex {v}")
    g = _graph_from_arcs(n, _arcs_head_sorted(n, adjacency), meta={"family": "file"})
    validate_graph(g)
    return g


def graph_hash(g: Graph) -> str:
    """Stable hex digest of the edge set (order independent of arc layout)."""
    import hashlib
    edges = sorted((int(u), int(v)) for u, v in g.arcs if u < v)
    text = f"n={g.n};" + ";".join(f"{u},{v}" for u, v in edges)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Degree-distribution fit
# ---------------------------------------------------------------------------

def fit_power_law_exponent(degrees: np.ndarray, k_min: int | None = None,
                           k_max: int | None = None) -> float:
    """Maximum-likelihood exponent of a truncated discrete power law.

    Maximizes the likelihood of P(k) proportional to k**(-a) on the
    observed support [k_min, k_max] by a golden-section style grid
    refinement over a in (1, 6).
    """
    degrees = np.asarray(degrees)
    if k_min is None:
        k_min = int(degrees.min())
    if k_max is None:
        k_max = int(degrees.max())
    sample = degrees[(degrees >= k_min) & (degrees <= k_max)]
    if sample.size < 10:
        raise ValueError("too few degrees in range to fit an exponent")
    ks = np.arange(k_min, k_max + 1, dtype=float)
    log_mean = np.log(sample).mean()

    def neg_loglik(a):
        z = np.sum(ks ** (-a))
        return a * log_mean + np.log(z)

    lo, hi = 1.05, 6.0
    for _ in range(60):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if neg_loglik(m1) < neg_loglik(m2):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)
