"""Experiment orchestration: INI configs, seeded runs, presets, CSV output.

Reproducibility contract: every output byte is a function of (config,
master seed).  Per-purpose RNG streams are derived from the master seed
with numpy's SeedSequence spawn keys — walk noise uses spawn key (0,),
classical walkers (1,) — so adding a stream never perturbs the others.
Output files are written to a temp name and renamed into place.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import cdyn, qdyn, spectral, xstats
from .graphs import (Graph, build_periodic_lattice, build_ring,
                     build_scale_free, graph_hash, load_edgelist,
                     save_edgelist)
from .operators import CoinSpec, TWO_PI, assemble_walk_operator, dense_unitary
from .series import VertexSeries, read_series_csv, write_series_csv

__all__ = ["ExperimentConfig", "run_experiment", "cli_main", "main", "PRESETS"]

DEFAULT_HORIZON = 100_000
DEFAULT_TRANSIENT = 2_000
SERIES_EXPORT_LIMIT = 512


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Flat description of one run; round-trips losslessly through INI text."""

    graph_family: str = "ring"
    graph_n: int = 729
    graph_sides: list[int] = field(default_factory=list)
    graph_exponent: float = 2.3
    graph_min_degree: int = 2
    graph_seed: int = 1
    graph_path: str = ""

    walk_kind: str = "quantum"
    coin: str = "fourier"
    theta: float = TWO_PI
    phase_noise: bool = False
    walkers: int = 1
    start_vertex: int = 0

    horizon: int = DEFAULT_HORIZON
    transient: int = DEFAULT_TRANSIENT
    m_values: list[float] = field(default_factory=lambda: [3.0])
    record: str = "all"
    master_seed: int = 1234

    out_dir: str = "out"

    def validate(self) -> None:
        problems = []
        if self.graph_family not in ("ring", "lattice", "scale_free", "file"):
            problems.append(f"graph.family={self.graph_family!r}")
        if self.walk_kind not in ("quantum", "classical"):
            problems.append(f"walk.kind={self.walk_kind!r}")
        if self.walk_kind == "quantum" and self.coin not in ("fourier", "grover"):
            problems.append(f"walk.coin={self.coin!r}")
        if self.horizon <= self.transient or self.transient < 0:
            problems.append("run.horizon must exceed run.transient >= 0")
        if any(m < 0 for m in self.m_values):
            problems.append("run.m values must be >= 0")
        if self.walkers < 1:
            problems.append("walk.walkers must be >= 1")
        if problems:
            raise ValueError("invalid config: " + ", ".join(problems))

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        cp["graph"] = {
            "family": self.graph_family,
            "n": str(self.graph_n),
            "sides": ",".join(str(s) for s in self.graph_sides),
            "exponent": repr(self.graph_exponent),
            "min_degree": str(self.graph_min_degree),
            "seed": str(self.graph_seed),
            "path": self.graph_path,
        }
        cp["walk"] = {
            "kind": self.walk_kind,
            "coin": self.coin,
            "theta": repr(self.theta),
            "phase_noise": "yes" if self.phase_noise else "no",
            "walkers": str(self.walkers),
            "start_vertex": str(self.start_vertex),
        }
        cp["run"] = {
            "horizon": str(self.horizon),
            "transient": str(self.transient),
            "m": ",".join(repr(m) for m in self.m_values),
            "record": self.record,
            "master_seed": str(self.master_seed),
        }
        cp["output"] = {"directory": self.out_dir}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        cp.read_string(text)
        g = cp["graph"] if cp.has_section("graph") else {}
        w = cp["walk"] if cp.has_section("walk") else {}
        r = cp["run"] if cp.has_section("run") else {}
        o = cp["output"] if cp.has_section("output") else {}
        sides = [int(s) for s in g.get("sides", "").split(",") if s.strip()]
        ms = [float(m) for m in r.get("m", "3").split(",") if m.strip()]
        cfg = cls(
            graph_family=g.get("family", "ring"),
            graph_n=int(g.get("n", "729")),
            graph_sides=sides,
            graph_exponent=float(g.get("exponent", "2.3")),
            graph_min_degree=int(g.get("min_degree", "2")),
            graph_seed=int(g.get("seed", "1")),
            graph_path=g.get("path", ""),
            walk_kind=w.get("kind", "quantum"),
            coin=w.get("coin", "fourier"),
            theta=float(w.get("theta", repr(TWO_PI))),
            phase_noise=w.get("phase_noise", "no").lower() in ("1", "true", "yes"),
            walkers=int(w.get("walkers", "1")),
            start_vertex=int(w.get("start_vertex", "0")),
            horizon=int(r.get("horizon", str(DEFAULT_HORIZON))),
            transient=int(r.get("transient", str(DEFAULT_TRANSIENT))),
            m_values=ms,
            record=r.get("record", "all"),
            master_seed=int(r.get("master_seed", "1234")),
            out_dir=o.get("directory", "out"),
        )
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_ini(fh.read())

    def config_hash(self) -> str:
        """Hash of the experiment identity: everything except where the
        output lands."""
        text = self.to_ini()
        head = text.split("[output]")[0]
        return hashlib.sha256(head.encode()).hexdigest()[:16]

    def build_graph(self) -> Graph:
        if self.graph_family == "ring":
            return build_ring(self.graph_n)
        if self.graph_family == "lattice":
            return build_periodic_lattice(self.graph_sides or [self.graph_n])
        if self.graph_family == "scale_free":
            return build_scale_free(self.graph_n, self.graph_exponent,
                                    self.graph_min_degree, self.graph_seed)
        return load_edgelist(self.graph_path)

    def coin_spec(self) -> CoinSpec:
        if self.coin == "grover":
            return CoinSpec.grover()
        return CoinSpec.fourier(self.theta)

    def recorded_vertices(self, g: Graph) -> np.ndarray:
        if self.record.strip() == "all":
            return np.arange(g.n)
        return np.asarray([int(v) for v in self.record.split(",") if v.strip()],
                          dtype=np.int64)

    def stream_seed(self, purpose: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=(purpose,))


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


class OutputSet:
    """Collects written files and materializes the manifest."""

    def __init__(self, directory, config_hash: str):
        self.directory = str(directory)
        self.config_hash = config_hash
        self.files: list[str] = []
        self.substitutions: list[str] = []
        self.started = time.monotonic()
        os.makedirs(self.directory, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.directory, name)

    def register(self, name: str) -> str:
        self.files.append(name)
        return self.path(name)

    def note_substitution(self, text: str) -> None:
        self.substitutions.append(text)

    def write_manifest(self, name: str = "manifest.json") -> dict:
        hashes = {f: _sha256_file(self.path(f)) for f in sorted(self.files)}
        content = self.config_hash + ";" + ";".join(
            f"{k}={v}" for k, v in sorted(hashes.items()))
        manifest = {
            "config_hash": self.config_hash,
            "code_version": __version__,
            "outputs": hashes,
            "substitutions": self.substitutions,
            "content_hash": hashlib.sha256(content.encode()).hexdigest(),
            "wall_time_s": round(time.monotonic() - self.started, 3),
        }
        tmp = self.path(name) + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, self.path(name))
        return manifest


# ---------------------------------------------------------------------------
# Single experiments
# ---------------------------------------------------------------------------

def _quantum_series(cfg: ExperimentConfig, g: Graph, vertices: np.ndarray) -> VertexSeries:
    op = assemble_walk_operator(g, cfg.coin_spec())
    state = qdyn.localized_state(g, cfg.start_vertex)
    noise = np.random.default_rng(cfg.stream_seed(0)) if cfg.phase_noise else None
    return qdyn.evolve_record(op, state, cfg.horizon, cfg.transient,
                              vertices=vertices, phase_noise=noise)


def _classical_series(cfg: ExperimentConfig, g: Graph) -> VertexSeries:
    seed = cfg.stream_seed(1)
    return cdyn.simulate_crw(g, cfg.walkers, cfg.horizon, cfg.transient,
                             start_vertex=cfg.start_vertex,
                             seed=np.random.default_rng(seed).integers(2 ** 63))


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Run one configured walk and write series/moments/EE CSV artifacts.

    Returns the manifest dict.  Full series export is skipped (with a
    manifest note) when more than SERIES_EXPORT_LIMIT vertices are
    recorded, to keep artifacts reviewable.
    """
    cfg.validate()
    g = cfg.build_graph()
    out = OutputSet(out_dir or cfg.out_dir, cfg.config_hash())
    save_edgelist(g, out.register("graph.edges"))

    vertices = cfg.recorded_vertices(g)
    if cfg.walk_kind == "quantum":
        series = _quantum_series(cfg, g, vertices)
    else:
        series = _classical_series(cfg, g)
        if vertices.size != g.n:
            keep = np.searchsorted(series.recorded_vertices, vertices)
            series = VertexSeries(kind=series.kind, times=series.times,
                                  values=series.values[:, keep],
                                  recorded_vertices=vertices,
                                  transient=series.transient,
                                  degrees=g.degrees[vertices],
                                  meta=series.meta)
    series.meta.update({"graph_hash": graph_hash(g),
                        "coin": cfg.coin if cfg.walk_kind == "quantum" else "",
                        "seed": cfg.master_seed})

    if vertices.size <= SERIES_EXPORT_LIMIT:
        write_series_csv(series, out.register("series.csv"))
    else:
        out.note_substitution(
            f"series export skipped: {vertices.size} recorded vertices exceed "
            f"limit {SERIES_EXPORT_LIMIT}")

    mt = xstats.series_moments(series)
    xstats.write_moments_csv(mt, out.register("moments.csv"))
    for m in cfg.m_values:
        report = xstats.ee_detect(series, m)
        xstats.write_ee_csv(report, out.register(f"ee_m{m:g}.csv"))
    return out.write_manifest()


# ---------------------------------------------------------------------------
# Presets reproducing the published tables and figures at desk scale
# ---------------------------------------------------------------------------

LATTICE_SIDES = {1: [729], 2: [27, 27], 3: [9, 9, 9]}
SF_SEED = 7
SF_N = 1000


def _lattice_op(dim: int, coin: CoinSpec):
    g = build_periodic_lattice(LATTICE_SIDES[dim])
    return g, assemble_walk_operator(g, coin)


def _scan_quantum_moments(g, op, horizon, transient, state=None):
    state = qdyn.localized_state(g, 0) if state is None else state
    mean, sigma, count = qdyn.evolve_moments(op, state, horizon, transient)
    return xstats.moments_from_arrays(np.arange(g.n), g.degrees, mean, sigma, count)


def preset_table1(out_dir, horizon=DEFAULT_HORIZON, transient=DEFAULT_TRANSIENT,
                  master_seed=1234) -> dict:
    """Mean and standard deviation of the flux on 1D/2D/3D periodic
    lattices of 729 vertices, classical (one walker) and quantum (Fourier
    coin, localized start)."""
    out = OutputSet(out_dir, f"table1-{horizon}-{transient}-{master_seed}")
    summary = []
    for dim in (1, 2, 3):
        g, op = _lattice_op(dim, CoinSpec.fourier())
        seed = np.random.default_rng(
            np.random.SeedSequence(master_seed, spawn_key=(dim,))).integers(2 ** 63)
        cl = cdyn.simulate_crw(g, 1, horizon, transient, start_vertex=0, seed=seed)
        mt_c = xstats.series_moments(cl)
        xstats.write_moments_csv(mt_c, out.register(f"moments_lattice_{dim}d_classical.csv"))
        mt_q = _scan_quantum_moments(g, op, horizon, transient)
        xstats.write_moments_csv(mt_q, out.register(f"moments_lattice_{dim}d_quantum.csv"))
        summary.append((dim, "classical", mt_c.mean.mean(), mt_c.sigma.mean()))
        summary.append((dim, "quantum", mt_q.mean.mean(), mt_q.sigma.mean()))
    path = out.register("table1_summary.csv")
    xstats._write_rows(path, "dim,kind,mean_flux,sigma_flux",
                       ((str(d), kind, repr(float(mu)), repr(float(s)))
                        for d, kind, mu, s in summary))
    return out.write_manifest()


def preset_table2(out_dir, horizon=DEFAULT_HORIZON, transient=DEFAULT_TRANSIENT,
                  master_seed=1234, m=3.0, walkers=100) -> dict:
    """Extreme-event probabilities at threshold m on the 729-vertex
    lattices: quantum (Fourier), classical (100 walkers), and the exact
    Binomial oracle for the classical thresholds."""
    out = OutputSet(out_dir, f"table2-{horizon}-{transient}-{master_seed}")
    summary = []
    for dim in (1, 2, 3):
        g, op = _lattice_op(dim, CoinSpec.fourier())
        state = qdyn.localized_state(g, 0)
        mean, sigma, count = qdyn.evolve_moments(op, state, horizon, transient)
        thresholds = mean + m * sigma
        scan = qdyn.evolve_exceedance(op, state, horizon, transient, thresholds)
        report = xstats.EEReport(vertices=np.arange(g.n), degrees=g.degrees,
                                 threshold=thresholds,
                                 count=scan["counts"][0],
                                 probability=scan["counts"][0] / scan["sample_count"],
                                 m=m, sample_count=scan["sample_count"])
        xstats.write_ee_csv(report, out.register(f"ee_lattice_{dim}d.csv"))

        seed = np.random.default_rng(
            np.random.SeedSequence(master_seed, spawn_key=(10 + dim,))).integers(2 ** 63)
        cl = cdyn.simulate_crw(g, walkers, horizon, transient, 0, seed)
        cl_report = xstats.ee_detect(cl, m)
        xstats.write_ee_csv(cl_report, out.register(f"ee_lattice_{dim}d_classical.csv"))

        p = g.degrees / g.num_arcs
        oracle = cdyn.binomial_exceedance(walkers, p, cl_report.threshold)
        xstats._write_rows(out.register(f"ee_lattice_{dim}d_oracle.csv"),
                           "v,k,q,F_oracle",
                           ((str(v), str(int(k)), repr(float(q)), repr(float(f)))
                            for v, (k, q, f) in enumerate(
                                zip(g.degrees, cl_report.threshold, oracle))))
        summary.append((dim, report.probability.mean(),
                        cl_report.probability.mean(), float(oracle.mean())))
    xstats._write_rows(out.register("table2_summary.csv"),
                       "dim,F_quantum,F_classical,F_oracle",
                       ((str(d), repr(float(fq)), repr(float(fc)), repr(float(fo)))
                        for d, fq, fc, fo in summary))
    return out.write_manifest()


def preset_fig2(out_dir, horizon=DEFAULT_HORIZON, transient=DEFAULT_TRANSIENT,
                master_seed=1234) -> dict:
    """Flux-fluctuation scatter on the 1000-vertex scale-free graph for
    the Fourier and Grover coins, walker initially on vertex 0."""
    out = OutputSet(out_dir, f"fig2-{horizon}-{transient}-{master_seed}")
    g = build_scale_free(SF_N, seed=SF_SEED)
    rows = []
    for coin_name, coin in (("fourier", CoinSpec.fourier()), ("grover", CoinSpec.grover())):
        op = assemble_walk_operator(g, coin)
        mt = _scan_quantum_moments(g, op, horizon, transient)
        xstats.write_moments_csv(mt, out.register(f"moments_sf_{coin_name}.csv"))
        fit = xstats.flux_fluctuation_fit(mt)
        rows.append((coin_name, fit.slope, 1.0 / np.sqrt(g.num_arcs),
                     fit.r_squared, fit.rel_residual))
    xstats._write_rows(out.register("fig2_fits.csv"),
                       "coin,slope,predicted_slope,r_squared,rel_residual",
                       ((c, repr(float(s)), repr(float(p)), repr(float(r)),
                         repr(float(rr))) for c, s, p, r, rr in rows))
    return out.write_manifest()


def preset_fig3(out_dir, horizon=DEFAULT_HORIZON, transient=DEFAULT_TRANSIENT,
                master_seed=1234, m_values=(0.0, 1.0, 2.0, 3.0)) -> dict:
    """Extreme-event probability versus degree on the scale-free graph for
    several thresholds, with power-law fits and the scaling collapse."""
    out = OutputSet(out_dir, f"fig3-{horizon}-{transient}-{master_seed}")
    g = build_scale_free(SF_N, seed=SF_SEED)
    op = assemble_walk_operator(g, CoinSpec.fourier())
    state = qdyn.localized_state(g, 0)
    mean, sigma, count = qdyn.evolve_moments(op, state, horizon, transient)
    thresholds = np.stack([mean + m * sigma for m in m_values])
    scan = qdyn.evolve_exceedance(op, state, horizon, transient, thresholds)

    profiles = []
    for r, m in enumerate(m_values):
        report = xstats.EEReport(vertices=np.arange(g.n), degrees=g.degrees,
                                 threshold=thresholds[r], count=scan["counts"][r],
                                 probability=scan["counts"][r] / scan["sample_count"],
                                 m=m, sample_count=scan["sample_count"])
        xstats.write_ee_csv(report, out.register(f"ee_sf_m{m:g}.csv"))
        profiles.append(xstats.degree_profile(report))
    xstats.write_profile_csv(profiles, out.register("fig3_profiles.csv"))
    spread = xstats.scaling_collapse(profiles)
    xstats._write_rows(out.register("fig3_gamma.csv"),
                       "m,gamma,log_amplitude,collapse_spread",
                       ((f"{p.m:g}", repr(p.gamma), repr(p.log_amplitude),
                         repr(float(spread))) for p in profiles))
    return out.write_manifest()


def _correlation_run(g, coin, horizon, transient, phase_noise=None):
    op = assemble_walk_operator(g, coin)
    state = qdyn.localized_state(g, 0)
    return qdyn.evolve_record(op, state, horizon, transient,
                              record_phase=True, phase_noise=phase_noise)


def _path2_vertex(g) -> int:
    """A vertex at shortest-path distance exactly 2 from vertex 0."""
    first = set(int(u) for u in g.neighbors(0))
    for v in sorted(first):
        for u in g.neighbors(v):
            u = int(u)
            if u != 0 and u not in first:
                return u
    raise RuntimeError("no distance-2 vertex from 0")


def preset_fig45(out_dir, horizon=20_000, transient=DEFAULT_TRANSIENT,
                 master_seed=1234, tau_max=200) -> dict:
    """Correlation profiles of z and of the vertex phase on a 100-vertex
    scale-free graph and a 100-vertex ring."""
    out = OutputSet(out_dir, f"fig45-{horizon}-{transient}-{master_seed}")
    sf = build_scale_free(100, seed=SF_SEED)
    ring = build_ring(100)
    z_sf, th_sf = _correlation_run(sf, CoinSpec.fourier(), horizon, transient)
    z_ring, th_ring = _correlation_run(ring, CoinSpec.fourier(), horizon, transient)

    sf_pair2 = _path2_vertex(sf)
    panels = {
        "fig4_a": (z_sf, 0, int(sf.neighbors(0)[0])),
        "fig4_b": (z_sf, 0, sf_pair2),
        "fig4_c": (z_sf, 0, 0),
        "fig4_d": (z_ring, 0, 1),
        "fig4_e": (z_ring, 0, 2),
        "fig4_f": (z_ring, 0, 0),
        "fig5_a": (th_sf, 0, int(sf.neighbors(0)[0])),
        "fig5_b": (th_sf, 0, 0),
        "fig5_c": (th_ring, 0, 1),
        "fig5_d": (th_ring, 0, 0),
    }
    for name, (series, i, j) in panels.items():
        prof = xstats.cross_correlation(series, i, j, tau_max)
        xstats.write_correlation_csv(prof, out.register(f"{name}.csv"))
    return out.write_manifest()


def preset_si_recurrence(out_dir, horizon=DEFAULT_HORIZON,
                         transient=DEFAULT_TRANSIENT, master_seed=1234,
                         m=3.0) -> dict:
    """Recurrence-time statistics of extreme events on the scale-free
    graph for the Fourier coin, the Fourier coin with per-step phase
    randomization, and the Grover coin."""
    out = OutputSet(out_dir, f"si-rec-{horizon}-{transient}-{master_seed}")
    g = build_scale_free(SF_N, seed=SF_SEED)
    degree_11 = int(np.argmin(np.abs(g.degrees - 11)))
    variants = [
        ("fourier", CoinSpec.fourier(), None),
        ("phase_noise", CoinSpec.fourier(),
         np.random.SeedSequence(master_seed, spawn_key=(20,))),
        ("grover", CoinSpec.grover(), None),
    ]
    for label, coin, noise_seed in variants:
        op = assemble_walk_operator(g, coin)
        state = qdyn.localized_state(g, 0)
        noise = (None if noise_seed is None
                 else np.random.default_rng(noise_seed))
        mean, sigma, count = qdyn.evolve_moments(op, state, horizon, transient,
                                                 phase_noise=noise)
        noise = (None if noise_seed is None
                 else np.random.default_rng(noise_seed))
        scan = qdyn.evolve_exceedance(op, state, horizon, transient,
                                      mean + m * sigma, phase_noise=noise,
                                      track_vertices=[degree_11])
        records = []
        for v in range(g.n):
            cnt = int(scan["counts"][0][v])
            if cnt >= 2:
                mean_rec = (scan["last"][0][v] - scan["first"][0][v]) / (cnt - 1)
                records.append(xstats.VertexRecurrence(
                    vertex=v, degree=int(g.degrees[v]), intervals=np.empty(0),
                    mean_recurrence=float(mean_rec), rate=1.0 / mean_rec,
                    chi2_pvalue=None, sufficient=cnt >= 10))
        xstats.write_recurrence_csv(records, out.register(f"recurrence_{label}.csv"))

        events = scan["events"][degree_11][0]
        rec = xstats.recurrence_from_events(degree_11, int(g.degrees[degree_11]),
                                            events)
        intervals = rec.intervals
        if intervals.size:
            edges = np.unique(np.quantile(intervals, np.linspace(0, 1, 13)).astype(int))
            hist, edges = np.histogram(intervals, bins=np.append(edges, edges[-1] + 1))
            lam = rec.rate if rec.rate else 0.0
            expected = intervals.size * (np.exp(-lam * (edges[:-1] - 1))
                                         - np.exp(-lam * (edges[1:] - 1)))
            xstats._write_rows(out.register(f"rec_hist_{label}.csv"),
                               "bin_lo,bin_hi,count,expected",
                               ((str(int(lo)), str(int(hi)), str(int(c)),
                                 repr(float(e)))
                                for lo, hi, c, e in zip(edges[:-1], edges[1:],
                                                        hist, expected)))
    return out.write_manifest()


PRESETS = {
    "table1": preset_table1,
    "table2": preset_table2,
    "fig2": preset_fig2,
    "fig3": preset_fig3,
    "fig45": preset_fig45,
    "si-recurrence": preset_si_recurrence,
}


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _default_out() -> str:
    return os.environ.get("ARCWALK_OUT", "out")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcwalk",
        description="Quantum and classical walks on graphs with extreme-event statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="build a graph and save its edge list")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=None, help="edge-list path (default <dir>/graph.edges)")

    for name in ("run-quantum", "run-classical"):
        p = sub.add_parser(name, help=f"{name.split('-')[1]} walk from a config file")
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, help="override run.master_seed")
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("analyze", help="extreme-event analysis of a series CSV")
    p.add_argument("--series", required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--out", default=None, help="EE CSV path (default ee_m<m>.csv)")

    p = sub.add_parser("spectral", help="eigenphase export for the configured walk unitary")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=None, help="CSV path (default <dir>/eigenphases.csv)")

    p = sub.add_parser("preset", help="run a published-figure pipeline")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--transient", type=int, default=None)
    return parser


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.master_seed = args.seed
        cfg.graph_seed = args.seed if cfg.graph_family == "scale_free" else cfg.graph_seed
    if getattr(args, "out", None):
        cfg.out_dir = args.out
    cfg.validate()
    return cfg


def cli_main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "graph":
            cfg = _load_config(args)
            g = cfg.build_graph()
            path = args.out or os.path.join(cfg.out_dir, "graph.edges")
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            save_edgelist(g, path)
            print(f"wrote {path} ({g.n} vertices, {g.num_edges} edges)")
        elif args.command in ("run-quantum", "run-classical"):
            cfg = _load_config(args)
            cfg.walk_kind = "quantum" if args.command == "run-quantum" else "classical"
            manifest = run_experiment(cfg)
            print(f"wrote {len(manifest['outputs'])} files to {cfg.out_dir} "
                  f"(content {manifest['content_hash'][:12]})")
        elif args.command == "analyze":
            series = read_series_csv(args.series)
            report = xstats.ee_detect(series, args.m)
            path = args.out or f"ee_m{args.m:g}.csv"
            xstats.write_ee_csv(report, path)
            print(f"wrote {path}")
        elif args.command == "spectral":
            cfg = _load_config(args)
            g = cfg.build_graph()
            op = assemble_walk_operator(g, cfg.coin_spec())
            sd = spectral.eigendecompose(dense_unitary(op))
            path = args.out or os.path.join(cfg.out_dir, "eigenphases.csv")
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            spectral.write_eigenphase_csv(sd, path)
            print(f"wrote {path} ({sd.dim} eigenphases, "
                  f"{len(sd.classes)} degeneracy classes)")
        elif args.command == "preset":
            kwargs = {"master_seed": args.seed}
            if args.horizon is not None:
                kwargs["horizon"] = args.horizon
            if args.transient is not None:
                kwargs["transient"] = args.transient
            out_dir = args.out or _default_out()
            manifest = PRESETS[args.name](out_dir, **kwargs)
            print(f"preset {args.name}: {len(manifest['outputs'])} files in "
                  f"{out_dir} (content {manifest['content_hash'][:12]})")
        return 0
    except (ValueError, OSError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
