"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line (run with -s to see them alongside green results).

Two sub-criteria assert published fit values that the implementation
cannot reproduce under any defensible reading of the procedure; they are
kept faithful and fail honestly rather than being loosened:

* the Fig. 3 exponent band gamma_m = 0.17 - 0.09 m (+-0.10) — measured
  exponents match the Gamma(k) chaotic-amplitude statistics instead
  (about 0.06, 0.03, -0.14, -0.43 for m = 0..3, robust to the graph
  generator, the initial state, and the fit style);
* the chi-squared exponentiality of raw recurrence intervals — the
  period-2 autocorrelation of z clusters exceedances at short intervals
  (dozens of intervals of exactly 2 against a few expected), which any
  well-powered test detects; the interval tail and the renewal identity
  are exponential/clean and are asserted separately.
"""

import time

import numpy as np
import pytest

from arcwalk import cdyn, qdyn, xstats
from arcwalk.graphs import build_periodic_lattice, build_ring, build_scale_free
from arcwalk.operators import CoinSpec, assemble_walk_operator, dense_unitary
from arcwalk.qdyn import _apply
from arcwalk.spectral import (eigendecompose, eigenphase_spacing_density,
                              limiting_distribution, offdiagonal_signal)


HORIZON = 100_000
TRANSIENT = 2_000
SF_SEED = 7
M_VALUES = (0.0, 1.0, 2.0, 3.0)
LATTICES = {1: [729], 2: [27, 27], 3: [9, 9, 9]}


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------------------
# shared heavy runs
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def sf1000():
    return build_scale_free(1000, 2.3, 2, seed=SF_SEED)


def quantum_scan(g, spec, m_values, noise_seed=None, track=()):
    op = assemble_walk_operator(g, spec)
    state = qdyn.localized_state(g, 0)
    noise = None if noise_seed is None else np.random.default_rng(noise_seed)
    mean, sigma, count = qdyn.evolve_moments(op, state, HORIZON, TRANSIENT,
                                             phase_noise=noise)
    thresholds = np.stack([mean + m * sigma for m in m_values])
    noise = None if noise_seed is None else np.random.default_rng(noise_seed)
    scan = qdyn.evolve_exceedance(op, state, HORIZON, TRANSIENT, thresholds,
                                  phase_noise=noise, track_vertices=track)
    scan.update(mean=mean, sigma=sigma, thresholds=thresholds,
                probability=scan["counts"] / scan["sample_count"])
    return scan


@pytest.fixture(scope="module")
def deg11_vertices(sf1000):
    return [int(v) for v in np.flatnonzero(sf1000.degrees == 11)[:3]]


@pytest.fixture(scope="module")
def sf_fourier(sf1000, deg11_vertices):
    return quantum_scan(sf1000, CoinSpec.fourier(), M_VALUES,
                        track=deg11_vertices)


@pytest.fixture(scope="module")
def sf_grover(sf1000, deg11_vertices):
    return quantum_scan(sf1000, CoinSpec.grover(), (3.0,),
                        track=deg11_vertices)


@pytest.fixture(scope="module")
def sf_noise(sf1000, deg11_vertices):
    return quantum_scan(sf1000, CoinSpec.fourier(), (3.0,), noise_seed=99,
                        track=deg11_vertices)


@pytest.fixture(scope="module")
def lattice_quantum():
    out = {}
    for dim, sides in LATTICES.items():
        g = build_periodic_lattice(sides)
        out[dim] = (g, quantum_scan(g, CoinSpec.fourier(), (3.0,)))
    return out


def profile_report(g, scan, row, m):
    return xstats.EEReport(
        vertices=np.arange(g.n), degrees=g.degrees,
        threshold=scan["thresholds"][row], count=scan["counts"][row],
        probability=scan["probability"][row], m=m,
        sample_count=scan["sample_count"])


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_unitarity_and_conservation(sf1000):
    """10^4 steps on ring 729 and the scale-free graph keep the norm and
    the vertex-probability sum within 1e-9 at every step, under a minute."""
    for label, g in (("ring n=729", build_ring(729)), ("SF n=1000", sf1000)):
        op = assemble_walk_operator(g, CoinSpec.fourier())
        psi = qdyn.localized_state(g, 0)
        started = time.monotonic()
        worst_norm = worst_sum = 0.0
        for _ in range(10_000):
            psi = _apply(op, psi, None)
            worst_norm = max(worst_norm, abs(np.vdot(psi, psi).real - 1))
            worst_sum = max(worst_sum,
                            abs(qdyn.vertex_probabilities(g, psi).sum() - 1))
        elapsed = time.monotonic() - started
        report(f"unitarity/conservation on {label}",
               worst_norm <= 1e-9 and worst_sum <= 1e-9 and elapsed < 60,
               f"max norm err {worst_norm:.2e}, max sum err {worst_sum:.2e}, "
               f"{elapsed:.1f}s")


def test_oracle_equivalence(sf20):
    """On every test graph with 2E <= 64, twenty sparse steps match the
    dense power U^t to 1e-10 and z matches the projector quadratic form
    to 1e-12."""
    graphs = [build_ring(n) for n in range(3, 9)] + [sf20]
    worst_state, worst_z = 0.0, 0.0
    for g in graphs:
        assert g.num_arcs <= 64
        offsets = g.arc_offsets
        for spec in (CoinSpec.fourier(), CoinSpec.grover()):
            op = assemble_walk_operator(g, spec)
            u = dense_unitary(op)
            x = qdyn.localized_state(g, 0)
            sparse = x.copy()
            dense = x.copy()
            for _ in range(20):
                sparse = _apply(op, sparse, None)
                dense = u @ dense
            worst_state = max(worst_state, float(np.abs(sparse - dense).max()))
            z = qdyn.vertex_probabilities(g, sparse)
            for v in range(g.n):
                d_v = np.zeros(g.num_arcs)
                d_v[offsets[v]:offsets[v + 1]] = 1.0
                form = float((dense.conj() * d_v * dense).sum().real)
                worst_z = max(worst_z, abs(z[v] - form))
    report("sparse/dense oracle equivalence",
           worst_state <= 1e-10 and worst_z <= 1e-12,
           f"state dev {worst_state:.2e}, quadratic-form dev {worst_z:.2e}")


def test_table1_classical():
    """One classical walker on the three 729-vertex lattices reproduces the
    Bernoulli occupation mean 1.372e-3 and sigma 3.701e-2 within three
    batch-means standard errors; the analytic targets are dimension
    independent.  Estimates pool 27 evenly spaced vertices because the
    1D ring mixes far too slowly for single-vertex averages."""
    p = 1 / 729
    sigma_true = np.sqrt(p * (1 - p))
    for dim, sides in LATTICES.items():
        g = build_periodic_lattice(sides)
        series = cdyn.simulate_crw(g, 1, HORIZON, TRANSIENT, 0, seed=10 + dim)
        panel = series.post_transient()[:, ::27].mean(axis=1)
        m_hat = panel.mean()
        se_m = xstats.batch_standard_error(panel, 50)
        sigma_hat = np.sqrt(m_hat * (1 - m_hat))
        se_sigma = abs(se_m * (1 - 2 * m_hat) / (2 * sigma_hat))
        ok = abs(m_hat - p) <= 3 * se_m and abs(sigma_hat - sigma_true) <= 3 * se_sigma
        report(f"Table 1 classical {dim}D", ok,
               f"mean {m_hat:.4e} ({abs(m_hat - p) / se_m:.2f} SE), "
               f"sigma {sigma_hat:.4e} "
               f"({abs(sigma_hat - sigma_true) / se_sigma:.2f} SE)")


def test_table1_quantum(lattice_quantum):
    """Fourier walk from a localized start on the same lattices: the
    vertex-averaged mean flux is 1.372e-3 within 10% and the
    vertex-averaged sigma is within a factor 1.5 of the published
    (0.149, 0.078, 0.061)e-2, strictly decreasing with dimension."""
    targets = {1: 1.49e-3, 2: 0.78e-3, 3: 0.61e-3}
    sigmas = []
    for dim, (g, scan) in lattice_quantum.items():
        mean_avg = scan["mean"].mean()
        sigma_avg = scan["sigma"].mean()
        sigmas.append(sigma_avg)
        ok_mean = abs(mean_avg - 1.372e-3) <= 0.1 * 1.372e-3
        ok_sigma = targets[dim] / 1.5 <= sigma_avg <= targets[dim] * 1.5
        report(f"Table 1 quantum {dim}D", ok_mean and ok_sigma,
               f"mean {mean_avg:.4e}, sigma {sigma_avg:.4e} "
               f"(target {targets[dim]:.2e} within x1.5)")
    report("Table 1 quantum sigma strictly decreasing",
           sigmas[0] > sigmas[1] > sigmas[2],
           " > ".join(f"{s:.3e}" for s in sigmas))


def test_time_average_convergence(sf20):
    """The running time average of z converges to the spectral projector
    prediction: within 5e-3 at T=1e5 and halving as T doubles, on the
    3-ring and the frozen 20-vertex heterogeneous graph (non-degenerate
    Fourier spectrum; the ring's degenerate pairs are handled by class
    projectors)."""
    for label, g in (("ring n=3", build_ring(3)), ("sf20", sf20)):
        op = assemble_walk_operator(g, CoinSpec.fourier())
        sd = eigendecompose(dense_unitary(op))
        x = qdyn.localized_state(g, 0)
        predicted = limiting_distribution(sd, x, g)
        acc = np.zeros(g.n)
        psi = x.copy()
        errors = {}
        for t in range(200_000):
            if t > 0:
                psi = _apply(op, psi, None)
            acc += qdyn.vertex_probabilities(g, psi)
            if t + 1 in (100_000, 200_000):
                errors[t + 1] = float(np.abs(acc / (t + 1) - predicted).max())
        ok = errors[100_000] <= 5e-3 and errors[200_000] <= 0.7 * errors[100_000]
        report(f"time-average convergence on {label}", ok,
               f"err(1e5) {errors[100_000]:.2e}, "
               f"err(2e5)/err(1e5) {errors[200_000] / errors[100_000]:.2f}")
    if max(len(c) for c in eigendecompose(
            dense_unitary(assemble_walk_operator(sf20, CoinSpec.fourier()))).classes) != 1:
        report("sf20 spectrum non-degenerate", False, "")


def test_flux_fluctuation_fourier(sf1000, sf_fourier):
    """Fourier coin on the 1000-vertex scale-free graph: degree-class mean
    fluxes within 15% of k/2E for classes of >= 5 vertices, and the
    sigma-vs-sqrt(mean) slope inside [1.0, 1.2] times 1/sqrt(2E)."""
    m2e = sf1000.num_arcs
    worst = 0.0
    for k in np.unique(sf1000.degrees):
        sel = sf1000.degrees == k
        if sel.sum() < 5:
            continue
        worst = max(worst, abs(sf_fourier["mean"][sel].mean() - k / m2e) / (k / m2e))
    mt = xstats.moments_from_arrays(np.arange(sf1000.n), sf1000.degrees,
                                    sf_fourier["mean"], sf_fourier["sigma"],
                                    sf_fourier["sample_count"])
    fit = xstats.flux_fluctuation_fit(mt)
    ratio = fit.slope * np.sqrt(m2e)
    ok = worst <= 0.15 and 1.0 <= ratio <= 1.2
    report("quantum flux-fluctuation relation (Fourier)", ok,
           f"worst class-mean dev {worst:.3f}, slope ratio {ratio:.3f}")


def test_grover_deviation(sf1000, sf_fourier, sf_grover):
    """Same pipeline with the Grover coin: the flux-fluctuation fit
    residual at least triples, and some degree class deviates from k/2E
    by more than five predicted standard errors (sqrt(k)/2E scaled by the
    class size), reproducing the qualitative degenerate-spectrum failure."""
    def fit_residual(scan):
        mt = xstats.moments_from_arrays(np.arange(sf1000.n), sf1000.degrees,
                                        scan["mean"], scan["sigma"],
                                        scan["sample_count"])
        return xstats.flux_fluctuation_fit(mt).rel_residual

    res_f = fit_residual(sf_fourier)
    res_g = fit_residual(sf_grover)

    def max_class_deviation(scan):
        worst = 0.0
        m2e = sf1000.num_arcs
        for k in np.unique(sf1000.degrees):
            sel = sf1000.degrees == k
            se = (np.sqrt(k) / m2e) / np.sqrt(sel.sum())
            worst = max(worst, abs(scan["mean"][sel].mean() - k / m2e) / se)
        return worst

    dev_g = max_class_deviation(sf_grover)
    dev_f = max_class_deviation(sf_fourier)
    ok = res_g >= 3 * res_f and dev_g > 5
    report("Grover degenerate deviation", ok,
           f"residual ratio {res_g / res_f:.2f} (need >= 3), "
           f"max class deviation {dev_g:.1f} predicted SE "
           f"(Fourier reference {dev_f:.1f})")


def test_table2_classical_and_oracle():
    """Classical extreme events with per-vertex empirical thresholds match
    the exact Binomial tail within three standard errors on all three
    lattices (the 1D ring needs a transient past its ~n^2/2pi^2 step
    relaxation time), and the integer-tail value P(w >= 1) for 100
    walkers is 0.1283 to four decimals."""
    analytic = cdyn.binomial_exceedance(100, 1 / 729, 0.9)
    report("Table 2 classical analytic tail", round(analytic, 4) == 0.1283,
           f"P(w >= 1) = {analytic:.6f}")
    for dim, sides in LATTICES.items():
        g = build_periodic_lattice(sides)
        horizon, transient = (250_000, 150_000) if dim == 1 else (HORIZON, TRANSIENT)
        series = cdyn.simulate_crw(g, 100, horizon, transient, 0, seed=20 + dim)
        rep = xstats.ee_detect(series, 3.0)
        oracle = cdyn.binomial_exceedance(100, g.degrees / g.num_arcs,
                                          rep.threshold)
        hits = (series.post_transient() > rep.threshold).mean(axis=1)
        se = xstats.batch_standard_error(hits, 50)
        dev = abs(rep.probability.mean() - oracle.mean()) / se
        report(f"Table 2 classical vs Binomial oracle {dim}D", dev <= 3,
               f"F {rep.probability.mean():.5f} vs oracle {oracle.mean():.5f} "
               f"({dev:.2f} SE)")


def test_table2_quantum(lattice_quantum):
    """Quantum extreme-event probabilities at m=3 on the three lattices
    sit within 30% of the published (0.0202, 0.0135, 0.0109) and decrease
    strictly with dimension."""
    targets = {1: 0.0202, 2: 0.0135, 3: 0.0109}
    means = []
    for dim, (g, scan) in lattice_quantum.items():
        f_mean = scan["probability"][0].mean()
        means.append(f_mean)
        ok = abs(f_mean - targets[dim]) <= 0.3 * targets[dim]
        report(f"Table 2 quantum {dim}D", ok,
               f"F {f_mean:.4f} vs {targets[dim]:.4f} (+-30%)")
    report("Table 2 quantum strictly decreasing",
           means[0] > means[1] > means[2],
           " > ".join(f"{f:.4f}" for f in means))


def test_fig3_gamma_exponents(sf1000, sf_fourier):
    """KNOWN RED — kept faithful to the published fit.  The fitted
    power-law exponents of F(k) are required to sit within +-0.10 of
    0.17 - 0.09 m; the dynamics actually produces the Gamma(k) tail
    statistics (exponents near 0.06, 0.03, -0.14, -0.43), robustly across
    graph generators, start states, threshold conventions, and fit
    styles.  See the decisions ledger for the full analysis."""
    failures = []
    for row, m in enumerate(M_VALUES):
        profile = xstats.degree_profile(profile_report(sf1000, sf_fourier, row, m))
        target = 0.17 - 0.09 * m
        line = f"m={m:g}: gamma {profile.gamma:+.3f} vs {target:+.3f}"
        if abs(profile.gamma - target) > 0.10:
            failures.append(line)
        else:
            print(f"[PASS] Fig. 3 gamma {line}")
    report("Fig. 3 gamma exponents within +-0.10 of 0.17-0.09m",
           not failures, "; ".join(failures))


def test_fig3_monotonicity_and_collapse(sf1000, sf_fourier):
    """F(k) decreases with degree at m=3 and the amplitude-and-exponent
    rescaled profiles collapse with relative spread below 0.25."""
    profiles = [xstats.degree_profile(profile_report(sf1000, sf_fourier, r, m))
                for r, m in enumerate(M_VALUES)]
    p3 = profiles[-1]
    populated = p3.n_vertices >= 3
    f3 = p3.f_mean[populated]
    decreasing = f3[0] == f3.max() and f3[-1] == f3.min() and \
        np.polyfit(np.log(p3.degrees[populated]), np.log(f3), 1)[0] < 0
    spread = xstats.scaling_collapse(profiles)
    report("Fig. 3 F(k) decreasing at m=3", bool(decreasing),
           f"F(kmin) {f3[0]:.4f} .. F(kmax) {f3[-1]:.4f}")
    report("Fig. 3 scaling collapse", spread < 0.25, f"spread {spread:.3f}")


def test_fig45_correlations(sf1000):
    """Property-based reproduction of the correlation figures: the z
    autocorrelation at a scale-free hub decays exponentially (r^2 > 0.8
    on the even-lag envelope), the ring autocorrelation saturates above
    the scale-free large-lag level, and the phase cross-correlation of
    adjacent vertices exceeds the 4/sqrt(samples) null band on both
    graphs."""
    horizon, transient, tau_max = 22_000, TRANSIENT, 200
    sf = build_scale_free(100, 2.3, 2, seed=SF_SEED)
    ring = build_ring(100)
    hub = int(np.argmax(sf.degrees))
    neighbors = sf.neighbors(hub)
    partner = int(neighbors[np.argmax(sf.degrees[neighbors])])

    z_sf, th_sf = qdyn.evolve_record(
        assemble_walk_operator(sf, CoinSpec.fourier()),
        qdyn.localized_state(sf, hub), horizon, transient, record_phase=True)
    z_ring, th_ring = qdyn.evolve_record(
        assemble_walk_operator(ring, CoinSpec.fourier()),
        qdyn.localized_state(ring, 0), horizon, transient, record_phase=True)

    c_sf = xstats.cross_correlation(z_sf, hub, hub, tau_max)
    rate, r2, _ = xstats.fit_exponential_decay(c_sf, stride=2)
    report("Figs. 4-5 SF autocorrelation exponential decay",
           r2 > 0.8 and rate > 0, f"rate {rate:.3f}, r^2 {r2:.3f}")

    c_ring = xstats.cross_correlation(z_ring, 0, 0, tau_max)
    sf_level = float(np.abs(c_sf.values[100:]).mean())
    ring_level = float(np.abs(c_ring.values[100:]).mean())
    report("Figs. 4-5 ring saturation above SF level", ring_level > sf_level,
           f"ring {ring_level:.3f} vs SF {sf_level:.3f}")

    null = 4 / np.sqrt(z_sf.sample_count)
    peak_sf = np.abs(xstats.cross_correlation(th_sf, hub, partner, 5).values).max()
    peak_ring = np.abs(xstats.cross_correlation(th_ring, 0, 1, 5).values).max()
    report("Figs. 4-5 phase correlation beats null band",
           peak_sf > null and peak_ring > null,
           f"SF {peak_sf:.4f}, ring {peak_ring:.4f}, null {null:.4f}")


def test_si_recurrence_renewal(sf_fourier, sf_grover, sf_noise):
    """Mean recurrence time agrees with 1/F_i within 20% wherever
    F_i > 0.005, for the Fourier, phase-randomized, and Grover runs."""
    for label, scan in (("fourier", sf_fourier), ("phase-noise", sf_noise),
                        ("grover", sf_grover)):
        row = len(scan["thresholds"]) - 1  # m = 3 row
        prob = scan["probability"][row]
        sel = prob > 0.005
        counts = scan["counts"][row][sel]
        spans = scan["last"][row][sel] - scan["first"][row][sel]
        mean_rec = spans / np.maximum(counts - 1, 1)
        worst = float(np.abs(mean_rec * prob[sel] - 1).max())
        report(f"si-recurrence renewal identity ({label})", worst <= 0.2,
               f"worst |mean_rec * F - 1| = {worst:.3f} over {sel.sum()} vertices")


def test_si_recurrence_chi2(sf1000, deg11_vertices, sf_fourier, sf_grover,
                            sf_noise):
    """KNOWN RED — kept faithful to the published claim.  Recurrence
    intervals at a degree-11 vertex are required to pass a chi-squared
    exponentiality test at p > 0.01 for all three coins; the short-lag
    clustering of exceedances (a period-2 feature of the coherent
    dynamics) is detected decisively at these event counts.  The interval
    tail beyond the cluster scale is exponential; see the ledger."""
    failures = []
    v = deg11_vertices[0]
    for label, scan in (("fourier", sf_fourier), ("phase-noise", sf_noise),
                        ("grover", sf_grover)):
        row = len(scan["thresholds"]) - 1
        rec = xstats.recurrence_from_events(v, 11, scan["events"][v][row])
        line = f"{label}: p={rec.chi2_pvalue:.2e} over {rec.intervals.size} intervals"
        if rec.chi2_pvalue is None or rec.chi2_pvalue <= 0.01:
            failures.append(line)
        else:
            print(f"[PASS] si-recurrence chi2 {line}")
    report("si-recurrence intervals pass exponential chi-squared",
           not failures, "; ".join(failures))


def test_spacing_density_and_offdiagonal(sf20):
    """The eigenphase-spacing histogram equals brute-force pair counting
    exactly, the off-diagonal signal at t=0 equals M^2 - M exactly, and
    it stays real to 1e-9 for all t <= 100."""
    sd = eigendecompose(dense_unitary(assemble_walk_operator(sf20, CoinSpec.fourier())))
    bins = 32
    density, edges = eigenphase_spacing_density(sd, bins=bins)
    counts = np.zeros(bins)
    for r in range(sd.dim):
        for s in range(sd.dim):
            if r != s:
                delta = np.mod(sd.eigenphases[s] - sd.eigenphases[r], 2 * np.pi)
                counts[min(np.searchsorted(edges, delta, side="right") - 1,
                           bins - 1)] += 1
    brute = counts / (sd.dim * (sd.dim - 1) * (edges[1] - edges[0]))
    exact_hist = np.array_equal(density, brute)

    m = sd.dim
    t0_exact = offdiagonal_signal(sd, 0) == complex(m * m - m)
    max_imag = max(abs(offdiagonal_signal(sd, t).imag) for t in range(101))
    report("spacing-density/off-diagonal checks",
           exact_hist and t0_exact and max_imag <= 1e-9,
           f"histogram exact {exact_hist}, t=0 exact {t0_exact}, "
           f"max |imag| {max_imag:.1e}")
