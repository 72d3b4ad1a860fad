import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcwalk import xstats
from arcwalk.cdyn import simulate_crw
from arcwalk.graphs import build_periodic_lattice
from arcwalk.series import VertexSeries


def make_series(values, transient=0, degrees=None, kind="quantum_probability"):
    values = np.asarray(values, dtype=float)
    n = values.shape[1]
    return VertexSeries(
        kind=kind,
        times=np.arange(values.shape[0], dtype=np.int64),
        values=values,
        recorded_vertices=np.arange(n),
        transient=transient,
        degrees=np.asarray(degrees if degrees is not None else [2] * n),
    )


def make_report(degrees, probability, m=3.0):
    degrees = np.asarray(degrees)
    probability = np.asarray(probability, dtype=float)
    return xstats.EEReport(
        vertices=np.arange(degrees.size), degrees=degrees,
        threshold=np.zeros(degrees.size),
        count=(probability * 1000).astype(np.int64),
        probability=probability, m=m, sample_count=1000,
    )


# ---------------------------------------------------------------------------
# moments and fits
# ---------------------------------------------------------------------------

def test_moments_constant_series():
    series = make_series(np.full((50, 3), 0.25), transient=10)
    mt = xstats.series_moments(series)
    assert np.allclose(mt.mean, 0.25)
    assert np.allclose(mt.sigma, 0.0)
    assert mt.sample_count == 40


def test_moments_exclude_transient_exactly():
    values = np.zeros((10, 1))
    values[5:] = 1.0
    mt = xstats.series_moments(make_series(values, transient=5))
    assert mt.mean[0] == 1.0 and mt.sigma[0] == 0.0


def test_moments_need_two_samples():
    with pytest.raises(ValueError):
        xstats.series_moments(make_series(np.zeros((3, 1)), transient=2))


def test_flux_fit_exact_relation(rng):
    mean = rng.uniform(0.1, 2.0, size=30)
    mt = xstats.moments_from_arrays(np.arange(30), rng.integers(2, 8, 30),
                                    mean, 0.7 * np.sqrt(mean), 1000)
    fit = xstats.flux_fluctuation_fit(mt)
    assert abs(fit.slope - 0.7) <= 1e-12
    assert fit.intercept == 0.0
    assert fit.rel_residual <= 1e-12
    with_icpt = xstats.flux_fluctuation_fit(mt, fit_intercept=True)
    assert abs(with_icpt.slope - 0.7) <= 1e-9


def test_flux_fit_requires_degree_diversity():
    mt = xstats.moments_from_arrays(np.arange(4), [2, 2, 4, 4],
                                    [0.1, 0.1, 0.2, 0.2], [0.1] * 4, 10)
    with pytest.raises(ValueError):
        xstats.flux_fluctuation_fit(mt)


# ---------------------------------------------------------------------------
# extreme events
# ---------------------------------------------------------------------------

def test_ee_constant_series_has_no_events():
    series = make_series(np.full((100, 2), 0.5), transient=10)
    report = xstats.ee_detect(series, 1.0)
    assert np.all(report.probability == 0.0)
    assert np.allclose(report.threshold, 0.5)


def test_ee_rejects_negative_m():
    series = make_series(np.random.default_rng(0).random((50, 2)))
    with pytest.raises(ValueError):
        xstats.ee_detect(series, -0.1)


def test_ee_threshold_definition_and_strictness():
    values = np.array([[0.0], [1.0]] * 10, dtype=float)
    series = make_series(values)
    report = xstats.ee_detect(series, 0.0)
    # threshold equals the mean 0.5; strictly greater picks only the ones
    assert report.threshold[0] == 0.5
    assert report.count[0] == 10
    assert report.probability[0] == 0.5


def test_ee_boundary_thresholds():
    rng = np.random.default_rng(1)
    series = make_series(rng.random((200, 3)))
    below = xstats.ee_from_thresholds(series, np.full(3, -1.0), m=0.0)
    assert np.all(below.probability == 1.0)
    above = xstats.ee_from_thresholds(series, np.full(3, 2.0), m=0.0)
    assert np.all(above.probability == 0.0)


@given(m1=st.floats(0, 3), m2=st.floats(0, 3), seed=st.integers(0, 100))
@settings(max_examples=25, deadline=None)
def test_ee_probability_monotone_in_m(m1, m2, seed):
    rng = np.random.default_rng(seed)
    series = make_series(rng.random((150, 4)))
    lo, hi = sorted((m1, m2))
    f_lo = xstats.ee_detect(series, lo).probability
    f_hi = xstats.ee_detect(series, hi).probability
    assert np.all(f_hi <= f_lo)


# ---------------------------------------------------------------------------
# degree profiles and scaling collapse
# ---------------------------------------------------------------------------

def test_degree_profile_exact_power_law():
    degrees = np.repeat(np.arange(2, 10), 3)
    report = make_report(degrees, degrees.astype(float) ** -0.5)
    profile = xstats.degree_profile(report)
    assert abs(profile.gamma + 0.5) <= 1e-6
    assert np.array_equal(profile.degrees, np.arange(2, 10))
    assert np.all(profile.n_vertices == 3)


def test_degree_profile_skips_thin_classes():
    degrees = np.array([2] * 5 + [3] * 5 + [4] * 5 + [5] * 5 + [9])
    f = degrees.astype(float) ** -1.0
    profile = xstats.degree_profile(make_report(degrees, f))
    assert abs(profile.gamma + 1.0) <= 1e-6  # the singleton k=9 is excluded


def test_degree_profile_requires_diversity():
    with pytest.raises(ValueError):
        xstats.degree_profile(make_report([2] * 6 + [3] * 6, np.full(12, 0.1)))


def test_scaling_collapse_exact_and_noise():
    profiles = []
    for m in (0.0, 1.0, 2.0):
        degrees = np.repeat(np.arange(2, 12), 3)
        amp = np.exp(-m)
        gamma = 0.2 - 0.1 * m
        profiles.append(xstats.degree_profile(
            make_report(degrees, amp * degrees.astype(float) ** gamma, m=m)))
    assert xstats.scaling_collapse(profiles) <= 1e-9

    rng = np.random.default_rng(3)
    noisy = []
    for m in (0.0, 1.0, 2.0):
        degrees = np.repeat(np.arange(2, 12), 3)
        noisy.append(xstats.degree_profile(
            make_report(degrees, rng.uniform(0.05, 1.0, degrees.size), m=m)))
    assert xstats.scaling_collapse(noisy) > 0.25
    with pytest.raises(ValueError):
        xstats.scaling_collapse(profiles[:1])


# ---------------------------------------------------------------------------
# correlations
# ---------------------------------------------------------------------------

def test_autocorrelation_normalized_at_zero_lag(rng):
    series = make_series(rng.random((300, 2)))
    prof = xstats.cross_correlation(series, 0, 0, 20)
    assert prof.values[0] == pytest.approx(1.0, abs=1e-12)


def test_cross_correlation_raw_literal_average():
    values = np.array([[1.0, 2.0], [2.0, 1.0], [3.0, 2.0], [1.0, 1.0]])
    series = make_series(values)
    prof = xstats.cross_correlation(series, 0, 1, 1, normalized=False)
    assert prof.values[0] == pytest.approx(np.mean(values[:, 0] * values[:, 1]))
    assert prof.values[1] == pytest.approx(np.mean(values[:-1, 0] * values[1:, 1]))


def test_cross_correlation_validates():
    series = make_series(np.random.default_rng(0).random((40, 2)))
    with pytest.raises(ValueError):
        xstats.cross_correlation(series, 0, 1, 20)
    const = make_series(np.full((40, 2), 1.0))
    with pytest.raises(ValueError):
        xstats.cross_correlation(const, 0, 1, 5)


def test_independent_walks_stay_inside_null_band():
    g = build_periodic_lattice([9, 9, 9])
    a = simulate_crw(g, 1, 4000, 500, 0, seed=100)
    b = simulate_crw(g, 1, 4000, 500, 0, seed=200)
    merged = make_series(
        np.column_stack([a.column(5), b.column(5)]), kind="classical_count")
    prof = xstats.cross_correlation(merged, 0, 1, 30, normalized=False)
    assert np.abs(prof.values).max() <= 4 / np.sqrt(3500)


def test_fit_exponential_decay_recovers_rate():
    lags = np.arange(0, 41)
    prof = xstats.CorrelationProfile(0, 0, lags, np.exp(-0.2 * lags), True)
    rate, r2, n = xstats.fit_exponential_decay(prof)
    assert abs(rate - 0.2) <= 1e-9
    assert r2 > 0.999
    values = np.exp(-0.2 * lags)
    values[1::2] = -0.1  # parity oscillation: odd lags useless
    prof2 = xstats.CorrelationProfile(0, 0, lags, values, True)
    rate2, r2_2, n2 = xstats.fit_exponential_decay(prof2, stride=2)
    assert abs(rate2 - 0.2) <= 1e-9


# ---------------------------------------------------------------------------
# recurrence
# ---------------------------------------------------------------------------

def test_recurrence_periodic_intervals():
    rec = xstats.recurrence_from_events(0, 2, np.arange(0, 700, 7))
    assert rec.sufficient
    assert np.all(rec.intervals == 7)
    assert rec.mean_recurrence == 7
    assert rec.rate == pytest.approx(1 / 7)


def test_recurrence_insufficient_marker():
    rec = xstats.recurrence_from_events(3, 2, np.array([1, 5, 9]))
    assert not rec.sufficient
    assert rec.mean_recurrence is None
    assert rec.chi2_pvalue is None


def test_recurrence_geometric_data_passes_chi2(rng):
    intervals = rng.geometric(0.02, size=800)
    times = np.cumsum(intervals)
    rec = xstats.recurrence_from_events(0, 4, times)
    assert rec.chi2_pvalue > 0.01
    assert rec.mean_recurrence == pytest.approx(intervals[1:].mean())


def test_recurrence_from_series():
    values = np.zeros((100, 2))
    values[::10, 0] = 1.0  # exceeds threshold every 10 steps
    series = make_series(values)
    report = xstats.ee_from_thresholds(series, np.array([0.5, 0.5]), m=1.0)
    recs = xstats.recurrence_statistics(report, series)
    assert recs[0].sufficient
    assert np.all(recs[0].intervals == 10)
    assert not recs[1].sufficient


# ---------------------------------------------------------------------------
# error bars and writers
# ---------------------------------------------------------------------------

def test_batch_standard_error_iid(rng):
    x = rng.normal(0, 2.0, size=100_000)
    se = xstats.batch_standard_error(x, 50)
    assert se == pytest.approx(2.0 / np.sqrt(100_000), rel=0.3)
    with pytest.raises(ValueError):
        xstats.batch_standard_error(np.ones(20), 50)


def test_csv_writers(tmp_path):
    mt = xstats.moments_from_arrays([0, 1], [2, 3], [0.1, 0.2], [0.01, 0.02], 10)
    xstats.write_moments_csv(mt, tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().strip().split("\n")
    assert lines[0] == "v,k,mean,sigma"
    assert len(lines) == 3

    report = make_report([2, 3, 4, 5], [0.4, 0.3, 0.2, 0.1])
    xstats.write_ee_csv(report, tmp_path / "ee.csv")
    assert (tmp_path / "ee.csv").read_text().split("\n")[0] == "v,k,q,count,F,m"

    profile = xstats.degree_profile(
        make_report(np.repeat(np.arange(2, 8), 3),
                    np.repeat(np.arange(2, 8), 3) ** -0.3))
    xstats.write_profile_csv([profile], tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().split("\n")[0] == "k,F_mean,F_sem,m"

    prof = xstats.CorrelationProfile(0, 1, np.arange(3), np.ones(3), True)
    xstats.write_correlation_csv(prof, tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text().split("\n")[0] == "tau,C"

    rec = xstats.recurrence_from_events(0, 2, np.arange(0, 700, 7))
    xstats.write_recurrence_csv([rec], tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text().split("\n")[0] == "v,k,mean_rec,rate"
