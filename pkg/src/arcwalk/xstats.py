"""Time-series statistics: moments, flux-fluctuation fits, extreme events,
degree profiles and scaling collapse, lagged correlations, recurrence times.

All statistics are pure functions over recorded series (or over the
streaming accumulators produced by qdyn) and exclude the transient
exactly.  Thresholds are per vertex — each vertex's own mean plus m times
its own standard deviation — and an exceedance is a strict inequality.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .series import VertexSeries

__all__ = [
    "MomentTable",
    "EEReport",
    "CorrelationProfile",
    "DegreeProfile",
    "VertexRecurrence",
    "FluxFluctuationFit",
    "series_moments",
    "moments_from_arrays",
    "flux_fluctuation_fit",
    "ee_detect",
    "ee_from_thresholds",
    "degree_profile",
    "scaling_collapse",
    "cross_correlation",
    "recurrence_statistics",
    "recurrence_from_events",
    "batch_standard_error",
    "fit_exponential_decay",
    "write_moments_csv",
    "write_ee_csv",
    "write_profile_csv",
    "write_correlation_csv",
    "write_recurrence_csv",
]


@dataclass
class MomentTable:
    vertices: np.ndarray
    degrees: np.ndarray
    mean: np.ndarray
    sigma: np.ndarray
    sample_count: int


@dataclass
class EEReport:
    """Per-vertex strict exceedances above q_i = mean_i + m * sigma_i."""

    vertices: np.ndarray
    degrees: np.ndarray
    threshold: np.ndarray
    count: np.ndarray
    probability: np.ndarray
    m: float
    sample_count: int


@dataclass
class CorrelationProfile:
    i: int
    j: int
    lags: np.ndarray
    values: np.ndarray
    normalized: bool


@dataclass
class DegreeProfile:
    """Degree-class mean exceedance probabilities and their power-law fit."""

    m: float
    degrees: np.ndarray
    f_mean: np.ndarray
    f_sem: np.ndarray
    n_vertices: np.ndarray
    gamma: float
    log_amplitude: float


@dataclass
class VertexRecurrence:
    vertex: int
    degree: int
    intervals: np.ndarray
    mean_recurrence: float | None
    rate: float | None
    chi2_pvalue: float | None
    sufficient: bool


@dataclass
class FluxFluctuationFit:
    slope: float
    intercept: float
    r_squared: float
    rel_residual: float
    n_points: int


# ---------------------------------------------------------------------------
# Moments and the flux-fluctuation fit
# ---------------------------------------------------------------------------

def series_moments(series: VertexSeries) -> MomentTable:
    """Population mean and standard deviation over the post-transient rows."""
    data = series.post_transient()
    if data.shape[0] < 2:
        raise ValueError("need at least two post-transient samples")
    degrees = series.degrees
    if degrees is None:
        raise ValueError("series carries no vertex degrees")
    return MomentTable(
        vertices=series.recorded_vertices.copy(),
        degrees=np.asarray(degrees, dtype=np.int64),
        mean=data.mean(axis=0),
        sigma=data.std(axis=0),
        sample_count=data.shape[0],
    )


def moments_from_arrays(vertices, degrees, mean, sigma, sample_count) -> MomentTable:
    """Adapter for streaming scans that already accumulated the moments."""
    return MomentTable(
        vertices=np.asarray(vertices, dtype=np.int64),
        degrees=np.asarray(degrees, dtype=np.int64),
        mean=np.asarray(mean, dtype=float),
        sigma=np.asarray(sigma, dtype=float),
        sample_count=int(sample_count),
    )


def flux_fluctuation_fit(mt: MomentTable, fit_intercept: bool = False) -> FluxFluctuationFit:
    """Least-squares fit of sigma_i against sqrt(mean_i) over all vertices.

    The intercept is constrained to zero unless fit_intercept is set.
    rel_residual is the residual norm relative to the norm of sigma, the
    coin-quality diagnostic used to compare Fourier against Grover.
    """
    if np.unique(mt.degrees).size < 3:
        raise ValueError("flux-fluctuation fit needs at least 3 distinct degrees")
    x = np.sqrt(mt.mean)
    y = mt.sigma
    if np.allclose(x, x[0]):
        raise ValueError("degenerate abscissa: all means equal")
    if fit_intercept:
        a = np.vstack([x, np.ones_like(x)]).T
        (slope, intercept), *_ = np.linalg.lstsq(a, y, rcond=None)
    else:
        slope = float(x @ y / (x @ x))
        intercept = 0.0
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")
    rel = float(np.sqrt(ss_res / (y @ y))) if y.any() else float("nan")
    return FluxFluctuationFit(slope=float(slope), intercept=float(intercept),
                              r_squared=r2, rel_residual=rel, n_points=x.size)


# ---------------------------------------------------------------------------
# Extreme events
# ---------------------------------------------------------------------------

def ee_from_thresholds(series: VertexSeries, thresholds, m: float) -> EEReport:
    """Count strict exceedances of explicit per-vertex thresholds."""
    data = series.post_transient()
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.shape != (data.shape[1],):
        raise ValueError("one threshold per recorded vertex required")
    count = (data > thresholds).sum(axis=0)
    degrees = series.degrees
    return EEReport(
        vertices=series.recorded_vertices.copy(),
        degrees=None if degrees is None else np.asarray(degrees, dtype=np.int64),
        threshold=thresholds,
        count=count.astype(np.int64),
        probability=count / data.shape[0],
        m=float(m),
        sample_count=data.shape[0],
    )


def ee_detect(series: VertexSeries, m: float) -> EEReport:
    """Exceedances above each vertex's own mean + m * sigma threshold."""
    if m < 0:
        raise ValueError(f"threshold multiplier m must be >= 0, got {m}")
    mt = series_moments(series)
    return ee_from_thresholds(series, mt.mean + m * mt.sigma, m)


def degree_profile(report: EEReport, min_vertices: int = 3) -> DegreeProfile:
    """Average F over vertices of equal degree and fit log F(k) = gamma log k + c.

    The fit runs over degree classes holding at least min_vertices
    vertices and a positive mean probability.
    """
    if report.degrees is None:
        raise ValueError("report carries no degrees")
    if np.unique(report.degrees).size < 4:
        raise ValueError("degree profile needs at least 4 distinct degrees")
    ks, f_mean, f_sem, sizes = [], [], [], []
    for k in np.unique(report.degrees):
        sel = report.degrees == k
        f = report.probability[sel]
        ks.append(int(k))
        f_mean.append(f.mean())
        f_sem.append(f.std(ddof=1) / np.sqrt(f.size) if f.size > 1 else 0.0)
        sizes.append(int(f.size))
    ks = np.asarray(ks)
    f_mean = np.asarray(f_mean)
    f_sem = np.asarray(f_sem)
    sizes = np.asarray(sizes)

    use = (sizes >= min_vertices) & (f_mean > 0)
    if use.sum() < 2:
        raise ValueError("not enough populated degree classes for a power-law fit")
    gamma, log_amp = np.polyfit(np.log(ks[use]), np.log(f_mean[use]), 1)
    return DegreeProfile(m=report.m, degrees=ks, f_mean=f_mean, f_sem=f_sem,
                         n_vertices=sizes, gamma=float(gamma),
                         log_amplitude=float(log_amp))


def scaling_collapse(profiles: list[DegreeProfile], min_vertices: int = 3) -> float:
    """Dispersion of the profiles after removing each one's fitted power law.

    Every profile is rescaled by its own fitted amplitude and k^gamma, so
    exact power laws collapse to the constant one.  Returns the maximum
    over common degrees of the relative spread across thresholds; a value
    below 0.25 counts as a collapse.
    """
    if len(profiles) < 2:
        raise ValueError("collapse needs at least two threshold profiles")
    common = None
    for p in profiles:
        ks = set(int(k) for k, n, f in zip(p.degrees, p.n_vertices, p.f_mean)
                 if n >= min_vertices and f > 0)
        common = ks if common is None else (common & ks)
    if not common:
        raise ValueError("profiles share no populated degree classes")
    common = np.asarray(sorted(common))

    scaled = np.empty((len(profiles), common.size))
    for i, p in enumerate(profiles):
        idx = np.searchsorted(p.degrees, common)
        scaled[i] = p.f_mean[idx] / (np.exp(p.log_amplitude) * common.astype(float) ** p.gamma)
    spread = (scaled.max(axis=0) - scaled.min(axis=0)) / scaled.mean(axis=0)
    return float(spread.max())


# ---------------------------------------------------------------------------
# Correlations
# ---------------------------------------------------------------------------

def cross_correlation(series: VertexSeries, i: int, j: int, tau_max: int,
                      normalized: bool = True) -> CorrelationProfile:
    """C_ij(tau) = time average of X_i(t) X_j(t+tau) for tau = 0..tau_max.

    In normalized mode both series are centered on their full
    post-transient means and the products are divided by sigma_i sigma_j,
    so the zero-lag auto-correlation is exactly one.  Raw mode averages
    the literal products.
    """
    x = series.column(i)
    y = series.column(j)
    t_len = x.size
    if not 0 <= tau_max < t_len / 2:
        raise ValueError("tau_max must be below half the post-transient length")
    if normalized:
        sx, sy = x.std(), y.std()
        if sx == 0 or sy == 0:
            raise ValueError("zero-variance series cannot be normalized")
        x = (x - x.mean()) / sx
        y = (y - y.mean()) / sy
    lags = np.arange(tau_max + 1)
    values = np.empty(tau_max + 1)
    for tau in lags:
        values[tau] = np.mean(x[:t_len - tau] * y[tau:]) if tau else np.mean(x * y)
    return CorrelationProfile(i=i, j=j, lags=lags, values=values,
                              normalized=normalized)


def fit_exponential_decay(profile: CorrelationProfile, max_lag: int | None = None,
                          stride: int = 1):
    """Fit log C(tau) = log A - rate * tau over the initial decay window.

    The window runs over lags stride, 2*stride, ... and ends at the first
    non-positive value (or max_lag).  Coined-walk autocorrelations carry a
    period-2 parity oscillation, so stride=2 fits the even-lag envelope.
    Returns (rate, r_squared, n_points).
    """
    lags = profile.lags[stride::stride]
    vals = profile.values[stride::stride]
    stop = len(vals)
    for idx in range(len(vals)):
        if vals[idx] <= 0:
            stop = idx
            break
    if max_lag is not None:
        stop = min(stop, max_lag // stride)
    x = lags[:stop].astype(float)
    y = np.log(vals[:stop])
    if x.size < 4:
        raise ValueError("decay window too short to fit")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else float("nan")
    return -float(slope), r2, x.size


# ---------------------------------------------------------------------------
# Recurrence statistics
# ---------------------------------------------------------------------------

def _geometric_chi2_pvalue(intervals: np.ndarray, rate: float) -> float:
    """Goodness of fit of integer recurrence intervals against the
    geometric law with success probability min(rate, 1), the discrete
    counterpart of an exponential with the given rate."""
    p = min(rate, 1.0 - 1e-12)
    n = intervals.size
    n_bins = max(3, min(12, n // 8))
    # equal-probability integer bin edges from the geometric quantiles
    targets = np.arange(1, n_bins) / n_bins
    edges = np.unique(stats.geom.ppf(targets, p))
    edges = edges[edges >= 1]
    upper = np.concatenate([edges, [np.inf]])
    lower = np.concatenate([[0], edges])
    expected = (stats.geom.cdf(upper, p) - stats.geom.cdf(lower, p)) * n
    observed = np.array([((intervals > lo) & (intervals <= hi)).sum()
                         for lo, hi in zip(lower, upper)], dtype=float)
    keep = expected > 1e-9
    expected, observed = expected[keep], observed[keep]
    if expected.size < 3:
        return float("nan")
    chi2 = float(((observed - expected) ** 2 / expected).sum())
    dof = expected.size - 2  # one bin constraint, one fitted parameter
    return float(stats.chi2.sf(chi2, dof))


def recurrence_from_events(vertex: int, degree: int, times: np.ndarray,
                           min_events: int = 10) -> VertexRecurrence:
    """Interval statistics from the sorted exceedance step indices of one
    vertex; below min_events the record is marked insufficient."""
    times = np.asarray(times, dtype=np.int64)
    intervals = np.diff(times)
    if times.size < min_events:
        return VertexRecurrence(vertex=vertex, degree=degree, intervals=intervals,
                                mean_recurrence=None, rate=None,
                                chi2_pvalue=None, sufficient=False)
    mean_rec = float(intervals.mean())
    rate = 1.0 / mean_rec
    pval = _geometric_chi2_pvalue(intervals, rate)
    return VertexRecurrence(vertex=vertex, degree=degree, intervals=intervals,
                            mean_recurrence=mean_rec, rate=rate,
                            chi2_pvalue=pval, sufficient=True)


def recurrence_statistics(report: EEReport, series: VertexSeries,
                          min_events: int = 10) -> dict[int, VertexRecurrence]:
    """Recurrence intervals between consecutive exceedances, per vertex."""
    data = series.post_transient()
    start = int(np.searchsorted(series.times, series.transient))
    times = series.times[start:]
    out: dict[int, VertexRecurrence] = {}
    for col, v in enumerate(series.recorded_vertices):
        hits = times[data[:, col] > report.threshold[col]]
        degree = int(report.degrees[col]) if report.degrees is not None else -1
        out[int(v)] = recurrence_from_events(int(v), degree, hits,
                                             min_events=min_events)
    return out


# ---------------------------------------------------------------------------
# Error bars for correlated samples
# ---------------------------------------------------------------------------

def batch_standard_error(x: np.ndarray, n_batches: int = 50) -> float:
    """Standard error of the mean of a (possibly autocorrelated) series,
    estimated from the spread of contiguous batch means."""
    x = np.asarray(x, dtype=float)
    if n_batches < 2 or x.size < 2 * n_batches:
        raise ValueError("series too short for the requested batch count")
    size = x.size // n_batches
    means = x[:size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(n_batches))


# ---------------------------------------------------------------------------
# CSV writers
# ---------------------------------------------------------------------------

def _write_rows(path, header: str, rows) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    os.replace(tmp, path)


def _fmt(x) -> str:
    return repr(float(x))


def write_moments_csv(mt: MomentTable, path) -> None:
    _write_rows(path, "v,k,mean,sigma",
                ((str(int(v)), str(int(k)), _fmt(mu), _fmt(s))
                 for v, k, mu, s in zip(mt.vertices, mt.degrees, mt.mean, mt.sigma)))


def write_ee_csv(report: EEReport, path) -> None:
    degrees = report.degrees if report.degrees is not None else np.full(
        report.vertices.size, -1)
    _write_rows(path, "v,k,q,count,F,m",
                ((str(int(v)), str(int(k)), _fmt(q), str(int(c)), _fmt(f),
                  _fmt(report.m))
                 for v, k, q, c, f in zip(report.vertices, degrees,
                                          report.threshold, report.count,
                                          report.probability)))


def write_profile_csv(profiles: list[DegreeProfile], path) -> None:
    def rows():
        for p in profiles:
            for k, fm, fs in zip(p.degrees, p.f_mean, p.f_sem):
                yield str(int(k)), _fmt(fm), _fmt(fs), _fmt(p.m)
    _write_rows(path, "k,F_mean,F_sem,m", rows())


def write_correlation_csv(profile: CorrelationProfile, path) -> None:
    _write_rows(path, "tau,C",
                ((str(int(t)), _fmt(c))
                 for t, c in zip(profile.lags, profile.values)))


def write_recurrence_csv(records: list[VertexRecurrence], path) -> None:
    def rows():
        for r in records:
            if not r.sufficient:
                continue
            yield (str(r.vertex), str(r.degree), _fmt(r.mean_recurrence),
                   _fmt(r.rate))
    _write_rows(path, "v,k,mean_rec,rate", rows())
