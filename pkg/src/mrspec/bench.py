"""Monte Carlo benchmarking of log-spectrum estimators via the mean squared
log-spectrum discrepancy, plus the interpolation-based comparison baselines."""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .beliefs import (
    PeriodogramData,
    PriorSpec,
    adjust,
    forecast_moments,
    log_periodogram,
)
from .models import LogSpectrum, SampledSeries, SpectralModel, ar2_from_omega, simulate, subsample

__all__ = [
    "standard_grid",
    "discrepancy",
    "random_process",
    "BenchDesign",
    "BenchResult",
    "run_bench",
    "table_sweep",
    "spline_interpolate",
    "baseline_spectra",
    "InterpComparison",
    "interp_comparison",
]


def standard_grid(n_omega=128):
    """The scoring grid omega_j = j / (2 * (n_omega - 1)), j = 0..n_omega-1."""
    return np.arange(n_omega) / (2.0 * (n_omega - 1))


def discrepancy(true_log_curve, est_log_curve):
    """Mean squared difference of two log-spectrum curves on a shared grid."""
    a = np.asarray(true_log_curve, dtype=float)
    b = np.asarray(est_log_curve, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("curves must be 1-d and on the same grid")
    return float(np.mean((a - b) ** 2))


def random_process(seed, prior=None):
    """Draw a LogSpectrum whose coefficients follow the smoothness prior."""
    prior = prior or PriorSpec()
    rng = np.random.default_rng(seed)
    mean = np.zeros(prior.size)
    mean[0] = prior.intercept_mean
    beta = mean + rng.standard_normal(prior.size) * np.sqrt(prior.variances())
    return LogSpectrum(beta)


@dataclass(frozen=True)
class BenchDesign:
    """Two chronological data segments (stride, length after subsampling)
    scored against the generating log-spectrum."""

    d1: tuple  # (delta1, n1)
    d2: tuple  # (delta2, n2)
    replicates: int = 100
    n_omega: int = 128
    seed: int = 0
    mc_samples: int = 2000

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        for delta, n in (self.d1, self.d2):
            if delta < 1 or n < 1:
                raise ValueError("each segment needs delta >= 1 and N >= 1")


@dataclass(frozen=True)
class BenchResult:
    mean: float
    stderr: float
    scores: np.ndarray
    failures: int


def _segment_series(path, design):
    (delta1, n1), (delta2, n2) = design.d1, design.d2
    split = delta1 * n1
    first = subsample(SampledSeries(path.values[:split]), delta1)
    second = subsample(SampledSeries(path.values[split : split + delta2 * n2]), delta2)
    return first, second


def run_bench(design, prior=None, quad_points=4096):
    """One Table-style cell: mean discrepancy of the Bayes linear estimate
    over replicated draws from the prior.

    Forecast moments depend only on the prior and the data layout, so they
    are computed once and shared by all replicates.  Deterministic given the
    design seed; replicate reduction is in index order.
    """
    prior = prior or PriorSpec()
    (delta1, n1), (delta2, n2) = design.d1, design.d2
    layouts = [
        PeriodogramData.layout("d1", delta1, n1),
        PeriodogramData.layout("d2", delta2, n2),
    ]
    root = np.random.SeedSequence(design.seed)
    moment_seed, *rep_seeds = root.spawn(design.replicates + 1)
    moments = forecast_moments(prior.to_state(), layouts, design.mc_samples, moment_seed)
    grid = standard_grid(design.n_omega)
    path_len = delta1 * n1 + delta2 * n2
    scores = []
    failures = 0
    for rep_seed in rep_seeds:
        sim_seed, proc_seed = rep_seed.spawn(2)
        try:
            truth = random_process(proc_seed, prior)
            path = simulate(truth, path_len, sim_seed, quad_points)
            first, second = _segment_series(path, design)
            observed = np.concatenate(
                [log_periodogram(first).log_periodogram, log_periodogram(second).log_periodogram]
            )
            state = adjust(prior.to_state(), moments, observed)
            scores.append(discrepancy(truth.evaluate(grid), state.mean_logspectrum().evaluate(grid)))
        except (np.linalg.LinAlgError, ArithmeticError, ValueError):
            failures += 1
    scores = np.asarray(scores)
    if len(scores) == 0:
        return BenchResult(np.nan, np.nan, scores, failures)
    stderr = scores.std(ddof=1) / np.sqrt(len(scores)) if len(scores) > 1 else np.nan
    return BenchResult(float(scores.mean()), float(stderr), scores, failures)


def table_sweep(deltas, ns, replicates, seed, prior=None, d1_cells=None, d2_cells=None):
    """Mean discrepancy over the Cartesian product of (delta, N) cells for the
    first and second segments.  Returns (d1_cells, d2_cells, means, stderrs)
    with one row per D1 cell and one column per D2 cell."""
    deltas, ns = list(deltas), list(ns)
    if not deltas or not ns:
        raise ValueError("delta and N grids must be nonempty")
    if d1_cells is None:
        d1_cells = [(d, n) for d in deltas for n in ns]
    if d2_cells is None:
        d2_cells = [(d, n) for d in deltas for n in ns]
    means = np.full((len(d1_cells), len(d2_cells)), np.nan)
    stderrs = np.full_like(means, np.nan)
    for i, d1 in enumerate(d1_cells):
        for j, d2 in enumerate(d2_cells):
            cell_seed = np.random.SeedSequence(entropy=seed, spawn_key=(i, j))
            design = BenchDesign(
                d1=d1, d2=d2, replicates=replicates, seed=cell_seed.generate_state(1)[0]
            )
            result = run_bench(design, prior)
            means[i, j] = result.mean
            stderrs[i, j] = result.stderr
    return d1_cells, d2_cells, means, stderrs


def spline_interpolate(series):
    """Natural cubic spline through the observed points, evaluated at every
    base index they span; observed points are reproduced exactly."""
    if series.stride < 2:
        return SampledSeries(series.values.copy(), stride=1, offset=0, base_step=series.base_step)
    if len(series) < 4:
        raise ValueError("need at least 4 points for cubic spline interpolation")
    idx = series.base_indices()
    spline = CubicSpline(idx, series.values, bc_type="natural")
    dense = spline(np.arange(idx[0], idx[-1] + 1))
    return SampledSeries(dense, stride=1, offset=0, base_step=series.base_step)


def _sample_autocov(x, max_lag):
    n = len(x)
    xc = x - x.mean()
    return np.array([xc[: n - h] @ xc[h:] / n for h in range(max_lag + 1)])


def _levinson(gamma):
    """All-order Levinson recursion: returns (coeff by order, sigma2 by order)."""
    p_max = len(gamma) - 1
    sigma2 = np.empty(p_max + 1)
    sigma2[0] = gamma[0]
    coeffs = [np.array([])]
    phi = np.zeros(p_max)
    k = 0
    v = gamma[0]
    for p in range(1, p_max + 1):
        num = gamma[p] - phi[:k] @ gamma[p - 1 : p - 1 - k : -1] if k else gamma[p]
        a = num / v
        if k:
            phi[:k] -= a * phi[k - 1 :: -1][:k].copy()
        phi[k] = a
        k += 1
        v *= 1.0 - a * a
        sigma2[p] = v
        coeffs.append(phi[:k].copy())
    return coeffs, sigma2


def _modified_daniell(span):
    # half weights at the ends, as in R's modified Daniell kernel
    m = (span - 1) // 2
    w = np.ones(2 * m + 1)
    if m:
        w[0] = w[-1] = 0.5
    return w / w.sum()


def baseline_spectra(series, n_omega=128, max_order=None):
    """Conventional dense-data log-spectrum estimates on the standard grid.

    (a) Yule-Walker AR fit with AIC order selection (AIC = N log sigma2 + 2p,
    ties to the smaller order); (b) periodogram smoothed by a modified
    Daniell window of odd span ~ sqrt(N).  Returns (ar_log, smoothed_log).
    """
    if series.stride != 1:
        raise ValueError("baseline spectra need a dense (stride 1) series")
    n = len(series)
    if n < 32:
        raise ValueError("series too short (need N >= 32)")
    x = series.values
    if np.ptp(x) == 0:
        raise ValueError("degenerate (constant) series")
    grid = standard_grid(n_omega)

    p_max = max_order if max_order is not None else min(20, n // 4)
    gamma_hat = _sample_autocov(x, p_max)
    coeffs, sigma2 = _levinson(gamma_hat)
    aic = n * np.log(sigma2) + 2.0 * np.arange(p_max + 1)
    order = int(np.argmin(aic))
    phi = coeffs[order]
    z = np.exp(-2j * np.pi * grid)
    denom = np.abs(np.polyval(np.concatenate([[1.0], -phi])[::-1], z)) ** 2
    ar_log = np.log(sigma2[order] / denom)

    pgram = np.abs(np.fft.rfft(x - x.mean())) ** 2 / n
    freqs = np.arange(len(pgram)) / n
    span = int(np.ceil(np.sqrt(n)))
    if span % 2 == 0:
        span += 1
    kernel = _modified_daniell(span)
    m = (len(kernel) - 1) // 2
    # even reflection at both ends before smoothing
    padded = np.concatenate([pgram[m:0:-1], pgram, pgram[-2 : -2 - m : -1]])
    smoothed = np.convolve(padded, kernel, mode="valid")
    keep = slice(1, (n - 1) // 2 + 1)
    smooth_log = np.log(np.interp(grid, freqs[keep], smoothed[keep]))
    return ar_log, smooth_log


@dataclass(frozen=True)
class InterpComparison:
    """Curves (log scale, standard grid) for the interpolation comparison."""

    grid: np.ndarray
    truth: np.ndarray
    blm_raw: np.ndarray
    blm_interp: np.ndarray
    ar_fit: np.ndarray
    smoothed_pgram: np.ndarray
    raw_state: object  # BeliefState adjusted by the observed data only
    history_state: object  # BeliefState adjusted by the subsampled history only
    history_summary: object  # SpectrumSummary of history_state


def interp_comparison(seed, omega0=0.35, modulus=0.9, n_total=600, delta=2,
                      prior=None, mc_samples=2000, n_omega=128):
    """Interpolation-bias scenario: an AR(2) with a high-frequency spectral
    peak, five sixths of the series subsampled as history, the rest dense.

    Compares the Bayes linear estimate on the raw observed segments against
    estimates computed after cubic-spline interpolation of the history
    (Bayes linear, Yule-Walker AR fit and smoothed periodogram)."""
    from .beliefs import spectrum_summary

    prior = prior or PriorSpec()
    truth = SpectralModel(ar=ar2_from_omega(omega0, modulus))
    path = simulate(truth, n_total, seed)
    n_hist = 5 * n_total // 6
    if n_hist % 2 == 0:
        n_hist += 1  # keep the interpolated history flush with the dense tail
    history = subsample(SampledSeries(path.values[:n_hist]), delta)
    recent = SampledSeries(path.values[n_hist:])
    interp = spline_interpolate(history)
    combined = SampledSeries(np.concatenate([interp.values, recent.values]))

    grid = standard_grid(n_omega)
    prior_state = prior.to_state()
    layouts_raw = [
        PeriodogramData.layout("history", delta, len(history)),
        PeriodogramData.layout("recent", 1, len(recent)),
    ]
    seed_seq = np.random.SeedSequence(entropy=seed, spawn_key=(1,))
    m_raw, m_hist, m_interp = (s for s in seed_seq.spawn(3))
    moments_raw = forecast_moments(prior_state, layouts_raw, mc_samples, m_raw)
    obs_raw = np.concatenate([
        log_periodogram(history, "history").log_periodogram,
        log_periodogram(recent, "recent").log_periodogram,
    ])
    raw_state = adjust(prior_state, moments_raw, obs_raw)

    layouts_hist = [layouts_raw[0]]
    moments_hist = forecast_moments(prior_state, layouts_hist, mc_samples, m_hist)
    history_state = adjust(
        prior_state, moments_hist, log_periodogram(history, "history").log_periodogram
    )

    layouts_interp = [PeriodogramData.layout("interpolated", 1, len(combined))]
    moments_interp = forecast_moments(prior_state, layouts_interp, mc_samples, m_interp)
    interp_state = adjust(
        prior_state, moments_interp,
        log_periodogram(combined, "interpolated").log_periodogram,
    )

    ar_log, smooth_log = baseline_spectra(combined, n_omega)
    return InterpComparison(
        grid=grid,
        truth=np.log(truth.density(grid)),
        blm_raw=raw_state.mean_logspectrum().evaluate(grid),
        blm_interp=interp_state.mean_logspectrum().evaluate(grid),
        ar_fit=ar_log,
        smoothed_pgram=smooth_log,
        raw_state=raw_state,
        history_state=history_state,
        history_summary=spectrum_summary(history_state, grid),
    )
