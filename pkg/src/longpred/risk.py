"""Exact and asymptotic mean-squared prediction-error quantities.

Quantities for a model at order k:

* truncation excess: E[(X_{k+1} - wk_truncated forecast)^2] - sigma_eps^2,
  the price of cutting the Wiener-Kolmogorov series at k terms;
* AR(k) excess: v(k) - sigma_eps^2, the price of fitting a misspecified
  order-k autoregression;
* the constant c_of_d(d) of the k^-1 truncation-rate expansion for
  fractional noise, the improvement ratio r(k), a three-term decomposition
  of the AR(k) excess, and Monte Carlo scaling checks for the
  estimated-coefficient error.

Sign conventions inside the decomposition are fixed so that
term1 + term2 + term3 equals the AR(k) excess and term3 equals the
truncation excess; term1 >= 0 is the mean-squared distance between the two
predictors, term2 <= 0.  (Equivalent displays in the literature flip the
overall sign and describe the negated terms.)
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.signal import fftconvolve
from scipy.special import gammaln

from .errors import (DomainError, InternalConsistencyError,
                     StatisticalPowerError)
from .fraccoeff import (LongMemoryModel, _fi_ar_values, _fi_autocov_values,
                        _log_abs_gamma_neg, ar_inf_coeffs, exact_autocov,
                        integrate_symmetric_singular, spectral_density)
from .rng import replicate_map
from .simulate import gaussian_paths
from .spectral import whittle_fit
from .tails import powerlaw_tail_sum
from .toeplitz import (durbin_levinson, empirical_autocov,
                       fi_ark_closed_form, toeplitz_solve)


@dataclass(frozen=True)
class RiskReport:
    """Decomposed mean-squared prediction-error quantities for (model, k)."""

    model: LongMemoryModel
    k: int
    trunc_excess: float
    ark_excess: float
    decomposition: dict
    ratio: float


@dataclass(frozen=True)
class SlopeReport:
    """Monte Carlo estimates over a grid plus the fitted log-log slope."""

    grid: np.ndarray
    estimates: np.ndarray
    stderrs: np.ndarray
    slope: float
    slope_stderr: float


# ---------------------------------------------------------------------------
# analytic quantities


def _trunc_tail_values(model, k):
    """Return a callable producing f(j) = -a_j sum_{l<=k} a_l sigma(j-l)
    for j = k+1..J; the series whose sum is the truncation excess."""

    def values(J):
        if model.is_pure_fractional:
            a = _fi_ar_values(model.d, J)
            sig = _fi_autocov_values(model.d, J, model.sigma2_eps)
        else:
            a = ar_inf_coeffs(model, J).values
            sig = exact_autocov(model, J).values
        inner = fftconvolve(a[: k + 1], sig)[k + 1 : J + 1]
        return -a[k + 1 : J + 1] * inner

    return values


def truncation_excess(model, k, rtol=1e-9):
    """E[(X_{k+1} - truncated WK forecast)^2] - sigma_eps^2.

    Uses the orthogonality identity sum_{l>=0} a_l sigma(l-j) = 0 (j > 0)
    to reduce the double tail sum to a single series over j > k, evaluated
    with an adaptive cutoff plus analytic power-law tail.
    """
    if k < 1:
        raise ValueError("order k must be >= 1")
    result = powerlaw_tail_sum(
        _trunc_tail_values(model, k),
        exponent=model.d - 2.0,
        j_start=k + 1,
        rtol=rtol,
        j0=max(1 << 14, 8 * (k + 1)),
    )
    return result.value


def truncation_excess_quadratic_form(model, k):
    """Finite-sum identity for the same quantity:
    sum_{j,l=0}^{k} a_j a_l sigma(j-l) - sigma_eps^2 (the residual variance
    of the length-(k+1) truncated AR filter).  Kept as an independent
    cross-check of the tail route."""
    a = ar_inf_coeffs(model, k).values
    sig = exact_autocov(model, k).values
    w = fftconvolve(a, a[::-1])[k:]
    return float(w[0] * sig[0] + 2.0 * np.dot(w[1:], sig[1:])
                 - model.sigma2_eps)


def ark_excess(model, k, _check_rtol=1e-8):
    """v(k) - sigma_eps^2 from Durbin-Levinson on the exact autocovariances,
    cross-checked against the explicit quadratic form."""
    if k < 1:
        raise ValueError("order k must be >= 1")
    acov = exact_autocov(model, k)
    model_k = durbin_levinson(acov, k)
    sig = acov.values
    quad_v = float(
        sig[0]
        - 2.0 * np.dot(model_k.phi, sig[1 : k + 1])
        + model_k.phi @ acov.toeplitz(k) @ model_k.phi
    )
    if abs(quad_v - model_k.v) > _check_rtol * sig[0]:
        raise InternalConsistencyError(
            f"v(k) recursion {model_k.v!r} disagrees with quadratic form "
            f"{quad_v!r}"
        )
    return model_k.v - model.sigma2_eps


def c_of_d(d):
    """Constant of the k^-1 truncation-rate expansion for fractional noise:
    Gamma(1-2d) Gamma(2d) / (Gamma(-d)^2 Gamma(d) Gamma(1+d)).

    Gamma(-d) is negative but enters squared; everything is evaluated in
    log space.
    """
    if not (0.0 < d < 0.5):
        raise DomainError(f"d={d} outside ]0, 1/2[")
    return math.exp(
        gammaln(1.0 - 2.0 * d)
        + gammaln(2.0 * d)
        - 2.0 * _log_abs_gamma_neg(d)
        - gammaln(d)
        - gammaln(1.0 + d)
    )


def excess_decomposition(d, k, sigma2_eps=1.0):
    """Three-term split of the AR(k) excess for fractional noise.

    term1 = (a_k - a)' Sigma_k (a_k - a) over indices 1..k (the mean-squared
    distance between the two forecasts), term2 = -2 * term1's cross piece
    against the tail, term3 = the truncation excess.  All sums are finite
    thanks to the orthogonality identity; term1 + term2 + term3 equals the
    AR(k) excess.
    """
    model = LongMemoryModel.fi(d, sigma2_eps=sigma2_eps)
    a = ar_inf_coeffs(model, k).values
    ak = np.concatenate([[1.0], fi_ark_closed_form(d, k).phi * -1.0])
    acov = exact_autocov(model, k)
    sig = acov.values

    delta = ak[1:] - a[1:]
    term1 = float(delta @ acov.toeplitz(k) @ delta)

    # u(j) = sum_{l>k} a_l sigma(j-l) = sigma2 1{j=0} - sum_{l<=k} a_l sigma(j-l)
    idx = np.abs(np.subtract.outer(np.arange(k + 1), np.arange(k + 1)))
    u = -(sig[idx] @ a)
    u[0] += sigma2_eps

    term2 = float(-2.0 * np.dot(delta, u[1:]))
    term3 = float(-np.dot(a, u))
    return {"term1": term1, "term2": term2, "term3": term3}


def r_of_k(d, k, rtol=1e-8):
    """Relative improvement of AR(k) fitting over truncation for fractional
    noise, in [0, 1).

    Computed two independent ways: from the closed-form decomposition
    (term1/term3) and as (trunc - ark)/trunc from the excess routines; the
    two must agree to 1e-6 relative.
    """
    dec = excess_decomposition(d, k)
    r_closed = dec["term1"] / dec["term3"]
    model = LongMemoryModel.fi(d)
    trunc = truncation_excess(model, k, rtol=rtol)
    ark = ark_excess(model, k)
    r_direct = (trunc - ark) / trunc
    if abs(r_closed - r_direct) > 1e-6 * max(abs(r_direct), 1e-12):
        raise InternalConsistencyError(
            f"improvement ratio mismatch: closed-form {r_closed!r} vs "
            f"direct {r_direct!r}"
        )
    return r_closed


def fi_risk_report(d, k, sigma2_eps=1.0):
    """Assembled RiskReport for fractional noise."""
    model = LongMemoryModel.fi(d, sigma2_eps=sigma2_eps)
    trunc = truncation_excess(model, k)
    ark = ark_excess(model, k)
    dec = excess_decomposition(d, k, sigma2_eps=sigma2_eps)
    return RiskReport(
        model=model,
        k=k,
        trunc_excess=trunc,
        ark_excess=ark,
        decomposition=dec,
        ratio=(trunc - ark) / trunc,
    )


# ---------------------------------------------------------------------------
# estimated-coefficient covariance asymptotics


def compute_H(model, model_k):
    """Matrix H_{ij} = integral h^(i) h^(j) f^2 over [-pi, pi] with
    h(lambda) = |1 - sum_r phi_r e^{i r lambda}|^2 and
    h^(r) = -2 [cos(r lambda) - sum_s phi_s cos((r-s) lambda)].

    Requires d < 1/4 so that f^2 is integrable.
    """
    if model.d >= 0.25:
        raise DomainError("H is defined only for d < 1/4 (f^2 integrable)")
    k = model_k.k
    phi = model_k.phi

    def deriv(r, lam):
        s = np.arange(1, k + 1)
        return -2.0 * (np.cos(r * lam) - np.dot(phi, np.cos((r - s) * lam)))

    H = np.empty((k, k))
    alpha = 4.0 * model.d
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            def integrand(lam, i=i, j=j):
                f = spectral_density(model, lam)
                return deriv(i, lam) * deriv(j, lam) * f * f

            val = integrate_symmetric_singular(integrand, alpha)
            H[i - 1, j - 1] = val
            H[j - 1, i - 1] = val
    return H


def h_sandwich(model, model_k):
    """Sigma_k^{-1} H Sigma_k^{-1} via Toeplitz solves."""
    k = model_k.k
    H = compute_H(model, model_k)
    acov = exact_autocov(model, k)
    half = np.column_stack([toeplitz_solve(acov, H[:, j], k) for j in range(k)])
    M = np.column_stack([toeplitz_solve(acov, half.T[:, j], k) for j in range(k)])
    return 0.5 * (M + M.T)


def h_covariance_check(d, k, T, reps, seed, workers=None):
    """Monte Carlo check of T Cov(phi_hat) against c * Sigma^-1 H Sigma^-1.

    Returns the empirical scaled covariance, the reference matrix, the
    worst eigenvalue ratio against c in {2, 4}, and the least-squares
    fitted scalar c.
    """
    model = LongMemoryModel.fi(d)
    acov_T = exact_autocov(model, T)
    exact_k = durbin_levinson(acov_T, k)
    M = h_sandwich(model, exact_k)
    paths = gaussian_paths(acov_T, T, reps, seed, stream=(9,))

    def one(rep):
        fit = durbin_levinson(empirical_autocov(paths[rep], k), k)
        return fit.phi - exact_k.phi

    diffs = np.asarray(replicate_map(one, reps, workers))
    S = T * (diffs.T @ diffs) / reps

    ratios = {}
    for c in (2.0, 4.0):
        w = eigh(S, c * M, eigvals_only=True)
        ratios[c] = float(max(w.max(), 1.0 / w.min()))
    c_fit = float(np.sum(S * M) / np.sum(M * M))
    return {
        "scaled_cov": S,
        "reference": M,
        "factor_c2": ratios[2.0],
        "factor_c4": ratios[4.0],
        "c_fit": c_fit,
    }


# ---------------------------------------------------------------------------
# Monte Carlo scaling experiments


def _loglog_slope(grid, means, stderrs):
    lx = np.log(np.asarray(grid, dtype=float))
    ly = np.log(means)
    xc = lx - lx.mean()
    w = xc / np.sum(xc * xc)
    slope = float(np.dot(w, ly))
    var = np.sum(w * w * (stderrs / means) ** 2)
    return slope, float(math.sqrt(var))


def _mc_table(grid, per_point):
    means = np.empty(len(grid))
    stderrs = np.empty(len(grid))
    for i, _ in enumerate(grid):
        vals = per_point(i)
        means[i] = float(np.mean(vals))
        stderrs[i] = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    slope, slope_se = _loglog_slope(grid, means, stderrs)
    return SlopeReport(grid=np.asarray(grid, dtype=float), estimates=means,
                       stderrs=stderrs, slope=slope, slope_stderr=slope_se)


def _check_reps(reps):
    if reps < 50:
        raise StatisticalPowerError(
            f"{reps} replicates are too few for a slope conclusion (need >= 50)"
        )


def coeffcov_scaling(d, k, T_grid, reps, seed, workers=None):
    """MC estimate of E[(ark-plugin forecast - exact AR(k) forecast)^2]
    over T_grid, with the fitted log-log slope vs T.

    Expected slopes: -1 for d < 1/4, -1 with a log factor at d = 1/4, and
    4d - 2 for d > 1/4.
    """
    _check_reps(reps)
    T_grid = sorted(int(t) for t in T_grid)
    model = LongMemoryModel.fi(d)
    acov_big = exact_autocov(model, max(T_grid))
    acov_k = exact_autocov(model, k)
    exact_k = durbin_levinson(acov_k, k)

    def per_point(i):
        T = T_grid[i]
        trains = gaussian_paths(acov_big, T, reps, seed, stream=(0, i, 0))
        windows = gaussian_paths(acov_k, k, reps, seed, stream=(0, i, 1))

        def one(rep):
            fit = durbin_levinson(empirical_autocov(trains[rep], k), k)
            w = windows[rep].values[::-1]
            return float(np.dot(fit.phi - exact_k.phi, w) ** 2)

        return np.asarray(replicate_map(one, reps, workers))

    return _mc_table(T_grid, per_point)


def wk_plugin_scaling(d, k, T_grid, reps, seed, workers=None):
    """MC estimate of E[(wk-plugin forecast - exact truncated forecast)^2]
    over T_grid at fixed k, with the fitted log-log slope vs T."""
    _check_reps(reps)
    T_grid = sorted(int(t) for t in T_grid)
    model = LongMemoryModel.fi(d)
    acov_big = exact_autocov(model, max(T_grid))
    acov_k = exact_autocov(model, k)
    a_exact = ar_inf_coeffs(model, k).values

    def per_point(i):
        T = T_grid[i]
        trains = gaussian_paths(acov_big, T, reps, seed, stream=(1, i, 0))
        windows = gaussian_paths(acov_k, k, reps, seed, stream=(1, i, 1))

        def one(rep):
            fit = whittle_fit(trains[rep])
            a_hat = _fi_ar_values(fit.d_hat, k)
            w = windows[rep].values[::-1]
            return float(np.dot(a_hat[1:] - a_exact[1:], w) ** 2)

        return np.asarray(replicate_map(one, reps, workers))

    return _mc_table(T_grid, per_point)


def wk_plugin_order_scaling(d, T, k_grid, reps, seed, workers=None):
    """Companion experiment varying k at fixed T.  The theory gives only an
    upper bound O(k^{2d}) in k, so slopes well below 2d are expected."""
    _check_reps(reps)
    k_grid = sorted(int(k) for k in k_grid)
    model = LongMemoryModel.fi(d)
    acov_big = exact_autocov(model, T)
    acov_k = exact_autocov(model, max(k_grid))
    a_exact = ar_inf_coeffs(model, max(k_grid)).values

    def per_point(i):
        k = k_grid[i]
        trains = gaussian_paths(acov_big, T, reps, seed, stream=(2, i, 0))
        windows = gaussian_paths(acov_k, k, reps, seed, stream=(2, i, 1))

        def one(rep):
            fit = whittle_fit(trains[rep])
            a_hat = _fi_ar_values(fit.d_hat, k)
            w = windows[rep].values[::-1]
            return float(np.dot(a_hat[1:] - a_exact[1 : k + 1], w) ** 2)

        return np.asarray(replicate_map(one, reps, workers))

    return _mc_table(k_grid, per_point)


def covmoment_scaling(d, n_grid, reps, seed, workers=None):
    """MC slope of E[(sigma_hat(0) - sigma(0))^2] against the path length.

    Expected slopes: -1 for d < 1/4 and 4d - 2 for d > 1/4.
    """
    _check_reps(reps)
    n_grid = sorted(int(n) for n in n_grid)
    model = LongMemoryModel.fi(d)
    acov = exact_autocov(model, max(n_grid))
    sigma0 = acov.values[0]

    def per_point(i):
        n = n_grid[i]
        paths = gaussian_paths(acov, n, reps, seed, stream=(3, i))

        def one(rep):
            y = paths[rep].values
            return float((np.dot(y, y) / n - sigma0) ** 2)

        return np.asarray(replicate_map(one, reps, workers))

    return _mc_table(n_grid, per_point)
