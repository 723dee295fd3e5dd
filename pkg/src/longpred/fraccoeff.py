"""Exact coefficient sequences, autocovariances and spectral densities for
fractionally integrated noise and FARIMA(p, d, q) processes.

Conventions
-----------
* ``ar_poly`` holds phi_1..phi_p of phi(z) = 1 - phi_1 z - ... - phi_p z^p,
  ``ma_poly`` holds theta_1..theta_q of theta(z) = 1 + theta_1 z + ... + theta_q z^q.
  Both polynomials must be zero-free on the closed unit disk.
* An AR-infinity sequence (a_j) satisfies eps_n = sum_j a_j X_{n-j} with
  a_0 = 1; an MA-infinity sequence (b_j) satisfies X_n = sum_j b_j eps_{n-j}
  with b_0 = 1.  The two power series are mutual inverses.  For fractional
  noise a_j < 0 and b_j > 0 for every j >= 1.
* All gamma-function work goes through log-gamma ratio recursions so that
  indices up to 10^6 never overflow; plain Gamma calls are reserved for
  test oracles.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import quad
from scipy.signal import fftconvolve
from scipy.special import gammaln

from .errors import AccuracyError, DomainError

# constructors reject d outside this closed interval: the formulas
# degenerate at both endpoints of ]0, 1/2[
D_MIN = 1e-4
D_MAX = 0.5 - 1e-4

_TINY = np.finfo(float).tiny


def _log_abs_gamma_neg(d):
    # |Gamma(-d)| = Gamma(1-d)/d for 0 < d < 1; Gamma(-d) itself is negative
    return gammaln(1.0 - d) - math.log(d)


def _check_disk_free(coeffs_ascending, name):
    """Reject polynomials with a zero on the closed unit disk."""
    if len(coeffs_ascending) == 1:
        return
    roots = npoly.polyroots(coeffs_ascending)
    if roots.size and np.min(np.abs(roots)) <= 1.0 + 1e-12:
        raise DomainError(f"{name} polynomial has a zero on the closed unit disk")


@dataclass(frozen=True)
class LongMemoryModel:
    """Parametric specification of an FI(d) or FARIMA(p, d, q) process."""

    kind: str  # "fi" | "farima"
    d: float
    ar_poly: tuple = ()
    ma_poly: tuple = ()
    sigma2_eps: float = 1.0

    def __post_init__(self):
        if self.kind not in ("fi", "farima"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if not (D_MIN <= self.d <= D_MAX):
            raise DomainError(
                f"memory parameter d={self.d} outside [{D_MIN}, {D_MAX}]"
            )
        if not (self.sigma2_eps > 0.0 and math.isfinite(self.sigma2_eps)):
            raise DomainError("innovation variance must be positive and finite")
        if self.kind == "fi" and (self.ar_poly or self.ma_poly):
            raise DomainError("FI models carry no AR/MA polynomials")
        object.__setattr__(self, "ar_poly", tuple(float(c) for c in self.ar_poly))
        object.__setattr__(self, "ma_poly", tuple(float(c) for c in self.ma_poly))
        _check_disk_free((1.0,) + tuple(-c for c in self.ar_poly), "AR")
        _check_disk_free((1.0,) + self.ma_poly, "MA")

    @classmethod
    def fi(cls, d, sigma2_eps=1.0):
        return cls(kind="fi", d=d, sigma2_eps=sigma2_eps)

    @classmethod
    def farima(cls, d, ar=(), ma=(), sigma2_eps=1.0):
        return cls(kind="farima", d=d, ar_poly=tuple(ar), ma_poly=tuple(ma),
                   sigma2_eps=sigma2_eps)

    @property
    def is_pure_fractional(self):
        return not self.ar_poly and not self.ma_poly


@dataclass(frozen=True)
class CoeffSeq:
    """Finite prefix of an AR-infinity or MA-infinity coefficient sequence."""

    convention: str  # "ar_inf" | "ma_inf"
    values: np.ndarray
    model: LongMemoryModel
    clamped: bool = False  # True if subnormal entries were flushed to zero

    def __post_init__(self):
        if self.convention not in ("ar_inf", "ma_inf"):
            raise DomainError(f"unknown convention {self.convention!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise DomainError("coefficient sequence must be a nonempty 1-d array")
        if values[0] != 1.0:
            raise DomainError("coefficient sequences are normalised to values[0] = 1")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class AutocovSeq:
    """Autocovariances sigma(0..m), exact for a model or empirical."""

    values: np.ndarray
    source: str  # "exact" | "empirical"
    model: LongMemoryModel | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise DomainError("autocovariance sequence must be a nonempty 1-d array")
        if not np.all(np.isfinite(values)):
            raise DomainError("autocovariances must be finite")
        if values[0] <= 0.0:
            raise DomainError("sigma(0) must be positive")
        if self.source not in ("exact", "empirical"):
            raise DomainError(f"unknown source {self.source!r}")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def toeplitz(self, k):
        """Dense k x k covariance matrix with entries sigma(|i-j|)."""
        if k < 1 or k > self.values.size:
            raise ValueError(f"need lags 0..{k - 1}, have 0..{self.values.size - 1}")
        idx = np.abs(np.subtract.outer(np.arange(k), np.arange(k)))
        return self.values[idx]


def _clamp_subnormal(values):
    mask = (values != 0.0) & (np.abs(values) < _TINY)
    if np.any(mask):
        values = values.copy()
        values[mask] = 0.0
        return values, True
    return values, False


def _fi_ar_values(d, n):
    # a_0 = 1, a_{j+1} = a_j (j - d)/(j + 1); a_1 = -d, all later ratios > 0
    a = np.empty(n + 1)
    a[0] = 1.0
    if n:
        j = np.arange(n, dtype=float)
        a[1:] = np.cumprod((j - d) / (j + 1.0))
    return a


def _fi_ma_values(d, n):
    # b_0 = 1, b_{j+1} = b_j (j + d)/(j + 1); b_1 = d
    b = np.empty(n + 1)
    b[0] = 1.0
    if n:
        j = np.arange(n, dtype=float)
        b[1:] = np.cumprod((j + d) / (j + 1.0))
    return b


def series_inverse(coeffs, n):
    """First n+1 coefficients of 1/C(z) for a power series with C(0) = 1.

    Newton iteration with FFT products, O(n log n).
    """
    c = np.zeros(n + 1)
    src = np.asarray(coeffs, dtype=float)
    c[: min(src.size, n + 1)] = src[: n + 1]
    if c[0] != 1.0:
        raise ValueError("series_inverse requires a leading coefficient of 1")
    inv = np.array([1.0])
    m = 1
    while m < n + 1:
        m = min(2 * m, n + 1)
        resid = fftconvolve(c[:m], inv)[:m]
        resid = -resid
        resid[0] += 2.0
        inv = fftconvolve(inv, resid)[:m]
    inv[0] = 1.0  # exact by construction; FFT round-trip leaves 1 +- eps
    return inv


def ar_inf_coeffs(model, n):
    """AR-infinity coefficients a_0..a_n of the model.

    FI values come from the exact ratio recursion; FARIMA values convolve
    the fractional expansion with phi(z) and the power-series inverse of
    theta(z).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    fi = _fi_ar_values(model.d, n)
    if model.is_pure_fractional:
        values = fi
    else:
        values = np.convolve(fi, np.r_[1.0, -np.asarray(model.ar_poly)])[: n + 1]
        if model.ma_poly:
            theta_inv = series_inverse(np.r_[1.0, np.asarray(model.ma_poly)], n)
            values = fftconvolve(values, theta_inv)[: n + 1]
        values[0] = 1.0
    values, clamped = _clamp_subnormal(values)
    return CoeffSeq(convention="ar_inf", values=values, model=model, clamped=clamped)


def ma_inf_coeffs(model, n):
    """MA-infinity coefficients b_0..b_n; the inverse series of the a_j."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if model.is_pure_fractional:
        values = _fi_ma_values(model.d, n)
    else:
        values = series_inverse(ar_inf_coeffs(model, n).values, n)
    values, clamped = _clamp_subnormal(values)
    return CoeffSeq(convention="ma_inf", values=values, model=model, clamped=clamped)


def _fi_autocov_values(d, m, sigma2):
    # sigma(0) = sigma2 Gamma(1-2d)/Gamma(1-d)^2,
    # sigma(j+1) = sigma(j) (j + d)/(j + 1 - d): positive, decreasing
    s = np.empty(m + 1)
    s[0] = sigma2 * math.exp(gammaln(1.0 - 2.0 * d) - 2.0 * gammaln(1.0 - d))
    if m:
        j = np.arange(m, dtype=float)
        s[1:] = s[0] * np.cumprod((j + d) / (j + 1.0 - d))
    return s


def _powerlaw_product_tails(c0, c1, d, start, lags):
    """For each lag k, integral_{start}^inf w(x) w(x+k) dx with
    w(x) = x^(d-1) (c0 + c1/x).

    Double substitution x = start/t, t = s^(1/(1-2d)) removes the power-law
    decay so a fixed Gauss-Legendre rule converges fast.
    """
    gamma = 1.0 / (1.0 - 2.0 * d)
    nodes, weights = np.polynomial.legendre.leggauss(64)
    s = 0.5 * (nodes + 1.0)
    ds = 0.5 * weights
    t = s ** gamma
    x = start / t  # shape (64,)
    jac = (start / t ** 2) * gamma * s ** (gamma - 1.0)
    w_x = x ** (d - 1.0) * (c0 + c1 / x)
    lags = np.asarray(lags, dtype=float)[:, None]
    xk = x[None, :] + lags
    w_xk = xk ** (d - 1.0) * (c0 + c1 / xk)
    return np.sum(w_x[None, :] * w_xk * (jac * ds)[None, :], axis=1)


def _fit_powerlaw(values, j_lo, j_hi, exponent):
    """Least-squares fit values[j] ~ j^exponent (c0 + c1/j) on j_lo..j_hi."""
    j = np.arange(j_lo, j_hi + 1, dtype=float)
    y = values[j_lo : j_hi + 1] * j ** (-exponent)
    design = np.column_stack([np.ones_like(j), 1.0 / j])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef[0], coef[1]


def _farima_autocov_values(model, m, rtol=1e-8):
    """sigma(0..m) for a FARIMA model by MA convolution with an analytic
    power-law tail, adapted until the tail's own error estimate is below
    rtol relative to each value."""
    d = model.d
    sigma2 = model.sigma2_eps
    J = max(1 << 14, 1 << int(math.ceil(math.log2(16 * (m + 2)))))
    j_max = 1 << 22
    last_bound = math.inf
    while True:
        b = ma_inf_coeffs(model, J).values
        j0 = J - m  # common upper summation index so every lag shares it
        lags = np.arange(m + 1)
        # partial_k = sum_{j=0}^{j0} b_j b_{j+k} for all lags at once
        partial = fftconvolve(b, b[j0::-1])[j0 : j0 + m + 1]

        # two-parameter power-law fit of b on the top octave, validated by
        # predicting the octave below from the one below that
        c0, c1 = _fit_powerlaw(b, j0 // 2, j0, d - 1.0)
        c0v, c1v = _fit_powerlaw(b, j0 // 4, j0 // 2 - 1, d - 1.0)
        jv = np.arange(j0 // 2, j0 + 1, dtype=float)
        pred = jv ** (d - 1.0) * (c0v + c1v / jv)
        actual = b[j0 // 2 : j0 + 1]
        scale = np.max(np.abs(actual))
        r_val = np.max(np.abs(pred - actual)) / scale if scale > 0 else 0.0

        tails = _powerlaw_product_tails(c0, c1, d, j0 + 0.5, lags)
        values = sigma2 * (partial + tails)
        float_err = 64.0 * np.finfo(float).eps * float(
            np.sum(np.abs(b)) * np.max(np.abs(b))
        )
        bound = sigma2 * (np.abs(tails) * (4.0 * r_val + 8.0 / j0 ** 2) + float_err)
        rel = np.max(bound / np.maximum(np.abs(values), _TINY))
        if rel <= rtol:
            return values
        last_bound = min(last_bound, rel)
        if J >= j_max:
            raise AccuracyError(
                f"FARIMA autocovariance tail could not reach rtol={rtol:g}",
                achieved=last_bound,
            )
        J *= 2


def exact_autocov(model, m, rtol=1e-8):
    """Exact autocovariances sigma(0..m) of the model.

    FI uses the closed-form ratio recursion; FARIMA sums the MA convolution
    sigma(k) = sigma2 * sum_j b_j b_{j+k} with an adaptive analytic tail.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if model.is_pure_fractional:
        values = _fi_autocov_values(model.d, m, model.sigma2_eps)
    else:
        values = _farima_autocov_values(model, m, rtol=rtol)
    return AutocovSeq(values=values, source="exact", model=model)


def spectral_density(model, lam):
    """Spectral density f(lambda) on [-pi, pi] \\ {0}.

    f(lambda) = sigma2/(2 pi) (2 sin(|lambda|/2))^(-2d) |theta|^2/|phi|^2;
    it diverges at 0 for d > 0, so lambda = 0 is rejected.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(np.abs(lam_arr) > np.pi + 1e-12):
        raise DomainError("frequency outside [-pi, pi]")
    if np.any(lam_arr == 0.0):
        raise DomainError("spectral density is singular at lambda = 0")
    f = (model.sigma2_eps / (2.0 * np.pi)) * (
        2.0 * np.sin(np.abs(lam_arr) / 2.0)
    ) ** (-2.0 * model.d)
    if not model.is_pure_fractional:
        z = np.exp(-1j * lam_arr)
        theta = npoly.polyval(z, np.r_[1.0, np.asarray(model.ma_poly)])
        phi = npoly.polyval(z, np.r_[1.0, -np.asarray(model.ar_poly)])
        f = f * (np.abs(theta) ** 2 / np.abs(phi) ** 2)
    if np.isscalar(lam) or np.ndim(lam) == 0:
        return float(f)
    return f


def integrate_symmetric_singular(g, alpha, rtol=1e-10, split=0.5):
    """integral_{-pi}^{pi} g(lambda) d lambda for an even g with an
    integrable |lambda|^(-alpha) singularity at 0 (0 <= alpha < 1).

    The singular piece uses the substitution u = lambda^(1-alpha).
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"singularity exponent {alpha} outside [0, 1)")
    beta = 1.0 - alpha

    def transformed(u):
        lam = u ** (1.0 / beta)
        return g(lam) * (1.0 / beta) * u ** (1.0 / beta - 1.0)

    i_sing, _ = quad(transformed, 0.0, split ** beta, epsabs=0.0, epsrel=rtol,
                     limit=200)
    i_reg, _ = quad(g, split, np.pi, epsabs=0.0, epsrel=rtol, limit=200)
    return 2.0 * (i_sing + i_reg)


def model_to_json(model):
    """Serialise as {kind, d, ar, ma, sigma2}."""
    return json.dumps(
        {
            "kind": model.kind,
            "d": model.d,
            "ar": list(model.ar_poly),
            "ma": list(model.ma_poly),
            "sigma2": model.sigma2_eps,
        }
    )


def model_from_json(text):
    obj = json.loads(text)
    return LongMemoryModel(
        kind=obj["kind"],
        d=float(obj["d"]),
        ar_poly=tuple(obj.get("ar", ())),
        ma_poly=tuple(obj.get("ma", ())),
        sigma2_eps=float(obj.get("sigma2", 1.0)),
    )


def write_indexed_csv(values, path):
    """Dump a coefficient or autocovariance array as ``index,value`` rows."""
    with open(path, "w", newline="") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(np.asarray(values, dtype=float)):
            fh.write(f"{i},{float(v)!r}\n")


def read_indexed_csv(path):
    values = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "index,value":
            raise ValueError(f"unexpected header {header!r}")
        for line in fh:
            _, v = line.strip().split(",")
            values.append(float(v))
    return np.asarray(values)
