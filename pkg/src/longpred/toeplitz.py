"""Yule-Walker systems over symmetric Toeplitz covariance structure.

The order-k least-squares predictor solves
    sum_{i=1}^{k} phi_i sigma(i - j) = sigma(j),   j = 1..k.

Sign conventions: ``ArkModel.phi`` always holds positive-forecast weights
(forecast = sum_j phi_j X_{n+1-j}).  The AR-infinity convention used by
``fraccoeff`` has a_0 = 1 and a_j < 0 for fractional noise; the closed-form
order-k coefficients are converted at this module's boundary via
phi_j = -a_{j,k}.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError
from scipy.special import gammaln

from .errors import AccuracyError, DomainError, NotPositiveDefiniteError
from .fraccoeff import AutocovSeq, LongMemoryModel, _log_abs_gamma_neg, exact_autocov


@dataclass(frozen=True)
class ArkModel:
    """Fitted order-k autoregressive predictor."""

    k: int
    phi: np.ndarray        # predictor weights phi_1..phi_k
    v: float               # innovation variance v(k)
    partials: np.ndarray   # reflection coefficients a_{n,n}, n = 1..k

    def __post_init__(self):
        object.__setattr__(self, "phi", np.asarray(self.phi, dtype=float))
        object.__setattr__(self, "partials", np.asarray(self.partials, dtype=float))
        if self.phi.size != self.k or self.partials.size != self.k:
            raise ValueError("phi and partials must have length k")
        if not self.v > 0.0:
            raise ValueError("innovation variance must be positive")


def durbin_levinson(acov, k):
    """Solve the nested Yule-Walker systems up to order k.

    Implements the textbook recursion: v(0) = sigma(0),
    a_{n,n} = [sigma(n) - sum_j a_{j,n-1} sigma(n-j)] / v(n-1),
    interior coefficients updated against their reversal, and
    v(n) = v(n-1)(1 - a_{n,n}^2).

    Raises NotPositiveDefiniteError naming the failing order as soon as
    |a_{n,n}| >= 1 or v(n) <= 0.
    """
    sig = acov.values
    if k < 1:
        raise ValueError("order k must be >= 1")
    if sig.size < k + 1:
        raise ValueError(f"need lags 0..{k}, have 0..{sig.size - 1}")
    if sig[0] <= 0.0:
        raise NotPositiveDefiniteError(0, "sigma(0) must be positive")
    phi = np.zeros(k)
    partials = np.zeros(k)
    v = sig[0]
    for n in range(1, k + 1):
        acc = sig[n] - np.dot(phi[: n - 1], sig[n - 1 : 0 : -1])
        refl = acc / v
        if not np.isfinite(refl) or abs(refl) >= 1.0:
            raise NotPositiveDefiniteError(n)
        phi[: n - 1] -= refl * phi[: n - 1][::-1]
        phi[n - 1] = refl
        partials[n - 1] = refl
        v *= 1.0 - refl * refl
        if v <= 0.0:
            raise NotPositiveDefiniteError(n)
    return ArkModel(k=k, phi=phi, v=float(v), partials=partials)


def empirical_autocov(sample, maxlag, demean=False):
    """Biased-divisor empirical autocovariances of a sample path.

    sigma_hat(h) = (1/T) sum_{t=1}^{T-h} Y_t Y_{t+h}; with ``demean`` the
    observations are first centred at the sample mean.
    """
    y = sample.values
    T = y.size
    if not 0 <= maxlag < T:
        raise ValueError(f"maxlag must be in [0, {T - 1}]")
    if demean:
        y = y - np.mean(y)
    out = np.empty(maxlag + 1)
    for h in range(maxlag + 1):
        out[h] = np.dot(y[: T - h], y[h:]) / T
    if out[0] <= 0.0:
        raise NotPositiveDefiniteError(0, "degenerate sample: sigma_hat(0) "
                                          "is not positive")
    return AutocovSeq(values=out, source="empirical", model=None)


def fi_ark_closed_form(d, k, sigma2_eps=1.0):
    """Order-k Yule-Walker predictor for fractional noise in closed form.

    The AR-infinity-convention coefficients are
    a_{j,k} = Gamma(k+1) Gamma(j-d) Gamma(k-d-j+1)
              / (Gamma(k-j+1) Gamma(j+1) Gamma(-d) Gamma(k-d+1)),
    all negative; the returned predictor weights are phi_j = -a_{j,k}.
    Innovation variance and partials come from one Durbin-Levinson pass on
    the exact autocovariances.
    """
    if not (0.0 < d < 0.5):
        raise DomainError(f"d={d} outside ]0, 1/2[")
    if k < 1:
        raise ValueError("order k must be >= 1")
    j = np.arange(1, k + 1, dtype=float)
    log_mag = (
        gammaln(k + 1.0)
        + gammaln(j - d)
        + gammaln(k - d - j + 1.0)
        - gammaln(k - j + 1.0)
        - gammaln(j + 1.0)
        - _log_abs_gamma_neg(d)
        - gammaln(k - d + 1.0)
    )
    phi = np.exp(log_mag)  # = -a_{j,k} > 0
    model = LongMemoryModel.fi(d, sigma2_eps=sigma2_eps)
    ref = durbin_levinson(exact_autocov(model, k), k)
    return ArkModel(k=k, phi=phi, v=ref.v, partials=ref.partials)


def toeplitz_solve(acov, rhs, k, rtol=1e-8):
    """Solve Sigma_k x = rhs for the k x k Toeplitz covariance matrix.

    Dense Cholesky at desk scale with one step of iterative refinement;
    the residual must satisfy ||Sigma x - rhs||_inf <= rtol ||rhs||_inf.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != k:
        raise ValueError("rhs length must equal k")
    mat = acov.toeplitz(k)
    try:
        factor = cho_factor(mat, lower=True)
    except LinAlgError as exc:
        raise NotPositiveDefiniteError(k, f"order-{k} Toeplitz matrix is not "
                                          f"positive definite") from exc
    x = cho_solve(factor, rhs)
    scale = np.max(np.abs(rhs)) if np.max(np.abs(rhs)) > 0 else 1.0
    resid = mat @ x - rhs
    if np.max(np.abs(resid)) > rtol * scale:
        x = x - cho_solve(factor, resid)
        resid = mat @ x - rhs
        if np.max(np.abs(resid)) > rtol * scale:
            raise AccuracyError(
                "Toeplitz solve residual exceeds tolerance",
                achieved=float(np.max(np.abs(resid)) / scale),
            )
    return x


def yule_walker_residual(acov, model_k):
    """Max relative residual of the order-k Yule-Walker equations."""
    k = model_k.k
    sig = acov.values
    mat = acov.toeplitz(k)
    rhs = sig[1 : k + 1]
    resid = mat @ model_k.phi - rhs
    return float(np.max(np.abs(resid)) / max(np.max(np.abs(rhs)), sig[0]))


def innovation_variance_quadratic_form(acov, model_k):
    """v(k) recomputed as sigma(0) - 2 phi'rho + phi'Sigma phi."""
    k = model_k.k
    sig = acov.values
    phi = model_k.phi
    return float(
        sig[0]
        - 2.0 * np.dot(phi, sig[1 : k + 1])
        + phi @ acov.toeplitz(k) @ phi
    )


def write_ark_csv(model_k, path):
    """CSV ``j,phi_j`` plus a JSON sidecar {k, v, partials}."""
    with open(path, "w", newline="") as fh:
        fh.write("j,phi_j\n")
        for j, p in enumerate(model_k.phi, start=1):
            fh.write(f"{j},{float(p)!r}\n")
    sidecar = {
        "k": model_k.k,
        "v": model_k.v,
        "partials": [float(x) for x in model_k.partials],
    }
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh)


def read_ark_csv(path):
    phi = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "j,phi_j":
            raise ValueError(f"unexpected header {header!r}")
        for line in fh:
            _, p = line.strip().split(",")
            phi.append(float(p))
    with open(str(path) + ".json") as fh:
        sidecar = json.load(fh)
    return ArkModel(k=sidecar["k"], phi=np.asarray(phi), v=sidecar["v"],
                    partials=np.asarray(sidecar["partials"]))
