"""Exact Gaussian sample paths from a target autocovariance sequence.

The primary sampler embeds the n x n Toeplitz covariance in a circulant of
size 2(n-1) diagonalised by the FFT (O(n log n)); if the embedding has an
eigenvalue below -tol it falls back to the Durbin-Levinson innovations
method (O(n^2), exact for any positive-definite prefix).
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError
from .fraccoeff import AutocovSeq
from .rng import derive_rng, normals
from .series import SamplePath

EIG_TOL_FACTOR = 1e-10  # tolerance = factor * max embedding eigenvalue


@dataclass(frozen=True)
class SimulationPlan:
    """What to simulate: covariance prefix, length, master seed and
    optional substream ids for Monte Carlo splitting."""

    acov: AutocovSeq
    n: int
    seed: int
    stream: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("path length must be >= 1")
        if len(self.acov) < self.n:
            raise ValueError(
                f"need lags 0..{self.n - 1}, have 0..{len(self.acov) - 1}"
            )


def circulant_eigenvalues(acov, n):
    """Eigenvalues of the size-2(n-1) circulant embedding of Sigma_n."""
    if n < 2:
        raise ValueError("embedding needs n >= 2")
    sig = acov.values[:n]
    c = np.concatenate([sig, sig[-2:0:-1]])
    return np.fft.fft(c).real


def _choose_method(acov, n):
    if n < 2:
        return "circulant", None
    eig = circulant_eigenvalues(acov, n)
    tol = EIG_TOL_FACTOR * eig.max()
    if eig.min() < -tol:
        return "innovations", None
    return "circulant", np.sqrt(np.clip(eig, 0.0, None))


def _circulant_paths(sqrt_eig, n, z):
    """Map a (reps, 2(n-1)) block of standard normals to exact paths."""
    if n == 1:
        return sqrt_eig[:1] * z[:, :1]  # sqrt_eig holds sqrt(sigma(0)) here
    m = 2 * (n - 1)
    reps = z.shape[0]
    w = np.zeros((reps, m), dtype=complex)
    w[:, 0] = sqrt_eig[0] * z[:, 0]
    w[:, n - 1] = sqrt_eig[n - 1] * z[:, 1]
    if n > 2:
        half = np.sqrt(0.5)
        interior = sqrt_eig[1 : n - 1] * half
        w[:, 1 : n - 1] = interior * (z[:, 2::2] + 1j * z[:, 3::2])
        w[:, n:] = np.conj(w[:, n - 2 : 0 : -1])
    x = np.fft.fft(w, axis=1).real / np.sqrt(m)
    return x[:, :n]


def _innovation_weights(acov, n):
    """All Durbin-Levinson coefficient vectors and innovation sds up to
    order n-1, for the sequential innovations sampler."""
    sig = acov.values
    if sig[0] <= 0.0:
        raise NotPositiveDefiniteError(0, "sigma(0) must be positive")
    weights = [np.empty(0)]
    sds = [np.sqrt(sig[0])]
    phi = np.zeros(n - 1)
    v = sig[0]
    for t in range(1, n):
        acc = sig[t] - np.dot(phi[: t - 1], sig[t - 1 : 0 : -1])
        refl = acc / v
        if not np.isfinite(refl) or abs(refl) >= 1.0:
            raise NotPositiveDefiniteError(t)
        phi[: t - 1] -= refl * phi[: t - 1][::-1]
        phi[t - 1] = refl
        v *= 1.0 - refl * refl
        if v <= 0.0:
            raise NotPositiveDefiniteError(t)
        weights.append(phi[:t].copy())
        sds.append(np.sqrt(v))
    return weights, np.asarray(sds)


def _innovations_paths(acov, n, z):
    weights, sds = _innovation_weights(acov, n)
    reps = z.shape[0]
    x = np.empty((reps, n))
    x[:, 0] = sds[0] * z[:, 0]
    for t in range(1, n):
        pred = x[:, t - 1 :: -1][:, : t] @ weights[t]
        x[:, t] = pred + sds[t] * z[:, t]
    return x


def gaussian_sample(plan, method="auto"):
    """One exact zero-mean Gaussian path with covariance sigma(|i-j|).

    ``method`` may force "circulant" or "innovations"; "auto" prefers the
    circulant embedding and falls back when it is not nonnegative.
    """
    return gaussian_paths(plan.acov, plan.n, 1, plan.seed, stream=plan.stream,
                          method=method)[0]


def gaussian_paths(acov, n, reps, seed, stream=(), method="auto"):
    """A list of ``reps`` independent exact paths.

    Replicate r draws from the stream (seed, *stream, r), so any subset of
    replicates is reproducible in isolation and across thread counts.
    """
    if n < 1:
        raise ValueError("path length must be >= 1")
    if len(acov) < n:
        raise ValueError(f"need lags 0..{n - 1}, have 0..{len(acov) - 1}")
    if method == "auto":
        used, sqrt_eig = _choose_method(acov, n)
    elif method == "circulant":
        used = "circulant"
        if n == 1:
            sqrt_eig = None
        else:
            eig = circulant_eigenvalues(acov, n)
            if eig.min() < -EIG_TOL_FACTOR * eig.max():
                raise NotPositiveDefiniteError(
                    n, "circulant embedding has a negative eigenvalue"
                )
            sqrt_eig = np.sqrt(np.clip(eig, 0.0, None))
    elif method == "innovations":
        used, sqrt_eig = "innovations", None
    else:
        raise ValueError(f"unknown method {method!r}")

    nz = 2 * (n - 1) if (used == "circulant" and n > 1) else n
    z = np.empty((reps, max(nz, 1)))
    for r in range(reps):
        rng = derive_rng(seed, *stream, r)
        z[r] = normals(rng, max(nz, 1))

    if used == "circulant":
        if n == 1:
            x = np.sqrt(acov.values[0]) * z[:, :1]
        else:
            x = _circulant_paths(sqrt_eig, n, z)
    else:
        x = _innovations_paths(acov, n, z)

    return [
        SamplePath(values=x[r], seed=(int(seed), *stream, r), model=acov.model,
                   sim_method=used)
        for r in range(reps)
    ]
