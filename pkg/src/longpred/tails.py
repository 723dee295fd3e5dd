"""Adaptive evaluation of one-sided series with power-law tails.

Sums of the form sum_{j>=j_start} f(j) with f(j) ~ j^p (c0 + c1/j) and
p < -1 are evaluated by a finite partial sum plus an analytic tail from a
two-parameter fit on the top octave.  A pure cutoff is hopeless near
d = 1/2, so the driver doubles the cutoff until a self-validated error
bound meets the requested relative tolerance.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class TailSum:
    value: float
    partial: float
    tail: float
    error_bound: float   # absolute bound on |value - true sum|
    cutoff: int          # last index included in the partial sum


def _fit_block(values, j_start, lo, hi, exponent):
    """Fit values ~ j^exponent (c0 + c1/j) on indices lo..hi (inclusive)."""
    j = np.arange(lo, hi + 1, dtype=float)
    block = values[lo - j_start : hi - j_start + 1]
    y = block * j ** (-exponent)
    design = np.column_stack([np.ones_like(j), 1.0 / j])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef[0], coef[1]


def _tail_integral(c0, c1, p, start):
    """integral_start^inf (c0 x^p + c1 x^(p-1)) dx, valid for p < -1."""
    return c0 * start ** (p + 1.0) / (-p - 1.0) + c1 * start ** p / (-p)


def powerlaw_tail_sum(values_fn, exponent, j_start, rtol, j0=1 << 14,
                      j_max=1 << 22):
    """sum_{j=j_start}^inf f(j) for f with a known power-law exponent.

    ``values_fn(J)`` must return f(j_start..J) as an array.  Raises
    AccuracyError with the achieved bound when even j_max cannot certify
    the target.
    """
    if exponent >= -1.0:
        raise ValueError("tail exponent must be < -1 for a convergent sum")
    J = max(j0, 8 * j_start)
    best_rel = np.inf
    while True:
        vals = values_fn(J)
        partial = float(np.sum(vals))  # numpy pairwise summation

        q2, q4 = J // 2, J // 4
        c0, c1 = _fit_block(vals, j_start, q2, J, exponent)
        # validate: the fit from the octave below must predict the sum over
        # the top octave
        c0v, c1v = _fit_block(vals, j_start, q4, q2 - 1, exponent)
        actual = float(np.sum(vals[q2 - j_start :]))
        pred = _tail_integral(c0v, c1v, exponent, q2 - 0.5) - _tail_integral(
            c0v, c1v, exponent, J + 0.5
        )
        denom = max(abs(actual), _TINY)
        r_val = abs(pred - actual) / denom

        tail = _tail_integral(c0, c1, exponent, J + 0.5)
        bound = abs(tail) * (4.0 * r_val + 8.0 / J ** 2) + 16.0 * _EPS * float(
            np.sum(np.abs(vals))
        )
        value = partial + tail
        rel = bound / max(abs(value), _TINY)
        best_rel = min(best_rel, rel)
        if rel <= rtol:
            return TailSum(value=value, partial=partial, tail=tail,
                           error_bound=bound, cutoff=J)
        if J >= j_max:
            raise AccuracyError(
                f"power-law tail could not certify rtol={rtol:g}",
                achieved=best_rel,
            )
        J *= 2
