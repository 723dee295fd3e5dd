"""Next-step linear prediction for long-memory time series.

Truncated Wiener-Kolmogorov and fitted AR(k) predictors for FI(d) and
FARIMA(p, d, q) processes, their exact prediction-risk quantities, Whittle
and Yule-Walker estimation, exact Gaussian simulation, and a reproducible
Monte Carlo harness for the asymptotic rate claims.
"""

__version__ = "0.1.0"

from .errors import (AccuracyError, DomainError, EstimationError,
                     InternalConsistencyError, NotPositiveDefiniteError,
                     StatisticalPowerError)
from .fraccoeff import (AutocovSeq, CoeffSeq, LongMemoryModel, ar_inf_coeffs,
                        exact_autocov, ma_inf_coeffs, model_from_json,
                        model_to_json, spectral_density)
from .predictor import (Forecast, ark_plugin_predict, ark_predict,
                        wk_plugin_predict, wk_truncated_predict)
from .risk import (RiskReport, SlopeReport, ark_excess, c_of_d,
                   coeffcov_scaling, compute_H, covmoment_scaling,
                   excess_decomposition, fi_risk_report, h_covariance_check,
                   r_of_k, truncation_excess, wk_plugin_scaling)
from .series import SamplePath
from .simulate import SimulationPlan, gaussian_paths, gaussian_sample
from .spectral import (Periodogram, WhittleFit, periodogram,
                       periodogram_ordinate, whittle_fit, whittle_objective,
                       whittle_profiled_sigma2)
from .toeplitz import (ArkModel, durbin_levinson, empirical_autocov,
                       fi_ark_closed_form, toeplitz_solve)

__all__ = [
    "AccuracyError", "ArkModel", "AutocovSeq", "CoeffSeq", "DomainError",
    "EstimationError", "Forecast", "InternalConsistencyError",
    "LongMemoryModel", "NotPositiveDefiniteError", "Periodogram",
    "RiskReport", "SamplePath", "SimulationPlan", "SlopeReport",
    "StatisticalPowerError", "WhittleFit", "ar_inf_coeffs",
    "ark_excess", "ark_plugin_predict", "ark_predict", "c_of_d",
    "coeffcov_scaling", "compute_H", "covmoment_scaling", "durbin_levinson",
    "empirical_autocov", "exact_autocov", "excess_decomposition",
    "fi_ark_closed_form", "fi_risk_report", "gaussian_paths",
    "gaussian_sample", "h_covariance_check", "ma_inf_coeffs",
    "model_from_json", "model_to_json", "periodogram",
    "periodogram_ordinate", "r_of_k", "spectral_density", "toeplitz_solve",
    "truncation_excess", "whittle_fit", "whittle_objective",
    "whittle_profiled_sigma2", "wk_plugin_predict", "wk_plugin_scaling",
    "wk_truncated_predict",
]
