"""Experiment CLI: reproduces the constant curve, improvement-ratio curve,
rate checks and Monte Carlo scaling experiments as CSV artifacts.

Artifacts are RFC-4180 CSV bodies preceded by ``#``-prefixed reproducibility
header lines (version, seed, config hash).  Reruns with the same config and
seed are byte-identical; files are written atomically (temp file + rename).

Exit codes: 0 success, 1 numeric/accuracy failure, 2 usage error.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .errors import (AccuracyError, DomainError, EstimationError,
                     InternalConsistencyError, NotPositiveDefiniteError,
                     StatisticalPowerError)
from .fraccoeff import (LongMemoryModel, ar_inf_coeffs, exact_autocov,
                        model_from_json)
from .predictor import (ark_plugin_predict, ark_predict, wk_plugin_predict,
                        wk_truncated_predict)
from .rng import default_workers
from .series import SamplePath
from .simulate import gaussian_paths
from .spectral import whittle_fit
from .toeplitz import durbin_levinson
from .risk import (ark_excess, c_of_d, coeffcov_scaling, covmoment_scaling,
                   fi_risk_report, truncation_excess, wk_plugin_scaling,
                   _loglog_slope)


class UsageError(ValueError):
    pass


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _config_hash(config):
    # the output location and worker count do not define the experiment
    stripped = {k: v for k, v in config.items() if k not in ("out", "workers")}
    text = json.dumps(stripped, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def write_artifact(path, columns, rows, seed, config):
    """Atomically write a CSV artifact with a reproducibility header."""
    lines = [
        f"# longpred-version: {__version__}\n",
        f"# seed: {seed}\n",
        f"# config-hash: {_config_hash(config)}\n",
        ",".join(columns) + "\n",
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row) + "\n")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.writelines(lines)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_artifact(path):
    """Parse an artifact back into (metadata dict, list of row dicts)."""
    meta = {}
    rows = []
    columns = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                meta[key] = value
            elif columns is None:
                columns = line.split(",")
            elif line:
                parts = line.split(",")
                row = {}
                for name, raw in zip(columns, parts):
                    try:
                        row[name] = float(raw)
                    except ValueError:
                        row[name] = raw
                rows.append(row)
    return meta, rows


def _parse_grid(text):
    try:
        values = [float(tok) for tok in str(text).split(",") if tok != ""]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc
    if not values:
        raise UsageError("grid must be non-empty")
    if sorted(values) != values:
        raise UsageError(f"grid {text!r} must be sorted ascending")
    return values


def _parse_int_grid(text):
    return [int(v) for v in _parse_grid(text)]


def _load_model(source):
    """Model from an inline JSON object or a path to a JSON file."""
    if source is None:
        raise UsageError("--model is required")
    text = source.strip()
    if not text.startswith("{"):
        with open(text) as fh:
            text = fh.read()
    try:
        return model_from_json(text)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad model argument: {exc}") from exc


def _read_value_csv(path, flag="--sample"):
    if path is None:
        raise UsageError(f"{flag} is required (CSV with a 'value' column)")
    values = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "value":
            raise UsageError(f"{path}: expected single 'value' column header")
        for line in fh:
            line = line.strip()
            if line:
                values.append(float(line))
    if not values:
        raise UsageError(f"{path}: no data rows")
    return SamplePath(values=np.asarray(values))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_cd_curve(args, config):
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if not (0.0 < args.d_min <= args.d_max < 0.5):
        raise UsageError("need 0 < d-min <= d-max < 1/2")
    if args.steps == 1:
        grid = [args.d_min]
    else:
        grid = list(np.linspace(args.d_min, args.d_max, args.steps))
    rows = [(d, c_of_d(d)) for d in grid]
    write_artifact(args.out, ["d", "C(d)"], rows, args.seed, config)
    return 0


def _cmd_ratio_curve(args, config):
    d_grid = _parse_grid(args.d)
    k_grid = _parse_int_grid(args.k)
    rows = []
    for d in d_grid:
        for k in k_grid:
            report = fi_risk_report(d, k)
            rows.append((k, d, report.ratio))
    write_artifact(args.out, ["k", "d", "r"], rows, args.seed, config)
    return 0


def _rate_rows(d_grid, k_grid, excess_fn):
    rows = []
    for d in d_grid:
        model = LongMemoryModel.fi(d)
        excesses = [excess_fn(model, k) for k in k_grid]
        slope, _ = _loglog_slope(k_grid, np.asarray(excesses),
                                 np.zeros(len(k_grid)))
        for k, e in zip(k_grid, excesses):
            rows.append((d, k, e, 0.0, slope))
    return rows


def _cmd_trunc_rate(args, config):
    rows = _rate_rows(_parse_grid(args.d), _parse_int_grid(args.k_grid),
                      lambda m, k: truncation_excess(m, k))
    write_artifact(args.out, ["d", "k", "estimate", "stderr", "fitted_slope"],
                   rows, args.seed, config)
    return 0


def _cmd_ark_rate(args, config):
    rows = _rate_rows(_parse_grid(args.d), _parse_int_grid(args.k_grid),
                      lambda m, k: ark_excess(m, k))
    write_artifact(args.out, ["d", "k", "estimate", "stderr", "fitted_slope"],
                   rows, args.seed, config)
    return 0


def _slope_rows(report):
    return [
        (int(g), est, se, report.slope)
        for g, est, se in zip(report.grid, report.estimates, report.stderrs)
    ]


def _cmd_estimation_error(args, config):
    report = wk_plugin_scaling(args.d, args.k, _parse_int_grid(args.t_grid),
                               args.reps, args.seed, workers=args.workers)
    write_artifact(args.out, ["T", "estimate", "stderr", "fitted_slope"],
                   _slope_rows(report), args.seed, config)
    return 0


def _cmd_coeffcov_mc(args, config):
    report = coeffcov_scaling(args.d, args.k, _parse_int_grid(args.t_grid),
                              args.reps, args.seed, workers=args.workers)
    write_artifact(args.out, ["T", "estimate", "stderr", "fitted_slope"],
                   _slope_rows(report), args.seed, config)
    return 0


def _cmd_covmoment_mc(args, config):
    report = covmoment_scaling(args.d, _parse_int_grid(args.n_grid),
                               args.reps, args.seed, workers=args.workers)
    write_artifact(args.out, ["n", "estimate", "stderr", "fitted_slope"],
                   _slope_rows(report), args.seed, config)
    return 0


def _cmd_whittle_mc(args, config):
    model = LongMemoryModel.fi(args.d)
    acov = exact_autocov(model, args.t - 1)
    paths = gaussian_paths(acov, args.t, args.reps, args.seed, stream=(4,))
    rows = []
    for rep, path in enumerate(paths):
        fit = whittle_fit(path)
        rows.append((rep, fit.d_hat, fit.sigma2_hat))
    write_artifact(args.out, ["rep", "d_hat", "sigma2_hat"], rows, args.seed,
                   config)
    return 0


def _cmd_simulate(args, config):
    model = _load_model(args.model)
    if args.n < 1 or args.reps < 1:
        raise UsageError("--n and --reps must be >= 1")
    acov = exact_autocov(model, args.n - 1)
    paths = gaussian_paths(acov, args.n, args.reps, args.seed, stream=(5,))
    os.makedirs(args.out, exist_ok=True)
    if args.single_file:
        rows = [
            (rep, t, x)
            for rep, path in enumerate(paths)
            for t, x in enumerate(path.values)
        ]
        write_artifact(os.path.join(args.out, "paths.csv"),
                       ["rep", "t", "value"], rows, args.seed, config)
    else:
        for rep, path in enumerate(paths):
            rows = [(t, x) for t, x in enumerate(path.values)]
            write_artifact(os.path.join(args.out, f"rep_{rep:04d}.csv"),
                           ["t", "value"], rows, args.seed, config)
    return 0


def _cmd_predict(args, config):
    window = _read_value_csv(args.window, "--window")
    k = args.k if args.k is not None else len(window)
    if args.method in ("wk", "ark"):
        if args.model is None:
            raise UsageError(f"--method {args.method} needs --model")
        model = _load_model(args.model)
        if args.method == "wk":
            coeffs = ar_inf_coeffs(model, k)
            recent = SamplePath(values=window.values[-k:])
            forecast = wk_truncated_predict(coeffs, recent)
        else:
            model_k = durbin_levinson(exact_autocov(model, k), k)
            forecast = ark_predict(model_k, window)
    elif args.method in ("wk-plugin", "ark-plugin"):
        if args.train is None:
            raise UsageError(f"--method {args.method} needs --train")
        train = _read_value_csv(args.train, "--train")
        if args.method == "wk-plugin":
            forecast = wk_plugin_predict(train, window, k)
        else:
            forecast = ark_plugin_predict(train, window, k)
    else:
        raise UsageError(f"unknown method {args.method!r}")
    print(json.dumps({"method": forecast.method, "k": forecast.order,
                      "value": forecast.value}))
    return 0


def _cmd_fit(args, config):
    sample = _read_value_csv(args.sample)
    fit = whittle_fit(sample, d_bounds=(args.d_min, args.d_max))
    print(json.dumps({"d_hat": fit.d_hat, "sigma2_hat": fit.sigma2_hat,
                      "objective": fit.objective}))
    return 0


def _cmd_total_error(args, config):
    """Method error vs estimation error over a (k, T) grid, both predictors."""
    k_grid = _parse_int_grid(args.k_grid)
    t_grid = _parse_int_grid(args.t_grid)
    model = LongMemoryModel.fi(args.d)
    rows = []
    for k in k_grid:
        trunc = truncation_excess(model, k)
        ark = ark_excess(model, k)
        wk_est = wk_plugin_scaling(args.d, k, t_grid, args.reps, args.seed,
                                   workers=args.workers)
        ark_est = coeffcov_scaling(args.d, k, t_grid, args.reps, args.seed,
                                   workers=args.workers)
        for i, T in enumerate(t_grid):
            rows.append((
                k, T,
                trunc, wk_est.estimates[i], trunc + wk_est.estimates[i],
                ark, ark_est.estimates[i], ark + ark_est.estimates[i],
            ))
    write_artifact(
        args.out,
        ["k", "T", "wk_method_excess", "wk_estimation_mse", "wk_total",
         "ark_method_excess", "ark_estimation_mse", "ark_total"],
        rows, args.seed, config,
    )
    return 0


# ---------------------------------------------------------------------------
# parser plumbing


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="longpred",
        description="Long-memory next-step prediction experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file; explicit flags override it")
        if out:
            p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("cd-curve", help="constant of the k^-1 truncation rate")
    common(p)
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--d-max", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(fn=_cmd_cd_curve,
                   defaults={"d_min": 0.01, "d_max": 0.49, "steps": 49})

    p = sub.add_parser("ratio-curve", help="improvement ratio r(k)")
    common(p)
    p.add_argument("--d", type=str, default=None, help="comma list")
    p.add_argument("--k", type=str, default=None, help="comma list")
    p.set_defaults(fn=_cmd_ratio_curve, defaults={"d": "0.1,0.2,0.3,0.4",
                                                  "k": "10,20,50,100"})

    p = sub.add_parser("trunc-rate", help="k * truncation excess over a k grid")
    common(p)
    p.add_argument("--d", type=str, default=None)
    p.add_argument("--k-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_trunc_rate,
                   defaults={"d": "0.1,0.2,0.3,0.4",
                             "k_grid": "100,200,400,800,1600"})

    p = sub.add_parser("ark-rate", help="k * AR(k) excess over a k grid")
    common(p)
    p.add_argument("--d", type=str, default=None)
    p.add_argument("--k-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_ark_rate,
                   defaults={"d": "0.2,0.3", "k_grid": "100,200,400,800"})

    def mc_common(p):
        common(p)
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("estimation-error",
                       help="wk-plugin vs exact predictor MSE scaling in T")
    mc_common(p)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_estimation_error,
                   defaults={"d": 0.1, "k": 8,
                             "t_grid": "1024,2048,4096,8192", "reps": 200})

    p = sub.add_parser("coeffcov-mc",
                       help="ark-plugin vs exact predictor MSE scaling in T")
    mc_common(p)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_coeffcov_mc,
                   defaults={"d": 0.1, "k": 8,
                             "t_grid": "1024,2048,4096,8192", "reps": 200})

    p = sub.add_parser("covmoment-mc",
                       help="lag-0 covariance estimator MSE scaling in n")
    mc_common(p)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--n-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_covmoment_mc,
                   defaults={"d": 0.1, "n_grid": "1024,2048,4096,8192",
                             "reps": 200})

    p = sub.add_parser("whittle-mc", help="replicated Whittle fits")
    mc_common(p)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    p.set_defaults(fn=_cmd_whittle_mc, defaults={"d": 0.3, "t": 4096,
                                                 "reps": 100})

    p = sub.add_parser("simulate", help="exact Gaussian sample paths")
    common(p)
    p.add_argument("--model", type=str, default=None,
                   help="inline JSON or path to a model JSON file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--single-file", action="store_true", default=None)
    p.set_defaults(fn=_cmd_simulate, defaults={"n": 1024, "reps": 1,
                                               "single_file": False})

    p = sub.add_parser("predict", help="one-step forecast from CSV inputs")
    common(p, out=False)
    p.add_argument("--method", type=str, default=None,
                   choices=["wk", "ark", "wk-plugin", "ark-plugin"])
    p.add_argument("--window", type=str, default=None)
    p.add_argument("--train", type=str, default=None)
    p.add_argument("--model", type=str, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(fn=_cmd_predict, defaults={"method": "ark"})

    p = sub.add_parser("fit", help="Whittle fit of a sample CSV")
    common(p, out=False)
    p.add_argument("--sample", type=str, default=None)
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--d-max", type=float, default=None)
    p.set_defaults(fn=_cmd_fit, defaults={"d_min": 1e-4, "d_max": 0.5 - 1e-4})

    p = sub.add_parser("total-error",
                       help="method vs estimation error over a (k, T) grid")
    mc_common(p)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--k-grid", type=str, default=None)
    p.add_argument("--t-grid", type=str, default=None)
    p.set_defaults(fn=_cmd_total_error,
                   defaults={"d": 0.2, "k_grid": "8,16,32",
                             "t_grid": "512,1024,2048", "reps": 100})

    return parser


_NEEDS_OUT = {
    "cd-curve", "ratio-curve", "trunc-rate", "ark-rate", "estimation-error",
    "coeffcov-mc", "covmoment-mc", "whittle-mc", "simulate", "total-error",
}


def _merge_config(args):
    """Fill unset flags from the config file, then from built-in defaults."""
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
    merged = {}
    defaults = dict(getattr(args, "defaults", {}))
    defaults.setdefault("seed", 0)
    for key, value in vars(args).items():
        if key in ("fn", "defaults", "config", "command"):
            continue
        if value is None:
            value = file_cfg.get(key, defaults.get(key))
        merged[key] = value
        setattr(args, key, value)
    if args.command in _NEEDS_OUT and not args.out:
        raise UsageError("--out is required")
    if merged.get("reps") is not None and merged["reps"] < 1:
        raise UsageError("--reps must be >= 1")
    if getattr(args, "workers", None) is None:
        args.workers = default_workers()
        merged["workers"] = args.workers
    return merged


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        config = _merge_config(args)
        return args.fn(args, config)
    except (UsageError, DomainError, StatisticalPowerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AccuracyError, EstimationError, InternalConsistencyError,
            NotPositiveDefiniteError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
