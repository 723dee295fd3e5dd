#!/usr/bin/env python3
"""The full Monte Carlo suite at deskside settings (a few minutes).

Artifacts in out/:
* estimation_error.csv - wk-plugin vs exact predictor MSE over T (slope -1)
* coeffcov_low.csv     - ark-plugin MSE over T at d=0.1 (slope -1)
* coeffcov_high.csv    - ark-plugin MSE over T at d=0.4 on a wide T grid
                         (slope 4d-2; the regime needs T >= 8192)
* covmoment_low.csv / covmoment_high.csv - lag-0 estimator MSE over n
* whittle_mc.csv       - replicated Whittle fits at d=0.3
* total_error.csv      - method excess vs estimation error on a (k, T) grid

Set LONGPRED_THREADS to parallelise replicates; outputs are identical for
any thread count.
"""

import pathlib
import sys

from longpred.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


def run():
    OUT.mkdir(exist_ok=True)
    rc = 0
    rc |= main(["estimation-error", "--d", "0.1", "--k", "8",
                "--t-grid", "1024,2048,4096,8192", "--reps", "200",
                "--seed", "1234", "--out", str(OUT / "estimation_error.csv")])
    rc |= main(["coeffcov-mc", "--d", "0.1", "--k", "8",
                "--t-grid", "1024,2048,4096,8192", "--reps", "200",
                "--seed", "1234", "--out", str(OUT / "coeffcov_low.csv")])
    rc |= main(["coeffcov-mc", "--d", "0.4", "--k", "8",
                "--t-grid", "8192,16384,32768,65536", "--reps", "400",
                "--seed", "77", "--out", str(OUT / "coeffcov_high.csv")])
    rc |= main(["covmoment-mc", "--d", "0.1",
                "--n-grid", "1024,2048,4096,8192", "--reps", "200",
                "--seed", "1234", "--out", str(OUT / "covmoment_low.csv")])
    rc |= main(["covmoment-mc", "--d", "0.4",
                "--n-grid", "1024,2048,4096,8192", "--reps", "200",
                "--seed", "1234", "--out", str(OUT / "covmoment_high.csv")])
    rc |= main(["whittle-mc", "--d", "0.3", "--t", "4096", "--reps", "100",
                "--seed", "2024", "--out", str(OUT / "whittle_mc.csv")])
    rc |= main(["total-error", "--d", "0.2", "--k-grid", "8,16,32",
                "--t-grid", "512,1024,2048,4096", "--reps", "100",
                "--seed", "7", "--out", str(OUT / "total_error.csv")])
    return rc


if __name__ == "__main__":
    sys.exit(run())
