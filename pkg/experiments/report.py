import logging

import pandas as pd

from experiments.results import read_results

log = logging.getLogger("qsplab")

BIAS_THRESHOLD = 1e-2
TIGHT_BIAS_THRESHOLD = 8e-4
GROUP = ["method", "N", "p"]


def best_fits(df: pd.DataFrame) -> pd.DataFrame:
    """Fit and schedule with the lowest mean MSE per (method, N, p)."""
    ok = df[~df["fit"].str.startswith("failed:") & ~df["best"]]
    mean_mse = ok.groupby(GROUP + ["fit", "schedule"], as_index=False)["mse"].mean()
    return mean_mse.loc[mean_mse.groupby(GROUP)["mse"].idxmin()].reset_index(drop=True)


def success_fractions(df: pd.DataFrame) -> pd.DataFrame:
    """Share of tau-points whose best estimate lands within each bias threshold."""
    best = df[df["best"]].copy()
    best["abs_bias"] = best["bias"].abs()
    # a tau-point counts as mitigated if any schedule's best row makes it
    per_tau = best.groupby(GROUP + ["tau"], as_index=False)["abs_bias"].min()
    per_tau["within_1e-2"] = per_tau["abs_bias"] <= BIAS_THRESHOLD
    per_tau["within_8e-4"] = per_tau["abs_bias"] <= TIGHT_BIAS_THRESHOLD
    return per_tau.groupby(GROUP, as_index=False)[["within_1e-2", "within_8e-4"]].mean()


def analyze_results(csv_path) -> pd.DataFrame:
    """Reads a sweep CSV into one summary row per (method, N, p)."""
    df = read_results(csv_path)
    if df.empty:
        log.warning(f"{csv_path} holds no rows")
        return pd.DataFrame(columns=GROUP + ["fit", "schedule", "mse", "within_1e-2", "within_8e-4", "failed"])
    failed = df[df["fit"].str.startswith("failed:")].groupby(GROUP).size().rename("failed").reset_index()
    summary = best_fits(df).merge(success_fractions(df), on=GROUP, how="outer").merge(failed, on=GROUP, how="left")
    summary["failed"] = summary["failed"].fillna(0).astype(int)
    return summary.sort_values(GROUP).reset_index(drop=True)
