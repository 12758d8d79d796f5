"""Results-CSV schema checks and loading.

The simulator writes one row per trial with a fixed column set; every
figure recomputes its statistics from these raw rows, never from
pre-aggregated values.
"""

from __future__ import annotations

import pandas as pd

RESULT_COLUMNS = [
    "policy",
    "topology",
    "gamma",
    "seed",
    "n_tasks",
    "n_completed",
    "fraction_late",
    "welfare",
    "mean_planning_time_s",
    "p_new",
    "window_w_min",
    "n_depots",
    "n_agents",
    "conflict_level",
]

_NUMERIC = [
    "gamma",
    "seed",
    "n_tasks",
    "n_completed",
    "fraction_late",
    "welfare",
    "mean_planning_time_s",
    "p_new",
    "window_w_min",
    "n_depots",
    "n_agents",
]


class SchemaError(ValueError):
    """The CSV does not match the results schema."""


def check_columns(df: pd.DataFrame, required) -> None:
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise SchemaError(f"missing columns: {', '.join(missing)}")


def load_results(path, required=None) -> pd.DataFrame:
    """Read a results CSV, coercing numeric columns.

    Raises SchemaError when required columns are absent or the file has
    no data rows.
    """
    try:
        df = pd.read_csv(path)
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path}: empty file, nothing to plot") from None
    check_columns(df, required if required is not None else RESULT_COLUMNS)
    if df.empty:
        raise SchemaError(f"{path}: no data rows")
    for col in _NUMERIC:
        if col in df.columns:
            df[col] = pd.to_numeric(df[col])
    return df
