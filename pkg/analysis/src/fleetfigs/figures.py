"""The four figure kinds rendered from results CSVs.

Every figure is backed by a pure statistics function operating on the
raw per-trial rows; ``render`` turns those statistics into an image.
Tests compare statistics, not pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

from .schema import SchemaError, check_columns, load_results

FIGURE_KINDS = ("sweep-bars", "timing-log", "topology-box", "efficiency-curve")

# Topologies forming the directed edge-removal sequence; star/ring rows
# in a study CSV are excluded from the efficiency curve.
_DIRECTED_PREFIXES = ("complete", "edge-removal", "empty")


@dataclass
class FigureSpec:
    input_csv: str
    figure_kind: str
    group_by: tuple = ()
    output: str = "figure.png"

    def resolved_group_by(self) -> tuple:
        if self.group_by:
            return tuple(self.group_by)
        defaults = {
            "sweep-bars": ("p_new", "policy"),
            "timing-log": ("p_new", "policy"),
            "topology-box": ("gamma", "policy"),
            "efficiency-curve": ("gamma",),
        }
        return defaults[self.figure_kind]


def sweep_stats(df: pd.DataFrame, x_col: str, series_col: str) -> pd.DataFrame:
    """Mean fraction late per (x value, series)."""
    check_columns(df, [x_col, series_col, "fraction_late"])
    return (
        df.groupby([x_col, series_col])["fraction_late"]
        .mean()
        .reset_index()
        .sort_values([x_col, series_col])
        .reset_index(drop=True)
    )


def timing_stats(df: pd.DataFrame, x_col: str, series_col: str) -> pd.DataFrame:
    """Mean planning time per (x value, series)."""
    check_columns(df, [x_col, series_col, "mean_planning_time_s"])
    return (
        df.groupby([x_col, series_col])["mean_planning_time_s"]
        .mean()
        .reset_index()
        .sort_values([x_col, series_col])
        .reset_index(drop=True)
    )


def box_stats(df: pd.DataFrame, x_col: str, series_col: str) -> pd.DataFrame:
    """Median and quartiles of fraction late per (x value, series)."""
    check_columns(df, [x_col, series_col, "fraction_late"])
    g = df.groupby([x_col, series_col])["fraction_late"]
    out = g.agg(
        median="median",
        q1=lambda s: s.quantile(0.25),
        q3=lambda s: s.quantile(0.75),
        lo="min",
        hi="max",
    ).reset_index()
    return out.sort_values([x_col, series_col]).reset_index(drop=True)


def efficiency_curve(df: pd.DataFrame, policy: str = "ibr") -> pd.DataFrame:
    """Welfare ratio versus gamma for one policy.

    Uses only the directed-sequence topologies (complete, edge removals,
    empty); the denominator is the mean welfare on the complete graph,
    so the gamma = 1 point is exactly 1.0.
    """
    check_columns(df, ["policy", "topology", "gamma", "welfare", "seed"])
    sub = df[df["policy"] == policy]
    sub = sub[sub["topology"].str.startswith(_DIRECTED_PREFIXES)]
    if sub.empty:
        raise SchemaError(f"no directed-topology rows for policy {policy!r}")
    base = sub[sub["gamma"] == 1]
    if base.empty:
        raise SchemaError("no complete-graph (gamma = 1) rows to normalize by")
    denom = base.sort_values("seed")["welfare"].mean()
    if denom == 0:
        raise SchemaError("complete-graph welfare is zero")
    rows = []
    for gamma, grp in sub.groupby("gamma"):
        rows.append(
            {"gamma": int(gamma), "ratio": grp.sort_values("seed")["welfare"].mean() / denom}
        )
    return pd.DataFrame(rows).sort_values("gamma").reset_index(drop=True)


def _plot_grouped_bars(stats, x_col, series_col, value_col, ax, log=False):
    xs = sorted(stats[x_col].unique())
    series = sorted(stats[series_col].unique())
    width = 0.8 / len(series)
    for j, s in enumerate(series):
        sub = stats[stats[series_col] == s].set_index(x_col)[value_col]
        heights = [sub.get(x, float("nan")) for x in xs]
        positions = [i + (j - (len(series) - 1) / 2) * width for i in range(len(xs))]
        ax.bar(positions, heights, width=width, label=str(s))
    ax.set_xticks(range(len(xs)))
    ax.set_xticklabels([str(x) for x in xs])
    if log:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.set_xlabel(x_col)


def render(spec: FigureSpec) -> str:
    """Render one figure and return the written image path.

    The statistics are recomputed from the raw rows via the functions
    above; nothing is read back from earlier figures.
    """
    if spec.figure_kind not in FIGURE_KINDS:
        raise ValueError(
            f"unknown figure kind {spec.figure_kind!r}; expected one of {FIGURE_KINDS}"
        )
    df = load_results(spec.input_csv)
    group_by = spec.resolved_group_by()
    check_columns(df, group_by)

    fig, ax = plt.subplots(figsize=(5.0, 3.4), dpi=150)
    try:
        if spec.figure_kind == "sweep-bars":
            x_col, series_col = group_by
            stats = sweep_stats(df, x_col, series_col)
            _plot_grouped_bars(stats, x_col, series_col, "fraction_late", ax)
            ax.set_ylabel("mean fraction late")
        elif spec.figure_kind == "timing-log":
            x_col, series_col = group_by
            stats = timing_stats(df, x_col, series_col)
            _plot_grouped_bars(
                stats, x_col, series_col, "mean_planning_time_s", ax, log=True
            )
            ax.set_ylabel("planning time per step [s]")
        elif spec.figure_kind == "topology-box":
            x_col, series_col = group_by
            check_columns(df, [x_col, series_col, "fraction_late"])
            xs = sorted(df[x_col].unique())
            series = sorted(df[series_col].unique())
            width = 0.8 / len(series)
            for j, s in enumerate(series):
                data = [
                    df[(df[x_col] == x) & (df[series_col] == s)]["fraction_late"]
                    for x in xs
                ]
                positions = [
                    i + (j - (len(series) - 1) / 2) * width for i in range(len(xs))
                ]
                bp = ax.boxplot(
                    data, positions=positions, widths=width * 0.9, patch_artist=True
                )
                color = f"C{j}"
                for patch in bp["boxes"]:
                    patch.set_facecolor(color)
                ax.plot([], [], color=color, label=str(s))
            ax.set_xticks(range(len(xs)))
            ax.set_xticklabels([str(x) for x in xs])
            ax.set_xlabel(x_col)
            ax.set_ylabel("fraction late")
            ax.legend(fontsize=8)
        else:
            curve = efficiency_curve(df)
            ax.plot(curve["gamma"], curve["ratio"], marker="o")
            ax.set_xlabel("information groups")
            ax.set_ylabel("efficiency ratio")
            ax.set_xticks(curve["gamma"])
            ax.set_ylim(min(0.8, curve["ratio"].min() - 0.05), 1.02)
        fig.tight_layout()
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output
