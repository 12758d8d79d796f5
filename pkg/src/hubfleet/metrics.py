"""Trial-level metrics and the results CSV schema."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

__all__ = [
    "TrialRecord",
    "PairingError",
    "fraction_late",
    "efficiency_ratio",
    "CSV_COLUMNS",
    "TIMING_COLUMNS",
    "write_csv",
    "read_csv",
]

# Exact column order of the results CSV.
CSV_COLUMNS = [
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

# Columns excluded from determinism comparisons (wall-clock noise).
TIMING_COLUMNS = ("mean_planning_time_s",)


@dataclass
class TrialRecord:
    """One row of results: outcome of a single simulated trial."""

    cfg_digest: str
    policy: str
    topology: str
    gamma: int
    seed: int
    n_tasks: int
    n_completed: int
    fraction_late: float
    welfare: int
    mean_planning_time_s: float
    p_new: float
    window_w_min: float
    n_depots: int
    n_agents: int
    conflict_level: str
    per_step_times: list = field(default_factory=list, repr=False)

    def csv_row(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]

    def determinism_key(self) -> tuple:
        """Everything except wall-clock measurements."""
        return tuple(
            getattr(self, c) for c in CSV_COLUMNS if c not in TIMING_COLUMNS
        ) + (self.cfg_digest,)


def fraction_late(n_tasks: int, n_completed: int) -> float:
    """Share of spawned tasks not completed by their deadline.

    Zero tasks count as zero late by convention.
    """
    if n_tasks < 0 or n_completed < 0 or n_completed > n_tasks:
        raise ValueError(f"bad counts: {n_completed} completed of {n_tasks}")
    if n_tasks == 0:
        return 0.0
    return 1.0 - n_completed / n_tasks


class PairingError(ValueError):
    """Raised when trial lists cannot be compared seed-for-seed."""


def efficiency_ratio(records_g: list, records_complete: list) -> float:
    """Mean realized welfare under a graph over mean welfare under the
    complete graph, for seed-paired trials of the same scenario."""
    if not records_g or not records_complete:
        raise PairingError("both record lists must be nonempty")
    dg = {r.cfg_digest for r in records_g}
    dc = {r.cfg_digest for r in records_complete}
    if len(dg) != 1 or len(dc) != 1 or dg != dc:
        raise PairingError(f"mismatched scenario digests: {sorted(dg)} vs {sorted(dc)}")
    seeds_g = sorted(r.seed for r in records_g)
    seeds_c = sorted(r.seed for r in records_complete)
    if seeds_g != seeds_c:
        raise PairingError("record lists are not paired on the same seeds")
    num = _mean_welfare(records_g)
    den = _mean_welfare(records_complete)
    if den == 0.0:
        raise ValueError("welfare under the complete graph is zero")
    return num / den


def _mean_welfare(records: list) -> float:
    ordered = sorted(records, key=lambda r: r.seed)
    return sum(r.welfare for r in ordered) / len(ordered)


def write_csv(path, records: list):
    parent = os.path.dirname(str(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(r.csv_row())


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
