"""Parameter sweeps and the topology study.

A sweep varies one scenario axis over a list of values and runs every
policy for N trials per value; trial seeds are ``base seed + trial
index`` and identical across policies and axis values, so comparisons
are paired.  Results land in one CSV, rows in spec order regardless of
how many workers executed the trials.
"""

from __future__ import annotations

import configparser
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .comms import EDGE_REMOVAL_SCHEDULE
from .engine import run_trial
from .metrics import TrialRecord, write_csv
from .world import ConfigError, ScenarioConfig

__all__ = [
    "SweepSpec",
    "SWEEP_AXES",
    "FLEET_PRESETS",
    "TOPOLOGY_STUDY_GRAPHS",
    "apply_axis_value",
    "run_sweep",
    "run_topology_study",
    "load_sweep_spec",
    "load_topology_spec",
]

SWEEP_AXES = ("p_new", "window_w", "fleet", "conflict_level", "topology")

# Depot/drone pairs exercised by the fleet axis.
FLEET_PRESETS = ("5/15", "5/50", "5/100", "6/60", "10/100")

# Directed topologies of the study: the complete graph, three cumulative
# edge removals, and full isolation.
TOPOLOGY_STUDY_GRAPHS = tuple(
    ["complete"]
    + [
        "edge-removal:" + ";".join(f"{a}>{b}" for a, b in EDGE_REMOVAL_SCHEDULE[:i])
        for i in range(1, len(EDGE_REMOVAL_SCHEDULE) + 1)
    ]
    + ["empty"]
)

UNDIRECTED_TOPOLOGIES = ("complete", "star:0", "ring", "empty")

DEFAULT_POLICIES = ("ibr", "edd", "hungarian", "random")
TOPOLOGY_STUDY_POLICIES = ("edd", "hungarian", "ibr")


@dataclass
class SweepSpec:
    """One experiment: a base scenario, an axis, and how hard to run it."""

    base: ScenarioConfig
    axis: str
    values: tuple
    trials: int = 100
    policies: tuple = DEFAULT_POLICIES
    output_path: str = "results.csv"

    def validate(self) -> "SweepSpec":
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; expected one of {SWEEP_AXES}")
        if not self.values:
            raise ConfigError("sweep needs at least one axis value")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.policies:
            raise ConfigError("sweep needs at least one policy")
        self.base.validate()
        for v in self.values:
            apply_axis_value(self.base, self.axis, v).validate()
        return self


def apply_axis_value(cfg: ScenarioConfig, axis: str, value) -> ScenarioConfig:
    """Produce the scenario for one point on a sweep axis."""
    if axis == "p_new":
        return replace(cfg, p_new=float(value))
    if axis == "window_w":
        return replace(cfg, window_minutes=float(value))
    if axis == "fleet":
        depots, _, agents = str(value).partition("/")
        return replace(cfg, n_depots=int(depots), n_agents=int(agents))
    if axis == "conflict_level":
        return replace(cfg, conflict_level=str(value), conflict_box=None)
    if axis == "topology":
        return replace(cfg, topology=str(value))
    raise ConfigError(f"unknown sweep axis {axis!r}")


def _trial_job(args) -> TrialRecord:
    cfg, policy_name = args
    return run_trial(cfg, policy_name)


def _execute(jobs: list, workers: int) -> list[TrialRecord]:
    if workers <= 1 or len(jobs) <= 1:
        return [_trial_job(j) for j in jobs]
    chunk = max(1, math.ceil(len(jobs) / (workers * 8)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_job, jobs, chunksize=chunk))


def run_sweep(spec: SweepSpec, *, workers: int = 1) -> list[TrialRecord]:
    """Run every (axis value, policy, trial) combination and write the CSV.

    Row order is value-major, then policy, then trial index.
    """
    spec.validate()
    jobs = []
    for value in spec.values:
        cfg_v = apply_axis_value(spec.base, spec.axis, value)
        for policy in spec.policies:
            for trial in range(spec.trials):
                jobs.append((replace(cfg_v, seed=spec.base.seed + trial), policy))
    records = _execute(jobs, workers)
    write_csv(spec.output_path, records)
    return records


def run_topology_study(
    base: ScenarioConfig,
    trials: int,
    *,
    output_path: str = "topology.csv",
    policies: tuple = TOPOLOGY_STUDY_POLICIES,
    include_undirected: bool = True,
    workers: int = 1,
) -> list[TrialRecord]:
    """Run the communication-graph study with paired seeds.

    Covers the directed edge-removal sequence (gamma walks 1 through the
    number of hubs) plus, optionally, the undirected set (star, ring).
    """
    base.validate()
    topologies = list(TOPOLOGY_STUDY_GRAPHS)
    if include_undirected:
        topologies += [t for t in UNDIRECTED_TOPOLOGIES if t not in topologies]
    jobs = []
    for topo in topologies:
        cfg_t = replace(base, topology=topo)
        for policy in policies:
            for trial in range(trials):
                jobs.append((replace(cfg_t, seed=base.seed + trial), policy))
    records = _execute(jobs, workers)
    write_csv(output_path, records)
    return records


def load_sweep_spec(path) -> SweepSpec:
    """Read a sweep spec from a config file with [scenario] and [sweep]."""
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path}")
    if "scenario" not in cp or "sweep" not in cp:
        raise ConfigError(f"{path}: need [scenario] and [sweep] sections")
    base = ScenarioConfig.from_section(cp["scenario"])
    sec = cp["sweep"]
    axis = sec.get("axis", "").strip()
    values = tuple(v.strip() for v in sec.get("values", "").split(",") if v.strip())
    if axis in ("p_new", "window_w"):
        values = tuple(float(v) for v in values)
    spec = SweepSpec(
        base=base,
        axis=axis,
        values=values,
        trials=sec.getint("trials", 100),
        policies=tuple(
            p.strip() for p in sec.get("policies", ", ".join(DEFAULT_POLICIES)).split(",") if p.strip()
        ),
        output_path=sec.get("output", "results.csv").strip(),
    )
    return spec.validate()


def load_topology_spec(path) -> tuple[ScenarioConfig, dict]:
    """Read a topology-study spec: [scenario] plus a [topology-study]
    section with trials / policies / output / include_undirected."""
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path}")
    if "scenario" not in cp:
        raise ConfigError(f"{path}: missing [scenario] section")
    base = ScenarioConfig.from_section(cp["scenario"])
    opts = {
        "trials": 100,
        "policies": TOPOLOGY_STUDY_POLICIES,
        "output_path": "topology.csv",
        "include_undirected": True,
    }
    if "topology-study" in cp:
        sec = cp["topology-study"]
        opts["trials"] = sec.getint("trials", opts["trials"])
        if sec.get("policies", "").strip():
            opts["policies"] = tuple(
                p.strip() for p in sec["policies"].split(",") if p.strip()
            )
        opts["output_path"] = sec.get("output", opts["output_path"]).strip()
        opts["include_undirected"] = sec.getboolean(
            "include_undirected", opts["include_undirected"]
        )
    return base, opts
