"""Core domain entities and scenario generation.

Hubs are fixed depots with a circular sensing region; tasks arrive over a
discrete horizon with a service window and a planar location; agents live
at one hub and are represented by a symbolic mode (at the hub, flying
out, waiting at a task, flying back) rather than a continuous trajectory.
The scenario config pins every generation parameter so a seed replays a
trial exactly.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum

from .stochastics import DegenerateDist, SeededRng, epan_from_mean

__all__ = [
    "ConfigError",
    "Hub",
    "TaskStatus",
    "Task",
    "AgentMode",
    "AgentState",
    "ScenarioConfig",
    "REGION_KM",
    "generate_initial_tasks",
    "maybe_spawn_task",
    "mean_travel_time",
    "travel_params",
    "travel_distribution",
    "sample_window",
]

# Square operating region, roughly 150 km^2.
REGION_KM = 12.0
_DEPOT_MARGIN_KM = 3.0
_RING_RADIUS_KM = 4.0

# Side length of the task-generation box per conflict preset; the box is
# centered on the depot centroid and clipped to the region.
CONFLICT_BOX_SIDE = {"low": REGION_KM, "mid": 6.0, "high": 3.0}


class ConfigError(ValueError):
    """Raised when a scenario or sweep configuration is invalid."""


@dataclass(frozen=True)
class Hub:
    """Fixed depot with a circular sensing region."""

    id: int
    location: tuple[float, float]
    sensing_radius: float

    def __post_init__(self):
        if self.sensing_radius <= 0:
            raise ValueError("sensing_radius must be positive")

    def sees(self, point: tuple[float, float]) -> bool:
        """Closed-ball membership test for the sensing region."""
        return _dist(self.location, point) <= self.sensing_radius


class TaskStatus(Enum):
    PENDING = "pending"
    CLAIMED = "claimed-in-progress"
    COMPLETED = "completed"
    EXPIRED = "expired"


@dataclass
class Task:
    """One service request: reveal time, service window, location."""

    id: int
    arrival: int
    window_start: float
    window_end: float
    location: tuple[float, float]
    status: TaskStatus = TaskStatus.PENDING
    completed_at: float | None = None
    # Agent that physically arrived first and locked the task.
    claimed_by: int | None = None

    def __post_init__(self):
        if not (self.arrival <= self.window_start <= self.window_end):
            raise ValueError(
                f"task {self.id}: need arrival <= window_start <= window_end, "
                f"got ({self.arrival}, {self.window_start}, {self.window_end})"
            )

    def mark_claimed(self):
        if self.status in (TaskStatus.COMPLETED, TaskStatus.EXPIRED):
            raise ValueError(f"task {self.id}: cannot claim a {self.status.value} task")
        self.status = TaskStatus.CLAIMED

    def mark_completed(self, at: float):
        if self.status == TaskStatus.EXPIRED:
            raise ValueError(f"task {self.id}: cannot complete an expired task")
        if self.completed_at is not None:
            raise ValueError(f"task {self.id}: already completed")
        if at > self.window_end:
            raise ValueError(f"task {self.id}: completion {at} past deadline {self.window_end}")
        self.status = TaskStatus.COMPLETED
        self.completed_at = at

    def mark_expired(self):
        if self.status == TaskStatus.COMPLETED:
            raise ValueError(f"task {self.id}: cannot expire a completed task")
        self.status = TaskStatus.EXPIRED

    @property
    def completed(self) -> bool:
        return self.completed_at is not None


class AgentMode(Enum):
    IDLE = "idle-at-hub"
    EN_ROUTE = "en-route"
    WAITING = "waiting-at-task"
    RETURNING = "returning"


@dataclass
class AgentState:
    """Symbolic agent state: home hub, mode, committed action, timers."""

    id: int
    hub: int
    mode: AgentMode = AgentMode.IDLE
    action: int | None = None
    arrive_at: float | None = None
    service_at: float | None = None
    return_at: float | None = None
    action_history: list = field(default_factory=list)

    @property
    def idle(self) -> bool:
        return self.mode == AgentMode.IDLE


@dataclass(frozen=True)
class ScenarioConfig:
    """Every knob a trial needs; equal configs with equal seeds replay
    bit-identically."""

    n_depots: int = 5
    n_agents: int = 15
    horizon: int = 300
    step_minutes: float = 2.0
    p_new: float = 0.5
    window_minutes: float = 30.0
    initial_tasks: int | None = None  # None -> ceil(1.5 * n_agents)
    conflict_level: str = "mid"
    conflict_box: tuple[float, float, float, float] | None = None
    depot_layout: str | tuple = "grid"
    sensing_radius_km: float = 5.0
    speed_kmh: float = 8.0
    topology: str = "complete"
    ibr_max_rounds: int = 10
    abort_on_expiry: bool = False
    seed: int = 0

    # -- derived quantities -------------------------------------------------

    @property
    def window_steps(self) -> float:
        return self.window_minutes / self.step_minutes

    @property
    def speed_km_per_step(self) -> float:
        return self.speed_kmh / 60.0 * self.step_minutes

    @property
    def n_initial_tasks(self) -> int:
        if self.initial_tasks is not None:
            return self.initial_tasks
        return math.ceil(1.5 * self.n_agents)

    def hubs(self) -> list[Hub]:
        return [
            Hub(id=i, location=loc, sensing_radius=self.sensing_radius_km)
            for i, loc in enumerate(self.depot_locations())
        ]

    def depot_locations(self) -> list[tuple[float, float]]:
        if isinstance(self.depot_layout, tuple):
            if len(self.depot_layout) != self.n_depots:
                raise ConfigError(
                    f"depot_layout lists {len(self.depot_layout)} points for "
                    f"{self.n_depots} depots"
                )
            return [tuple(p) for p in self.depot_layout]
        if self.depot_layout == "grid":
            return _grid_layout(self.n_depots)
        if self.depot_layout == "ring":
            return _ring_layout(self.n_depots)
        raise ConfigError(f"unknown depot layout {self.depot_layout!r}")

    def box(self) -> tuple[float, float, float, float]:
        """Task-generation bounding box (xmin, ymin, xmax, ymax)."""
        if self.conflict_box is not None:
            return tuple(float(v) for v in self.conflict_box)
        try:
            side = CONFLICT_BOX_SIDE[self.conflict_level]
        except KeyError:
            raise ConfigError(f"unknown conflict level {self.conflict_level!r}") from None
        pts = self.depot_locations()
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        half = side / 2.0
        return (
            max(0.0, cx - half),
            max(0.0, cy - half),
            min(REGION_KM, cx + half),
            min(REGION_KM, cy + half),
        )

    def agent_hub(self, agent: int) -> int:
        """Agents are split equally across depots in id order."""
        return agent // (self.n_agents // self.n_depots)

    def validate(self) -> "ScenarioConfig":
        if self.n_depots < 1 or self.n_agents < 1:
            raise ConfigError("need at least one depot and one agent")
        if self.n_agents % self.n_depots != 0:
            raise ConfigError(
                f"{self.n_agents} agents cannot be distributed equally across "
                f"{self.n_depots} depots"
            )
        if not (0.0 <= self.p_new <= 1.0):
            raise ConfigError(f"p_new must lie in [0, 1], got {self.p_new}")
        if self.window_minutes <= 0:
            raise ConfigError("window_minutes must be positive")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least one step")
        if self.step_minutes <= 0:
            raise ConfigError("step_minutes must be positive")
        if self.speed_kmh <= 0:
            raise ConfigError("speed_kmh must be positive")
        if self.sensing_radius_km <= 0:
            raise ConfigError("sensing_radius_km must be positive")
        if self.ibr_max_rounds < 1:
            raise ConfigError("ibr_max_rounds must be at least 1")
        if self.initial_tasks is not None and self.initial_tasks < 0:
            raise ConfigError("initial_tasks cannot be negative")
        xmin, ymin, xmax, ymax = self.box()
        if xmin > xmax or ymin > ymax:
            raise ConfigError(f"conflict box {self.box()} is empty")
        self.depot_locations()
        return self

    def digest(self) -> str:
        """Hash identifying the scenario family.

        Topology and seed are excluded so paired trials across
        communication graphs share a digest.
        """
        payload = {}
        for f in fields(self):
            if f.name in ("topology", "seed"):
                continue
            payload[f.name] = getattr(self, f.name)
        blob = json.dumps(payload, sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **kwargs)

    # -- config file round trip ----------------------------------------------

    def to_file(self, path):
        cp = configparser.ConfigParser()
        cp["scenario"] = _scenario_section(self)
        with open(path, "w") as fh:
            cp.write(fh)

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        cp = configparser.ConfigParser()
        read = cp.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path}")
        if "scenario" not in cp:
            raise ConfigError(f"{path}: missing [scenario] section")
        return cls.from_section(cp["scenario"])

    @classmethod
    def from_section(cls, sec) -> "ScenarioConfig":
        kw = {}
        ints = {
            "n_depots", "n_agents", "horizon", "ibr_max_rounds", "seed",
        }
        floats = {
            "step_minutes", "p_new", "window_minutes", "sensing_radius_km",
            "speed_kmh",
        }
        for key in sec:
            if key in ints:
                kw[key] = int(sec[key])
            elif key in floats:
                kw[key] = float(sec[key])
            elif key == "initial_tasks":
                raw = sec[key].strip()
                kw[key] = int(raw) if raw else None
            elif key == "conflict_box":
                raw = sec[key].strip()
                kw[key] = _parse_points_flat(raw) if raw else None
            elif key == "depot_layout":
                raw = sec[key].strip()
                kw[key] = raw if raw in ("grid", "ring") else _parse_point_list(raw)
            elif key == "abort_on_expiry":
                kw[key] = sec.getboolean(key)
            elif key in ("conflict_level", "topology"):
                kw[key] = sec[key].strip()
            else:
                raise ConfigError(f"unknown scenario key {key!r}")
        return cls(**kw).validate()


def _scenario_section(cfg: ScenarioConfig) -> dict:
    sec = {
        "n_depots": str(cfg.n_depots),
        "n_agents": str(cfg.n_agents),
        "horizon": str(cfg.horizon),
        "step_minutes": repr(cfg.step_minutes),
        "p_new": repr(cfg.p_new),
        "window_minutes": repr(cfg.window_minutes),
        "initial_tasks": "" if cfg.initial_tasks is None else str(cfg.initial_tasks),
        "conflict_level": cfg.conflict_level,
        "sensing_radius_km": repr(cfg.sensing_radius_km),
        "speed_kmh": repr(cfg.speed_kmh),
        "topology": cfg.topology,
        "ibr_max_rounds": str(cfg.ibr_max_rounds),
        "abort_on_expiry": str(cfg.abort_on_expiry).lower(),
        "seed": str(cfg.seed),
    }
    if isinstance(cfg.depot_layout, tuple):
        sec["depot_layout"] = "; ".join(f"{x},{y}" for x, y in cfg.depot_layout)
    else:
        sec["depot_layout"] = cfg.depot_layout
    if cfg.conflict_box is not None:
        sec["conflict_box"] = ", ".join(repr(v) for v in cfg.conflict_box)
    return sec


def _parse_points_flat(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.replace(";", ",").split(",") if v.strip())


def _parse_point_list(raw: str) -> tuple[tuple[float, float], ...]:
    pts = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        x, y = (float(v) for v in chunk.split(","))
        pts.append((x, y))
    return tuple(pts)


def _grid_layout(n: int) -> list[tuple[float, float]]:
    if n == 1:
        c = REGION_KM / 2.0
        return [(c, c)]
    if n == 5:
        # Quincunx: four inner corners plus the center.
        lo, hi, mid = _DEPOT_MARGIN_KM, REGION_KM - _DEPOT_MARGIN_KM, REGION_KM / 2.0
        return [(lo, lo), (hi, lo), (lo, hi), (hi, hi), (mid, mid)]
    rows = max(1, math.floor(math.sqrt(n)))
    cols = math.ceil(n / rows)
    xs = _spread(cols)
    ys = _spread(rows)
    pts = [(xs[c], ys[r]) for r in range(rows) for c in range(cols)]
    return pts[:n]


def _spread(k: int) -> list[float]:
    lo, hi = _DEPOT_MARGIN_KM, REGION_KM - _DEPOT_MARGIN_KM
    if k == 1:
        return [REGION_KM / 2.0]
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def _ring_layout(n: int) -> list[tuple[float, float]]:
    c = REGION_KM / 2.0
    return [
        (
            c + _RING_RADIUS_KM * math.cos(2 * math.pi * i / n),
            c + _RING_RADIUS_KM * math.sin(2 * math.pi * i / n),
        )
        for i in range(n)
    ]


def _dist(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def sample_window(cfg: ScenarioConfig, t: float, rng: SeededRng) -> tuple[float, float]:
    """Draw a service window for a task revealed at time ``t``.

    The start lands uniformly in [t + w/2, t + w] and the duration
    uniformly in [w/2, w], with w the nominal window in steps.
    """
    w = cfg.window_steps
    start = rng.uniform(t + w / 2.0, t + w)
    duration = rng.uniform(w / 2.0, w)
    return float(start), float(start + duration)


def _draw_task(cfg: ScenarioConfig, task_id: int, t: int, rng: SeededRng) -> Task:
    # Fixed draw order (x, y, start, duration) for reproducibility.
    xmin, ymin, xmax, ymax = cfg.box()
    x = float(rng.uniform(xmin, xmax))
    y = float(rng.uniform(ymin, ymax))
    start, end = sample_window(cfg, t, rng)
    return Task(id=task_id, arrival=t, window_start=start, window_end=end, location=(x, y))


def generate_initial_tasks(cfg: ScenarioConfig, rng: SeededRng) -> list[Task]:
    """Tasks present at the start of a trial (revealed at t = 0)."""
    cfg.validate()
    return [_draw_task(cfg, k, 0, rng) for k in range(cfg.n_initial_tasks)]


def maybe_spawn_task(
    cfg: ScenarioConfig, t: int, rng: SeededRng, task_id: int
) -> Task | None:
    """With probability ``p_new``, reveal one new task at step ``t``."""
    if not 1 <= t <= cfg.horizon:
        raise ValueError(f"step {t} outside horizon 1..{cfg.horizon}")
    if rng.random() >= cfg.p_new:
        return None
    return _draw_task(cfg, task_id, t, rng)


def mean_travel_time(hub: Hub, task_location: tuple[float, float], speed: float) -> float:
    """Mean one-leg travel time: straight-line distance over speed."""
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    return _dist(hub.location, task_location) / speed


def travel_params(hub: Hub, task_location: tuple[float, float], speed: float) -> tuple[float, float]:
    """(mu, half_width) of the leg distribution; (0, 0) marks a point mass."""
    mu = mean_travel_time(hub, task_location, speed)
    if mu == 0.0:
        return 0.0, 0.0
    d = epan_from_mean(mu)
    return d.mu, d.half_width


def travel_distribution(hub: Hub, task_location: tuple[float, float], speed: float):
    """Distribution object for one leg between hub and task."""
    mu = mean_travel_time(hub, task_location, speed)
    if mu == 0.0:
        return DegenerateDist(0.0)
    return epan_from_mean(mu)
