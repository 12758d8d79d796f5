"""Discrete-time trial engine.

Each step: reveal new tasks, expire stale pending ones, fire travel
events that have come due (in continuous-time order), then let the
policy plan for whichever agents are back at their hubs.  Travel legs
are sampled once at dispatch; an agent arriving early waits at the task
until its window opens; the first agent to physically arrive locks the
task, so duplicated dispatches from mutually unaware hubs cost the loser
a wasted round trip.
"""

from __future__ import annotations

import heapq
import json
import time as _time
from dataclasses import dataclass, field

from . import information
from .comms import information_groups, parse_topology
from .metrics import TrialRecord, fraction_late
from .policies import Policy, make_policy
from .stochastics import SeededRng, bounded_sample
from .world import (
    AgentMode,
    AgentState,
    ScenarioConfig,
    Task,
    TaskStatus,
    generate_initial_tasks,
    maybe_spawn_task,
    travel_params,
)

__all__ = ["TrialEngine", "StepTrace", "PolicyError", "run_trial",
           "STREAM_INITIAL", "STREAM_ARRIVALS", "STREAM_TRAVEL", "STREAM_POLICY"]

# Substream ids carved out of each trial's seed.
STREAM_INITIAL = 0
STREAM_ARRIVALS = 1
STREAM_TRAVEL = 2
STREAM_POLICY = 3

_ARRIVE = "arrive"
_SERVICE = "service"
_RETURN = "return"


class PolicyError(RuntimeError):
    """A policy returned an assignment that violates its contract."""


@dataclass
class StepTrace:
    """Per-step record of planning cost and world changes."""

    t: int
    planning_wall_time: float
    new_assignments: list = field(default_factory=list)
    completions: list = field(default_factory=list)
    expirations: list = field(default_factory=list)

    def as_json_line(self) -> str:
        return json.dumps(
            {
                "t": self.t,
                "planning_wall_time": self.planning_wall_time,
                "new_assignments": self.new_assignments,
                "completions": self.completions,
                "expirations": self.expirations,
            }
        )


class TrialEngine:
    """Owns one trial's world state and runs it to the horizon.

    The engine object itself is the ``world`` handed to policies and the
    information functions; all state is per-trial, nothing is shared.
    """

    def __init__(
        self,
        cfg: ScenarioConfig,
        policy: Policy | str,
        *,
        debug: bool = False,
        trace_log=None,
    ):
        cfg.validate()
        self.cfg = cfg
        self.policy = make_policy(policy) if isinstance(policy, str) else policy
        self.debug = debug
        # Path for an optional line-delimited per-step trace.
        self.trace_log = trace_log

        self.graph = parse_topology(cfg.topology, cfg.n_depots)
        self.hubs = cfg.hubs()
        self.agents = [AgentState(i, cfg.agent_hub(i)) for i in range(cfg.n_agents)]
        self.agent_hub = [a.hub for a in self.agents]

        groups = information_groups(self.graph)
        self.group_of_hub = {}
        for gid, members in enumerate(groups):
            for h in members:
                self.group_of_hub[h] = gid
        self.neighbor_agents = {}
        for h in range(cfg.n_depots):
            seen_hubs = self.graph.observes(h) | {h}
            self.neighbor_agents[h] = frozenset(
                j for j, hj in enumerate(self.agent_hub) if hj in seen_hubs
            )
        # Hubs whose exclusion sets must grow when this hub dispatches.
        self._watchers = {
            h: frozenset(
                x for x in range(cfg.n_depots) if x == h or h in self.graph.observes(x)
            )
            for h in range(cfg.n_depots)
        }

        self.tasks: list[Task] = []
        self.visible_by_hub = [[] for _ in range(cfg.n_depots)]
        self.hub_feed = [[] for _ in range(cfg.n_depots)]
        self.leg_params = [{} for _ in range(cfg.n_depots)]
        self.excluded_by_hub = [set() for _ in range(cfg.n_depots)]
        self.attempted_by_hub = [{} for _ in range(cfg.n_depots)]
        self.attempted_log: list = []
        self._pending: set = set()
        self._travelers: dict[int, set] = {}

        self.clock = 0
        self._events: list = []
        self._event_seq = 0
        self._trip = [0] * cfg.n_agents
        self._trip_start = [0.0] * cfg.n_agents
        self._trip_tau = [(0.0, 0.0)] * cfg.n_agents

        self._rng_arrivals = SeededRng(cfg.seed, STREAM_ARRIVALS)
        self._rng_travel = SeededRng(cfg.seed, STREAM_TRAVEL)
        self._rng_policy = SeededRng(cfg.seed, STREAM_POLICY)

        self.step_traces: list[StepTrace] = []
        self._planning_times: list[float] = []
        self.agent_events: dict[int, list] = {a.id: [] for a in self.agents}
        self.snapshots: list = []

        for task in generate_initial_tasks(cfg, SeededRng(cfg.seed, STREAM_INITIAL)):
            self._register_task(task)

    # -- world construction --------------------------------------------------

    def _register_task(self, task: Task):
        assert task.id == len(self.tasks)
        self.tasks.append(task)
        speed = self.cfg.speed_km_per_step
        for hub in self.hubs:
            if hub.sees(task.location):
                h = hub.id
                self.visible_by_hub[h].append(task.id)
                self.hub_feed[h].append((task.id, task.window_end))
                self.leg_params[h][task.id] = travel_params(hub, task.location, speed)
        self._pending.add(task.id)

    # -- main loop -----------------------------------------------------------

    def run(self) -> TrialRecord:
        cfg = self.cfg
        sink = open(self.trace_log, "w") if self.trace_log else None
        try:
            for t in range(1, cfg.horizon + 1):
                self.clock = t
                trace = StepTrace(t=t, planning_wall_time=0.0)
                self._spawn(t)
                self._expire_stale(t, trace)
                self._fire_events(t, trace)
                self._plan(t, trace)
                self.step_traces.append(trace)
                if sink is not None:
                    sink.write(trace.as_json_line() + "\n")
                if self.debug:
                    self.snapshots.append(
                        [(a.mode, a.action) for a in self.agents]
                    )
        finally:
            if sink is not None:
                sink.close()
        self._finalize()
        return self._record()

    def _spawn(self, t: int):
        task = maybe_spawn_task(self.cfg, t, self._rng_arrivals, len(self.tasks))
        if task is not None:
            self._register_task(task)

    def _expire_stale(self, t: int, trace: StepTrace):
        stale = [k for k in self._pending if self.tasks[k].window_end < t]
        for k in sorted(stale):
            self.tasks[k].mark_expired()
            self._pending.discard(k)
            trace.expirations.append(k)
        if self.cfg.abort_on_expiry:
            self._abort_hopeless(t, trace)

    def _abort_hopeless(self, t: int, trace: StepTrace):
        """With the abort flag on, travelers turn back the moment their
        target's window closes; the return leg is the presampled return
        time scaled by the fraction of the outbound leg flown."""
        doomed = [
            k
            for k, travelers in self._travelers.items()
            if travelers and self.tasks[k].window_end < t
            and self.tasks[k].claimed_by is None
            and not self.tasks[k].completed
        ]
        for k in sorted(doomed):
            task = self.tasks[k]
            for i in sorted(self._travelers[k]):
                agent = self.agents[i]
                tau_out, tau_back = self._trip_tau[i]
                elapsed = task.window_end - self._trip_start[i]
                frac = 1.0 if tau_out == 0 else min(1.0, max(0.0, elapsed / tau_out))
                self._trip[i] += 1
                agent.mode = AgentMode.RETURNING
                agent.arrive_at = None
                agent.return_at = task.window_end + frac * tau_back
                self._push(agent.return_at, i, _RETURN, k)
                self._log_agent(i, "abort", task.window_end, k)
            self._travelers[k] = set()
            task.mark_expired()
            trace.expirations.append(k)

    def _fire_events(self, t: int, trace: StepTrace):
        while self._events and self._events[0][0] <= t:
            when, _aid, _seq, kind, agent_id, task_id, trip = heapq.heappop(self._events)
            if trip != self._trip[agent_id]:
                continue  # cancelled by an abort
            if kind == _ARRIVE:
                self._handle_arrival(agent_id, task_id, when, trace)
            elif kind == _SERVICE:
                self._handle_service(agent_id, task_id, when, trace)
            else:
                self._handle_return(agent_id, when, trace)

    def _handle_arrival(self, agent_id: int, task_id: int, when: float, trace: StepTrace):
        agent = self.agents[agent_id]
        task = self.tasks[task_id]
        self._travelers.get(task_id, set()).discard(agent_id)
        outcome = self.resolve_arrival(agent_id, task_id, when)
        self._log_agent(agent_id, "arrive", when, task_id, outcome)
        if outcome == "completed":
            service_at = max(when, task.window_start)
            agent.mode = AgentMode.WAITING
            agent.service_at = service_at
            self._push(service_at, agent_id, _SERVICE, task_id)
            return
        if outcome == "late" and task.status != TaskStatus.EXPIRED:
            task.mark_expired()
            self._pending.discard(task_id)
            trace.expirations.append(task_id)
        self._start_return(agent_id, when)

    def resolve_arrival(self, agent_id: int, task_id: int, arrival_t: float) -> str:
        """Outcome of physically reaching a task.

        The earliest arrival inside the window locks the task (waiting
        for the window to open still counts); anyone arriving after the
        lock, or after a completion, has wasted the trip; arriving past
        the deadline is simply late.
        """
        task = self.tasks[task_id]
        if task.completed or task.claimed_by is not None:
            return "found-completed"
        if arrival_t <= task.window_end:
            task.claimed_by = agent_id
            return "completed"
        return "late"

    def _handle_service(self, agent_id: int, task_id: int, when: float, trace: StepTrace):
        task = self.tasks[task_id]
        task.mark_completed(at=when)
        trace.completions.append(task_id)
        self._log_agent(agent_id, "service", when, task_id)
        self._start_return(agent_id, when)

    def _start_return(self, agent_id: int, when: float):
        agent = self.agents[agent_id]
        tau_back = self._trip_tau[agent_id][1]
        agent.mode = AgentMode.RETURNING
        agent.arrive_at = None
        agent.service_at = None
        agent.return_at = when + tau_back
        self._push(agent.return_at, agent_id, _RETURN, agent.action)

    def _handle_return(self, agent_id: int, when: float, trace: StepTrace):
        agent = self.agents[agent_id]
        self._log_agent(agent_id, "return", when, agent.action)
        agent.mode = AgentMode.IDLE
        agent.action = None
        agent.return_at = None
        agent.action_history.append((self.clock, None))

    def _plan(self, t: int, trace: StepTrace):
        idle = [a.id for a in self.agents if a.idle]
        if not idle:
            return
        t0 = _time.perf_counter()
        profile = self.policy.plan(self, t, idle, self.graph, self._rng_policy)
        trace.planning_wall_time = _time.perf_counter() - t0
        self._planning_times.append(trace.planning_wall_time)
        for agent_id, task_id in profile.assigned():
            self.dispatch(agent_id, task_id, t)
            trace.new_assignments.append((agent_id, task_id))

    def dispatch(self, agent_id: int, task_id: int, t: int):
        """Commit an idle agent to a task: sample both legs, schedule the
        arrival, and publish the attempt to every hub that observes this
        one."""
        agent = self.agents[agent_id]
        if not agent.idle:
            raise PolicyError(f"agent {agent_id} is not idle at step {t}")
        hub = agent.hub
        task = self.tasks[task_id]
        if task_id not in self.leg_params[hub]:
            raise PolicyError(f"task {task_id} is not visible to hub {hub}")
        if task.window_end < t:
            raise PolicyError(f"task {task_id} expired before step {t}")
        # Only attempts made before this step block a dispatch; two agents
        # may pick the same task within one step (the duplication the
        # model is about) and both fly.
        for h_obs in self.graph.observes(hub) | {hub}:
            if self.attempted_by_hub[h_obs].get(task_id, t) < t:
                raise PolicyError(
                    f"task {task_id} was already attempted in hub {hub}'s view"
                )

        mu, b = self.leg_params[hub][task_id]
        tau_out = float(bounded_sample(mu, b, self._rng_travel.random()))
        tau_back = float(bounded_sample(mu, b, self._rng_travel.random()))

        self._trip[agent_id] += 1
        self._trip_start[agent_id] = float(t)
        self._trip_tau[agent_id] = (tau_out, tau_back)
        agent.mode = AgentMode.EN_ROUTE
        agent.action = task_id
        agent.arrive_at = t + tau_out
        agent.action_history.append((t, task_id))
        self._push(agent.arrive_at, agent_id, _ARRIVE, task_id)
        self._travelers.setdefault(task_id, set()).add(agent_id)

        self.attempted_by_hub[hub].setdefault(task_id, t)
        self.attempted_log.append((t, agent_id, task_id))
        for watcher in self._watchers[hub]:
            self.excluded_by_hub[watcher].add(task_id)
        if task.status == TaskStatus.PENDING:
            task.mark_claimed()
            self._pending.discard(task_id)
        self._log_agent(agent_id, "dispatch", float(t), task_id)

    def _finalize(self):
        """Every task not completed by the horizon ends expired."""
        for task in self.tasks:
            if not task.completed and task.status != TaskStatus.EXPIRED:
                task.mark_expired()
        self._pending.clear()

    # -- plumbing ------------------------------------------------------------

    def _push(self, when: float, agent_id: int, kind: str, task_id: int | None):
        self._event_seq += 1
        heapq.heappush(
            self._events,
            (when, agent_id, self._event_seq, kind, agent_id, task_id, self._trip[agent_id]),
        )

    def _log_agent(self, agent_id: int, kind: str, when: float, task_id, extra=None):
        if self.debug:
            self.agent_events[agent_id].append((kind, when, task_id, extra))

    def _record(self) -> TrialRecord:
        cfg = self.cfg
        n_tasks = len(self.tasks)
        n_completed = sum(1 for task in self.tasks if task.completed)
        planned = self._planning_times
        mean_time = sum(planned) / len(planned) if planned else 0.0
        return TrialRecord(
            cfg_digest=cfg.digest(),
            policy=self.policy.name,
            topology=cfg.topology,
            gamma=len(information_groups(self.graph)),
            seed=cfg.seed,
            n_tasks=n_tasks,
            n_completed=n_completed,
            fraction_late=fraction_late(n_tasks, n_completed),
            welfare=n_completed,
            mean_planning_time_s=mean_time,
            p_new=cfg.p_new,
            window_w_min=cfg.window_minutes,
            n_depots=cfg.n_depots,
            n_agents=cfg.n_agents,
            conflict_level=cfg.conflict_level if cfg.conflict_box is None else "custom",
            per_step_times=list(planned),
        )

    # Exposed for tests: pure-path availability must match the engine's
    # incremental exclusion sets.
    def available_now(self, agent_id: int) -> set:
        return information.available_tasks(agent_id, self.clock, self, self.graph)


def run_trial(cfg: ScenarioConfig, policy: Policy | str, *, trace_log=None) -> TrialRecord:
    """Simulate one trial and return its metrics row.

    ``trace_log`` names an optional file that receives one JSON line per
    step (planning time, assignments, completions, expirations).
    """
    return TrialEngine(cfg, policy, trace_log=trace_log).run()
