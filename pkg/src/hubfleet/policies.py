"""Allocation policies: iterative best response and baselines.

Every policy maps the idle agents at a planning step to task choices (or
idle) using only each agent's local view.  The shared interface builds
views and success probabilities inside the timed plan call, so measured
planning cost includes each policy's information gathering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scipy.optimize import linear_sum_assignment

from .information import LocalView, build_views
from .stochastics import SeededRng, bounded_cdf

__all__ = [
    "SuccessProbTable",
    "AssignmentProfile",
    "success_probability",
    "build_prob_table",
    "local_welfare",
    "marginal_utility",
    "profile_welfare",
    "ibr_plan",
    "edd_plan",
    "hungarian_plan",
    "random_plan",
    "Policy",
    "IbrPolicy",
    "EddPolicy",
    "HungarianPolicy",
    "RandomPolicy",
    "NoopPolicy",
    "POLICY_NAMES",
    "make_policy",
]


@dataclass
class SuccessProbTable:
    """p_ik for the tasks each agent could currently go for."""

    entries: dict = field(default_factory=dict)

    def get(self, agent: int, task: int) -> float:
        return self.entries.get((agent, task), 0.0)

    def put(self, agent: int, task: int, p: float):
        self.entries[(agent, task)] = p


@dataclass
class AssignmentProfile:
    """Choice per idle agent: a task id, or None for staying idle."""

    choices: dict = field(default_factory=dict)

    def assigned(self) -> list:
        """(agent, task) pairs for agents that picked a task, id order."""
        return sorted((i, k) for i, k in self.choices.items() if k is not None)


def success_probability(agent: int, task: int, t: float, world) -> float:
    """Probability a leg dispatched now lands before the task deadline."""
    hub = world.agent_hub[agent]
    deadline = world.tasks[task].window_end
    if deadline <= t:
        return 0.0
    mu, b = world.leg_params[hub][task]
    return bounded_cdf(mu, b, deadline - t)


def build_prob_table(world, t: float, views: dict) -> SuccessProbTable:
    """Success probabilities for every (agent, available task) pair.

    Probabilities are hub-level (same-hub agents share travel
    distributions), so each hub's CDF values are computed once.
    """
    table = SuccessProbTable()
    done_hubs: dict[int, dict] = {}
    for i, view in views.items():
        hub = view.hub
        per_hub = done_hubs.get(hub)
        if per_hub is None:
            params = world.leg_params[hub]
            per_hub = {}
            for k in view.available:
                deadline = view.deadlines[k]
                if deadline <= t:
                    per_hub[k] = 0.0
                    continue
                mu, b = params[k]
                per_hub[k] = bounded_cdf(mu, b, deadline - t)
            done_hubs[hub] = per_hub
        for k, p in per_hub.items():
            table.entries[(i, k)] = p
    return table


def local_welfare(
    agent: int,
    profile: AssignmentProfile,
    probs: SuccessProbTable,
    view: LocalView,
) -> float:
    """Welfare the agent observes: each available task contributes the
    best success probability among observed agents choosing it."""
    best: dict[int, float] = {}
    entries = probs.entries
    for j, k in profile.choices.items():
        if k is None or k not in view.available:
            continue
        p = entries.get((j, k), 0.0)
        if p > best.get(k, 0.0):
            best[k] = p
    return sum(best.values())


def marginal_utility(
    agent: int,
    task: int | None,
    profile: AssignmentProfile,
    probs: SuccessProbTable,
    view: LocalView,
) -> float:
    """Welfare gain from the agent picking ``task`` instead of idling,
    holding the other observed choices fixed."""
    if task is None:
        return 0.0
    p_own = probs.get(agent, task)
    best_other = 0.0
    entries = probs.entries
    for j, k in profile.choices.items():
        if k != task or j == agent:
            continue
        p = entries.get((j, k), 0.0)
        if p > best_other:
            best_other = p
    gain = p_own - best_other
    return gain if gain > 0.0 else 0.0


def profile_welfare(profile: AssignmentProfile, probs: SuccessProbTable) -> float:
    """Global welfare of a profile: sum over tasks of the best success
    probability among choosers."""
    best: dict[int, float] = {}
    for j, k in profile.choices.items():
        if k is None:
            continue
        p = probs.get(j, k)
        if p > best.get(k, 0.0):
            best[k] = p
    return sum(best.values())


def ibr_plan(
    idle_agents,
    views: dict,
    probs: SuccessProbTable,
    max_rounds: int,
    rng: SeededRng,
    welfare_log: list | None = None,
) -> AssignmentProfile:
    """Iterative best response over the idle agents.

    Agents are visited in one random order, repeatedly; each switches to
    the choice with the highest marginal utility given the choices it can
    observe, preferring its current task and then the lowest task id on
    ties, and going idle when nothing strictly beats zero.  Stops after a
    sweep with no changes, or after ``max_rounds`` sweeps.
    """
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be at least 1, got {max_rounds}")
    agents = sorted(idle_agents)
    x: dict[int, int | None] = {i: None for i in agents}
    choosers: dict[int, set] = {}
    entries = probs.entries
    order = rng.shuffled(agents)

    avail_sorted = {i: sorted(views[i].available) for i in agents}

    for _ in range(max_rounds):
        changed = False
        for i in order:
            view = views[i]
            nbrs = view.neighbors
            incumbent = x[i]
            best_k: int | None = None
            best_u = 0.0
            inc_u = 0.0
            for k in avail_sorted[i]:
                p_own = entries.get((i, k), 0.0)
                best_other = 0.0
                for j in choosers.get(k, ()):
                    if j == i or j not in nbrs:
                        continue
                    p = entries.get((j, k), 0.0)
                    if p > best_other:
                        best_other = p
                u = p_own - best_other
                if u < 0.0:
                    u = 0.0
                if k == incumbent:
                    inc_u = u
                if u > best_u:
                    best_u = u
                    best_k = k
            if best_u <= 0.0:
                new = None
            elif incumbent is not None and inc_u >= best_u:
                new = incumbent
            else:
                new = best_k
            if new != incumbent:
                if incumbent is not None:
                    choosers[incumbent].discard(i)
                if new is not None:
                    choosers.setdefault(new, set()).add(i)
                x[i] = new
                changed = True
            if welfare_log is not None:
                welfare_log.append(profile_welfare(AssignmentProfile(dict(x)), probs))
        if not changed:
            break
    return AssignmentProfile(x)


def edd_plan(idle_agents, views: dict) -> AssignmentProfile:
    """Earliest due date: in agent-id order, each agent takes the
    available task with the smallest deadline not already taken this step
    by an agent it observes (ties broken by task id)."""
    x: dict[int, int | None] = {}
    claims: dict[int, list] = {}
    for i in sorted(idle_agents):
        view = views[i]
        nbrs = view.neighbors
        best = None
        for k in view.available:
            claimants = claims.get(k)
            if claimants and any(j in nbrs for j in claimants):
                continue
            key = (view.deadlines[k], k)
            if best is None or key < best:
                best = key
        if best is None:
            x[i] = None
        else:
            k = best[1]
            x[i] = k
            claims.setdefault(k, []).append(i)
    return AssignmentProfile(x)


def hungarian_plan(idle_agents, views: dict, probs: SuccessProbTable) -> AssignmentProfile:
    """Maximum-weight assignment per information group, weights being the
    success probabilities; zero-weight matches are dropped (those agents
    idle)."""
    x: dict[int, int | None] = {i: None for i in idle_agents}
    by_group: dict[int, list] = {}
    for i in idle_agents:
        by_group.setdefault(views[i].group_id, []).append(i)
    for group_agents in by_group.values():
        group_agents.sort()
        task_union = sorted({k for i in group_agents for k in views[i].available})
        if not task_union:
            continue
        col = {k: c for c, k in enumerate(task_union)}
        weights = [[0.0] * len(task_union) for _ in group_agents]
        for r, i in enumerate(group_agents):
            for k in views[i].available:
                weights[r][col[k]] = probs.get(i, k)
        rows, cols = linear_sum_assignment(weights, maximize=True)
        for r, c in zip(rows, cols):
            if weights[r][c] > 0.0:
                x[group_agents[r]] = task_union[c]
    return AssignmentProfile(x)


def random_plan(idle_agents, views: dict, rng: SeededRng) -> AssignmentProfile:
    """Uniform choice over available tasks plus idling; floor baseline."""
    x: dict[int, int | None] = {}
    for i in sorted(idle_agents):
        options: list[int | None] = sorted(views[i].available)
        options.append(None)
        x[i] = options[int(rng.integers(len(options)))]
    return AssignmentProfile(x)


class Policy:
    """Shared planning interface; subclasses implement ``decide``."""

    name = "abstract"

    def plan(self, world, t: float, idle_agents, graph, rng: SeededRng) -> AssignmentProfile:
        views = build_views(world, t, graph, idle_agents)
        return self.decide(world, t, idle_agents, views, rng)

    def decide(self, world, t, idle_agents, views, rng) -> AssignmentProfile:
        raise NotImplementedError


class IbrPolicy(Policy):
    name = "ibr"

    def decide(self, world, t, idle_agents, views, rng):
        probs = build_prob_table(world, t, views)
        return ibr_plan(idle_agents, views, probs, world.cfg.ibr_max_rounds, rng)


class EddPolicy(Policy):
    name = "edd"

    def decide(self, world, t, idle_agents, views, rng):
        return edd_plan(idle_agents, views)


class HungarianPolicy(Policy):
    name = "hungarian"

    def decide(self, world, t, idle_agents, views, rng):
        probs = build_prob_table(world, t, views)
        return hungarian_plan(idle_agents, views, probs)


class RandomPolicy(Policy):
    name = "random"

    def decide(self, world, t, idle_agents, views, rng):
        return random_plan(idle_agents, views, rng)


class NoopPolicy(Policy):
    """Never assigns anything; exists to check planning-time accounting."""

    name = "noop"

    def plan(self, world, t, idle_agents, graph, rng):
        return AssignmentProfile({i: None for i in idle_agents})


def _scoba_factory():
    raise NotImplementedError(
        "scoba: comparison slot reserved; no implementation is provided"
    )


_FACTORIES = {
    "ibr": IbrPolicy,
    "edd": EddPolicy,
    "hungarian": HungarianPolicy,
    "random": RandomPolicy,
    "noop": NoopPolicy,
    "scoba": _scoba_factory,
}

POLICY_NAMES = ("ibr", "edd", "hungarian", "random")


def make_policy(name: str) -> Policy:
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown policy {name!r}; expected one of {sorted(_FACTORIES)}"
        ) from None
    return factory()
