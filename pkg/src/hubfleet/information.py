"""Local information available to each agent at planning time.

An agent sees the tasks inside its hub's sensing region that have been
revealed, and it sees the past task selections of agents at hubs its own
hub has a communication edge to (same-hub agents always see each other).
The available set drops tasks past their deadline and tasks any observed
agent has ever gone for; completions by unobserved agents stay invisible
until someone physically flies there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .comms import CommGraph

__all__ = ["LocalView", "visible_tasks", "available_tasks", "build_views"]


@dataclass
class LocalView:
    """Snapshot of what one agent knows when it plans.

    ``available``, ``deadlines`` and ``neighbors`` are shared between
    same-hub agents; treat them as read-only.
    """

    agent: int
    hub: int
    visible: frozenset
    available: frozenset
    # Deadline of every available task, keyed by task id.
    deadlines: dict
    # N_i: every agent at an observed hub, plus same-hub agents (self included).
    neighbors: frozenset
    # Index of the hub's information group under the current graph.
    group_id: int = 0
    observed_actions: frozenset = field(default_factory=frozenset)


def _observed_hubs(g: CommGraph, hub: int) -> frozenset:
    return g.observes(hub) | {hub}


def visible_tasks(agent: int, t: float, world) -> set:
    """Tasks in the agent's hub sensing ball that have been revealed."""
    hub = world.agent_hub[agent]
    ids = world.visible_by_hub[hub]
    if t >= world.clock:
        return set(ids)
    return {k for k in ids if world.tasks[k].arrival <= t}


def available_tasks(agent: int, t: float, world, g: CommGraph) -> set:
    """Visible tasks still inside their window and not yet attempted by
    anyone the agent observes."""
    hub = world.agent_hub[agent]
    observed = _observed_hubs(g, hub)
    out = set()
    for k in visible_tasks(agent, t, world):
        if world.tasks[k].window_end < t:
            continue
        if any(
            world.attempted_by_hub[h].get(k, t) < t for h in observed
        ):
            continue
        out.add(k)
    return out


def build_views(
    world,
    t: float,
    g: CommGraph,
    agents=None,
    *,
    with_observed: bool = False,
) -> dict:
    """Construct a LocalView per agent, computing each hub's sets once.

    Uses the world's incremental exclusion sets on the hot path
    (``t == world.clock``); older timestamps fall back to the exact
    history filter.
    """
    if agents is None:
        agents = range(len(world.agent_hub))
    by_hub: dict[int, list[int]] = {}
    for i in agents:
        by_hub.setdefault(world.agent_hub[i], []).append(i)

    live = t >= world.clock
    views: dict[int, LocalView] = {}
    for hub, members in by_hub.items():
        if live:
            vis = world.visible_by_hub[hub]
            excluded = world.excluded_by_hub[hub]
            avail = []
            deadlines = {}
            for k, end in world.hub_feed[hub]:
                if end >= t and k not in excluded:
                    avail.append(k)
                    deadlines[k] = end
            visible = frozenset(vis)
        else:
            visible = frozenset(visible_tasks(members[0], t, world))
            observed = _observed_hubs(g, hub)
            avail = []
            deadlines = {}
            for k in visible:
                task = world.tasks[k]
                if task.window_end < t:
                    continue
                if any(world.attempted_by_hub[h].get(k, t) < t for h in observed):
                    continue
                avail.append(k)
                deadlines[k] = task.window_end
        available = frozenset(avail)
        observed_actions = frozenset()
        if with_observed:
            obs_hubs = _observed_hubs(g, hub)
            observed_actions = frozenset(
                (j, s, k)
                for (s, j, k) in world.attempted_log
                if s < t and world.agent_hub[j] in obs_hubs
            )
        for i in members:
            views[i] = LocalView(
                agent=i,
                hub=hub,
                visible=visible,
                available=available,
                deadlines=deadlines,
                neighbors=world.neighbor_agents[hub],
                group_id=world.group_of_hub[hub],
                observed_actions=observed_actions,
            )
    return views
