"""One small trial, narrated step by step.

Two depots share the middle of the map.  With the empty communication
graph, both may send a drone to the same package: whoever physically
arrives first claims it, and the loser flies home empty-handed.  That
wasted round trip is exactly what richer communication buys back.
"""

from hubfleet import ScenarioConfig, TaskStatus
from hubfleet.engine import TrialEngine

cfg = ScenarioConfig(
    n_depots=2,
    n_agents=2,
    depot_layout=((3.0, 6.0), (9.0, 6.0)),
    conflict_box=(4.5, 4.5, 7.5, 7.5),  # only the shared strip
    initial_tasks=3,
    p_new=0.15,
    horizon=120,
    topology="empty",
    seed=11,
)
engine = TrialEngine(cfg, "ibr", debug=True)
record = engine.run()

print(f"{record.n_tasks} tasks spawned, {record.n_completed} completed, "
      f"fraction late {record.fraction_late:.3f}\n")

for task in engine.tasks:
    print(f"task {task.id}: window [{task.window_start:6.1f}, {task.window_end:6.1f}] "
          f"-> {task.status.value}"
          + (f" at {task.completed_at:.1f} by agent {task.claimed_by}"
             if task.status == TaskStatus.COMPLETED else ""))

print("\nagent event logs (time, task, outcome):")
for agent_id, events in engine.agent_events.items():
    print(f"  agent {agent_id} (hub {engine.agents[agent_id].hub})")
    for kind, when, task, extra in events:
        note = f" [{extra}]" if extra else ""
        print(f"    {when:7.2f}  {kind:8s} task {task}{note}")

wasted = sum(
    1
    for events in engine.agent_events.values()
    for kind, _, _, extra in events
    if kind == "arrive" and extra == "found-completed"
)
print(f"\nwasted trips caused by unobserved duplication: {wasted}")
