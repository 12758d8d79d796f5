"""Communication graphs and their information-group number.

Hubs that are mutually connected and share the same incoming neighbors
plan with identical knowledge of each other, so they form one
information group.  gamma counts the groups: 1 means full coordination,
n_hubs means every depot is on its own.
"""

from hubfleet import information_groups, make_topology, parse_topology
from hubfleet.comms import EDGE_REMOVAL_SCHEDULE

for kind in ("complete", "star", "ring", "empty"):
    g = make_topology(kind, 5)
    groups = information_groups(g)
    print(f"{kind:9s} edges={len(g.edges):2d} gamma={len(groups)} groups={groups}")

print("\ndirected edge-removal sequence (from the complete graph):")
for i in range(len(EDGE_REMOVAL_SCHEDULE) + 1):
    g = make_topology("edge-removal", 5, removed=EDGE_REMOVAL_SCHEDULE[:i])
    removed = ", ".join(f"{a}->{b}" for a, b in EDGE_REMOVAL_SCHEDULE[:i]) or "none"
    print(f"  removed [{removed:22s}] gamma={len(information_groups(g))}")
g = make_topology("empty", 5)
print(f"  removed [all                   ] gamma={len(information_groups(g))}")

print("\ncustom graphs parse from config strings:")
g = parse_topology("edges:0>1;1>0;2>3", 4)
print(f"  edges:0>1;1>0;2>3 on 4 hubs -> gamma={len(information_groups(g))}")
