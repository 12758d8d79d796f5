"""Directed communication graphs over hubs.

An edge ``(h1, h2)`` means hub ``h1`` observes the actions of hub
``h2``'s agents.  Self-observation is implicit and never stored.  The
information-group partition collapses hubs that are mutually connected
and share the same incoming neighbors; its size gamma is the knob the
topology experiments turn.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "CommGraph",
    "make_topology",
    "parse_topology",
    "neighborhood",
    "information_groups",
    "information_group_number",
    "EDGE_REMOVAL_SCHEDULE",
]

# Directed edges deleted one at a time (starting from the complete graph
# on five hubs) to walk gamma through 2, 3 and 4.  The third deletion must
# be 3->2: deleting 2->3 instead leaves gamma at 3, because hubs then pair
# up as {0,3} and {2,4} under the grouping rule.
EDGE_REMOVAL_SCHEDULE: tuple[tuple[int, int], ...] = ((0, 1), (2, 0), (3, 2))


@dataclass(frozen=True)
class CommGraph:
    """Immutable directed graph over ``n_hubs`` hubs (no self-loops)."""

    n_hubs: int
    edges: frozenset[tuple[int, int]]
    name: str = "custom"
    _out: dict = field(init=False, repr=False, compare=False, hash=False, default=None)
    _in: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        for h1, h2 in self.edges:
            if h1 == h2:
                raise ValueError(f"self-loop {h1}->{h2} is implicit and must not be stored")
            if not (0 <= h1 < self.n_hubs and 0 <= h2 < self.n_hubs):
                raise ValueError(f"edge {h1}->{h2} outside hub range 0..{self.n_hubs - 1}")
        out = {h: set() for h in range(self.n_hubs)}
        inc = {h: set() for h in range(self.n_hubs)}
        for h1, h2 in self.edges:
            out[h1].add(h2)
            inc[h2].add(h1)
        object.__setattr__(self, "_out", {h: frozenset(s) for h, s in out.items()})
        object.__setattr__(self, "_in", {h: frozenset(s) for h, s in inc.items()})

    def observes(self, hub: int) -> frozenset:
        """Hubs whose agents' actions ``hub`` can see (excluding itself)."""
        return self._out[hub]

    def in_neighbors(self, hub: int) -> frozenset:
        return self._in[hub]


def _complete_edges(n: int) -> set[tuple[int, int]]:
    return {(a, b) for a in range(n) for b in range(n) if a != b}


def make_topology(
    kind: str,
    n_hubs: int,
    *,
    center: int = 0,
    removed: tuple[tuple[int, int], ...] = (),
) -> CommGraph:
    """Construct a named topology on ``n_hubs`` hubs.

    Kinds: ``complete``, ``star`` (bidirectional center-leaf spokes only),
    ``ring`` (bidirectional cycle in index order), ``empty``, and
    ``edge-removal`` (complete graph minus the ``removed`` directed edges,
    deleted in order).
    """
    if n_hubs < 1:
        raise ValueError("n_hubs must be at least 1")
    if kind == "complete":
        edges = _complete_edges(n_hubs)
    elif kind == "empty":
        edges = set()
    elif kind == "star":
        if not (0 <= center < n_hubs):
            raise ValueError(f"star center {center} outside hub range")
        edges = set()
        for leaf in range(n_hubs):
            if leaf != center:
                edges.add((center, leaf))
                edges.add((leaf, center))
    elif kind == "ring":
        edges = set()
        for h in range(n_hubs):
            nxt = (h + 1) % n_hubs
            if nxt != h:
                edges.add((h, nxt))
                edges.add((nxt, h))
    elif kind == "edge-removal":
        edges = _complete_edges(n_hubs)
        for e in removed:
            e = (int(e[0]), int(e[1]))
            if e not in edges:
                raise ValueError(f"cannot remove edge {e[0]}->{e[1]}: not present")
            edges.remove(e)
    else:
        raise ValueError(f"unknown topology kind {kind!r}")
    name = kind if kind != "edge-removal" else "edge-removal:" + ";".join(
        f"{a}>{b}" for a, b in removed
    )
    if kind == "star":
        name = f"star:{center}"
    return CommGraph(n_hubs=n_hubs, edges=frozenset(edges), name=name)


def parse_topology(spec: str, n_hubs: int) -> CommGraph:
    """Build a graph from a config string.

    Accepted forms: ``complete``, ``empty``, ``ring``, ``star``,
    ``star:<center>``, ``edge-removal:<a>b;...`` (complete minus the
    listed directed edges, written ``a>b``) and ``edges:<a>b;...``
    (explicit edge list).
    """
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    if head in ("complete", "empty", "ring"):
        if rest:
            raise ValueError(f"topology {head!r} takes no arguments")
        return make_topology(head, n_hubs)
    if head == "star":
        center = int(rest) if rest else 0
        return make_topology("star", n_hubs, center=center)
    if head == "edge-removal":
        return make_topology("edge-removal", n_hubs, removed=_parse_edges(rest))
    if head == "edges":
        return CommGraph(n_hubs=n_hubs, edges=frozenset(_parse_edges(rest)), name=spec)
    raise ValueError(f"unknown topology spec {spec!r}")


def _parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    edges = []
    for chunk in text.replace(",", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, sep, b = chunk.partition(">")
        if not sep:
            raise ValueError(f"bad edge {chunk!r}, expected 'a>b'")
        edges.append((int(a), int(b)))
    return tuple(edges)


def neighborhood(g: CommGraph, agent_hub: int, hub_of: dict) -> set:
    """Agents observable from ``agent_hub``: same-hub agents plus agents
    at every hub this hub has an edge to."""
    observed = g.observes(agent_hub)
    return {
        j for j, h in hub_of.items() if h == agent_hub or h in observed
    }


def _grouped(g: CommGraph, h1: int, h2: int) -> bool:
    """Pairwise rule: mutually connected with identical in-neighbors
    outside the pair."""
    if (h1, h2) not in g.edges or (h2, h1) not in g.edges:
        return False
    drop = {h1, h2}
    return g.in_neighbors(h1) - drop == g.in_neighbors(h2) - drop


def information_groups(g: CommGraph) -> list[list[int]]:
    """Partition hubs into information groups (sorted, deterministic)."""
    parent = list(range(g.n_hubs))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for h1 in range(g.n_hubs):
        for h2 in range(h1 + 1, g.n_hubs):
            if _grouped(g, h1, h2):
                ra, rb = find(h1), find(h2)
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for h in range(g.n_hubs):
        groups.setdefault(find(h), []).append(h)
    return sorted(groups.values())


def information_group_number(g: CommGraph) -> int:
    """gamma(G): number of information groups, between 1 and n_hubs."""
    return len(information_groups(g))
