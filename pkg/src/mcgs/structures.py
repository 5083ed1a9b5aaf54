"""Detection of the minority structures: super pivots, huge stars, rims
(parachute- and chain-shaped) and ties.

Pivots and stars come from a triangle-marking DFS; rims and ties from the
components of the subgraph induced by the cut points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .graph import Graph, cut_points_and_bridges


class Kind(enum.Enum):
    SUPER_PIVOT = "super_pivot"
    HUGE_STAR = "huge_star"
    PARACHUTE_RIM = "parachute_rim"
    CHAIN_RIM = "chain_rim"
    TIE = "tie"

    @property
    def category(self) -> str:
        return _CATEGORY[self]


_CATEGORY = {
    Kind.SUPER_PIVOT: "P",
    Kind.HUGE_STAR: "S",
    Kind.PARACHUTE_RIM: "R",
    Kind.CHAIN_RIM: "R",
    Kind.TIE: "T",
}

CATEGORIES = ("P", "S", "R", "T")


@dataclass(frozen=True)
class DegreeThresholds:
    mu: int  # smallest degree inside the global top 5%
    epsilon: float  # mean degree


@dataclass(frozen=True)
class MinorityStructure:
    kind: Kind
    key_nodes: tuple[int, ...]
    attached_nodes: tuple[int, ...] = ()
    importance: int = 0
    flags: tuple[str, ...] = ()

    @property
    def category(self) -> str:
        return self.kind.category

    @property
    def match_key(self) -> tuple:
        """Canonical identity used to decide whether two structures are the same.

        Centers and anchors are keyed by their single node; chains by the
        sorted tuple of their key nodes.  Keys are comparable only within a
        category.
        """
        if self.kind in (Kind.CHAIN_RIM, Kind.TIE):
            return (self.kind.value, tuple(sorted(self.key_nodes)))
        return (self.kind.value, self.key_nodes[0])

    def nodes(self) -> tuple[int, ...]:
        return self.key_nodes + self.attached_nodes

    def relabel(self, mapping) -> "MinorityStructure":
        return MinorityStructure(
            self.kind,
            tuple(mapping[v] for v in self.key_nodes),
            tuple(mapping[v] for v in self.attached_nodes),
            self.importance,
            self.flags,
        )

    def to_record(self, g: Graph) -> dict:
        lab = g.labels
        record = {
            "kind": self.kind.value,
            "key_nodes": [lab[v] for v in self.key_nodes],
            "attached_nodes": [lab[v] for v in self.attached_nodes],
            "importance": self.importance,
        }
        if self.flags:
            record["flags"] = list(self.flags)
        return record


def degree_thresholds(g: Graph) -> DegreeThresholds:
    n = g.node_count
    k = -(-n // 20)  # ceil(0.05 * n) in exact integer arithmetic
    ranked = sorted((len(a) for a in g.adjacency), reverse=True)
    return DegreeThresholds(mu=ranked[k - 1], epsilon=2.0 * g.edge_count / n)


def triangle_marks(g: Graph) -> list[bool]:
    """DFS over every component, marking each node that closes a triangle
    with its DFS parent and grandparent (all three get marked).

    A marked node always has two adjacent neighbors, so it cannot be a star.
    """
    n = g.node_count
    adj = g.adjacency
    nbr = g.neighbor_sets
    marked = [False] * n
    visited = [False] * n
    for root in range(n):
        if visited[root]:
            continue
        visited[root] = True
        parent = {root: -1}
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if visited[u]:
                    continue
                visited[u] = True
                p = v
                gp = parent[p]
                parent[u] = p
                if gp != -1 and gp in nbr[u]:
                    marked[u] = marked[p] = marked[gp] = True
                stack.append((u, iter(adj[u])))
                break
            else:
                stack.pop()
    return marked


def has_interconnected_neighbors(g: Graph, v: int) -> bool:
    nbr = g.neighbor_sets
    own = nbr[v]
    for x in g.adjacency[v]:
        if not own.isdisjoint(nbr[x]):
            return True
    return False


def detect_pivots_stars(
    g: Graph, thresholds: DegreeThresholds | None = None
) -> tuple[list[MinorityStructure], list[MinorityStructure]]:
    """Super pivots and huge stars, each list ordered by center id.

    Marked nodes are pivots outright.  Unmarked high-degree nodes are star
    candidates and get an exact neighborhood check; those with an edge among
    their neighbors are pivots after all.
    """
    th = thresholds or degree_thresholds(g)
    floor = min(th.mu, th.epsilon)
    marked = triangle_marks(g)
    pivots, stars = [], []
    for v, nbrs in enumerate(g.adjacency):
        d = len(nbrs)
        if d < floor:
            continue
        is_pivot = marked[v] or has_interconnected_neighbors(g, v)
        if is_pivot:
            if d >= th.mu:
                pivots.append(MinorityStructure(Kind.SUPER_PIVOT, (v,)))
        elif d >= th.epsilon:
            stars.append(MinorityStructure(Kind.HUGE_STAR, (v,)))
    return pivots, stars


def _leaf_neighbors(g: Graph, v: int) -> list[int]:
    adj = g.adjacency
    return [u for u in adj[v] if len(adj[u]) == 1]


def chain_pieces(g: Graph, component: list[int], links: dict[int, list[int]]) -> list[list[int]]:
    """Split one hyper node into chains.

    ``links[v]`` lists the cut points joined to ``v`` by a bridge.  A node
    continues a chain only if it has exactly two such links and no other
    neighbors in ``g``; every other node terminates chains, so branching
    clusters break into maximal paths that share their branch nodes.
    Bridges form a forest, so a hyper node never contains a cycle.
    """
    adj = g.adjacency
    through = {v for v in component if len(links[v]) == 2 and len(adj[v]) == 2}
    pieces = []
    used = set()
    for start in sorted(component):
        if start in through:
            continue
        for nxt in links[start]:
            edge = (min(start, nxt), max(start, nxt))
            if edge in used:
                continue
            used.add(edge)
            path = [start, nxt]
            prev, cur = start, nxt
            while cur in through:
                a, b = links[cur]
                step = b if a == prev else a
                used.add((min(cur, step), max(cur, step)))
                path.append(step)
                prev, cur = cur, step
            pieces.append(path)
    return pieces


def detect_rims_ties(
    g: Graph, cuts: frozenset[int] | None = None, bridge_edges=None
) -> tuple[list[MinorityStructure], list[MinorityStructure]]:
    """Rims (parachute and chain) and ties.

    Cut points joined by bridges are merged into hyper nodes.  A single-node
    hyper node is a parachute rim; a multi-node one is cut into chains, and a
    chain whose end has exactly one degree-1 neighbor is a chain rim (chain
    plus that leaf), otherwise a tie.
    """
    if cuts is None or bridge_edges is None:
        cuts, bridge_edges = cut_points_and_bridges(g)
    adj = g.adjacency
    links: dict[int, list[int]] = {v: [] for v in cuts}
    for u, v in sorted(bridge_edges):
        if u in links and v in links:
            links[u].append(v)
            links[v].append(u)
    rims, ties = [], []
    seen = set()
    for s in sorted(cuts):
        if s in seen:
            continue
        seen.add(s)
        component = [s]
        frontier = [s]
        while frontier:
            v = frontier.pop()
            for u in links[v]:
                if u not in seen:
                    seen.add(u)
                    component.append(u)
                    frontier.append(u)
        if len(component) == 1:
            rims.append(
                MinorityStructure(Kind.PARACHUTE_RIM, (s,), tuple(_leaf_neighbors(g, s)))
            )
            continue
        branching = any(len(links[v]) >= 3 for v in component)
        for path in chain_pieces(g, component, links):
            flags = ["branch_split"] if branching else []
            head, tail = path[0], path[-1]
            head_leaves = _leaf_neighbors(g, head)
            tail_leaves = _leaf_neighbors(g, tail)
            rim_ends = []
            if len(head_leaves) == 1:
                rim_ends.append((len(adj[head]), head, head_leaves[0]))
            if len(tail_leaves) == 1:
                rim_ends.append((len(adj[tail]), tail, tail_leaves[0]))
            if rim_ends:
                if len(rim_ends) == 2:
                    flags.append("both_ends_rim")
                _, end, leaf = min(rim_ends)
                chain = path if end == tail else path[::-1]
                rims.append(
                    MinorityStructure(Kind.CHAIN_RIM, tuple(chain), (leaf,), flags=tuple(flags))
                )
            else:
                chain = path if head < tail else path[::-1]
                ties.append(MinorityStructure(Kind.TIE, tuple(chain), flags=tuple(flags)))
    rims.sort(key=lambda s: min(s.key_nodes))
    ties.sort(key=lambda s: min(s.key_nodes))
    return rims, ties
