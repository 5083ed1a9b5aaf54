"""Slow, definition-level reference implementations used only by tests.

Nothing here shares code with the package beyond the Graph container.
"""

from __future__ import annotations

import itertools
import random

from mcgs.graph import Graph


def components(adj, removed_nodes=(), removed_edge=None):
    gone = set(removed_nodes)
    seen = set(gone)
    count = 0
    for s in range(len(adj)):
        if s in seen:
            continue
        count += 1
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if removed_edge and {u, v} == set(removed_edge):
                    continue
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    return count


def cut_points(g: Graph) -> set[int]:
    base = components(g.adjacency)
    out = set()
    for v in range(g.node_count):
        # removing an isolated node lowers the count by one; anything above
        # base - 1 means the node held its component together
        if components(g.adjacency, [v]) > base - (0 if g.adjacency[v] else 1):
            out.add(v)
    return out


def bridges(g: Graph) -> set[tuple[int, int]]:
    base = components(g.adjacency)
    return {(u, v) for u, v in g.edges() if components(g.adjacency, removed_edge=(u, v)) > base}


def thresholds(g: Graph):
    degs = sorted((len(a) for a in g.adjacency), reverse=True)
    k = max(1, -(-5 * g.node_count // 100))
    return degs[k - 1], 2 * g.edge_count / g.node_count


def interconnected(g: Graph, v: int) -> bool:
    return any(g.has_edge(a, b) for a, b in itertools.combinations(g.adjacency[v], 2))


def pivots_stars(g: Graph) -> tuple[set[int], set[int]]:
    mu, eps = thresholds(g)
    pivots = {v for v in range(g.node_count) if len(g.adjacency[v]) >= mu and interconnected(g, v)}
    stars = {v for v in range(g.node_count) if len(g.adjacency[v]) >= eps and not interconnected(g, v)}
    return pivots, stars


def _leaves(g, v):
    return sorted(u for u in g.adjacency[v] if len(g.adjacency[u]) == 1)


def rims_ties(g: Graph):
    """Canonical records ``(kind, key_nodes, attached, flags)`` for rims and ties.

    Hyper nodes are grouped with a label-propagation pass over bridges between
    cut points; each hyper node's bridges are split into chains by gluing
    the two bridges at every pass-through node, then each glued class is
    walked from an end.
    """
    cuts = cut_points(g)
    links = {v: set() for v in cuts}
    for u, v in bridges(g):
        if u in cuts and v in cuts:
            links[u].add(v)
            links[v].add(u)
    label = {v: v for v in cuts}
    changed = True
    while changed:
        changed = False
        for v in cuts:
            for u in links[v]:
                if label[u] < label[v]:
                    label[v] = label[u]
                    changed = True
    groups = {}
    for v in cuts:
        groups.setdefault(label[v], []).append(v)

    out = set()
    for members in groups.values():
        if len(members) == 1:
            v = members[0]
            out.add(("parachute_rim", (v,), tuple(_leaves(g, v)), ()))
            continue
        through = {v for v in members if len(links[v]) == 2 and len(g.adjacency[v]) == 2}
        edges = sorted({(min(u, v), max(u, v)) for v in members for u in links[v]})
        cls = {e: e for e in edges}

        def find(e):
            while cls[e] != e:
                e = cls[e]
            return e

        for v in through:
            a, b = [(min(v, u), max(v, u)) for u in links[v]]
            cls[find(a)] = find(b)
        classes = {}
        for e in edges:
            classes.setdefault(find(e), []).append(e)
        branching = any(len(links[v]) >= 3 for v in members)
        for es in classes.values():
            count = {}
            for e in es:
                for x in e:
                    count[x] = count.get(x, 0) + 1
            ends = sorted(x for x, c in count.items() if c == 1)
            path = [ends[0]]
            left = set(es)
            while left:
                cur = path[-1]
                e = next(e for e in left if cur in e)
                left.remove(e)
                path.append(e[0] if e[1] == cur else e[1])
            flags = ["branch_split"] if branching else []
            rim_ends = [(len(g.adjacency[x]), x) for x in (path[0], path[-1]) if len(_leaves(g, x)) == 1]
            if rim_ends:
                if len(rim_ends) == 2:
                    flags.append("both_ends_rim")
                end = min(rim_ends)[1]
                chain = path if path[-1] == end else path[::-1]
                out.add(("chain_rim", tuple(chain), tuple(_leaves(g, end)), tuple(flags)))
            else:
                chain = path if path[0] < path[-1] else path[::-1]
                out.add(("tie", tuple(chain), (), tuple(flags)))
    return out


def record(s) -> tuple:
    return (s.kind.value, s.key_nodes, tuple(sorted(s.attached_nodes)), tuple(s.flags))


def random_structured_graph(rnd: random.Random, max_nodes: int = 40) -> Graph:
    """Connected graph made of cliques, cycles and single edges glued in a tree,
    with pendant leaves and pendant chains, so every structure kind shows up.
    """
    edges = set()
    n = 0

    def new():
        nonlocal n
        n += 1
        return n - 1

    blocks = []
    while n < max_nodes - 8 and len(blocks) < rnd.randint(2, 7):
        kind = rnd.random()
        attach = rnd.choice([v for b in blocks for v in b]) if blocks else None
        if kind < 0.35:
            size = rnd.randint(3, 6)
            nodes = [attach] + [new() for _ in range(size - 1)] if attach is not None else [new() for _ in range(size)]
            edges.update((min(a, b), max(a, b)) for a, b in itertools.combinations(nodes, 2))
            if rnd.random() < 0.5:  # thin the clique a little
                drop = rnd.sample(sorted(edges & {(min(a, b), max(a, b)) for a, b in itertools.combinations(nodes, 2)}), 1)
                if len(nodes) > 3:
                    edges.difference_update(drop)
        elif kind < 0.6:
            size = rnd.randint(3, 7)
            nodes = [attach] + [new() for _ in range(size - 1)] if attach is not None else [new() for _ in range(size)]
            edges.update((min(a, b), max(a, b)) for a, b in zip(nodes, nodes[1:] + nodes[:1]))
        else:
            length = rnd.randint(1, 4)
            start = attach if attach is not None else new()
            nodes = [start] + [new() for _ in range(length)]
            edges.update((min(a, b), max(a, b)) for a, b in zip(nodes, nodes[1:]))
        blocks.append(nodes)
    # pendant leaves and chains
    for _ in range(rnd.randint(0, 6)):
        if n >= max_nodes:
            break
        a = rnd.randrange(n)
        b = new()
        edges.add((a, b))
        if rnd.random() < 0.3 and n < max_nodes:
            c = new()
            edges.add((b, c))
    # a few random chords
    for _ in range(rnd.randint(0, 3)):
        a, b = rnd.randrange(n), rnd.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    # keep only nodes that appear in an edge (a lone start node can be isolated)
    used = sorted({x for e in edges for x in e})
    remap = {v: i for i, v in enumerate(used)}
    return Graph.from_edges(len(used), [(remap[a], remap[b]) for a, b in edges])
