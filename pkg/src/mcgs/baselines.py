"""Reference samplers: node-, edge- and traversal-based.

Every sampler fills exactly ``floor(n * phi)`` nodes and returns the
subgraph induced by them.  Traversal samplers record their visit order and
the positions where they had to restart away from the visited region.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import ConfigError
from .graph import Graph, induced_edges, pagerank
from .pipeline import Sample, SamplerConfig, make_rng, node_budget
from .seeds import pick_seed

BASELINES = ("RN", "RDN", "RPN", "RE", "RNE", "TIES", "BF", "DF", "SB", "FF", "RW", "RJ")
TRAVERSAL = ("BF", "DF", "SB", "FF", "RW", "RJ")

SNOWBALL_K = 5
FOREST_FIRE_P = 0.7
FLYBACK_P = 0.15
JUMP_P = 0.15
STALL_STEPS = 1000
PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-8

PARAMS = {
    "RPN": {"damping": PAGERANK_DAMPING, "tol": PAGERANK_TOL},
    "SB": {"k": SNOWBALL_K},
    "FF": {"forward_p": FOREST_FIRE_P},
    "RW": {"flyback_p": FLYBACK_P, "stall_steps": STALL_STEPS},
    "RJ": {"jump_p": JUMP_P},
}


class _Uniforms:
    """Batched uniform draws; per-call Generator overhead dominates walks otherwise."""

    def __init__(self, rng: np.random.Generator, batch: int = 4096):
        self.rng = rng
        self.batch = batch
        self.buf = rng.random(batch)
        self.pos = 0

    def __call__(self) -> float:
        if self.pos == self.batch:
            self.buf = self.rng.random(self.batch)
            self.pos = 0
        x = self.buf[self.pos]
        self.pos += 1
        return float(x)

    def index(self, size: int) -> int:
        return min(int(self() * size), size - 1)


def _weighted_nodes(g: Graph, budget: int, weights: np.ndarray, rng) -> list[int]:
    positive = int(np.count_nonzero(weights > 0))
    take = min(budget, positive)
    p = weights / weights.sum()
    picked = list(rng.choice(g.node_count, size=take, replace=False, p=p))
    if take < budget:
        rest = np.setdiff1d(np.arange(g.node_count), picked)
        picked.extend(rng.choice(rest, size=budget - take, replace=False))
    return [int(v) for v in picked]


def random_node(g, budget, rng, seed):
    return [int(v) for v in rng.choice(g.node_count, size=budget, replace=False)], {}


def random_degree_node(g, budget, rng, seed):
    return _weighted_nodes(g, budget, g.degrees.astype(np.float64), rng), {}


def random_pagerank_node(g, budget, rng, seed):
    pr = pagerank(g, PAGERANK_DAMPING, PAGERANK_TOL)
    return _weighted_nodes(g, budget, pr, rng), {}


def _add_edge_ends(order, chosen, budget, u, v):
    for x in (u, v):
        if len(chosen) < budget and x not in chosen:
            chosen.add(x)
            order.append(x)


def random_edge(g, budget, rng, seed):
    edges = g.edges()
    order: list[int] = []
    chosen: set[int] = set()
    for i in rng.permutation(len(edges)):
        if len(chosen) >= budget:
            break
        u, v = edges[i]
        _add_edge_ends(order, chosen, budget, u, v)
    return order, {}


def random_node_edge(g, budget, rng, seed):
    adj = g.adjacency
    draw = _Uniforms(rng)
    order: list[int] = []
    chosen: set[int] = set()
    n = g.node_count
    while len(chosen) < budget:
        v = draw.index(n)
        if not adj[v]:
            _add_edge_ends(order, chosen, budget, v, v)
            continue
        u = adj[v][draw.index(len(adj[v]))]
        _add_edge_ends(order, chosen, budget, v, u)
    return order, {}


def _fresh_start(chosen, n, draw):
    # only reached on disconnected inputs: jump to an unvisited node
    free = [v for v in range(n) if v not in chosen]
    return free[draw.index(len(free))]


def breadth_first(g, budget, rng, seed):
    adj = g.adjacency
    draw = _Uniforms(rng)
    order, restarts = [seed], []
    chosen = {seed}
    queue = deque([seed])
    while len(order) < budget:
        if not queue:
            s = _fresh_start(chosen, g.node_count, draw)
            restarts.append(len(order))
            chosen.add(s)
            order.append(s)
            queue.append(s)
            continue
        v = queue.popleft()
        for u in adj[v]:
            if u not in chosen and len(order) < budget:
                chosen.add(u)
                order.append(u)
                queue.append(u)
    return order, {"restarts": restarts}


def depth_first(g, budget, rng, seed):
    adj = g.adjacency
    draw = _Uniforms(rng)
    order, restarts = [seed], []
    chosen = {seed}
    stack = [iter(adj[seed])]
    while len(order) < budget:
        if not stack:
            s = _fresh_start(chosen, g.node_count, draw)
            restarts.append(len(order))
            chosen.add(s)
            order.append(s)
            stack.append(iter(adj[s]))
            continue
        for u in stack[-1]:
            if u not in chosen:
                chosen.add(u)
                order.append(u)
                stack.append(iter(adj[u]))
                break
        else:
            stack.pop()
    return order, {"restarts": restarts}


def _revive(adj, order, chosen, draw):
    """A visited node that still has unvisited neighbors, or None."""
    open_nodes = [v for v in order if any(u not in chosen for u in adj[v])]
    if not open_nodes:
        return None
    return open_nodes[draw.index(len(open_nodes))]


def _burning(g, budget, rng, seed, count_fn):
    """Shared loop of snowball and forest fire: ``count_fn`` says how many
    unvisited neighbors the current node recruits."""
    adj = g.adjacency
    draw = _Uniforms(rng)
    order, restarts, revivals = [seed], [], 0
    chosen = {seed}
    queue = deque([seed])
    while len(order) < budget:
        if not queue:
            v = _revive(adj, order, chosen, draw)
            if v is None:
                v = _fresh_start(chosen, g.node_count, draw)
                restarts.append(len(order))
                chosen.add(v)
                order.append(v)
            else:
                revivals += 1
            queue.append(v)
            continue
        v = queue.popleft()
        free = [u for u in adj[v] if u not in chosen]
        if not free:
            continue
        take = min(count_fn(), len(free), budget - len(order))
        if take <= 0:
            continue
        for i in rng.choice(len(free), size=take, replace=False):
            u = free[int(i)]
            chosen.add(u)
            order.append(u)
            queue.append(u)
    return order, {"restarts": restarts, "revivals": revivals}


def snowball(g, budget, rng, seed):
    return _burning(g, budget, rng, seed, lambda: SNOWBALL_K)


def forest_fire(g, budget, rng, seed):
    # burned-neighbor count is geometric with mean p / (1 - p)
    return _burning(g, budget, rng, seed, lambda: int(rng.geometric(1.0 - FOREST_FIRE_P)) - 1)


def _walk(g, budget, rng, seed, jump_p, flyback_p):
    adj = g.adjacency
    n = g.node_count
    draw = _Uniforms(rng)
    order, restarts, stall_moves = [seed], [], 0
    chosen = {seed}
    cur = seed
    idle = 0
    while len(order) < budget:
        jumped = False
        if idle >= STALL_STEPS:
            v = _revive(adj, order, chosen, draw)
            if v is None:
                v = _fresh_start(chosen, n, draw)
                jumped = True
            else:
                stall_moves += 1
            cur, idle = v, 0
        elif jump_p and draw() < jump_p:
            cur = draw.index(n)
            jumped = True
        elif flyback_p and draw() < flyback_p:
            cur = seed
        elif adj[cur]:
            cur = adj[cur][draw.index(len(adj[cur]))]
        else:
            cur = seed
        if cur in chosen:
            idle += 1
            continue
        if jumped:
            restarts.append(len(order))
        chosen.add(cur)
        order.append(cur)
        idle = 0
    return order, {"restarts": restarts, "stall_moves": stall_moves}


def random_walk(g, budget, rng, seed):
    return _walk(g, budget, rng, seed, 0.0, FLYBACK_P)


def random_jump(g, budget, rng, seed):
    return _walk(g, budget, rng, seed, JUMP_P, 0.0)


_SAMPLERS = {
    "RN": random_node,
    "RDN": random_degree_node,
    "RPN": random_pagerank_node,
    "RE": random_edge,
    "RNE": random_node_edge,
    "TIES": random_edge,
    "BF": breadth_first,
    "DF": depth_first,
    "SB": snowball,
    "FF": forest_fire,
    "RW": random_walk,
    "RJ": random_jump,
}


def baseline_sample(
    algo: str,
    g: Graph,
    cfg: SamplerConfig,
    rng: np.random.Generator | None = None,
    centrality=None,
) -> Sample:
    """Run one reference sampler and induce the result over ``g``.

    RE and TIES share the same edge draw; with the induction every sample
    gets, they differ only in name.
    """
    algo = algo.upper()
    if algo not in _SAMPLERS:
        raise ConfigError(f"unknown baseline {algo!r}; expected one of {', '.join(BASELINES)}")
    cfg.validate(g.node_count)
    if rng is None:
        rng = make_rng(cfg.rng_seed)
    budget = node_budget(g.node_count, cfg.phi)
    seed = None
    if algo in TRAVERSAL:
        seed = pick_seed(g, cfg.seed_strategy, rng, centrality)
    order, info = _SAMPLERS[algo](g, budget, rng, seed)
    nodes = tuple(sorted(order))
    config = {"phi": cfg.phi, "rng_seed": cfg.rng_seed, **PARAMS.get(algo, {})}
    extra = dict(info)
    if seed is not None:
        config["seed_strategy"] = cfg.seed_strategy
        extra["seed"] = seed
        extra["visit_order"] = order
    return Sample(
        nodes=nodes,
        edges=induced_edges(g, nodes),
        algorithm=algo,
        config=config,
        rng_seed=cfg.rng_seed,
        budget=budget,
        extra=extra,
    )
