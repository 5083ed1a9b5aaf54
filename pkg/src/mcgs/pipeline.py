"""The MCGS sampler: keep important minority structures and part of their
neighborhoods, then grow the sample greedily toward the original degree,
connectivity and neighborhood profile, and finish with graph induction.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .graph import DisjointSet, Graph, induced_edges, induced_subgraph
from .ranking import RankedSets, as_fraction, identify, rank_and_select
from .structures import MinorityStructure

SEED_STRATEGIES = ("random", "high_degree", "high_betweenness", "peripheral")


@dataclass
class SamplerConfig:
    phi: float
    alpha: float = 1.0
    beta: float = 2.0
    weights: tuple[float, float, float] = (1.0, 0.0, 0.0)
    rng_seed: int = 0
    seed_strategy: str = "random"
    greedy_pool: int | None = None

    def __post_init__(self):
        self.weights = tuple(float(w) for w in self.weights)

    def validate(self, n: int | None = None) -> "SamplerConfig":
        if not 0 < self.phi <= 1:
            raise ConfigError(f"phi must lie in (0, 1], got {self.phi}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if len(self.weights) != 3 or any(not 0 <= w <= 1 for w in self.weights):
            raise ConfigError(f"weights must be three values in [0, 1], got {self.weights}")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ConfigError(f"weights must sum to 1, got {sum(self.weights)}")
        if self.seed_strategy not in SEED_STRATEGIES:
            raise ConfigError(f"unknown seed strategy {self.seed_strategy!r}")
        if self.greedy_pool is not None and self.greedy_pool < 1:
            raise ConfigError("greedy_pool must be at least 1")
        if n is not None and node_budget(n, self.phi) < 1:
            raise ConfigError(f"phi={self.phi} leaves no nodes to sample from {n}")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["weights"] = list(self.weights)
        return d


@dataclass
class Sample:
    nodes: tuple[int, ...]
    edges: list[tuple[int, int]]
    algorithm: str
    config: dict
    rng_seed: int
    budget: int
    overshoot: bool = False
    selected: list[MinorityStructure] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes)

    def graph(self, g: Graph) -> Graph:
        """The sample as a standalone graph (``parent_ids`` point into ``g``)."""
        return induced_subgraph(g, self.nodes)

    def sidecar(self, g: Graph) -> dict:
        cfg = self.config
        return {
            "algorithm": self.algorithm,
            "phi": cfg.get("phi"),
            "alpha": cfg.get("alpha"),
            "beta": cfg.get("beta"),
            "weights": cfg.get("weights"),
            "rng_seed": self.rng_seed,
            "overshoot": self.overshoot,
            "budget": self.budget,
            "params": {k: v for k, v in cfg.items() if k not in ("phi", "alpha", "beta", "weights", "rng_seed")},
            "node_labels": [g.labels[v] for v in self.nodes],
        }


def node_budget(n: int, phi) -> int:
    return math.floor(n * as_fraction(phi))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def neighbor_quota(pool_size: int, phi, beta) -> int:
    if pool_size == 0:
        return 0
    return max(1, math.ceil(pool_size * as_fraction(phi) / as_fraction(beta)))


def sample_minority(g: Graph, selected: RankedSets, cfg: SamplerConfig, rng: np.random.Generator) -> set[int]:
    """Nodes of every selected structure plus a random share of their neighbors.

    For each structure, ``ceil(|N| * phi / beta)`` (at least one) nodes are
    drawn uniformly from its outside neighbors ``N`` that are not in the set
    yet.  Structures are visited category by category in rank order.
    """
    adj = g.adjacency
    structures = selected.all()
    chosen: set[int] = set()
    for s in structures:
        chosen.update(s.nodes())
    for s in structures:
        own = set(s.nodes())
        pool = sorted({u for k in s.key_nodes for u in adj[k]} - own)
        quota = neighbor_quota(len(pool), cfg.phi, cfg.beta)
        free = [u for u in pool if u not in chosen]
        if quota == 0 or not free:
            continue
        picks = rng.choice(len(free), size=min(quota, len(free)), replace=False)
        chosen.update(free[i] for i in picks)
    return chosen


def objectives(g: Graph, nodes: Iterable[int]) -> tuple[float, int, float]:
    """``(MSE, NCC, JI)`` of the sample induced by ``nodes``, from scratch."""
    member = set(nodes)
    if not member:
        return 0.0, 0, 0.0
    adj = g.adjacency
    sq = 0
    jsum = 0.0
    ds = DisjointSet(g.node_count)
    for v in member:
        ds.add(v)
    for v in member:
        d = len(adj[v])
        s = 0
        for u in adj[v]:
            if u in member:
                s += 1
                if u > v:
                    ds.union(u, v)
        sq += (d - s) ** 2
        jsum += s / d if d else 1.0
    size = len(member)
    return sq / size, ds.count, jsum / size


def min_max(x: np.ndarray) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros_like(x, dtype=np.float64)
    return (x - lo) / (hi - lo)


class GreedyState:
    """Incremental bookkeeping of a growing sample.

    For every node ``c`` it tracks ``k[c]`` (sampled neighbors),
    ``dev_gain[c]`` (change of the squared-deviation sum contributed by
    sampled neighbors if ``c`` joined) and ``ji_gain[c]`` (sum of ``1/deg``
    over sampled neighbors).  Adding a node touches only its neighbors and
    the neighbors of its sampled neighbors.
    """

    def __init__(self, g: Graph, nodes: Iterable[int] = ()):
        self.g = g
        n = g.node_count
        self.deg = g.degrees
        self.indptr, self.indices = g.csr
        with np.errstate(divide="ignore"):
            self.inv_deg = np.where(self.deg > 0, 1.0 / np.maximum(self.deg, 1), 0.0)
        self.in_sample = np.zeros(n, dtype=bool)
        self.k = np.zeros(n, dtype=np.int64)
        self.dev_gain = np.zeros(n, dtype=np.int64)
        self.ji_gain = np.zeros(n, dtype=np.float64)
        self.sq_sum = 0
        self.ji_sum = 0.0
        self.size = 0
        self.dsu = DisjointSet(n)
        for v in sorted(set(nodes)):
            self.add(v)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def add(self, x: int) -> None:
        if self.in_sample[x]:
            raise ValueError(f"node {x} already sampled")
        nbrs = self.neighbors(x)
        kx = int(self.k[x])
        dev_x = int(self.deg[x]) - kx
        self.sq_sum += dev_x * dev_x + int(self.dev_gain[x])
        self.ji_sum += (kx * self.inv_deg[x] if self.deg[x] else 1.0) + self.ji_gain[x]
        self.size += 1

        sampled_nbrs = nbrs[self.in_sample[nbrs]]
        if len(sampled_nbrs):
            # every sampled neighbor loses one unit of deficit
            touched = np.concatenate([self.neighbors(u) for u in sampled_nbrs])
            np.add.at(self.dev_gain, touched, 2)
        self.k[nbrs] += 1
        self.dev_gain[nbrs] += 1 - 2 * dev_x
        self.ji_gain[nbrs] += self.inv_deg[x]
        self.in_sample[x] = True

        self.dsu.add(x)
        for u in sampled_nbrs:
            self.dsu.union(x, int(u))

    def current(self) -> tuple[float, int, float]:
        if self.size == 0:
            return 0.0, 0, 0.0
        return self.sq_sum / self.size, self.dsu.count, self.ji_sum / self.size

    def remaining(self) -> np.ndarray:
        return np.flatnonzero(~self.in_sample)

    def mse_numerators(self, cand: np.ndarray) -> np.ndarray:
        d = self.deg[cand] - self.k[cand]
        return self.sq_sum + d * d + self.dev_gain[cand]

    def candidate_mse(self, cand: np.ndarray) -> np.ndarray:
        return self.mse_numerators(cand) / (self.size + 1)

    def candidate_ji(self, cand: np.ndarray) -> np.ndarray:
        own = np.where(self.deg[cand] > 0, self.k[cand] * self.inv_deg[cand], 1.0)
        return (self.ji_sum + own + self.ji_gain[cand]) / (self.size + 1)

    def candidate_ncc(self, cand: np.ndarray) -> np.ndarray:
        find = self.dsu.find
        base = self.dsu.count + 1
        out = np.empty(len(cand), dtype=np.int64)
        for i, c in enumerate(cand):
            nbrs = self.neighbors(int(c))
            roots = {find(int(u)) for u in nbrs[self.in_sample[nbrs]]}
            out[i] = base - len(roots)
        return out

    def candidate_objectives(self, cand: np.ndarray, need=(True, True, True)):
        mse = self.candidate_mse(cand) if need[0] else None
        ncc = self.candidate_ncc(cand) if need[1] else None
        ji = self.candidate_ji(cand) if need[2] else None
        return mse, ncc, ji

    def losses(self, cand: np.ndarray, weights: Sequence[float]) -> np.ndarray:
        """Weighted loss over ``cand`` with each objective min-max scaled across it."""
        w1, w2, w3 = weights
        mse, ncc, ji = self.candidate_objectives(cand, (w1 > 0, w2 > 0, w3 > 0))
        loss = np.zeros(len(cand), dtype=np.float64)
        if w1 > 0:
            loss += w1 * min_max(mse)
        if w2 > 0:
            loss += w2 * min_max(ncc.astype(np.float64))
        if w3 > 0:
            loss -= w3 * min_max(ji)
        return loss

    def best(self, cand: np.ndarray, weights: Sequence[float]) -> int:
        """Loss-minimizing candidate; ``cand`` ascending so the lowest id wins ties.

        With a single active objective the raw values are compared (min-max
        scaling is monotone), using exact integers where possible.
        """
        active = [i for i, w in enumerate(weights) if w > 0]
        if active == [0]:
            score = self.mse_numerators(cand)
        elif active == [1]:
            score = self.candidate_ncc(cand)
        elif active == [2]:
            score = -self.candidate_ji(cand)
        else:
            score = self.losses(cand, weights)
        return int(cand[int(np.argmin(score))])


def loss(g: Graph, current: Iterable[int], candidate: int, weights, candidates: Iterable[int] | None = None) -> float:
    """Loss of adding ``candidate`` to ``current``.

    Scaling runs over ``candidates`` (default: every node not in
    ``current``), which must include ``candidate``.
    """
    state = GreedyState(g, current)
    if state.in_sample[candidate]:
        raise ValueError("candidate already in the sample")
    cand = state.remaining() if candidates is None else np.array(sorted(set(candidates)), dtype=np.int64)
    pos = int(np.searchsorted(cand, candidate))
    if pos == len(cand) or cand[pos] != candidate:
        raise ValueError("candidate missing from the candidate set")
    return float(state.losses(cand, weights)[pos])


def greedy_majority(
    g: Graph,
    partial: Iterable[int],
    cfg: SamplerConfig,
    rng: np.random.Generator | None = None,
    budget: int | None = None,
    on_step=None,
) -> set[int]:
    """Grow ``partial`` one loss-minimizing node at a time up to the budget.

    With ``cfg.greedy_pool`` set, each step scores only that many nodes
    drawn at random from the remainder.  ``on_step``, when given, is
    called with the :class:`GreedyState` after every addition.
    """
    if budget is None:
        budget = node_budget(g.node_count, cfg.phi)
    state = GreedyState(g, partial)
    pool = cfg.greedy_pool
    if pool is not None and rng is None:
        rng = make_rng(cfg.rng_seed)
    while state.size < budget:
        remaining = state.remaining()
        if pool is not None and pool < len(remaining):
            cand = np.sort(rng.choice(remaining, size=pool, replace=False))
        else:
            cand = remaining
        state.add(state.best(cand, cfg.weights))
        if on_step is not None:
            on_step(state)
    return set(int(v) for v in np.flatnonzero(state.in_sample))


def read_partition(path, g: Graph) -> list[list[int]]:
    """Parse ``label part`` lines into node-id lists, one per part (in first-seen order)."""
    parts: dict[str, list[int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 'label part'")
            label, part = tokens
            if label not in g.id_map:
                raise ConfigError(f"{path}:{lineno}: unknown node {label!r}")
            parts.setdefault(part, []).append(g.id_map[label])
    return validate_partition(g, parts.values())


def validate_partition(g: Graph, parts) -> list[list[int]]:
    parts = [sorted(set(p)) for p in parts if p]
    seen = [v for p in parts for v in p]
    if len(seen) != len(set(seen)):
        raise ConfigError("partition assigns a node to more than one part")
    if len(seen) != g.node_count:
        raise ConfigError(f"partition covers {len(seen)} of {g.node_count} nodes")
    return parts


def _sample_part(g: Graph, cfg: SamplerConfig, rng, budget: int):
    ranked = identify(g)
    selected = rank_and_select(ranked, cfg.phi, cfg.alpha)
    nodes = sample_minority(g, selected, cfg, rng)
    overshoot = len(nodes) > budget
    if not overshoot:
        nodes = greedy_majority(g, nodes, cfg, rng, budget=budget)
    return nodes, selected.all(), overshoot


def mcgs_sample(g: Graph, cfg: SamplerConfig, partition: Sequence[Sequence[int]] | None = None) -> Sample:
    """Run identification, ranking, minority sampling, greedy majority
    sampling and induction.

    With a ``partition`` each part is sampled separately at its own budget
    and the union is induced once over ``g``.
    """
    cfg.validate(g.node_count)
    rng = make_rng(cfg.rng_seed)
    if partition is None:
        budget = node_budget(g.node_count, cfg.phi)
        nodes, selected, overshoot = _sample_part(g, cfg, rng, budget)
    else:
        parts = validate_partition(g, partition)
        nodes, selected, overshoot, budget = set(), [], False, 0
        for part in parts:
            sub = induced_subgraph(g, part)
            part_budget = node_budget(len(part), cfg.phi)
            budget += part_budget
            if part_budget == 0:
                continue
            local, local_sel, over = _sample_part(sub, cfg, rng, part_budget)
            back = sub.parent_ids
            nodes.update(back[v] for v in local)
            selected.extend(s.relabel(back) for s in local_sel)
            overshoot = overshoot or over
    ordered = tuple(sorted(int(v) for v in nodes))
    config = cfg.to_dict()
    if partition is not None:
        config["partitioned"] = True
    return Sample(
        nodes=ordered,
        edges=induced_edges(g, ordered),
        algorithm="MCGS",
        config=config,
        rng_seed=cfg.rng_seed,
        budget=budget,
        overshoot=overshoot,
        selected=selected,
    )
