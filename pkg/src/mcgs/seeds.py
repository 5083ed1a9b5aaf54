"""Initial-seed choice for traversal samplers."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .graph import Graph, betweenness, bfs_distances


def _farthest(dist: list[int]) -> int:
    best = max(dist)
    return dist.index(best)


def peripheral_node(g: Graph, start: int = 0) -> int:
    """Far end of a double BFS sweep; approximates a maximum-eccentricity node."""
    a = _farthest(bfs_distances(g, start))
    return _farthest(bfs_distances(g, a))


def pick_seed(g: Graph, strategy: str, rng: np.random.Generator, centrality=None) -> int:
    """Choose a start node.

    ``centrality`` may hold precomputed betweenness scores so repeated
    trials on one graph do not pay for Brandes again.
    """
    if strategy == "random":
        return int(rng.integers(g.node_count))
    if strategy == "high_degree":
        return int(np.argmax(g.degrees))
    if strategy == "high_betweenness":
        scores = betweenness(g) if centrality is None else centrality
        return int(np.argmax(np.asarray(scores)))
    if strategy == "peripheral":
        return peripheral_node(g)
    raise ConfigError(f"unknown seed strategy {strategy!r}")
