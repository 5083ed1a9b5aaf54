"""Importance scores for detected structures and top-fraction selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import ConfigError
from .graph import Graph, cut_points_and_bridges
from .structures import (
    CATEGORIES,
    Kind,
    MinorityStructure,
    degree_thresholds,
    detect_pivots_stars,
    detect_rims_ties,
)


def as_fraction(x) -> Fraction:
    """Exact rational for a user-facing rate such as 0.3 (not 0.299999...)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


def tie_scale(g: Graph) -> int:
    # strictly larger than any possible count of end-node neighbors
    return 2 * g.node_count


def importance(s: MinorityStructure, g: Graph) -> int:
    """Integer importance; larger is more important.

    Centers score their degree, parachute rims their leaf count, chain rims
    their length.  Ties combine length and the number of outside neighbors
    at the two ends lexicographically, length first.
    """
    adj = g.adjacency
    if s.kind in (Kind.SUPER_PIVOT, Kind.HUGE_STAR):
        return len(adj[s.key_nodes[0]])
    if s.kind is Kind.PARACHUTE_RIM:
        return sum(1 for u in adj[s.key_nodes[0]] if len(adj[u]) == 1)
    if s.kind is Kind.CHAIN_RIM:
        return len(s.key_nodes)
    return len(s.key_nodes) * tie_scale(g) + tie_end_neighbors(s, g)


def tie_end_neighbors(s: MinorityStructure, g: Graph) -> int:
    chain = set(s.key_nodes)
    ends = {s.key_nodes[0], s.key_nodes[-1]}
    return sum(1 for e in ends for u in g.adjacency[e] if u not in chain)


def tie_importance_parts(s: MinorityStructure, g: Graph) -> tuple[int, int]:
    """``(length, end_neighbors)`` behind a tie's composite score."""
    return len(s.key_nodes), tie_end_neighbors(s, g)


@dataclass
class RankedSets:
    """One list per category, most important first."""

    P: list[MinorityStructure] = field(default_factory=list)
    S: list[MinorityStructure] = field(default_factory=list)
    R: list[MinorityStructure] = field(default_factory=list)
    T: list[MinorityStructure] = field(default_factory=list)

    def __getitem__(self, category: str) -> list[MinorityStructure]:
        return getattr(self, category)

    def items(self):
        return [(c, self[c]) for c in CATEGORIES]

    def all(self) -> list[MinorityStructure]:
        return [s for c in CATEGORIES for s in self[c]]


def rank_key(s: MinorityStructure):
    return (-s.importance, min(s.key_nodes), s.key_nodes)


def rank(structures) -> list[MinorityStructure]:
    return sorted(structures, key=rank_key)


def identify(g: Graph) -> RankedSets:
    """Detect every structure in ``g``, score it, and rank within each category."""
    pivots, stars = detect_pivots_stars(g, degree_thresholds(g))
    rims, ties = detect_rims_ties(g, *cut_points_and_bridges(g))
    scored = {
        "P": pivots,
        "S": stars,
        "R": rims,
        "T": ties,
    }
    out = RankedSets()
    for cat, items in scored.items():
        setattr(out, cat, rank(replace(s, importance=importance(s, g)) for s in items))
    return out


def selection_size(count: int, phi, alpha) -> int:
    if count == 0:
        return 0
    return min(count, math.ceil(count * as_fraction(phi) / as_fraction(alpha)))


def rank_and_select(sets, phi, alpha=1) -> RankedSets:
    """Keep the top ``ceil(len * phi / alpha)`` structures of every category.

    ``sets`` is a :class:`RankedSets` or a mapping from category to a list;
    lists are re-ranked, so input order does not matter.
    """
    if not float(alpha) > 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if not 0 < float(phi) <= 1:
        raise ConfigError(f"phi must lie in (0, 1], got {phi}")
    out = RankedSets()
    for cat in CATEGORIES:
        items = sets[cat] if not isinstance(sets, dict) else sets.get(cat, [])
        ranked = rank(items)
        setattr(out, cat, ranked[: selection_size(len(ranked), phi, alpha)])
    return out
