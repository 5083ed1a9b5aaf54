"""Preservation indicators for minority structures and similarity measures
for the majority structure of a sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .graph import Graph, connected_component_count, induced_subgraph
from .ranking import RankedSets, as_fraction, identify
from .structures import CATEGORIES

SKEW = 0.99
DEFAULT_K = 5


def mspr(orig: Iterable[Hashable], sampled: Iterable[Hashable], phi) -> float | None:
    """Preserved share of the original structures divided by the sampling rate.

    Returns None when the original holds no structure of the kind.
    """
    orig = set(orig)
    if not orig:
        return None
    kept = len(orig & set(sampled))
    return float(kept / len(orig) / float(as_fraction(phi)))


def msgr(orig: Iterable[Hashable], sampled: Iterable[Hashable]) -> float:
    """Share of the sample's structures that do not exist in the original (0 if none)."""
    sampled = set(sampled)
    if not sampled:
        return 0.0
    return len(sampled - set(orig)) / len(sampled)


def mip(orig_ranked: Sequence[Hashable], sampled_ranked: Sequence[Hashable], k: int = DEFAULT_K) -> float:
    """Mean over i = 1..K of |top_i(orig) & top_i(sampled)| / i, divided by K."""
    if k < 1:
        raise ValueError("K must be at least 1")
    total = 0.0
    for i in range(1, k + 1):
        total += len(set(orig_ranked[:i]) & set(sampled_ranked[:i])) / i
    return total / k


def degree_distribution(degrees: Sequence[int], support: int) -> np.ndarray:
    counts = np.bincount(np.asarray(degrees, dtype=np.int64), minlength=support)
    return counts / counts.sum()


def ks_distance(deg_g: Sequence[int], deg_s: Sequence[int]) -> float:
    support = int(max(max(deg_g), max(deg_s))) + 1
    cdf_g = np.cumsum(degree_distribution(deg_g, support))
    cdf_s = np.cumsum(degree_distribution(deg_s, support))
    return float(np.max(np.abs(cdf_g - cdf_s)))


def skew_divergence(deg_g: Sequence[int], deg_s: Sequence[int], skew: float = SKEW) -> float:
    """KL(P_s || skew * P_g + (1 - skew) * P_s) over the union of supports."""
    support = int(max(max(deg_g), max(deg_s))) + 1
    p_g = degree_distribution(deg_g, support)
    p_s = degree_distribution(deg_s, support)
    mix = skew * p_g + (1.0 - skew) * p_s
    mask = p_s > 0
    return float(np.sum(p_s[mask] * np.log(p_s[mask] / mix[mask])))


def sample_degrees(g: Graph, nodes: Iterable[int]) -> list[int]:
    member = set(nodes)
    return [sum(1 for u in g.adjacency[v] if u in member) for v in sorted(member)]


def degree_metrics(g: Graph, nodes: Iterable[int]) -> tuple[float, float]:
    """``(KSD, SDD)`` between the degree distributions of ``g`` and the induced sample."""
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty sample")
    deg_g = [len(a) for a in g.adjacency]
    deg_s = sample_degrees(g, nodes)
    return ks_distance(deg_g, deg_s), skew_divergence(deg_g, deg_s)


def jaccard_similarity(g: Graph, nodes: Iterable[int]) -> float:
    """Mean per-node Jaccard index between the neighborhood in ``g`` and in the sample."""
    member = set(nodes)
    total = 0.0
    for v in member:
        full = g.adjacency[v]
        if not full:
            total += 1.0
            continue
        kept = sum(1 for u in full if u in member)
        # sample neighborhood is a subset, so |cap| = kept and |cup| = deg
        total += kept / len(full)
    return total / len(member)


def connectivity_similarity(g: Graph, nodes: Iterable[int]) -> tuple[float, float]:
    """``(RCC, JI)`` of the induced sample."""
    nodes = set(nodes)
    if not nodes:
        raise ValueError("empty sample")
    return 1.0 / connected_component_count(g, nodes), jaccard_similarity(g, nodes)


@dataclass
class EvaluationReport:
    graph: str
    algorithm: str
    phi: float
    seed: int | None
    mspr: dict[str, float | None]
    msgr: dict[str, float]
    mip: dict[str, float | None]
    ksd: float
    sdd: float
    rcc: float
    ji: float
    k: int = DEFAULT_K
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "algorithm": self.algorithm,
            "phi": self.phi,
            "seed": self.seed,
            "k": self.k,
            "mspr": dict(self.mspr),
            "msgr": dict(self.msgr),
            "mip": dict(self.mip),
            "ksd": self.ksd,
            "sdd": self.sdd,
            "rcc": self.rcc,
            "ji": self.ji,
            "metadata": dict(self.metadata),
        }

    def indicators(self):
        """Flat ``(indicator, kind, value)`` rows; kind is "" for majority metrics."""
        for name, table in (("MSPR", self.mspr), ("MSGR", self.msgr), ("MIP", self.mip)):
            for cat in CATEGORIES:
                yield name, cat, table.get(cat)
        for name in ("KSD", "SDD", "RCC", "JI"):
            yield name, "", getattr(self, name.lower())


def sample_structures(g: Graph, nodes: Iterable[int]) -> RankedSets:
    """Structures detected on the induced sample, relabelled to ``g`` ids."""
    sub = induced_subgraph(g, nodes)
    found = identify(sub)
    back = sub.parent_ids
    out = RankedSets()
    for cat, items in found.items():
        setattr(out, cat, [s.relabel(back) for s in items])
    return out


def evaluate(
    g: Graph,
    nodes: Iterable[int],
    phi,
    *,
    original: RankedSets | None = None,
    k: int = DEFAULT_K,
    graph_name: str = "",
    algorithm: str = "",
    seed: int | None = None,
) -> EvaluationReport:
    """All indicators for one (graph, sample) pair.

    ``original`` lets callers reuse the structures of ``g`` across trials.
    """
    nodes = sorted(set(nodes))
    if original is None:
        original = identify(g)
    found = sample_structures(g, nodes)
    mspr_t, msgr_t, mip_t = {}, {}, {}
    empty_sample_kinds = []
    for cat in CATEGORIES:
        orig_keys = [s.match_key for s in original[cat]]
        samp_keys = [s.match_key for s in found[cat]]
        mspr_t[cat] = mspr(orig_keys, samp_keys, phi)
        msgr_t[cat] = msgr(orig_keys, samp_keys)
        if not samp_keys:
            empty_sample_kinds.append(cat)
        mip_t[cat] = mip(orig_keys, samp_keys, k) if orig_keys else None
    ksd, sdd = degree_metrics(g, nodes)
    rcc, ji = connectivity_similarity(g, nodes)
    for value in (ksd, sdd, rcc, ji):
        if not math.isfinite(value):
            raise ArithmeticError("non-finite metric")
    return EvaluationReport(
        graph=graph_name,
        algorithm=algorithm,
        phi=float(phi),
        seed=seed,
        mspr=mspr_t,
        msgr=msgr_t,
        mip=mip_t,
        ksd=ksd,
        sdd=sdd,
        rcc=rcc,
        ji=ji,
        k=k,
        metadata={
            "sample_nodes": len(nodes),
            "original_counts": {c: len(original[c]) for c in CATEGORIES},
            "sample_counts": {c: len(found[c]) for c in CATEGORIES},
            "msgr_empty_sample": empty_sample_kinds,
        },
    )
