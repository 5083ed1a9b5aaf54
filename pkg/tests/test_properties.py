import random
from collections import deque

from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mcgs.baselines import BASELINES, baseline_sample
from mcgs.graph import (
    DisjointSet,
    Graph,
    connected_component_count,
    format_edge_list,
    induced_edges,
    induced_subgraph,
    parse_edge_list,
)
from mcgs.metrics import mip, msgr, mspr
from mcgs.pipeline import SamplerConfig, mcgs_sample, node_budget
from mcgs.ranking import identify, rank_and_select, selection_size

labels = st.text(alphabet="abcdefgh0123456789_", min_size=1, max_size=4)
edge_lists = st.lists(st.tuples(labels, labels), min_size=1, max_size=40)


@st.composite
def graphs(draw, max_nodes=25):
    n = draw(st.integers(1, max_nodes))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Graph.from_edges(n, [(u, v) for u, v in pairs if u != v])


@st.composite
def structured(draw):
    return oracles.random_structured_graph(random.Random(draw(st.integers(0, 10**6))), max_nodes=30)


@given(graphs())
def test_induced_on_all_nodes_is_identity(g):
    assert induced_subgraph(g, range(g.node_count)) == g


@given(graphs(), st.data())
def test_induced_subgraph_keeps_exactly_inner_edges(g, data):
    nodes = data.draw(st.sets(st.integers(0, g.node_count - 1), min_size=1))
    sub = induced_subgraph(g, nodes)
    expect = {frozenset((g.labels[u], g.labels[v])) for u, v in g.edges() if u in nodes and v in nodes}
    assert sub.labeled_edges() == expect
    assert [sub.parent_ids[i] for i in range(sub.node_count)] == sorted(nodes)


@given(edge_lists)
def test_parse_format_round_trip(pairs):
    text = "".join(f"{a} {b}\n" for a, b in pairs)
    if all(a == b for a, b in pairs):
        return
    g = parse_edge_list(text, require_connected=False)
    again = parse_edge_list(format_edge_list(g), require_connected=False)
    # isolated labels only come from self-loops, which are dropped
    assert again.labeled_edges() == g.labeled_edges()
    assert format_edge_list(again) == format_edge_list(g)


def _bfs_components(g, nodes):
    seen, count = set(), 0
    for s in nodes:
        if s in seen:
            continue
        count += 1
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if u in nodes and u not in seen:
                    seen.add(u)
                    queue.append(u)
    return count


@given(graphs(), st.data())
def test_disjoint_set_matches_bfs(g, data):
    nodes = data.draw(st.sets(st.integers(0, g.node_count - 1)))
    ds = DisjointSet(g.node_count)
    for v in nodes:
        ds.add(v)
    for u, v in g.edges():
        if u in nodes and v in nodes:
            ds.union(u, v)
    assert ds.count == _bfs_components(g, nodes)
    if nodes:
        assert connected_component_count(g, nodes) == ds.count


keys = st.lists(st.integers(0, 30), max_size=15)
rates = st.floats(0.01, 1.0)


@given(keys, keys, rates)
def test_mspr_bounds(orig, sampled, phi):
    value = mspr(orig, sampled, phi)
    if not orig:
        assert value is None
    else:
        assert 0 <= value <= 1 / phi + 1e-12
        assert abs(mspr(orig, orig, phi) * phi - 1) < 1e-12


@given(keys, keys)
def test_msgr_bounds(orig, sampled):
    value = msgr(orig, sampled)
    assert 0.0 <= value <= 1.0
    assert msgr(orig, [x for x in sampled if x in orig]) == 0.0


@given(st.lists(st.integers(0, 20), unique=True, max_size=10), st.integers(1, 8), st.randoms())
def test_mip_bounds_and_identity(ranked, k, rnd):
    other = ranked[:]
    rnd.shuffle(other)
    assert 0.0 <= mip(ranked, other, k) <= 1.0
    if len(ranked) >= k:
        assert mip(ranked, ranked, k) == 1.0
    assert mip(ranked, [], k) == 0.0


@given(st.integers(0, 200), rates, rates, st.floats(0.1, 4))
def test_selection_is_monotone_in_rate(count, a, b, alpha):
    lo, hi = sorted((a, b))
    assert 0 <= selection_size(count, lo, alpha) <= selection_size(count, hi, alpha) <= count
    if count:
        assert selection_size(count, 1.0, 1) == count


@settings(max_examples=30, deadline=None)
@given(structured(), rates)
def test_selected_sets_are_prefixes_of_ranking(g, phi):
    ranked = identify(g)
    chosen = rank_and_select(ranked, phi)
    for cat, items in ranked.items():
        assert chosen[cat] == items[: len(chosen[cat])]
        assert len(chosen[cat]) == selection_size(len(items), phi, 1)


@settings(max_examples=30, deadline=None)
@given(structured(), st.floats(0.1, 1.0), st.integers(0, 1000), st.sampled_from(("MCGS",) + BASELINES))
def test_samples_are_induced_and_within_budget(g, phi, seed, algo):
    cfg = SamplerConfig(phi=phi, rng_seed=seed)
    s = mcgs_sample(g, cfg) if algo == "MCGS" else baseline_sample(algo, g, cfg)
    assert len(set(s.nodes)) == len(s.nodes)
    assert s.edges == induced_edges(g, s.nodes)
    budget = node_budget(g.node_count, phi)
    if s.overshoot:
        assert len(s.nodes) > budget
    else:
        assert len(s.nodes) == budget
