"""Simple undirected graphs with dense integer ids, plus the primitives the
samplers and detectors share (parsing, induction, components, cut points,
centralities).
"""

from __future__ import annotations

import io
import os
from bisect import bisect_left
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DisconnectedGraphError, EmptyGraphError, GraphParseError

COMMENT_PREFIXES = ("#", "%")


class Graph:
    """Immutable simple undirected graph.

    Nodes are ``0..node_count-1``; ``labels[v]`` is the original token of
    node ``v`` and ``id_map`` the inverse mapping.  Graphs produced by
    :func:`induced_subgraph` also carry ``parent_ids``, the id of each node in
    the graph they were cut from.
    """

    def __init__(
        self,
        adjacency: Sequence[Iterable[int]],
        labels: Sequence[str] | None = None,
        parent_ids: Sequence[int] | None = None,
    ):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in adjacency)
        n = len(adj)
        total = 0
        for v, nbrs in enumerate(adj):
            for u in nbrs:
                if u == v:
                    raise ValueError(f"self-loop on node {v}")
                if not 0 <= u < n:
                    raise ValueError(f"neighbor {u} of node {v} out of range")
            total += len(nbrs)
        for v, nbrs in enumerate(adj):
            for u in nbrs:
                other = adj[u]
                i = bisect_left(other, v)
                if i == len(other) or other[i] != v:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
        if labels is None:
            labels = [str(v) for v in range(n)]
        if len(labels) != n:
            raise ValueError("labels length does not match node count")
        self._adj = adj
        self._labels = tuple(str(x) for x in labels)
        self._edge_count = total // 2
        self._parent_ids = tuple(parent_ids) if parent_ids is not None else None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj, labels)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def parent_ids(self) -> tuple[int, ...] | None:
        return self._parent_ids

    @cached_property
    def id_map(self) -> dict[str, int]:
        return {label: v for v, label in enumerate(self._labels)}

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self._adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` arrays of the adjacency in CSR layout."""
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        indices = np.fromiter(
            (u for nbrs in self._adj for u in nbrs), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def adjacency_matrix(self) -> sparse.csr_matrix:
        indptr, indices = self.csr
        data = np.ones(len(indices), dtype=np.float64)
        n = self.node_count
        return sparse.csr_matrix((data, indices, indptr), shape=(n, n))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in ascending order."""
        return [(u, v) for u, nbrs in enumerate(self._adj) for v in nbrs if u < v]

    def labeled_edges(self) -> set[frozenset[str]]:
        lab = self._labels
        return {frozenset((lab[u], lab[v])) for u, v in self.edges()}

    def __eq__(self, other):
        # label-level identity: internal ids are an artifact of input order
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            set(self._labels) == set(other._labels)
            and self.edge_count == other.edge_count
            and self.labeled_edges() == other.labeled_edges()
        )

    def __hash__(self):
        return hash((frozenset(self._labels), self.edge_count))

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


class DisjointSet:
    """Union-find over ids ``0..size-1`` with union by rank and path halving.

    Elements start outside the structure; :meth:`add` makes one live as a
    singleton.  ``count`` is the number of live components.
    """

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.live = [False] * size
        self.count = 0

    def add(self, x: int) -> None:
        if not self.live[x]:
            self.live[x] = True
            self.count += 1

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of two live elements; return True if they were apart."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        self.count -= 1
        return True


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return io.StringIO(source)
    return (line.decode("utf-8") if isinstance(line, bytes) else line for line in source)


def parse_edge_list(source, largest_component: bool = False, require_connected: bool = True) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    ``source`` may be text, bytes, or an iterable of lines (an open file).
    Labels get dense ids in order of first appearance; self-loops and
    repeated edges are dropped.  A disconnected result raises
    :class:`DisconnectedGraphError` unless ``largest_component`` (keep the
    biggest component) or ``require_connected=False`` is given.
    """
    id_map: dict[str, int] = {}
    labels: list[str] = []
    adj: list[set[int]] = []

    def node_id(label):
        v = id_map.get(label)
        if v is None:
            v = id_map[label] = len(labels)
            labels.append(label)
            adj.append(set())
        return v

    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"expected 2 node labels, got {len(tokens)}", lineno)
        a, b = tokens
        if a == b:
            continue
        u, v = node_id(a), node_id(b)
        adj[u].add(v)
        adj[v].add(u)

    if not labels:
        raise EmptyGraphError("edge list contains no edges")
    g = Graph(adj, labels)
    if largest_component or require_connected:
        comps = connected_components(g)
        if len(comps) > 1:
            if not largest_component:
                raise DisconnectedGraphError(
                    f"graph has {len(comps)} connected components; use largest_component"
                )
            biggest = max(comps, key=lambda c: (len(c), -min(c)))
            sub = induced_subgraph(g, biggest)
            g = Graph(sub.adjacency, sub.labels)
    return g


def read_edge_list(path: str | os.PathLike, **kwargs) -> Graph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh, **kwargs)


def format_edge_list(g: Graph, edges: Iterable[tuple[int, int]] | None = None) -> str:
    """Render edges with original labels, one ``u v`` pair per line.

    Lines are sorted by label so the text is independent of internal ids.
    """
    lab = g.labels
    if edges is None:
        edges = g.edges()
    rows = sorted(tuple(sorted((lab[u], lab[v]))) for u, v in edges)
    return "".join(f"{a} {b}\n" for a, b in rows)


def write_edge_list(g: Graph, path, edges=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g, edges))


def degree(g: Graph, v: int) -> int:
    return len(g.adjacency[v])


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Graph:
    """Subgraph on ``nodes`` keeping every original edge between them.

    Nodes are renumbered in ascending original-id order; ``parent_ids`` maps
    back to ``g``.
    """
    keep = sorted(set(nodes))
    if not keep:
        raise EmptyGraphError("induced subgraph of an empty node set")
    if keep[0] < 0 or keep[-1] >= g.node_count:
        raise ValueError("node id out of range")
    local = {v: i for i, v in enumerate(keep)}
    adj = [[local[u] for u in g.adjacency[v] if u in local] for v in keep]
    return Graph(adj, [g.labels[v] for v in keep], parent_ids=keep)


def induced_edges(g: Graph, nodes: Iterable[int]) -> list[tuple[int, int]]:
    """All edges of ``g`` with both ends in ``nodes``, as sorted ``(u, v)``, u < v."""
    member = set(nodes)
    return [(u, v) for u in sorted(member) for v in g.adjacency[u] if u < v and v in member]


def connected_components(g: Graph, nodes: Iterable[int] | None = None) -> list[list[int]]:
    """Components (BFS) of ``g`` or of its subgraph induced by ``nodes``."""
    if nodes is None:
        member = None
        order = range(g.node_count)
    else:
        member = set(nodes)
        order = sorted(member)
    seen = set()
    comps = []
    for s in order:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if u not in seen and (member is None or u in member):
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comps.append(comp)
    return comps


def connected_component_count(g: Graph, nodes: Iterable[int] | None = None) -> int:
    """Number of components of the subgraph induced by ``nodes`` (all of ``g`` if None)."""
    if nodes is None:
        nodes = range(g.node_count)
    member = set(nodes)
    ds = DisjointSet(g.node_count)
    for v in member:
        ds.add(v)
    for v in member:
        for u in g.adjacency[v]:
            if u > v and u in member:
                ds.union(u, v)
    return ds.count


def is_connected(g: Graph) -> bool:
    return connected_component_count(g) == 1


def _low_link(g: Graph) -> tuple[set[int], set[tuple[int, int]]]:
    """One iterative Tarjan DFS returning (articulation points, bridges)."""
    n = g.node_count
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    points: set[int] = set()
    bridge_set: set[tuple[int, int]] = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        # frames: [node, parent, next-neighbor index]
        stack = [[root, -1, 0]]
        while stack:
            frame = stack[-1]
            v, parent, i = frame
            nbrs = adj[v]
            if i < len(nbrs):
                frame[2] = i + 1
                u = nbrs[i]
                if disc[u] == -1:
                    disc[u] = low[u] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append([u, v, 0])
                elif u != parent:
                    if disc[u] < low[v]:
                        low[v] = disc[u]
            else:
                stack.pop()
                if parent != -1:
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                    if parent != root and low[v] >= disc[parent]:
                        points.add(parent)
                    if low[v] > disc[parent]:
                        bridge_set.add((min(v, parent), max(v, parent)))
        if root_children > 1:
            points.add(root)
    return points, bridge_set


def cut_points(g: Graph) -> frozenset[int]:
    """Articulation points via an iterative Tarjan low-link DFS, O(n + m)."""
    return frozenset(_low_link(g)[0])


def bridges(g: Graph) -> frozenset[tuple[int, int]]:
    """Bridge edges as ``(u, v)`` with ``u < v``, from the same DFS as :func:`cut_points`."""
    return frozenset(_low_link(g)[1])


def cut_points_and_bridges(g: Graph) -> tuple[frozenset[int], frozenset[tuple[int, int]]]:
    points, bridge_set = _low_link(g)
    return frozenset(points), frozenset(bridge_set)


def betweenness(g: Graph) -> list[float]:
    """Exact unnormalized betweenness (Brandes accumulation, undirected)."""
    n = g.node_count
    adj = g.adjacency
    bc = [0.0] * n
    for s in range(n):
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return [b / 2.0 for b in bc]


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-8, max_iter: int = 1000) -> np.ndarray:
    """PageRank by power iteration on the symmetric adjacency.

    Dangling (isolated) nodes spread their mass uniformly.  Iteration stops
    when the L1 change drops below ``tol``.
    """
    n = g.node_count
    deg = g.degrees.astype(np.float64)
    a = g.adjacency_matrix()
    dangling = deg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / deg[~dangling]
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = a @ (x * inv)
        x_new = damping * (spread + x[dangling].sum() / n) + (1.0 - damping) / n
        x_new /= x_new.sum()
        if np.abs(x_new - x).sum() < tol:
            return x_new
        x = x_new
    return x


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.adjacency[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist
