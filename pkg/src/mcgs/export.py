"""Writers for samples and detected structures: edge list, JSON, DOT, GraphML."""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Iterable, Sequence

from .errors import McgsError
from .graph import Graph, format_edge_list
from .pipeline import Sample
from .ranking import RankedSets
from .structures import CATEGORIES, MinorityStructure, degree_thresholds

FORMATS = ("edgelist", "dot", "graphml", "json")


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise McgsError(f"cannot write {path}: {exc.strerror or exc}") from exc


def structures_document(g: Graph, ranked: RankedSets) -> dict:
    th = degree_thresholds(g)
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "thresholds": {"mu": th.mu, "epsilon": th.epsilon},
        "counts": {c: len(ranked[c]) for c in CATEGORIES},
        "structures": [dict(s.to_record(g), category=s.category, rank=i) for c in CATEGORIES for i, s in enumerate(ranked[c])],
    }


def node_overlays(structures: Iterable[MinorityStructure]) -> dict[int, list[str]]:
    """``node -> ["kind:key", "kind:attached", ...]`` over every structure it belongs to."""
    tags: dict[int, list[str]] = {}
    for s in structures:
        for v in s.key_nodes:
            tags.setdefault(v, []).append(f"{s.kind.value}:key")
        for v in s.attached_nodes:
            tags.setdefault(v, []).append(f"{s.kind.value}:attached")
    return {v: sorted(set(t)) for v, t in tags.items()}


def _scope(g: Graph, nodes, edges):
    nodes = sorted(set(range(g.node_count) if nodes is None else nodes))
    if edges is None:
        member = set(nodes)
        edges = [(u, v) for u, v in g.edges() if u in member and v in member]
    return nodes, sorted(edges)


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    g: Graph,
    nodes: Sequence[int] | None = None,
    edges: Sequence[tuple[int, int]] | None = None,
    structures: Iterable[MinorityStructure] = (),
    name: str = "G",
) -> str:
    nodes, edges = _scope(g, nodes, edges)
    tags = node_overlays(structures)
    lab = g.labels
    lines = [f"graph {_dot_id(name)} {{"]
    for v in nodes:
        attrs = ""
        if v in tags:
            attrs = f" [structures={_dot_id(';'.join(tags[v]))}]"
        lines.append(f"  {_dot_id(lab[v])}{attrs};")
    for u, v in edges:
        lines.append(f"  {_dot_id(lab[u])} -- {_dot_id(lab[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graphml(
    g: Graph,
    nodes: Sequence[int] | None = None,
    edges: Sequence[tuple[int, int]] | None = None,
    structures: Iterable[MinorityStructure] = (),
) -> str:
    nodes, edges = _scope(g, nodes, edges)
    tags = node_overlays(structures)
    lab = g.labels
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ET.SubElement(root, "key", {"id": "structures", "for": "node", "attr.name": "structures", "attr.type": "string"})
    graph = ET.SubElement(root, "graph", id="G", edgedefault="undirected")
    for v in nodes:
        el = ET.SubElement(graph, "node", id=lab[v])
        if v in tags:
            ET.SubElement(el, "data", key="structures").text = ";".join(tags[v])
    for i, (u, v) in enumerate(edges):
        ET.SubElement(graph, "edge", id=f"e{i}", source=lab[u], target=lab[v])
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def write_sample(g: Graph, sample: Sample, path, fmt: str = "edgelist") -> list[Path]:
    """Write a sample (edge list, DOT or GraphML) plus its JSON sidecar next to it."""
    overlays = sample.selected
    if fmt == "edgelist":
        text = format_edge_list(g, sample.edges)
    elif fmt == "dot":
        text = to_dot(g, sample.nodes, sample.edges, overlays, name=sample.algorithm)
    elif fmt == "graphml":
        text = to_graphml(g, sample.nodes, sample.edges, overlays)
    else:
        raise McgsError(f"unsupported sample format {fmt!r}")
    write_text(path, text)
    side = sidecar_path(path)
    write_text(side, json.dumps(sample.sidecar(g), indent=2) + "\n")
    return [Path(path), side]


def write_structures(g: Graph, ranked: RankedSets, path, fmt: str = "json") -> Path:
    """Detected structures as JSON, or the whole graph with overlays as DOT/GraphML."""
    if fmt == "json":
        text = json.dumps(structures_document(g, ranked), indent=2) + "\n"
    elif fmt == "dot":
        text = to_dot(g, structures=ranked.all())
    elif fmt == "graphml":
        text = to_graphml(g, structures=ranked.all())
    elif fmt == "edgelist":
        text = format_edge_list(g)
    else:
        raise McgsError(f"unsupported format {fmt!r}")
    write_text(path, text)
    return Path(path)
