"""Command-line entry point: ``mcgs identify|sample|evaluate|bench|export``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import baseline_sample
from .errors import ConfigError, McgsError
from .export import FORMATS, sidecar_path, structures_document, write_sample, write_structures
from .graph import induced_edges, induced_subgraph, read_edge_list
from .harness import ALGORITHMS, TrialPlan, run_plan
from .metrics import DEFAULT_K, evaluate, sample_structures
from .pipeline import SEED_STRATEGIES, Sample, SamplerConfig, mcgs_sample, read_partition
from .ranking import identify


def _weights(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be three comma-separated numbers, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"weights must be three comma-separated numbers, got {text!r}")
    return parts


def _csv(kind):
    def parse(text: str):
        return [kind(x) for x in text.split(",") if x]

    return parse


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_identify(args) -> int:
    g = read_edge_list(args.graph, largest_component=args.largest_component)
    ranked = identify(g)
    if args.out:
        write_structures(g, ranked, args.out, args.format)
    else:
        _emit(structures_document(g, ranked))
    return 0


def cmd_sample(args) -> int:
    g = read_edge_list(args.graph, largest_component=args.largest_component)
    cfg = SamplerConfig(
        phi=args.rate,
        alpha=args.alpha,
        beta=args.beta,
        weights=args.weights,
        rng_seed=args.rng_seed,
        seed_strategy=args.seed_strategy,
        greedy_pool=args.greedy_pool,
    )
    algo = args.algo.upper()
    if algo == "MCGS":
        partition = read_partition(args.partition_file, g) if args.partition_file else None
        sample = mcgs_sample(g, cfg, partition)
    else:
        if args.partition_file:
            raise ConfigError("--partition-file applies to MCGS only")
        sample = baseline_sample(algo, g, cfg)
    if args.out:
        write_sample(g, sample, args.out, args.format)
    else:
        doc = sample.sidecar(g)
        doc["edges"] = [[g.labels[u], g.labels[v]] for u, v in sample.edges]
        _emit(doc)
    if sample.overshoot:
        print(f"warning: minority nodes exceed the budget of {sample.budget}", file=sys.stderr)
    return 0


def load_sample_labels(path) -> tuple[list[str], dict]:
    """Node labels (and sidecar, if any) of a sample given as a sidecar JSON
    or an edge list; an edge list's sidecar is looked up next to it."""
    path = Path(path)
    side = path if path.suffix == ".json" else sidecar_path(path)
    if side.exists():
        with open(side, encoding="utf-8") as fh:
            meta = json.load(fh)
        if "node_labels" not in meta:
            raise ConfigError(f"{side}: sidecar lacks node_labels")
        return [str(x) for x in meta["node_labels"]], meta
    labels = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            for tok in line.split()[:2]:
                if tok not in seen:
                    seen.add(tok)
                    labels.append(tok)
    return labels, {}


def cmd_evaluate(args) -> int:
    g = read_edge_list(args.graph, largest_component=args.largest_component)
    labels, meta = load_sample_labels(args.sample)
    missing = [x for x in labels if x not in g.id_map]
    if missing:
        raise ConfigError(f"sample nodes not in graph: {', '.join(missing[:5])}")
    nodes = [g.id_map[x] for x in labels]
    phi = args.rate if args.rate is not None else meta.get("phi") or len(set(nodes)) / g.node_count
    report = evaluate(
        g,
        nodes,
        phi,
        k=args.k,
        graph_name=args.graph,
        algorithm=meta.get("algorithm", ""),
        seed=meta.get("rng_seed"),
    )
    _emit(report.to_dict())
    return 0


def cmd_bench(args) -> int:
    plan = TrialPlan.load(args.plan)
    overrides = {
        "algorithms": args.algorithms,
        "seed_strategies": args.seed_strategies,
        "rates": args.rates,
        "runs": args.runs,
        "base_seed": args.base_seed,
        "greedy_pool": args.greedy_pool,
        "k": args.k,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(plan, key, value)
    result = run_plan(plan, args.out, jobs=args.jobs)
    print(
        f"{len(result.reports)} trials succeeded, {len(result.failures)} failed; results in {args.out}",
        file=sys.stderr,
    )
    for f in result.failures:
        print(f"  failed: {f['graph']} {f['algorithm']} {f['seed_strategy']} {f['rate']} run {f['run']}: {f['error']}", file=sys.stderr)
    return 0 if result.ok else 1


def cmd_export(args) -> int:
    g = read_edge_list(args.graph, largest_component=args.largest_component)
    if args.sample is None:
        write_structures(g, identify(g), args.out, args.format)
        return 0
    labels, _ = load_sample_labels(args.sample)
    nodes = sorted(g.id_map[x] for x in labels)
    if args.format == "json":
        sub = induced_subgraph(g, nodes)
        write_structures(sub, identify(sub), args.out, "json")
        return 0
    found = sample_structures(g, nodes)
    sample = Sample(tuple(nodes), induced_edges(g, nodes), "export", {}, 0, len(nodes), selected=found.all())
    write_sample(g, sample, args.out, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcgs", description="Minority-structure-preserving graph sampling.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_arg(sp):
        sp.add_argument("graph", help="edge-list file")
        sp.add_argument("--largest-component", action="store_true", help="keep only the largest connected component")

    sp = sub.add_parser("identify", help="detect and rank minority structures")
    graph_arg(sp)
    sp.add_argument("--out", help="output file (default: JSON on stdout)")
    sp.add_argument("--format", choices=FORMATS, default="json")
    sp.set_defaults(func=cmd_identify)

    sp = sub.add_parser("sample", help="draw one sample")
    graph_arg(sp)
    sp.add_argument("--algo", default="MCGS", type=str.upper, choices=ALGORITHMS)
    sp.add_argument("--rate", type=float, required=True, help="sampling rate in (0, 1]")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--weights", type=_weights, default=(1.0, 0.0, 0.0), help="w1,w2,w3 for MSE, NCC, JI")
    sp.add_argument("--seed-strategy", choices=SEED_STRATEGIES, default="random")
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--partition-file", help="'label part' lines; MCGS samples each part separately")
    sp.add_argument("--greedy-pool", type=int, help="score only this many random candidates per greedy step")
    sp.add_argument("--out", help="sample file; a .json sidecar is written next to it")
    sp.add_argument("--format", choices=("edgelist", "dot", "graphml"), default="edgelist")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("evaluate", help="score a sample against its graph")
    graph_arg(sp)
    sp.add_argument("sample", help="sample edge list (with sidecar) or sidecar JSON")
    sp.add_argument("--rate", type=float, help="sampling rate (default: from the sidecar)")
    sp.add_argument("--k", type=int, default=DEFAULT_K, help="K for MIP")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("bench", help="run a trial plan")
    sp.add_argument("plan", help="plan JSON file")
    sp.add_argument("--out", default="bench-out", help="output directory")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--algorithms", type=_csv(str.upper))
    sp.add_argument("--seed-strategies", type=_csv(str))
    sp.add_argument("--rates", type=_csv(float))
    sp.add_argument("--runs", type=int)
    sp.add_argument("--base-seed", type=int)
    sp.add_argument("--greedy-pool", type=int)
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("export", help="write a graph or sample with structure overlays")
    graph_arg(sp)
    sp.add_argument("--sample", help="sample edge list or sidecar; default exports the whole graph")
    sp.add_argument("--format", choices=FORMATS, default="dot")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (McgsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
