"""Trial orchestration: graphs x seed strategies x rates x runs x algorithms,
one JSON report per trial and an aggregate CSV of medians and deviations.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import BASELINES, TRAVERSAL, baseline_sample
from .errors import ConfigError
from .graph import Graph, betweenness, read_edge_list
from .metrics import DEFAULT_K, evaluate
from .pipeline import SEED_STRATEGIES, SamplerConfig, mcgs_sample
from .ranking import identify
from .structures import CATEGORIES

ALGORITHMS = ("MCGS",) + BASELINES
AGGREGATE_FIELDS = ("algorithm", "indicator", "kind", "count", "median", "stddev")


@dataclass
class TrialPlan:
    graphs: list[str]
    algorithms: list[str] = field(default_factory=lambda: ["MCGS"])
    seed_strategies: list[str] = field(default_factory=lambda: ["random"])
    rates: list[float] = field(default_factory=lambda: [0.3])
    runs: int = 5
    base_seed: int = 0
    alpha: float = 1.0
    beta: float = 2.0
    weights: tuple[float, float, float] = (1.0, 0.0, 0.0)
    greedy_pool: int | None = None
    k: int = DEFAULT_K
    largest_component: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "TrialPlan":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown plan keys: {', '.join(sorted(unknown))}")
        plan = cls(**data)
        plan.weights = tuple(float(w) for w in plan.weights)
        return plan

    @classmethod
    def load(cls, path) -> "TrialPlan":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        plan = cls.from_dict(data)
        # relative graph paths are taken relative to the plan file
        base = Path(path).parent
        plan.graphs = [str(p if Path(p).is_absolute() else base / p) for p in plan.graphs]
        return plan

    def validate(self) -> "TrialPlan":
        if not self.graphs:
            raise ConfigError("plan lists no graphs")
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if not self.rates or any(not 0 < r <= 1 for r in self.rates):
            raise ConfigError(f"rates must lie in (0, 1], got {self.rates}")
        self.algorithms = [a.upper() for a in self.algorithms]
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {a!r}")
        for s in self.seed_strategies:
            if s not in SEED_STRATEGIES:
                raise ConfigError(f"unknown seed strategy {s!r}")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        return self

    def config(self, rate: float, strategy: str, seed: int) -> SamplerConfig:
        return SamplerConfig(
            phi=rate,
            alpha=self.alpha,
            beta=self.beta,
            weights=self.weights,
            rng_seed=seed,
            seed_strategy=strategy,
            greedy_pool=self.greedy_pool,
        )

    def cell_count(self) -> int:
        return len(self.graphs) * len(self.seed_strategies) * len(self.rates) * self.runs * len(self.algorithms)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["weights"] = list(self.weights)
        return d


def trial_seed(base: int, graph_idx: int, strategy_idx: int, rate_idx: int, run: int) -> int:
    """64-bit seed for one cell, independent of every other cell."""
    ss = np.random.SeedSequence([base, graph_idx, strategy_idx, rate_idx, run])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class Trial:
    graph_idx: int
    strategy_idx: int
    rate_idx: int
    run: int
    algorithm: str
    seed: int


def trials(plan: TrialPlan) -> list[Trial]:
    out = []
    for gi, _ in enumerate(plan.graphs):
        for si, _ in enumerate(plan.seed_strategies):
            for ri, _ in enumerate(plan.rates):
                for run in range(plan.runs):
                    seed = trial_seed(plan.base_seed, gi, si, ri, run)
                    for algo in plan.algorithms:
                        out.append(Trial(gi, si, ri, run, algo, seed))
    return out


class _GraphCache:
    """Parsed graphs plus the per-graph work shared by all their trials."""

    def __init__(self, plan: TrialPlan):
        self.plan = plan
        self.graphs: dict[int, Graph] = {}
        self.original = {}
        self.centrality = {}

    def graph(self, idx: int) -> Graph:
        if idx not in self.graphs:
            self.graphs[idx] = read_edge_list(self.plan.graphs[idx], largest_component=self.plan.largest_component)
        return self.graphs[idx]

    def structures(self, idx: int):
        if idx not in self.original:
            self.original[idx] = identify(self.graph(idx))
        return self.original[idx]

    def betweenness(self, idx: int):
        if idx not in self.centrality:
            self.centrality[idx] = betweenness(self.graph(idx))
        return self.centrality[idx]


def report_name(plan: TrialPlan, t: Trial) -> str:
    stem = Path(plan.graphs[t.graph_idx]).stem
    strategy = plan.seed_strategies[t.strategy_idx]
    rate = plan.rates[t.rate_idx]
    return f"{t.graph_idx:02d}-{stem}_{t.algorithm}_{strategy}_r{rate:g}_run{t.run}.json"


def run_trial(plan: TrialPlan, t: Trial, cache: _GraphCache) -> dict:
    g = cache.graph(t.graph_idx)
    strategy = plan.seed_strategies[t.strategy_idx]
    rate = plan.rates[t.rate_idx]
    cfg = plan.config(rate, strategy, t.seed)
    start = time.perf_counter()
    if t.algorithm == "MCGS":
        sample = mcgs_sample(g, cfg)
    else:
        centrality = None
        if t.algorithm in TRAVERSAL and strategy == "high_betweenness":
            centrality = cache.betweenness(t.graph_idx)
        sample = baseline_sample(t.algorithm, g, cfg, centrality=centrality)
    elapsed = time.perf_counter() - start
    report = evaluate(
        g,
        sample.nodes,
        rate,
        original=cache.structures(t.graph_idx),
        k=plan.k,
        graph_name=plan.graphs[t.graph_idx],
        algorithm=t.algorithm,
        seed=t.seed,
    ).to_dict()
    report["seed_strategy"] = strategy
    report["run"] = t.run
    report["overshoot"] = sample.overshoot
    report["runtime_s"] = elapsed
    return report


_WORKER: dict = {}


def _worker_init(plan_dict: dict) -> None:
    plan = TrialPlan.from_dict(plan_dict)
    _WORKER["plan"] = plan
    _WORKER["cache"] = _GraphCache(plan)


def _safe_trial(plan: TrialPlan, t: Trial, cache: _GraphCache) -> tuple[dict | None, dict | None]:
    try:
        return run_trial(plan, t, cache), None
    except Exception as exc:  # a failed trial must not stop the plan
        failure = asdict(t)
        failure.update(
            graph=plan.graphs[t.graph_idx],
            seed_strategy=plan.seed_strategies[t.strategy_idx],
            rate=plan.rates[t.rate_idx],
            error=f"{type(exc).__name__}: {exc}",
            traceback=traceback.format_exc(),
        )
        return None, failure


def _worker_trial(t: Trial):
    return _safe_trial(_WORKER["plan"], t, _WORKER["cache"])


@dataclass
class PlanResult:
    reports: list[dict]
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures


def run_plan(plan: TrialPlan, out_dir=None, jobs: int = 1) -> PlanResult:
    """Run every trial of ``plan``; write reports and the aggregate to ``out_dir``.

    Results come back in plan order whatever ``jobs`` is, so the written
    aggregate depends only on the plan.
    """
    plan.validate()
    for path in plan.graphs:
        if not os.path.exists(path):
            raise ConfigError(f"graph file not found: {path}")
    todo = trials(plan)
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(plan.to_dict(),)) as pool:
            results = list(pool.map(_worker_trial, todo, chunksize=max(1, len(todo) // (4 * jobs))))
    else:
        cache = _GraphCache(plan)
        results = [_safe_trial(plan, t, cache) for t in todo]
    reports, failures = [], []
    names = []
    for t, (report, failure) in zip(todo, results):
        if failure is not None:
            failures.append(failure)
        else:
            reports.append(report)
            names.append(report_name(plan, t))
    if out_dir is not None:
        out = Path(out_dir)
        (out / "reports").mkdir(parents=True, exist_ok=True)
        for name, report in zip(names, reports):
            (out / "reports" / name).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        (out / "aggregate.csv").write_text(aggregate_csv(reports), encoding="utf-8")
        (out / "failures.json").write_text(json.dumps(failures, indent=2) + "\n", encoding="utf-8")
        (out / "plan.json").write_text(json.dumps(plan.to_dict(), indent=2) + "\n", encoding="utf-8")
    return PlanResult(reports, failures)


def _rows(report: dict):
    for name in ("mspr", "msgr", "mip"):
        for kind, value in report[name].items():
            yield name.upper(), kind, value
    for name in ("ksd", "sdd", "rcc", "ji"):
        yield name.upper(), "", report[name]


def aggregate(reports: list[dict]) -> list[dict]:
    """Lower median and population standard deviation per algorithm x indicator x kind.

    Absent values (None) are left out; a group with no values reports an
    empty median.
    """
    groups: dict[tuple, list[float]] = {}
    for r in reports:
        for name, kind, value in _rows(r):
            bucket = groups.setdefault((r["algorithm"], name, kind), [])
            if value is not None:
                bucket.append(float(value))
    order = {a: i for i, a in enumerate(ALGORITHMS)}
    names = ["MSPR", "MSGR", "MIP", "KSD", "SDD", "RCC", "JI"]
    rows = []
    kinds = ("",) + CATEGORIES

    def key(group):
        algo, name, kind = group
        return order.get(algo, len(order)), algo, names.index(name), kinds.index(kind)

    for algo, name, kind in sorted(groups, key=key):
        values = groups[(algo, name, kind)]
        rows.append(
            {
                "algorithm": algo,
                "indicator": name,
                "kind": kind,
                "count": len(values),
                "median": statistics.median_low(values) if values else None,
                "stddev": statistics.pstdev(values) if values else None,
            }
        )
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ""
    return str(v)


def aggregate_csv(reports: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AGGREGATE_FIELDS)
    for row in aggregate(reports):
        writer.writerow([_cell(row[f]) for f in AGGREGATE_FIELDS])
    return buf.getvalue()
