"""Graph sampling that keeps minority structures (super pivots, huge stars,
rims, ties) while matching the majority structure of the original graph.
"""

from .baselines import BASELINES, baseline_sample
from .errors import ConfigError, DisconnectedGraphError, EmptyGraphError, GraphParseError, McgsError
from .graph import Graph, induced_subgraph, parse_edge_list, read_edge_list
from .harness import TrialPlan, run_plan
from .metrics import EvaluationReport, evaluate, mip, msgr, mspr
from .pipeline import Sample, SamplerConfig, greedy_majority, mcgs_sample
from .ranking import identify, rank_and_select
from .structures import Kind, MinorityStructure, detect_pivots_stars, detect_rims_ties

__all__ = [
    "BASELINES",
    "ConfigError",
    "DisconnectedGraphError",
    "EmptyGraphError",
    "EvaluationReport",
    "Graph",
    "GraphParseError",
    "Kind",
    "McgsError",
    "MinorityStructure",
    "Sample",
    "SamplerConfig",
    "TrialPlan",
    "baseline_sample",
    "detect_pivots_stars",
    "detect_rims_ties",
    "evaluate",
    "greedy_majority",
    "identify",
    "induced_subgraph",
    "mcgs_sample",
    "mip",
    "msgr",
    "mspr",
    "parse_edge_list",
    "rank_and_select",
    "read_edge_list",
    "run_plan",
]
