import json

import networkx as nx
import pydot
import pytest

from conftest import DATA, parachute, path4
from mcgs.cli import main
from mcgs.errors import McgsError
from mcgs.export import structures_document, to_dot, write_sample, write_structures
from mcgs.graph import Graph, induced_edges, parse_edge_list
from mcgs.pipeline import Sample
from mcgs.ranking import identify

KARATE = str(DATA / "karate.txt")
TOY = str(DATA / "lesmis_toy.txt")


def test_sample_edge_list_export(tmp_path):
    g = path4()
    s = Sample((0, 1), induced_edges(g, [0, 1]), "RN", {"phi": 0.5}, 0, 2)
    out = tmp_path / "s.txt"
    write_sample(g, s, out)
    assert out.read_text() == "0 1\n"
    side = json.loads((tmp_path / "s.txt.json").read_text())
    assert side["node_labels"] == ["0", "1"] and side["algorithm"] == "RN"


def test_structures_json_has_one_parachute():
    doc = structures_document(parachute(), identify(parachute()))
    kinds = [r["kind"] for r in doc["structures"]]
    assert kinds.count("parachute_rim") == 1
    rim = next(r for r in doc["structures"] if r["kind"] == "parachute_rim")
    assert rim["key_nodes"] == ["2"] and rim["attached_nodes"] == ["3", "4", "5"]
    assert doc["thresholds"] == {"mu": 5, "epsilon": 2.0}


def test_dot_export_parses():
    g = parse_edge_list('a b\nb "c\nc" a\n')
    text = to_dot(g, structures=identify(g).all())
    (parsed,) = pydot.graph_from_dot_data(text)
    assert len(parsed.get_edges()) == 3
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (2, 4), (2, 5)])
    (parsed,) = pydot.graph_from_dot_data(to_dot(g, structures=identify(g).all()))
    node = parsed.get_node('"2"')[0]
    assert "parachute_rim:key" in node.get("structures")


def test_graphml_export_loads_with_overlays(tmp_path):
    g = parachute()
    path = tmp_path / "g.graphml"
    write_structures(g, identify(g), path, "graphml")
    h = nx.read_graphml(path)
    assert h.number_of_edges() == 6
    assert h.nodes["3"]["structures"] == "parachute_rim:attached"
    assert "super_pivot:key" in h.nodes["2"]["structures"]


def test_export_io_error_names_path(tmp_path):
    with pytest.raises(McgsError, match="nodir"):
        write_structures(path4(), identify(path4()), tmp_path / "nodir" / "x.json")


def test_cli_identify(capsys):
    assert main(["identify", KARATE]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["counts"] == {"P": 2, "S": 0, "R": 1, "T": 0}


def test_cli_sample_evaluate_export(tmp_path, capsys):
    out = tmp_path / "s.txt"
    assert main(["sample", TOY, "--rate", "0.3", "--rng-seed", "2", "--out", str(out)]) == 0
    side = json.loads((tmp_path / "s.txt.json").read_text())
    assert side["rng_seed"] == 2 and side["phi"] == 0.3
    capsys.readouterr()
    assert main(["evaluate", TOY, str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["algorithm"] == "MCGS" and rep["phi"] == 0.3
    assert rep["metadata"]["sample_nodes"] == len(side["node_labels"])
    dot = tmp_path / "s.dot"
    assert main(["export", TOY, "--sample", str(out), "--format", "dot", "--out", str(dot)]) == 0
    pydot.graph_from_dot_file(str(dot))
    assert main(["export", TOY, "--format", "json", "--out", str(tmp_path / "st.json")]) == 0


def test_cli_sample_to_stdout_and_options(capsys):
    args = ["sample", KARATE, "--algo", "ff", "--rate", "0.5", "--seed-strategy", "high_betweenness", "--rng-seed", "3"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["algorithm"] == "FF" and len(doc["node_labels"]) == 17
    assert main(["sample", KARATE, "--rate", "0.3", "--weights", "0.5,0.25,0.25", "--greedy-pool", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["weights"] == [0.5, 0.25, 0.25]


def test_cli_partition_file(tmp_path, capsys):
    g = parse_edge_list(open(KARATE).read())
    part = tmp_path / "p.txt"
    part.write_text("".join(f"{lab} {int(lab) % 2}\n" for lab in g.labels))
    assert main(["sample", KARATE, "--rate", "0.5", "--partition-file", str(part)]) == 0
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    # two parts of 17 get 8 nodes each; the minority structures alone exceed that
    assert doc["budget"] == 16 and doc["overshoot"] and len(doc["node_labels"]) > 16
    assert "exceed the budget" in captured.err


def test_cli_errors(tmp_path, capsys):
    assert main(["sample", str(tmp_path / "none.txt"), "--rate", "0.3"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("a b c\n")
    assert main(["identify", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    disc = tmp_path / "disc.txt"
    disc.write_text("a b\nc d\nd e\n")
    assert main(["identify", str(disc)]) == 2
    assert main(["identify", str(disc), "--largest-component"]) == 0
    with pytest.raises(SystemExit):
        main(["sample", KARATE, "--rate", "0.3", "--weights", "1,0"])


def test_cli_bench(tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"graphs": [KARATE], "algorithms": ["MCGS", "RN"], "rates": [0.3], "runs": 2}))
    assert main(["bench", str(plan), "--out", str(tmp_path / "o1")]) == 0
    assert main(["bench", str(plan), "--out", str(tmp_path / "o2"), "--runs", "3", "--algorithms", "rw"]) == 0
    assert len(list((tmp_path / "o1" / "reports").glob("*.json"))) == 4
    assert len(list((tmp_path / "o2" / "reports").glob("*.json"))) == 3
