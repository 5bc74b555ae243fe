import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bipartite_graphs, digraphs
from gms import io as gio
from gms.cli import main, workers
from gms.exactmath import Matrix
from gms.fields import GF, QQ, QQi, GaussianRational
from gms.graphcore import BipartiteGraph, Digraph, GraphFormatError, UndirectedGraph
from gms.matspace import graphical_space
from gms.symbolic import SymbolicMatrix, graph_pencil


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    lines = [json.loads(x) for x in cap.out.splitlines() if x.strip()]
    return code, lines, cap.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# formats


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=4))
def test_digraph_json_and_text_round_trip(g):
    assert gio.graph_from_json(json.loads(json.dumps(gio.graph_to_json(g)))) == g
    text = f"digraph {g.n}\n" + "".join(f"{i + 1} {j + 1}\n" for i, j in g.sorted_arcs())
    assert gio.parse_graph_text(text) == g


@settings(max_examples=30, deadline=None)
@given(bipartite_graphs())
def test_bipartite_round_trip(g):
    assert gio.graph_from_json(gio.graph_to_json(g)) == g


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.fractions(max_denominator=9), st.fractions(max_denominator=9)),
                min_size=4, max_size=4))
def test_gaussian_matrix_round_trip(vals):
    m = Matrix([[GaussianRational(*vals[0]), GaussianRational(*vals[1])],
                [GaussianRational(*vals[2]), GaussianRational(*vals[3])]], QQi)
    assert gio.matrix_from_json(json.loads(gio.dumps(gio.matrix_to_json(m)))) == m


def test_space_and_pencil_round_trip():
    s = graphical_space(Digraph(3, [(0, 1), (2, 2)]), GF(3))
    assert gio.space_from_json(json.loads(gio.dumps(gio.space_to_json(s)))) == s
    b = SymbolicMatrix(Matrix([[Fraction(1, 2), 0], [0, 1]], QQ), [Matrix([[0, 1], [0, 0]], QQ)])
    assert gio.pencil_from_json(json.loads(gio.dumps(gio.pencil_to_json(b)))) == b


def test_kraus_round_trip():
    ops = [np.array([[1, 1j], [0, 0.5]]), np.eye(2) * 0.25j]
    back = gio.kraus_from_json(json.loads(gio.dumps(gio.kraus_to_json(ops))))
    assert all(np.array_equal(a, b) for a, b in zip(ops, back))


def test_infinity_in_reports():
    assert gio.dumps({"x": math.inf}) == '{"x":"inf"}'
    assert gio.from_report_value("inf") == math.inf


def test_parse_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="line 3"):
        gio.parse_graph_text("digraph 2\n1 2\n1 5\n")
    with pytest.raises(GraphFormatError, match="line 1"):
        gio.parse_graph_text("graph 2\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        gio.parse_graph_text("undirected 2\n1 1\n")
    assert gio.parse_graph_text("# comment\nundirected 3\n1 2\n") == UndirectedGraph(3, [(0, 1)])


def test_pencil_declared_sizes_checked():
    d = {"field": "Q", "n": 3, "constant": [[0]], "coeffs": [[[1]]]}
    with pytest.raises(ValueError, match="n=3"):
        gio.pencil_from_json(d)


# command line


def test_analyze_examples(tmp_path, capsys):
    c3 = write(tmp_path, "c3.txt", "digraph 3\n1 2\n2 3\n3 1\n")
    code, lines, _ = run(capsys, "analyze", c3)
    side = lines[1]["graph_side"]
    assert code == 0 and side["c_of_G"] == 1 and side["max_walk_len"] == "inf"
    assert side["transitive"] is True
    assert lines[1]["space_side"]["composition_series_length"] == 1
    path = write(tmp_path, "p.txt", "digraph 3\n1 2\n2 3\n")
    side = run(capsys, "analyze", path)[1][1]["graph_side"]
    assert side["c_of_G"] == 3 and side["max_walk_len"] == 2
    k22 = write(tmp_path, "k.txt", "bipartite 2 2\n1 1\n1 2\n2 1\n2 2\n")
    side = run(capsys, "analyze", k22)[1][1]["graph_side"]
    assert side["matching_number"] == 2 and side["rho"] == 2


def test_verify_t51_cli(capsys):
    code, lines, _ = run(capsys, "verify", "--theorems", "T5.1", "--n-max", "3",
                         "--field", "Fp:2")
    assert code == 0
    assert lines[-1]["summary"] == {"pass": 512, "explored": 0, "fail": 0, "total": 512}
    assert sum(1 for x in lines if x.get("status") == "verified") == 512


def test_pit_sdit_cli(tmp_path, capsys):
    k22 = graph_pencil(graphical_space(
        BipartiteGraph(2, 2, itertools.product(range(2), range(2))), GF(2**31 - 1)))
    path = write(tmp_path, "k22.json", gio.dumps(gio.pencil_to_json(k22)))
    code, lines, _ = run(capsys, "pit", "sdit", "--pencil", path, "--trials", "10",
                         "--seed", "7")
    assert code == 0 and lines[1]["verdict"] == "Nonzero" and lines[1]["witness"]
    assert lines[0]["config"]["seed"] == 7


def test_reduce_cli(tmp_path, capsys):
    singular = graph_pencil(graphical_space(BipartiteGraph(2, 2, [(0, 0), (0, 1)]),
                                            GF(2**31 - 1)))
    path = write(tmp_path, "s.json", gio.dumps(gio.pencil_to_json(singular)))
    out = str(tmp_path / "gadget.json")
    code, lines, _ = run(capsys, "reduce", "sdit-to-nilindex", "--pencil", path, "--out", out)
    assert code == 0 and lines[1]["threshold"] == 5
    code, lines, _ = run(capsys, "pit", "nilindex", "--pencil", out, "--k", "5")
    assert lines[1]["verdict"] == "ProbablyYes"
    c3 = write(tmp_path, "c3.txt", "digraph 3\n1 2\n2 3\n3 1\n")
    code, lines, _ = run(capsys, "reduce", "cycle-to-matching", "--graph", c3)
    assert code == 0 and lines[1]["agree"] and len(lines[1]["cycle"]) == 3


def test_extract_iso_cli(tmp_path, capsys):
    a = write(tmp_path, "a.txt", "digraph 3\n1 2\n2 3\n")
    b = write(tmp_path, "b.txt", "digraph 3\n3 2\n2 1\n")
    t = write(tmp_path, "t.json", json.dumps({"field": "Q", "entries":
                                              [[0, 0, 2], [0, 1, 0], [1, 0, 0]]}))
    for kind in ("conjugator", "congruator"):
        code, lines, _ = run(capsys, "extract-iso", kind, "--t", t, "--g", a, "--h", b)
        assert code == 0 and lines[1]["permutation"] == [3, 2, 1]


def test_quantum_cli(tmp_path, capsys):
    csv = write(tmp_path, "p.csv", "0,1\n1,0\n")
    assert run(capsys, "quantum", "irreducible", "--transition", csv)[1][1]["irreducible"]
    c4 = write(tmp_path, "c4.txt", "undirected 4\n1 2\n2 3\n3 4\n4 1\n")
    rec = run(capsys, "quantum", "spectral", "--graph", c4)[1][1]
    assert abs(rec["graph_value"] - 1) < 1e-9 and rec["difference"] <= 1e-9
    assert run(capsys, "quantum", "connected", "--graph", c4)[1][1]["connected"]


def test_error_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.txt", "digraph 2\n1 x\n")
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and json.loads(err)["error"]["code"] == "E_FORMAT"
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.txt"))
    assert code == 2 and json.loads(err)["error"]["code"] == "E_IO"
    code, _, err = run(capsys, "verify", "--theorems", "T9.9")
    assert code == 2 and json.loads(err)["error"]["code"] == "E_INPUT"
    csv = write(tmp_path, "p.csv", "0.5,0\n0.4,1\n")
    code, _, err = run(capsys, "quantum", "irreducible", "--transition", csv)
    assert code == 2 and "column 1" in json.loads(err)["error"]["message"]


def test_reports_are_byte_identical(tmp_path, capsys):
    args = ["verify", "--theorems", "T1.11", "--n-max", "2", "--samples", "50", "--seed", "5"]
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    out = str(tmp_path / "r.jsonl")
    main(["--output", out, *args])
    capsys.readouterr()
    assert [json.loads(x) for x in open(out)] == first


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("GMS_THREADS", "2")
    assert workers(8) == 2
    monkeypatch.delenv("GMS_THREADS")
    assert workers(3) == 3


def test_threaded_report_order_is_deterministic(capsys, monkeypatch):
    monkeypatch.setenv("GMS_THREADS", "4")
    one = run(capsys, "verify", "--theorems", "T4.2", "--n-max", "2")[1]
    many = run(capsys, "verify", "--theorems", "T4.2", "--n-max", "2", "--workers", "4")[1]
    assert one[1:] == many[1:]
