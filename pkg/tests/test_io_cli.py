import json
import math

import pytest
from hypothesis import given

from conftest import digraphs
from dagcover import io
from dagcover.cli import main
from dagcover.cover import cover_from_json, cover_to_json
from dagcover.exceptions import ParseError
from dagcover.io import format_graph, parse_graph


@given(digraphs(integer_weights=False))
def test_graph_text_round_trip(g):
    back = parse_graph(format_graph(g))
    assert back.n == g.n and back.edges == g.edges


@pytest.mark.parametrize("text, fragment", [
    ("", "header"),
    ("3\n", ":1:"),
    ("2 1\n0 1\n", ":2:"),
    ("2 1\n0 2 1.0\n", "outside"),
    ("2 1\n1 1 1.0\n", "self-loop"),
    ("2 1\n0 1 -3\n", "positive"),
    ("2 1\n0 1 inf\n", "positive"),
    ("2 1\n0 1 abc\n", ":2:"),
    ("2 2\n0 1 1.0\n", "promises 2"),
])
def test_graph_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_graph(text, "g.txt")


def test_comments_and_blank_lines():
    g = parse_graph("# hi\n\n2 1\n# edge\n0 1 2.5\n")
    assert g.edges == ((0, 1, 2.5),)


def test_missing_file_is_parse_error(tmp_path):
    with pytest.raises(ParseError):
        io.read_graph(tmp_path / "nope.txt")


# CLI ---------------------------------------------------------------------


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_star_lower_bound(capsys):
    code, rep, _ = run(capsys, "bound", "star-lb", "--n", 6, "--mu", 0)
    assert code == 0 and rep["bound"] == pytest.approx(math.log2(6)) and rep["passed"]
    code, rep, _ = run(capsys, "bound", "star-lb", "--n", 5, "--mu", 0)
    assert f"{rep['bound']:.4f}" == "2.3219"


def test_gen_is_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        g, td = tmp_path / f"{name}.txt", tmp_path / f"{name}.td"
        code, *_ = run(capsys, "gen", "ktree", "--n", 30, "--k", 2, "--seed", 3, "--out", g, "--td-out", td)
        assert code == 0
        outs.append((g.read_bytes(), td.read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("construction, extra", [
    ("tw-steiner", []),
    ("tw-nonsteiner", []),
    ("planar", ["--eps", "0.5"]),
])
def test_cover_and_verify_pipeline(tmp_path, capsys, construction, extra):
    g = tmp_path / "g.txt"
    if construction == "planar":
        emb = tmp_path / "g.emb"
        run(capsys, "gen", "grid", "--rows", 4, "--cols", 4, "--seed", 1, "--out", g, "--emb-out", emb)
        extra = extra + ["--emb", emb, "--pathcover-out", tmp_path / "pc.json"]
    else:
        td = tmp_path / "g.td"
        run(capsys, "gen", "ktree", "--n", 25, "--k", 2, "--seed", 1, "--out", g, "--td-out", td)
        extra = extra + ["--td", td]
    cov = tmp_path / "c.json"
    code, rep, _ = run(capsys, "cover", construction, "--graph", g, "--out", cov, *extra)
    assert code == 0 and rep["passed"]
    args = ["verify", "--graph", g, "--cover", cov]
    if construction == "planar":
        args += ["--pathcover", tmp_path / "pc.json"]
    code, rep, _ = run(capsys, *args)
    assert code == 0 and rep["certificate"]["passed"]
    code, rep, _ = run(capsys, "stats", "--graph", g, "--cover", cov)
    assert code == 0 and rep["cover"]["provenance"]["construction"] == construction


def test_tampered_cover_exits_one(tmp_path, capsys):
    g, td, cov = tmp_path / "g.txt", tmp_path / "g.td", tmp_path / "c.json"
    run(capsys, "gen", "star", "--n", 7, "--out", g, "--td-out", td)
    run(capsys, "cover", "tw-steiner", "--graph", g, "--td", td, "--out", cov)
    cover = cover_from_json(cov.read_text())
    dag = cover.dags[0]
    # cut every positive edge weight in half so some distance drops below d_G
    halved = dag.with_edges([(a, b, w / 2 if w > 0 else w) for a, b, w in dag.edges])
    cov.write_text(cover_to_json(cover.replace_dag(0, halved)))
    code, rep, _ = run(capsys, "verify", "--graph", g, "--cover", cov)
    assert code == 1 and not rep["passed"] and not rep["certificate"]["dominating"]
    assert rep["certificate"]["dominating_witness"] is not None


def test_report_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, rep, _ = run(capsys, "--report", out, "bound", "star-lb", "--n", 4, "--mu", 1)
    assert code == 0 and rep is None
    assert json.loads(out.read_text())["format"] == 1


@pytest.mark.parametrize("argv", [
    ["verify", "--graph", "/nonexistent/g.txt", "--cover", "/nonexistent/c.json"],
    ["gen", "ktree", "--n", "5", "--out", "/tmp/never.txt"],
    ["bound", "star-lb", "--n", "1", "--mu", "0"],
])
def test_bad_input_exits_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("dagcover: error:")


def test_planar_without_eps_exits_two(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "dicycle", "--n", 6, "--out", g)
    code, _, _ = run(capsys, "cover", "planar", "--graph", g, "--out", tmp_path / "c.json")
    assert code == 2


def test_malformed_graph_exits_two(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("3 1\n0 9 1.0\n")
    code, _, err = run(capsys, "decompose", "--graph", g)
    assert code == 2 and ":2:" in err


def test_star_cover_analysis_via_cli(tmp_path, capsys):
    g, td, cov = tmp_path / "g.txt", tmp_path / "g.td", tmp_path / "c.json"
    run(capsys, "gen", "star", "--n", 9, "--out", g, "--td-out", td)
    run(capsys, "cover", "tw-nonsteiner", "--graph", g, "--td", td, "--out", cov)
    code, rep, _ = run(capsys, "bound", "star-lb", "--n", 9, "--mu", 0, "--cover", cov)
    assert code == 0 and rep["analysis"]["verdict"] == "CONSISTENT"


def test_steiner_cover_for_star_analysis_exits_two(tmp_path, capsys):
    g, td, cov = tmp_path / "g.txt", tmp_path / "g.td", tmp_path / "c.json"
    run(capsys, "gen", "star", "--n", 5, "--out", g, "--td-out", td)
    run(capsys, "cover", "tw-steiner", "--graph", g, "--td", td, "--out", cov)
    code, _, _ = run(capsys, "bound", "star-lb", "--n", 5, "--mu", 0, "--cover", cov)
    assert code == 2


def test_decompose_without_td_then_cover(tmp_path, capsys):
    g, td, cov = tmp_path / "g.txt", tmp_path / "h.td", tmp_path / "c.json"
    run(capsys, "gen", "ktree", "--n", 20, "--k", 3, "--seed", 2, "--out", g)
    code, rep, _ = run(capsys, "decompose", "--graph", g, "--out", td)
    assert code == 0 and rep["valid"]
    code, rep, _ = run(capsys, "cover", "tw-steiner", "--graph", g, "--out", cov,
                       "--pd-prefix", tmp_path / "pd")
    assert code == 0 and (tmp_path / "pd0.td").exists()
