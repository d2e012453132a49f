import json
import subprocess
import sys

import pytest

from gramcon.automata import Nfa, chain_nfa, max_run_nfa
from gramcon.cli import main
from gramcon.grammar import classify, parse_grammar


def write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content if isinstance(content, str) else json.dumps(content))
    return str(p)


def doms(*sets):
    return {"vars": [{"name": f"X{i}", "domain": list(d)} for i, d in enumerate(sets, 1)]}


@pytest.fixture
def parens_file(tmp_path):
    return write(tmp_path, "parens.cfg", "S -> S S\nS -> '(' S ')'\nS -> '(' ')'\n")


def test_transform_cnf(tmp_path, parens_file, capsys):
    assert main(["transform", "--grammar", parens_file, "--to", "cnf"]) == 0
    assert classify(parse_grammar(capsys.readouterr().out)).is_cnf


def test_transform_linear_and_trim(tmp_path, capsys):
    f = write(tmp_path, "g.cfg", "S -> a b S c\nS -> d\nQ -> e")
    main(["transform", "--grammar", f, "--to", "linear-nf"])
    assert classify(parse_grammar(capsys.readouterr().out)).is_linear
    main(["transform", "--grammar", f, "--to", "trim"])
    assert "Q" not in capsys.readouterr().out


def test_propagate_parens(tmp_path, parens_file, capsys):
    d = write(tmp_path, "d.json", doms("()", "()", "()", "()"))
    assert main(["propagate", "--grammar", parens_file, "--domains", d]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "ok"
    assert [v["domain"] for v in out["vars"]] == [["("], ["(", ")"], ["(", ")"], [")"]]


def test_propagate_disentailed(tmp_path, parens_file, capsys):
    d = write(tmp_path, "d.json", doms(")", "("))
    main(["propagate", "--grammar", parens_file, "--domains", d])
    assert json.loads(capsys.readouterr().out) == {"status": "disentailed"}


def test_propagate_weighted(tmp_path, capsys):
    g = write(tmp_path, "ed.cfg", "S -> a S a [0]\nS -> a S b [1]\nS -> b S a [1]\n"
                                  "S -> b S b [0]\nS -> '#' [0]")
    d = write(tmp_path, "d.json", doms("ab", "#", "b"))
    main(["propagate", "--grammar", g, "--domains", d, "--ub-z", "0",
          "--linear-fast-path", "off"])
    out = json.loads(capsys.readouterr().out)
    assert out["vars"][0]["domain"] == ["b"] and out["lb_z"] == 0
    main(["propagate", "--grammar", g, "--domains", write(tmp_path, "e.json", doms("a", "#", "b"))])
    assert json.loads(capsys.readouterr().out)["lb_z"] == 1


def test_reduce_membership(tmp_path, capsys):
    g = write(tmp_path, "g.cfg", "S -> a S\nS -> b")
    main(["reduce", "--grammar", g, "--string", "ab", "--mode", "thm1"])
    out = capsys.readouterr().out
    lines = out.splitlines()
    dom_line = [l for l in lines if l.startswith("# domains: ")][0]
    d = json.loads(dom_line[len("# domains: "):])
    assert [v["domain"] for v in d["vars"]] == [["a/0"], ["b/1"]]
    assert classify(parse_grammar(out)).is_simple


def test_reduce_bitmap(tmp_path, capsys):
    g = write(tmp_path, "g.cfg", "S -> a\nterminals: b")
    main(["reduce", "--grammar", g, "--domains", write(tmp_path, "d.json", doms("a")),
          "--mode", "thm2"])
    out = capsys.readouterr().out
    assert "# bitmap: 10" in out
    parse_grammar(out)


def test_reduce_bad_grammar_returns_error(tmp_path, capsys):
    g = write(tmp_path, "g.cfg", "S -> A b\nA -> a")
    assert main(["reduce", "--grammar", g, "--string", "ab", "--mode", "thm1"]) == 1
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("mode", ["conj", "dec"])
def test_editdist(tmp_path, capsys, mode):
    x = write(tmp_path, "x.json", doms("01", "01", "01"))
    y = write(tmp_path, "y.json", {"vars": [{"name": f"Y{i}", "domain": ["0", "1"]}
                                            for i in (1, 2, 3)]})
    r1 = write(tmp_path, "r1.json", max_run_nfa("1", 2, "01").to_json())
    r2 = write(tmp_path, "r2.json", chain_nfa("111").to_json())
    main(["editdist", "--x-domains", x, "--y-domains", y, "--max-dist", "0",
          "--r1", r1, "--r2", r2, "--mode", mode])
    out = json.loads(capsys.readouterr().out)
    # X must equal Y = 111, but X may not contain 111
    assert out == {"status": "disentailed"}
    main(["editdist", "--x-domains", x, "--y-domains", y, "--max-dist", "1",
          "--r1", r1, "--r2", r2, "--mode", mode])
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "ok"
    assert [v["domain"] for v in out["y"]["vars"]] == [["1"]] * 3
    assert [v["name"] for v in out["y"]["vars"]] == ["Y1", "Y2", "Y3"]


def test_editdist_defaults(tmp_path, capsys):
    x = write(tmp_path, "x.json", doms("a", "b"))
    y = write(tmp_path, "y.json", doms("ab", "ab"))
    main(["editdist", "--x-domains", x, "--y-domains", y, "--max-dist", "0"])
    out = json.loads(capsys.readouterr().out)
    assert [v["domain"] for v in out["y"]["vars"]] == [["a"], ["b"]]


def test_bench(tmp_path, capsys):
    out = tmp_path / "table.md"
    assert main(["bench", "--rows", "5:1", "--instances", "2", "--timeout-ms", "5000",
                 "--seed", "3", "--out", str(out)]) == 0
    assert "TOTALS" in out.read_text()
    csv = (tmp_path / "table.csv").read_text().splitlines()
    assert csv[0] == "n,N,seed,model,solved,satisfiable,choice_points,time_ms"
    assert len(csv) == 5
    main(["bench", "--rows", "4:1", "--instances", "1", "--models", "conj", "-v"])
    cap = capsys.readouterr()
    assert "ED_conj" in cap.out and "ED_Dec" not in cap.out
    assert "n=4 N=1 conj" in cap.err


def test_nfa_json_round_trip():
    r = Nfa(3, 0, {2}, {(0, "a", 1), (1, "b", 2)})
    assert Nfa.from_json(json.dumps(r.to_json())) == r


def test_module_entry_point(tmp_path):
    g = write(tmp_path, "g.cfg", "S -> a b")
    res = subprocess.run([sys.executable, "-m", "gramcon", "transform", "--grammar", g,
                          "--to", "cnf"], capture_output=True, text=True, check=True)
    assert classify(parse_grammar(res.stdout)).is_cnf
