import json

import pytest

from totref.cli import grid, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json", "-")
    return code, json.loads(out), err


def test_gcheck_M(capsys):
    code, doc, _ = run_json(capsys, "gcheck", "M", "--bound", "6")
    assert code == 0
    assert doc["schema"] == "totref-report/1"
    assert doc["results"]["verdict"] == "CertifiedGProjective"
    assert doc["results"]["period"] == [0, 1]
    assert doc["certificates"][0]["complete_resolution"]["period"] == [0, 1]


def test_tate_M_M(capsys):
    code, doc, _ = run_json(capsys, "tate", "M", "M", "--i", "-2")
    assert code == 0
    assert doc["results"]["values"] == [{"i": -2, "dim": 3, "route_a": 3, "route_b": 3, "agree": True}]


def test_ring_check(capsys):
    code, doc, _ = run_json(capsys, "ring-check", "B")
    assert code == 0
    r = doc["results"]
    assert (r["dim"], r["socle_dim"], r["gorenstein"]) == (6, 2, False)


def test_table_output(capsys):
    code, out, _ = run(capsys, "stablehom", "M", "M")
    assert code == 0
    assert "3" in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, "gcheck", "Mx")
    assert code == 2 and "did you mean M" in err
    code, _, err = run(capsys, "ext", "M")
    assert code == 2
    code, _, err = run(capsys, "verify", "--props", "P99")
    assert code == 2 and "P99" in err
    code, _, _ = run(capsys, "gcheck", "M", "--bound", "0")
    assert code == 2


def test_engine_errors(capsys):
    code, out, err = run(capsys, "tate", "kB", "kB", "--i", "0", "--json", "-")
    assert code == 3
    assert "error[not-certified]" in err
    assert json.loads(out)["results"]["error"]["code"] == "not-certified"
    code, _, err = run(capsys, "approx", "left-g", "kB", "--bound", "3")
    assert code == 3 and "gdim-infinite-at-bound" in err


def test_definition_files(capsys, tmp_path):
    f = tmp_path / "c.totref"
    f.write_text("ring C over GF(7) vars x y; relations x^2, y^2;\nmodule N over C presented by [ x ];\n")
    code, doc, _ = run_json(capsys, "-f", str(f), "gcheck", "N")
    assert code == 0 and doc["results"]["verdict"] == "CertifiedGProjective"
    code, doc, _ = run_json(capsys, "gcheck", "N", "-f", str(f))
    assert code == 0 and doc["results"]["module"]["vdim"] == 2
    bad = tmp_path / "bad.totref"
    bad.write_text("ring C vars x;\nrelations x^2 x;\n")
    code, _, err = run(capsys, "-f", str(bad), "ring-check", "C")
    assert code == 3 and "line 2" in err


def test_builtin_names(capsys):
    code, doc, _ = run_json(capsys, "stablehom", "B:k", "B:k")
    assert code == 0 and doc["results"]["dim"] == 1


def test_approx_commands(capsys):
    assert run(capsys, "approx", "right-g", "M")[0] == 0
    assert run(capsys, "approx", "gperp", "omega_B", "--tests", "M")[0] == 0
    assert run(capsys, "approx", "left-g", "kA")[0] == 0
    assert run(capsys, "triplet", "omega_B", "--tests", "M")[0] == 0
    assert run(capsys, "triplet", "M")[0] == 0


def test_verify_builtin(capsys):
    code, doc, _ = run_json(capsys, "verify", "--rings", "B", "--mutants")
    assert code == 0
    props = doc["results"]["corpora"][0]["properties"]
    assert len(props) == 13 and all(p["passed"] for p in props)
    assert all(m["detected"] for m in doc["results"]["corpora"][0]["mutants"])


def test_json_is_deterministic(capsys, tmp_path):
    outs = []
    p = tmp_path / "r.json"
    for _ in range(2):
        assert main(["verify", "--rings", "A", "--seed", "3", "--size", "3", "--props", "P1,P7", "--json", str(p)]) == 0
        outs.append(p.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]


def test_timings_are_opt_in(capsys):
    _, doc, _ = run_json(capsys, "gcheck", "M")
    assert "timings" not in doc
    _, doc, _ = run_json(capsys, "gcheck", "M", "--timings")
    assert "timings" in doc


def test_env_bound(capsys, monkeypatch):
    monkeypatch.setenv("TOTREF_BOUND", "3")
    _, doc, _ = run_json(capsys, "gdim", "kB")
    assert doc["results"]["bound"] == 3
    monkeypatch.setenv("TOTREF_BOUND", "many")
    assert run(capsys, "gdim", "kB")[0] == 2


def test_examples(capsys):
    code, out, _ = run(capsys, "examples", "--list")
    assert code == 0 and "B.totref" in out
    code, out, _ = run(capsys, "examples", "--show", "B.totref")
    assert "presented by [ x ]" in out


def test_grid_alignment():
    s = grid(["a", "n"], [["xx", 1], ["y", 100]])
    lines = s.splitlines()
    assert lines[2] == "xx    1"
    assert lines[3] == "y   100"
