import json

import pytest

from schubcode.cli import main


def run_json(tmp_path, name, *argv):
    path = tmp_path / name
    rc = main([*argv, "--json", str(path)])
    return rc, path.read_bytes()


def test_params(capsys):
    assert main(["params", "--alpha", "2,4", "--q", "3"]) == 0
    out = capsys.readouterr().out
    for s in ("n = 49", "k = 5", "delta = 3", "d_claim = 27"):
        assert s in out


def test_params_json_stdout(capsys):
    assert main(["params", "--alpha", "2,4", "--q", "3", "--json", "-"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert (d["n_alpha"], d["k_alpha"], d["delta"], d["d_claim"]) == (49, 5, 3, 27)
    assert d["q0"] == 2.0 and d["q_exceeds_q0"] is True


def test_alpha_reduction_notice(capsys):
    assert main(["params", "--alpha", "1,2", "--m", "5", "--q", "2"]) == 0
    assert "reduc" in capsys.readouterr().err.lower()


def test_code_mwcc(tmp_path):
    rc, raw = run_json(tmp_path, "c.json", "code", "--alpha", "2,4", "--q", "3", "--minweight", "--mwcc")
    assert rc == 0
    d = json.loads(raw)
    assert (d["n"], d["k"], d["d"], d["e"], d["q_delta"]) == (49, 5, 27, 22, 27)
    assert d["minimizers"] and all(m["schubert_decomposable"] for m in d["minimizers"])
    assert d["counterexamples"] == 0 and d["converse"]["failures"] == []


def test_determinism_across_workers(tmp_path):
    args = ["code", "--alpha", "1,3,5", "--q", "2", "--minweight", "--distribution", "--mwcc"]
    r1, a = run_json(tmp_path, "a.json", *args, "--workers", "1")
    r2, b = run_json(tmp_path, "b.json", *args, "--workers", "3")
    r3, c = run_json(tmp_path, "c.json", *args, "--workers", "1")
    assert r1 == r2 == r3 == 0 and a == b == c
    assert a.endswith(b"\n")


def test_verify_determinism(tmp_path):
    args = ["verify", "--alpha", "2,5", "--q", "2,3", "--checks", "count,strings,family,dc"]
    r1, a = run_json(tmp_path, "a.json", *args)
    r2, b = run_json(tmp_path, "b.json", *args, "--workers", "2")
    assert r1 == r2 == 0 and a == b


def test_verify_reports_lb_b_failure(tmp_path):
    rc, raw = run_json(tmp_path, "v.json", "verify", "--alpha", "2,4", "--q", "2,3", "--checks", "ineq")
    assert rc == 1
    fails = [r for r in json.loads(raw)["results"] if r["status"] == "fail"]
    assert {r["check_id"] for r in fails} == {"lb_b"}


def test_csv_export(tmp_path):
    path = tmp_path / "g.csv"
    assert main(["code", "--alpha", "2,3", "--q", "2", "--csv", str(path)]) == 0
    rows = path.read_text().strip().splitlines()
    assert len(rows) == 3 and all(len(r.split(",")) == 7 for r in rows)


def test_enumerate(capsys):
    assert main(["enumerate", "--alpha", "2,4", "--q", "2", "--json", "-"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert len(d["points"]) == 19


@pytest.mark.parametrize("argv,code", [
    (["params", "--alpha", "2,4", "--q", "6"], 2),
    (["params", "--alpha", "4,2", "--q", "2"], 2),
    (["code", "--alpha", "2,4", "--q", "3", "--minweight", "--scan-cap", "10"], 3),
    (["code", "--alpha", "2,4", "--q", "3", "--point-cap", "5"], 3),
    (["code", "--alpha", "2,4", "--q", "3", "--workers", "0"], 2),
    (["code", "--alpha", "2,4", "--q", "3", "--minweight", "--assert-paper"], 0),
    (["verify", "--alpha", "2,4", "--checks", "bogus"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_internal_error_exit_code(monkeypatch):
    import schubcode.cli as cli

    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "cmd_params", boom)
    assert main(["params", "--alpha", "2,4", "--q", "2"]) == 4
