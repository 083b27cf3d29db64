import io
import json
import re
import subprocess
import sys


from shakecert.cli import run
from shakecert.patterns import datum_to_json, default_registry


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_torus():
    code, out, _ = call("eval", "(torus 2 5)", "--r", "0")
    assert code == 0
    assert "gsh^0 = 2" in out
    assert "g4 = 2" in out


def test_every_bound_line_has_resolvable_trace():
    code, out, _ = call("eval", "(sat mazur :r 0 (wh (torus 2 3)))", "--r", "0", "--r", "-1")
    assert code == 0
    ids = re.findall(r"\[(t\d+)\]", out)
    assert len(ids) >= 6
    for tid in ids:
        code, tree, _ = call("eval", "(sat mazur :r 0 (wh (torus 2 3)))", "--r", "0", "--r", "-1", "--explain", tid)
        assert code == 0 and tree.startswith(f"{tid}: ")


def test_explain_unknown_id():
    code, _, err = call("eval", "unknot", "--explain", "t999")
    assert code == 2 and "no derivation" in err


def test_json_report():
    code, out, _ = call("eval", "(torus 2 5)", "--r", "0", "--json")
    blob = json.loads(out)
    assert blob["expr"] == "(torus 2 5)"
    g = blob["invariants"]["gsh^0"]
    assert (g["lo"], g["hi"]) == (2, 2)
    assert g["trace_id"] in blob["traces"]
    for d in blob["traces"].values():
        assert all(p in blob["traces"] for p in d["premises"])


def test_spc4_suffix():
    _, out, _ = call("eval", "(sat r1 :r 3 unknot)", "--r", "3")
    assert re.search(r"gsh\^3 = 0  \[t\d+\] \(mod SPC4\)", out)


def test_parse_error_exit_code():
    code, out, err = call("eval", "(torus 2 4)")
    assert code == 2 and out == "" and "coprime" in err
    assert call("eval")[0] == 2
    assert call("bogus")[0] == 2
    assert call("eval", "(sat nope :r 0 unknot)")[0] == 2


def test_contradiction_exit_code():
    code, _, err = call("eval", "unknot", "--assume-suitable", "1")
    assert code == 1
    assert "suitable-genus-bound" in err


def test_table():
    code, out, _ = call("table", "--pattern", "mazur", "--base", "(wh (torus 2 3))", "--r", "0",
                        "--iters", "4", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "i,g4,tau,s,gsh_r,caveats"
    assert [int(r.split(",")[1]) for r in rows[1:]] == [1, 2, 3, 4, 5]
    code, out, _ = call("table", "--pattern", "mazur", "--base", "(wh (torus 2 3))", "--r", "0", "--iters", "1")
    assert code == 0 and "closed form" in out


def test_table_errors():
    assert call("table", "--pattern", "nope", "--base", "unknot", "--r", "0", "--iters", "1")[0] == 2
    code, _, err = call("table", "--pattern", "core", "--base", "unknot", "--r", "0", "--iters", "1",
                        "--closed-form")
    assert code == 2 and "closed form does not apply" in err


def test_verdict():
    code, out, _ = call("verdict", "(torus 2 3)", "--r", "-4")
    assert code == 0 and ": No" in out
    code, out, _ = call("verdict", "(sat r2 :r 1 unknot)", "--r", "1")
    assert "CertifiedModuloSPC4" in out
    code, out, _ = call("verdict", "(wh (mirror (torus 2 3)))", "--r", "-3")
    assert code == 0 and out.strip().endswith("Unknown")
    code, out, _ = call("verdict", "(wh (mirror (torus 2 3)))", "--r", "2", "--characterization", "mazur")
    assert "Certified" in out


def test_oracle(tmp_path):
    code, out, _ = call("oracle", "--check")
    assert code == 0
    assert "rht: tb = 1, rot = 0  ok" in out
    path = tmp_path / "k.front"
    path.write_text("L 0\nR 1\n")
    assert call("oracle", "--front", str(path))[1] == f"{path}: tb = -1, rot = 0\n"
    path.write_text("L 0\n")
    assert call("oracle", "--front", str(path))[0] == 2
    assert call("oracle", "--fixture", "nope")[0] == 2
    code, out, _ = call("oracle", "--random", "3", "--seed", "5", "--check")
    assert code == 0 and out.count("ok") == 3


def test_compare_gluings():
    code, out, _ = call("compare-gluings", "1", "2", "--r", "1", "--s", "1")
    assert code == 0 and "3*m_i(Q)" in out
    assert call("compare-gluings", "mazur", "core", "--r", "2", "--s", "0")[1] == "Equal\n"
    assert call("compare-gluings", "1", "0", "--r", "1", "--s", "1")[0] == 2
    assert call("compare-gluings", "1", "what", "--r", "1", "--s", "1")[0] == 2


def test_registry(tmp_path):
    code, out, _ = call("registry", "list")
    assert code == 0 and out.startswith("core: w = 1")
    assert call("registry", "validate") == (0, "5 patterns ok\n", "")
    data = [datum_to_json(p) for p in default_registry()]
    for obj in data:
        if obj["name"] == "mazur":
            obj["meridian_ng"] = True
    path = tmp_path / "reg.json"
    path.write_text(json.dumps(data))
    code, out, _ = call("--registry", str(path), "registry", "validate")
    assert code == 1 and "meridian flag: mazur" in out
    data[0]["n_geom"] = 2
    path.write_text(json.dumps(data))
    assert call("--registry", str(path), "registry", "validate")[0] == 2
    assert call("--registry", str(path), "eval", "unknot")[0] == 2
    assert call("--registry", str(tmp_path / "missing.json"), "registry", "list")[0] == 2


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "shakecert", "eval", "(sum (torus 2 3) (wh (torus 3 4)))", "--r", "1", "--json"]
    outs = {subprocess.run(argv, capture_output=True, text=True, env={"PYTHONHASHSEED": str(h)}).stdout
            for h in range(3)}
    assert len(outs) == 1 and outs.pop()
