import json

import pytest

from boxperfect import __version__
from boxperfect.boxtdi import build_R_graph
from boxperfect.cli import analyze, is_complement_of_line_graph, main
from boxperfect.constructions import build_named, line_graph
from boxperfect.graph import Multigraph, complement, dumps
from boxperfect.suite import h_certificate, r_pipeline_inputs


def _write(tmp_path, name, g):
    path = tmp_path / f"{name}.txt"
    path.write_text(dumps(g, name))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_analyze_s3(tmp_path, capsys):
    path = _write(tmp_path, "s3", build_named("S_n", [3]))
    code, out, _ = _run(capsys, ["analyze", path, "--json"])
    rep = json.loads(out)
    assert code == 0
    assert rep["box_perfect"]["value"] is False
    assert rep["verdicts"]["esp"]["value"] is False
    assert rep["parameters"] == {"alpha": 3, "omega": 3, "chi": 3, "chibar": 3}


def test_analyze_human_and_global_flag_position(tmp_path, capsys):
    path = _write(tmp_path, "c6", build_named("Cn", [6]))
    code, out, _ = _run(capsys, ["--json", "analyze", path])
    assert code == 0 and json.loads(out)["box_perfect"]["value"] is True
    code, out, _ = _run(capsys, ["analyze", path])
    assert code == 0 and "box" in out


def test_analyze_is_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "g", build_named("C10C5e_H"))
    outs = {_run(capsys, ["analyze", path, "--json"])[1] for _ in range(2)}
    assert len(outs) == 1
    code, out, _ = _run(capsys, ["analyze", path, "--json", "--timings"])
    assert "seconds" in out


def test_certify_modes(tmp_path, capsys):
    path = _write(tmp_path, "plus", build_named("barS3plus"))
    code, out, _ = _run(capsys, ["certify", path, "--json"])
    assert code == 0 and json.loads(out)["exit_code"] == 0
    c6 = _write(tmp_path, "c6", build_named("Cn", [6]))
    code, out, _ = _run(capsys, ["certify", c6, "--json"])
    assert code == 1 and json.loads(out)["method"] is None
    s3 = _write(tmp_path, "s3", build_named("S_n", [3]))
    code, out, _ = _run(capsys, ["certify", s3, "--mode", "falsify", "--json"])
    assert code == 0 and json.loads(out)["method"] == "falsify"


def test_certify_from_record(tmp_path, capsys):
    gp, us, vs, g2, _ = r_pipeline_inputs()["S_5"]
    g, rec = build_R_graph(gp, us, vs, g2)
    path = _write(tmp_path, "s5", g)
    rpath = tmp_path / "rec.json"
    rpath.write_text(json.dumps(rec.to_json()))
    code, out, _ = _run(capsys, ["certify", path, "--mode", "from-record", "--record", str(rpath)])
    assert code == 0
    assert "certified" in out


def test_certify_supplied_certificate(tmp_path, capsys):
    h, cert = h_certificate()
    path = _write(tmp_path, "h", h)
    cpath = tmp_path / "cert.json"
    cpath.write_text(json.dumps(cert.to_json()))
    code, out, _ = _run(capsys, ["certify", path, "--cert", str(cpath), "--json"])
    rep = json.loads(out)
    assert code == 0
    names = [c["name"] for c in rep["verification"]["checks"]]
    assert "integral_dual_gap" in names
    bad = cert.to_json()
    bad["value"] = "2/1"
    cpath.write_text(json.dumps(bad))
    code, out, _ = _run(capsys, ["certify", path, "--cert", str(cpath), "--json"])
    assert code == 1 and "objective" in json.loads(out)["verification"]["failed"]


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("graph g\nn 2\ne 0 5\n")
    code, _, err = _run(capsys, ["analyze", str(path)])
    assert code == 2 and "line 3:" in err
    code, out, _ = _run(capsys, ["analyze", str(path), "--json"])
    assert code == 2 and json.loads(out)["error"] == "ParseError"
    code, _, err = _run(capsys, ["analyze", str(tmp_path / "missing.txt")])
    assert code == 2


def test_bad_budget_file(tmp_path, capsys):
    path = _write(tmp_path, "k", build_named("Kn", [3]))
    bfile = tmp_path / "b.toml"
    bfile.write_text("[budgets]\nnot_a_budget = 3\n")
    code, _, err = _run(capsys, ["analyze", path, "--budget", str(bfile)])
    assert code == 2 and "not_a_budget" in err


def test_enumerate_and_construct(tmp_path, capsys):
    code, out, _ = _run(capsys, ["enumerate", "Q", "2"])
    assert code == 0 and out == ""
    code, out, _ = _run(capsys, ["enumerate", "Q", "3"])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 1 and json.loads(lines[0])["tags"] == ["Q2"]
    target = tmp_path / "s.jsonl"
    code, out, _ = _run(capsys, ["enumerate", "S", "7", "-o", str(target)])
    assert code == 0 and len(target.read_text().splitlines()) == 2
    code, out, _ = _run(capsys, ["enumerate", "Q", "9"])
    assert code == 2
    code, out, _ = _run(capsys, ["construct", "Cn", "5"])
    assert code == 0 and out.startswith("graph Cn_5\nn 5\n")
    code, out, _ = _run(capsys, ["construct", "Cn"])
    assert code == 2


def test_suite_subset(capsys):
    code, out, _ = _run(capsys, ["suite", "--only", "1", "3"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and all(ln.startswith("[PASS]") for ln in lines)


def test_complement_of_line_graph():
    k4 = build_named("Kn", [4])
    lg, _ = line_graph(Multigraph.from_graph(k4))
    assert is_complement_of_line_graph(complement(lg))
    assert is_complement_of_line_graph(build_named("S_n", [3]))
    # the claw is not a line graph, so its complement is not a complement of one
    assert not is_complement_of_line_graph(complement(build_named("Kmn", [1, 3])))


def test_analyze_reasons_for_bipartite():
    rep = analyze(build_named("Kmn", [2, 3]))
    assert rep["box_perfect"]["value"] is True
    assert rep["verdicts"]["tu"]["value"] is True
