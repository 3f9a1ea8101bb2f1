import csv
import json

import pytest
from schema_util import NAMES, _load, validate

import jsonschema

from robustasym.cli import main
from robustasym.graph import Graph, read_edge_list, write_edge_list


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def c6_file(tmp_path):
    path = tmp_path / "c6.txt"
    write_edge_list(Graph(6, [(i, (i + 1) % 6) for i in range(6)]), path)
    return path


def test_schemas_are_valid():
    for name in NAMES:
        jsonschema.Draft202012Validator.check_schema(_load(name))


def test_gen_examples(capsys, tmp_path):
    out_file = tmp_path / "a.txt"
    code, out, _ = run(capsys, "gen", "--model", "gnp", "--n", 10, "--p", 0, "--seed", 1, "--out", out_file)
    assert code == 0
    assert out_file.read_text() == "10 0\n"
    stats = json.loads(out)
    assert stats["n"] == 10 and stats["m"] == 0

    k10 = tmp_path / "k10.txt"
    code, out, _ = run(capsys, "gen", "--model", "gnpd", "--p", 0, "--d", 9, "--n", 10, "--out", k10)
    assert code == 0 and read_edge_list(k10).m == 45
    assert json.loads(out)["min_degree"] == 9

    code, _, err = run(capsys, "gen", "--model", "gnp", "--n", 10, "--p", 1.5, "--out", tmp_path / "x.txt")
    assert code == 4 and "p must lie" in err


def test_gen_byte_identical(capsys, tmp_path):
    paths = [tmp_path / f"g{i}.txt" for i in range(2)]
    for path in paths:
        run(capsys, "gen", "--model", "gnpd", "--n", 300, "--p", 0.02, "--seed", 5, "--aux", "--out", path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"# aux" in paths[0].read_bytes()


def test_usage_and_io_exit_codes(capsys, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["bogus"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["gen", "--n", "5"])
    assert err.value.code == 2
    code, _, _ = run(capsys, "profile", tmp_path / "missing.txt")
    assert code == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n")
    code, _, err = run(capsys, "profile", bad)
    assert code == 3 and "line 2" in err
    code, _, _ = run(capsys, "verify")
    assert code == 2


def test_profile_c6(capsys, tmp_path, c6_file):
    out_json = tmp_path / "p.json"
    code, out, _ = run(capsys, "profile", c6_file, "--out", out_json, "--delta", "1/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["overall_delta"] == {"num": 0, "den": 1}
    assert doc["certified"] is True and doc["verdict"] == "false"
    prof = json.loads(out_json.read_text())
    validate(prof, "profile.schema.json")
    k6 = next(e for e in prof["entries"] if e["k"] == 6)
    assert k6["delta_num"] == 0 and k6["exact"]


def test_profile_asymmetric_certified(capsys, tmp_path, asym6):
    path = tmp_path / "a.txt"
    write_edge_list(asym6, path)
    code, out, _ = run(capsys, "profile", path)
    doc = json.loads(out)
    assert doc["certified"] and doc["overall_delta"]["num"] > 0
    validate(doc["profile"], "profile.schema.json")


def test_profile_budget_zero(capsys, tmp_path):
    path = tmp_path / "g.txt"
    run(capsys, "gen", "--model", "gnp", "--n", 30, "--p", 0.3, "--seed", 2, "--out", path)
    code, out, _ = run(capsys, "profile", path, "--budget", 0, "--ks", "2,5,30", "--restarts", 2, "--steps", 500)
    doc = json.loads(out)
    assert code == 0 and doc["certified"] is False
    assert doc["heuristic_ks"] == [2, 5, 30]


def test_profile_empty_graph_domain_error(capsys, tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("4 0\n")
    assert run(capsys, "profile", path)[0] == 4


def test_profile_byte_identical(capsys, tmp_path):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "--model", "gnp", "--n", 40, "--p", 0.2, "--seed", 3, "--out", g)
    outs = []
    for i in range(2):
        path = tmp_path / f"p{i}.json"
        run(capsys, "profile", g, "--budget", 10**4, "--steps", 500, "--restarts", 2, "--out", path)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_delta2_and_dist(capsys, tmp_path, c6_file):
    code, out, _ = run(capsys, "delta2", c6_file)
    assert json.loads(out)["delta2"] == {"num": 1, "den": 1}  # no transposition fixes C6
    code, out, _ = run(capsys, "dist", c6_file, "--perm", "(0 1)")
    assert json.loads(out)["dist"] == 2
    other = tmp_path / "o.txt"
    write_edge_list(Graph(6, [(0, 1)]), other)
    code, out, _ = run(capsys, "dist", c6_file, other)
    assert json.loads(out)["dist"] == {"num": 5, "den": 2}


def test_verify_forest_and_k8(capsys, tmp_path):
    forest = tmp_path / "f.txt"
    write_edge_list(Graph(10, [(i, i + 1) for i in range(9)]), forest)
    code, out, _ = run(capsys, "verify", "--graph", forest, "--check", "density", "--limit", 10)
    assert code == 0
    validate(json.loads(out), "verify.schema.json")

    k8 = tmp_path / "k8.txt"
    write_edge_list(Graph(8, [(u, v) for u in range(8) for v in range(u + 1, 8)]), k8)
    code, out, _ = run(capsys, "verify", "--graph", k8, "--check", "density", "--limit", 8)
    doc = json.loads(out)
    assert code == 1 and doc["summary"]["failed"] == 1
    assert doc["reports"][0]["statistics"]["violator"] == list(range(8))


def test_verify_lemma1_sweep(capsys, tmp_path):
    out_file = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--lemma1-sweep", "--out", out_file)
    assert code == 0
    doc = json.loads(out_file.read_text())
    validate(doc, "verify.schema.json")
    assert doc["reports"][0]["verdict"] == "pass"
    assert json.loads(out)["summary"]["ok"] is True


def test_verify_statistical_checks(capsys):
    code, out, _ = run(
        capsys, "verify", "--check", "covered-edges", "--check", "lemma1", "--check", "edge-probability",
        "--n", 30, "--p", 0.2, "--k", 2, "--m-s", 3, "--e", "0-2", "--F", "0-1",
        "--trials", 2000, "--min-conditional", 200,
    )
    doc = json.loads(out)
    validate(doc, "verify.schema.json")
    assert code == 0, doc
    assert [r["verdict"] for r in doc["reports"]] == ["statistical-pass"] * 3
    for r in doc["reports"]:
        validate(r, "check_report.schema.json")
        assert r["samples"] and r["tolerance"]


def test_verify_inconclusive_is_a_warning(capsys):
    code, out, _ = run(
        capsys, "verify", "--check", "edge-probability", "--n", 100, "--p", 0.01, "--d", 1,
        "--F", "0-1,2-3,4-5", "--e", "6-7", "--min-conditional", 50, "--max-trials", 50,
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["inconclusive"] == 1 and doc["summary"]["warnings"]


def test_verify_graph_checks(capsys, tmp_path):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "--model", "gnpd", "--n", 400, "--p", 0.03, "--seed", 1, "--out", g)
    code, out, _ = run(
        capsys, "verify", "--graph", g, "--check", "avg-degree", "--check", "common-neighbors",
        "--check", "small-k-bound", "--p", 0.03, "--d", 12, "--k", 2, "--samples", 500,
        "--restarts", 2, "--steps", 500,
    )
    doc = json.loads(out)
    validate(doc, "verify.schema.json")
    assert [r["check"] for r in doc["reports"]] == ["avg_degree", "common_neighbors", "small_k_bound"]


# -- campaigns ------------------------------------------------------------------------


def _campaign(capsys, tmp_path, name, *extra):
    out_dir = tmp_path / name
    code, out, err = run(capsys, "campaign", "--out-dir", out_dir, *extra)
    return code, out_dir, json.loads(out) if out else None


def test_campaign_profile_small(capsys, tmp_path):
    seeds = ",".join(str(s) for s in range(1, 21))
    code, d, summary = _campaign(capsys, tmp_path, "c", "--n", 8, "--p", 0.5, "--seeds", seeds,
                                 "--tasks", "profile", "--quiet")
    assert code == 0
    validate(summary, "campaign_summary.schema.json")
    rows = list(csv.DictReader(open(d / "results.csv", newline="")))
    assert len(rows) == 20
    assert [int(r["seed"]) for r in rows] == list(range(1, 21))
    assert all(r["certified"] == "true" for r in rows)
    for s in range(1, 21):
        validate(json.loads((d / "profiles" / f"seed-{s}.json").read_text()), "profile.schema.json")
    assert summary["certified"] == 20


def _strip_runtime(text):
    lines = text.splitlines()
    header = lines[0].split(",")
    keep = [i for i, h in enumerate(header) if not h.startswith("runtime_")]
    return "\n".join(",".join(line.split(",")[i] for i in keep) for line in lines)


def test_campaign_deterministic_across_jobs(capsys, tmp_path):
    args = ("--n", 9, "--p", 0.4, "--seed-count", 6, "--master-seed", 3, "--tasks", "profile,delta2", "--quiet")
    _, a, _ = _campaign(capsys, tmp_path, "a", *args)
    _, b, _ = _campaign(capsys, tmp_path, "b", *args, "--jobs", 2)
    ta = (a / "results.csv").read_text()
    tb = (b / "results.csv").read_text()
    assert _strip_runtime(ta) == _strip_runtime(tb)
    assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()
    for f in sorted((a / "profiles").iterdir()):
        assert f.read_bytes() == (b / "profiles" / f.name).read_bytes()
    _, c, _ = _campaign(capsys, tmp_path, "c", *args, "--no-timings")
    _, e, _ = _campaign(capsys, tmp_path, "e", *args, "--no-timings")
    assert (c / "results.csv").read_bytes() == (e / "results.csv").read_bytes()
    assert b"\r" not in (c / "results.csv").read_bytes()


def test_campaign_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# campaign\nmodel=gnpd\nn=300\np=0.3\nseeds=1,2\ntasks=delta2,verify\nd=90\n")
    code, d, summary = _campaign(capsys, tmp_path, "o", "--config", cfg, "--n", 200, "--quiet")
    assert code == 0
    assert summary["config"]["n"] == 200 and summary["config"]["model"] == "gnpd"
    rows = list(csv.DictReader(open(d / "results.csv", newline="")))
    assert [r["n"] for r in rows] == ["200", "200"]
    assert all(r["delta2_num"] for r in rows)
    assert all(r["common_neighbors"] in ("pass", "fail") for r in rows)
    assert summary["pass_rates"]["small_set_density"]["total"] == 2
    assert len(json.loads((d / "reports" / "seed-1.json").read_text())) == 3


def test_campaign_errors_recorded_per_row(capsys, tmp_path):
    # p = 0 gives an empty graph for which delta is undefined
    code, d, summary = _campaign(capsys, tmp_path, "z", "--n", 6, "--p", 0, "--seeds", "1,2",
                                 "--tasks", "profile", "--quiet")
    assert code == 0 and summary["errors"] == 2
    rows = list(csv.DictReader(open(d / "results.csv", newline="")))
    assert all(r["error"].startswith("NormalizationError") for r in rows)


def test_campaign_bad_config(capsys, tmp_path):
    code, _, _ = _campaign(capsys, tmp_path, "x", "--tasks", "nope", "--quiet")
    assert code == 4
