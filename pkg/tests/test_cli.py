"""End-to-end checks of the command line interface (in-process)."""

import json

import pytest

import netctrl.cli as cli
from netctrl import GenerationError, load_edge_list


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_writes_loadable_edge_list(tmp_path, capsys):
    out = tmp_path / "g.edges"
    code, _, _ = run(capsys, "generate", "--er", "30", "40", "--seed", "2", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert "# subcommand=generate" in text
    assert "# nodes=30" in text
    g = load_edge_list(text)
    assert g.node_count == 30 and g.edge_count == 40


def test_generate_requires_out_and_generator(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--er", "10", "15")
    assert code == 2
    assert json.loads(err.splitlines()[0])["error"] == "usage"
    code, _, _ = run(capsys, "generate", "--seed", "1", "--out", str(tmp_path / "x"))
    assert code == 2


def test_stats_json_on_stdout(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "25", "35", "--seed", "3", "--out", str(src))
    code, out, _ = run(capsys, "stats", "--input", str(src))
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 25
    assert payload["l"] == 35
    assert payload["meta"]["subcommand"] == "stats"


def test_stats_csv_file(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "25", "35", "--seed", "3", "--out", str(src))
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "stats", "--input", str(src), "--out", str(out))
    assert code == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "n,l,k,r,c"
    assert lines[1].startswith("25,35,2.8,")


def test_drivers_csv_with_info_header(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "30", "45", "--seed", "4", "--out", str(src))
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "drivers", "--input", str(src), "--seed", "5", "--out", str(out))
    assert code == 0
    text = out.read_text()
    info_line = next(l for l in text.splitlines() if l.startswith("# info="))
    info = json.loads(info_line.split("=", 1)[1])
    ids = [int(l) for l in text.splitlines() if not l.startswith("#") and l != "node_id"]
    assert len(ids) == round(info["n_d"] * 30)
    assert info["matching_size"] + len(ids) == 30


def test_cactus_json_partition(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "40", "60", "--seed", "6", "--out", str(src))
    code, out, _ = run(capsys, "cactus", "--input", str(src), "--seed", "7")
    assert code == 0
    payload = json.loads(out)
    assert sum(payload["territory_sizes"].values()) == 40
    for driver, size in payload["territory_sizes"].items():
        assert payload["max_sizes"][driver] >= size
    assert len(payload["cycle_owner"]) == len(payload["cycles"])


def test_estimate_csv_and_sidecar(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "30", "45", "--seed", "8", "--out", str(src))
    out = tmp_path / "est.csv"
    code, _, _ = run(capsys, "estimate", "--input", str(src), "--seed", "9", "--out", str(out))
    assert code == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "node,k,r,c,mean_territory"
    assert len(rows) == 31
    sidecar = json.loads((tmp_path / "est.csv.json").read_text())
    assert sidecar["converged"] is True
    assert sidecar["trace"][0][0] == 1


def test_estimate_jobs_byte_identical(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "30", "45", "--seed", "8", "--out", str(src))
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(capsys, "estimate", "--input", str(src), "--seed", "9", "--out", str(a))
    run(capsys, "estimate", "--input", str(src), "--seed", "9", "--jobs", "4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv.json").read_bytes() == (tmp_path / "b.csv.json").read_bytes()


def test_dim_json(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "20", "30", "--seed", "10", "--out", str(src))
    code, out, _ = run(capsys, "dim", "--input", str(src), "--drivers", "0,3,7")
    assert code == 0
    payload = json.loads(out)
    assert 3 <= payload["n_b_abs"] <= payload["reachable_count"] <= 20
    code, _, _ = run(capsys, "dim", "--input", str(src))
    assert code == 2


def test_rank_csv(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "20", "30", "--seed", "11", "--out", str(src))
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "rank", "--input", str(src), "--scheme", "indegree",
                     "--out", str(out))
    assert code == 0
    rows = [l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == ["rank", "node", "score"]
    scores = [int(r[2]) for r in rows[1:]]
    assert scores == sorted(scores)
    code, _, _ = run(capsys, "rank", "--input", str(src), "--scheme", "bogus")
    assert code == 2


def test_curve_csv_all_schemes(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "25", "40", "--seed", "12", "--out", str(src))
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "curve", "--input", str(src), "--grid-points", "4",
                     "--trials", "2", "--seed", "13", "--out", str(out))
    assert code == 0
    rows = [l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == ["scheme", "n_c", "n_b", "stderr"]
    schemes = {r[0] for r in rows[1:]}
    assert schemes == {"contribution", "capacity", "range", "indegree", "outdegree", "random"}
    for r in rows[1:]:
        assert (r[3] == "") == (r[0] != "random")


def test_ensemble_json_summary(tmp_path, capsys):
    code, out, _ = run(capsys, "ensemble", "--er", "25", "40", "--runs", "4",
                       "--grid-points", "4", "--trials", "2", "--seed", "14")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["runs"]) == 4
    assert payload["summary"]["runs_used"] == 4
    assert payload["meta"]["test"] == "sign"


def test_randomize_preserves_degrees(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "40", "70", "--seed", "15", "--out", str(src))
    out = tmp_path / "r.edges"
    code, _, _ = run(capsys, "randomize", "--input", str(src), "--seed", "16",
                     "--out", str(out))
    assert code == 0
    g = load_edge_list(src.read_text())
    r = load_edge_list(out.read_text())
    assert g.out_degrees() == r.out_degrees()
    assert g.in_degrees() == r.in_degrees()
    assert g.edges != r.edges


def test_exit_code_unreadable_input(capsys):
    code, _, err = run(capsys, "stats", "--input", "/nonexistent/f.edges")
    assert code == 3
    assert json.loads(err.splitlines()[0])["error"] == "input-error"


def test_exit_code_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("0 1\nthree tokens here\n")
    code, _, err = run(capsys, "stats", "--input", str(bad))
    assert code == 3
    assert json.loads(err.splitlines()[0])["error"] == "parse-error"


def test_exit_code_invalid_argument(capsys):
    code, _, err = run(capsys, "stats", "--er", "10", "200")
    assert code == 2
    assert json.loads(err.splitlines()[0])["error"] == "invalid-argument"


def test_exit_code_generation_failure(tmp_path, capsys, monkeypatch):
    def boom(*a, **kw):
        raise GenerationError("rejection budget exhausted")

    monkeypatch.setattr(cli, "generate_scale_free", boom)
    code, _, err = run(capsys, "generate", "--sf", "10", "20",
                       "--out", str(tmp_path / "x.edges"))
    assert code == 4
    assert json.loads(err.splitlines()[0])["error"] == "generation-failure"


def test_exit_code_unknown_subcommand(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 2
    assert json.loads(err.splitlines()[0])["error"] == "usage"


def test_help_and_version_exit_zero(capsys):
    assert cli.main(["--version"]) == 0
    assert cli.main(["estimate", "--help"]) == 0


def test_seed_env_var_default(tmp_path, capsys, monkeypatch):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "30", "45", "--seed", "77", "--out", str(src))
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(capsys, "drivers", "--input", str(src), "--seed", "77", "--out", str(a))
    monkeypatch.setenv("NETCTRL_SEED", "77")
    run(capsys, "drivers", "--input", str(src), "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_config_file_supplies_defaults_but_flags_win(tmp_path, capsys):
    src = tmp_path / "g.edges"
    run(capsys, "generate", "--er", "30", "45", "--seed", "18", "--out", str(src))
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 18\nt-min = 120\n")
    a = tmp_path / "a.csv"
    run(capsys, "estimate", "--input", str(src), "--config", str(cfg), "--out", str(a))
    meta = dict(
        l.removeprefix("# ").split("=", 1)
        for l in a.read_text().splitlines() if l.startswith("# ")
    )
    assert meta["seed"] == "18"
    assert meta["t_min"] == "120"
    b = tmp_path / "b.csv"
    run(capsys, "estimate", "--input", str(src), "--config", str(cfg),
        "--t-min", "150", "--out", str(b))
    meta_b = dict(
        l.removeprefix("# ").split("=", 1)
        for l in b.read_text().splitlines() if l.startswith("# ")
    )
    assert meta_b["t_min"] == "150"


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("frobnicate = 1\n")
    code, _, err = run(capsys, "stats", "--er", "10", "15", "--config", str(cfg))
    assert code == 2
    assert "frobnicate" in json.loads(err.splitlines()[0])["message"]


def test_rerun_is_byte_identical(tmp_path, capsys):
    for i in range(2):
        run(capsys, "generate", "--er", "30", "45", "--seed", "19",
            "--out", str(tmp_path / f"g{i}.edges"))
    assert (tmp_path / "g0.edges").read_bytes() == (tmp_path / "g1.edges").read_bytes()


def test_pajek_input(tmp_path, capsys):
    net = tmp_path / "g.net"
    net.write_text('*Vertices 3\n1 "a"\n2 "b"\n3 "c"\n*Arcs\n1 2\n2 3\n')
    code, out, _ = run(capsys, "stats", "--pajek", str(net))
    assert code == 0
    assert json.loads(out)["l"] == 2
