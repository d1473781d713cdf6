"""End-to-end CLI runs: formats, exit codes, determinism, figures."""

import json
import math
import subprocess
import sys

import pytest

from hdx.complexes import SimplicialComplex, write_complex


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "hdx", *args],
                          capture_output=True, text=True, env=env)


def test_gen_lm_writes_mfl_and_counts(tmp_path):
    out = tmp_path / "lm.json"
    r = run_cli("gen", "--model", "lm", "--n", "20", "--d", "2",
                "--p", "0.3", "--seed", "7", "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert "dim 0: 20 cells" in r.stdout
    payload = json.loads(out.read_text())
    assert payload["n"] == 20
    # deterministic across reruns
    r2 = run_cli("gen", "--model", "lm", "--n", "20", "--d", "2",
                 "--p", "0.3", "--seed", "7", "--out", str(tmp_path / "b.json"))
    assert r2.returncode == 0
    assert (tmp_path / "b.json").read_bytes() == out.read_bytes()


def test_gen_y_divisibility_exit_2(tmp_path):
    r = run_cli("gen", "--model", "y", "--n", "7", "--d", "2", "--k", "2",
                "--out", str(tmp_path / "y.json"))
    assert r.returncode == 2
    assert "divide" in r.stderr


def test_gen_w_reports_uncovered(tmp_path):
    out = tmp_path / "w.json"
    r = run_cli("gen", "--model", "w", "--n", "15", "--d", "2", "--k", "4",
                "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert out.exists()
    assert r.stdout.count("uncovered (d-1)-cells") == 4


def test_gen_missing_parameter_exit_2(tmp_path):
    r = run_cli("gen", "--model", "lm", "--n", "10", "--d", "2",
                "--out", str(tmp_path / "x.json"))
    assert r.returncode == 2


def test_gen_w_abort_exit_3(tmp_path):
    r = run_cli("gen", "--model", "w", "--n", "5", "--d", "1", "--k", "1",
                "--delta0", "1.5", "--out", str(tmp_path / "w.json"))
    assert r.returncode == 3
    assert "abort" in r.stderr.lower()


def test_sweep_dump_complexes(tmp_path):
    out = tmp_path / "s.csv"
    dump = tmp_path / "dump"
    r = run_cli("sweep", "--model", "er", "--n", "8", "--grid", "0.2,0.7",
                "--trials", "3", "--seed", "4", "--out", str(out),
                "--dump-complexes", str(dump))
    assert r.returncode == 0, r.stderr
    files = sorted(p.name for p in dump.iterdir())
    assert files == [f"er-g{g}-t{t}.json" for g in (0, 1) for t in (0, 1, 2)]
    payload = json.loads((dump / "er-g0-t0.json").read_text())
    assert payload["n"] == 8


def test_analyze_complete_complex(tmp_path):
    src = tmp_path / "full.json"
    write_complex(SimplicialComplex.complete(4, 2), src)
    out = tmp_path / "report.json"
    r = run_cli("analyze", str(src), "--out", str(out))
    assert r.returncode == 0, r.stderr
    rep = json.loads(out.read_text())
    assert rep["spectral"]["gaps"][1] == pytest.approx(2.0, abs=1e-9)
    assert rep["f2"]["expansion"][0]["h"] == "4/3"
    assert rep["f2"]["expansion"][0]["certified"] is True
    assert rep["garland"]["holds"] is True


def test_analyze_heawood_ramanujan(tmp_path):
    from hdx.spectral import heawood_graph
    src = tmp_path / "heawood.json"
    write_complex(heawood_graph(), src)
    r = run_cli("analyze", str(src))
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    ram = rep["spectral"]["graph"]["ramanujan"]
    assert ram["is_ramanujan"] is True
    assert ram["mu"] == pytest.approx(math.sqrt(2), abs=1e-9)


def test_analyze_require_exact_exit_4(tmp_path):
    src = tmp_path / "k9.json"
    write_complex(SimplicialComplex.complete(9, 1), src)
    r = run_cli("analyze", str(src), "--cap", "8", "--require-exact")
    assert r.returncode == 4
    r2 = run_cli("analyze", str(src), "--cap", "8")
    assert r2.returncode == 0
    rep = json.loads(r2.stdout)
    assert rep["f2"]["expansion"][0]["certified"] is False


def test_analyze_csv_format(tmp_path):
    src = tmp_path / "full.json"
    write_complex(SimplicialComplex.complete(4, 2), src)
    r = run_cli("analyze", str(src), "--format", "csv")
    assert r.returncode == 0
    lines = r.stdout.strip().split("\n")
    assert lines[0].startswith("n_vertices,dim,pure")
    assert len(lines) == 2


def test_sweep_trials_one_gives_01_probabilities(tmp_path):
    out = tmp_path / "sweep.csv"
    r = run_cli("sweep", "--model", "er", "--n", "12", "--grid", "0.05,0.9",
                "--trials", "1", "--seed", "3", "--out", str(out))
    assert r.returncode == 0, r.stderr
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "grid_value,successes,trials,p_hat,ci_low,ci_high"
    for line in lines[1:]:
        p_hat = float(line.split(",")[3])
        assert p_hat in (0.0, 1.0)


def test_sweep_svg_figure(tmp_path):
    out = tmp_path / "sweep.csv"
    fig = tmp_path / "sweep.svg"
    r = run_cli("sweep", "--model", "er", "--n", "14", "--grid",
                "0.05,0.2,0.5", "--trials", "4", "--seed", "1",
                "--out", str(out), "--svg", str(fig))
    assert r.returncode == 0, r.stderr
    assert fig.exists()
    head = fig.read_text()[:400]
    assert "<svg" in head


def test_overlap_single_triangle(tmp_path):
    src = tmp_path / "tri.json"
    write_complex(SimplicialComplex.complete(3, 2), src)
    r = run_cli("overlap", str(src), "--resolution", "16", "--seed", "2")
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["overlap"]["fraction"] == 1.0


def test_overlap_placement_dimension_mismatch(tmp_path):
    src = tmp_path / "tri.json"
    write_complex(SimplicialComplex.complete(3, 2), src)
    placement = tmp_path / "pts.csv"
    placement.write_text("0,0.0,0.0,0.0\n1,1.0,0.0,0.0\n2,0.0,1.0,0.0\n")
    r = run_cli("overlap", str(src), "--placement", str(placement))
    assert r.returncode == 2


def test_overlap_random_points_complete_complex(tmp_path):
    r = run_cli("overlap", "--random-points", "12", "--d", "2",
                "--resolution", "32", "--seed", "9")
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["overlap"]["total"] == math.comb(12, 3)
    assert rep["overlap"]["fraction"] > 0


def test_overlap_requires_input_or_random_points():
    r = run_cli("overlap")
    assert r.returncode == 2


def test_hdx_seed_env_override(tmp_path):
    import os
    env = dict(os.environ, HDX_SEED="12345")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    r1 = run_cli("gen", "--model", "er", "--n", "15", "--p", "0.3",
                 "--out", str(a), env=env)
    r2 = run_cli("gen", "--model", "er", "--n", "15", "--p", "0.3",
                 "--seed", "12345", "--out", str(b))
    assert r1.returncode == r2.returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_input_file_exit_2():
    r = run_cli("analyze", "/nonexistent/file.json")
    assert r.returncode == 2
