import json
import os
import subprocess
import sys

import pytest

from qmaxemu.cli import main

TRIANGLE = "3\n1 2 1.0\n2 3 1.0\n1 3 1.0\n"
SINGLE_EDGE = "2\n1 2 1.0\n"


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.graph"
    path.write_text(TRIANGLE)
    return str(path)


@pytest.fixture
def edge_file(tmp_path):
    path = tmp_path / "edge.graph"
    path.write_text(SINGLE_EDGE)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_emulate_zero_parameters(capsys, triangle_file):
    code, out = run_cli(capsys, "emulate", "--graph", triangle_file,
                        "--gamma", "0", "--beta", "0", "--seed", "1")
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == "1"
    assert report["command"] == "emulate"
    assert report["f_p"] == pytest.approx(1.5, abs=1e-6)
    assert report["graph"] == {"vertices": 3, "edges": 3, "total_weight": 3.0}
    assert report["cycles"]["total"] == 2 * (8 + 19)
    assert report["overflow"] is False
    assert report["wall_clock_s"] == 0.0  # seeded: timing suppressed


def test_emulate_engines_agree(capsys, triangle_file):
    values = {}
    for engine in ("pipeline", "dense", "decomposed-f64"):
        code, out = run_cli(capsys, "emulate", "--graph", triangle_file,
                            "--gamma", "0.7", "--beta", "0.6", "--engine", engine)
        assert code == 0
        values[engine] = json.loads(out)["f_p"]
    assert abs(values["pipeline"] - values["dense"]) <= 5e-3
    assert abs(values["decomposed-f64"] - values["dense"]) <= 1e-9


def test_emulate_missing_beta_exits_2(triangle_file):
    with pytest.raises(SystemExit) as err:
        main(["emulate", "--graph", triangle_file, "--gamma", "0.1"])
    assert err.value.code == 2


def test_emulate_bad_graph_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("2\n1 5 1.0\n")
    code = main(["emulate", "--graph", str(bad), "--gamma", "0", "--beta", "0"])
    assert code == 2
    assert "out of range" in capsys.readouterr().err


def test_emulate_mismatched_params_exits_2(capsys, triangle_file):
    code = main(["emulate", "--graph", triangle_file,
                 "--gamma", "0.1,0.2", "--beta", "0.1"])
    assert code == 2


def test_emulate_fixed_point_flag(capsys, triangle_file):
    code, out = run_cli(capsys, "emulate", "--graph", triangle_file,
                        "--gamma", "0.3", "--beta", "0.2",
                        "--fixed-point", "q6.18")
    assert code == 0
    assert json.loads(out)["fixed_point"] == "q6.18"
    code = main(["emulate", "--graph", triangle_file, "--gamma", "0",
                 "--beta", "0", "--fixed-point", "bogus"])
    assert code == 2


def test_emulate_dump_state_and_diagonals(capsys, triangle_file, tmp_path):
    dump = tmp_path / "state.json"
    code, out = run_cli(capsys, "emulate", "--graph", triangle_file,
                        "--gamma", "0.4", "--beta", "0.3",
                        "--dump-state", str(dump), "--dump-diagonals")
    assert code == 0
    report = json.loads(out)
    assert report["cost_diagonal"] == [0.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0, 0.0]
    assert report["mixer_exponents"] == [-3, -1, -1, 1, -1, 1, 1, 3]
    state = json.loads(dump.read_text())
    assert state["n"] == 3
    assert len(state["amps"]) == 8


def test_emulate_trace_file(capsys, triangle_file, tmp_path):
    trace = tmp_path / "trace.jsonl"
    code, _ = run_cli(capsys, "emulate", "--graph", triangle_file,
                      "--gamma", "0.4", "--beta", "0.3", "--trace", str(trace))
    assert code == 0
    lines = trace.read_text().splitlines()
    assert len(lines) == 2 * (8 + 19)
    record = json.loads(lines[0])
    assert record["clock"] == 0 and record["order"] == "cost"


def test_strict_overflow_exits_3(capsys, tmp_path):
    k9 = tmp_path / "k9.graph"
    lines = ["9"] + [f"{i} {j} 1.0" for i in range(1, 10) for j in range(i + 1, 10)]
    k9.write_text("\n".join(lines) + "\n")
    argv = ["emulate", "--graph", str(k9), "--layers", "8",
            "--gamma", ",".join(["0.7"] * 8), "--beta", ",".join(["0.6"] * 8),
            "--strict"]
    code = main(argv)
    assert code == 3
    report = json.loads(capsys.readouterr().out)
    assert report["overflow"] is True


def test_solve_single_edge(capsys, edge_file):
    code, out = run_cli(capsys, "solve", "--graph", edge_file, "--layers", "1",
                        "--engine", "decomposed-f64", "--seed", "3",
                        "--restarts", "4", "--max-evals", "400")
    assert code == 0
    report = json.loads(out)
    assert report["brute_force_max"] == 1.0
    assert report["ratio"] >= 0.99
    assert report["best_bitstring"] in ("01", "10")
    assert {"f_p", "best_cut", "evaluations", "converged"} <= set(report)


def test_solve_pipeline_report_schema(capsys, tmp_path):
    # f_p is an average, so the modal bitstring's cut may sit on either side
    # of it; the report simply carries both values
    rng_lines = ["6", "1 2 1.0", "2 3 1.0", "3 4 1.0", "4 5 1.0", "5 6 1.0",
                 "1 4 1.0", "2 6 1.0"]
    graph = tmp_path / "n6.graph"
    graph.write_text("\n".join(rng_lines) + "\n")
    code, out = run_cli(capsys, "solve", "--graph", str(graph), "--layers", "1",
                        "--engine", "pipeline", "--seed", "2",
                        "--restarts", "1", "--max-evals", "40")
    assert code == 0
    report = json.loads(out)
    assert {"f_p", "best_bitstring", "best_cut", "cycles", "brute_force_max"} <= set(report)
    assert report["engine"] == "pipeline"


def test_solve_grid_optimizer(capsys, edge_file):
    code, out = run_cli(capsys, "solve", "--graph", edge_file, "--layers", "1",
                        "--engine", "decomposed-f64", "--optimizer", "grid")
    assert code == 0
    assert json.loads(out)["f_p"] >= 0.99


def test_oracle(capsys, triangle_file):
    code, out = run_cli(capsys, "oracle", "--graph", triangle_file)
    assert code == 0
    report = json.loads(out)
    assert report["max_cut"] == 2.0
    assert report["maximizer_count"] == 6
    assert "000" not in report["maximizers"]


def test_bench_cycle_columns(capsys):
    code, out = run_cli(capsys, "bench", "--qubits", "2..5", "--layers", "2",
                        "--engine", "pipeline,dense", "--seed", "0")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    pipeline = {r["n"]: r for r in rows if r["engine"] == "pipeline"}
    dense = {r["n"]: r for r in rows if r["engine"] == "dense"}
    for n in range(2, 6):
        n_states = 1 << n
        assert pipeline[n]["cycles_total"] == 2 * 2 * (n_states + 19)
        assert pipeline[n]["mults"] == 2 * 2 * n_states
        assert dense[n]["mults"] == 2 * 2 * n_states * n_states
        assert dense[n]["mults"] // pipeline[n]["mults"] == n_states


def test_bench_csv_format(capsys):
    code, out = run_cli(capsys, "bench", "--qubits", "3", "--layers", "1",
                        "--engine", "pipeline", "--format", "csv", "--seed", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("n,engine,layers")
    assert lines[1].split(",")[0] == "3"


def test_bench_skips_dense_beyond_guard(capsys):
    # dense guard is 12 qubits; 13 must be skipped without failing
    code, out = run_cli(capsys, "bench", "--qubits", "13", "--layers", "1",
                        "--engine", "dense", "--seed", "0")
    assert code == 0
    assert out.strip() == ""


def test_report_json_roundtrip(capsys, triangle_file):
    _, out = run_cli(capsys, "emulate", "--graph", triangle_file,
                     "--gamma", "0.7", "--beta", "0.6", "--seed", "5")
    parsed = json.loads(out)
    assert json.dumps(parsed) == out.strip()


def _solve_bytes(triangle_file, threads):
    env = dict(os.environ)
    env["OMP_NUM_THREADS"] = str(threads)
    env["OPENBLAS_NUM_THREADS"] = str(threads)
    result = subprocess.run(
        [sys.executable, "-m", "qmaxemu", "solve", "--graph", triangle_file,
         "--layers", "1", "--seed", "7", "--restarts", "2", "--max-evals", "80"],
        capture_output=True, env=env, check=True)
    return result.stdout


def test_seeded_output_is_byte_identical(triangle_file):
    runs = [_solve_bytes(triangle_file, threads) for threads in (1, 1, 4)]
    assert runs[0] == runs[1] == runs[2]
