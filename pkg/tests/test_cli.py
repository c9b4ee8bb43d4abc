"""Command-line interface: outputs, determinism, exit codes."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lmg.cli import main
from lmg.reference import N7_ENERGY


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_n7(capsys):
    code, out, err = invoke(capsys, "spectrum", "--n", "7", "--v", "0.75", "--w", "0.5")
    assert code == 0 and err == ""
    payload = json.loads(out)
    levels = payload["levels"]
    assert len(levels) == 8
    assert levels[0]["omega_exact"] == pytest.approx(N7_ENERGY, abs=1e-9)
    assert levels[0]["omega_bethe"] == pytest.approx(N7_ENERGY, abs=1e-9)
    assert [lvl["index"] for lvl in levels] == list(range(1, 9))


def test_spectrum_csv(capsys):
    code, out, _ = invoke(capsys, "spectrum", "--n", "3", "--v", "1.0", "--w", "0.2",
                          "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5  # header + 4 levels
    assert "omega_exact" in lines[0]


def test_bethe_n7_ground_sector(capsys):
    code, out, _ = invoke(capsys, "bethe", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--sector", "1,0")
    assert code == 0
    payload = json.loads(out)
    ground = payload["solutions"][0]
    np.testing.assert_allclose(ground["pairons"], (0.701066, 1.33363, 1.94591), atol=1e-5)


def test_state_and_angles_consistency(capsys):
    code, out, _ = invoke(capsys, "state", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--index", "1")
    assert code == 0
    state = json.loads(out)
    assert state["sector"] == {"m": 3, "nu_a": 1, "nu_b": 0}
    assert state["occupations"][0] == [7, 0]
    amps = np.array(state["amplitudes"])
    assert abs(np.linalg.norm(amps) - 1) < 1e-12

    code, out, _ = invoke(capsys, "angles", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--index", "1", "--depth", "linear")
    assert code == 0
    angles = json.loads(out)
    # the angles prepare the canonical-sign eigenstate: check via the product form
    thetas = angles["thetas"]
    reached = [math.cos(thetas[0] / 2)]
    assert abs(abs(reached[0]) - abs(amps[3])) < 1e-12


def test_circuit_export_and_simulate_round_trip(tmp_path, capsys):
    path = tmp_path / "circ.json"
    code, out, _ = invoke(capsys, "circuit", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--index", "1", "--depth", "log", "--out", str(path))
    assert code == 0
    code, out, _ = invoke(capsys, "simulate", "--circuit", str(path), "--report-energy",
                          "--n", "7", "--v", "0.75", "--w", "0.5", "--sector", "1,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["leakage"] < 1e-12
    assert payload["energy"] == pytest.approx(N7_ENERGY, abs=1e-9)


def test_circuit_qasm_output(capsys):
    code, out, _ = invoke(capsys, "circuit", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--index", "1", "--depth", "log", "--format", "qasm")
    assert code == 0
    assert out.startswith("OPENQASM 3;")
    assert out.count("ctrl @ ry(") == 3
    assert out.count("\ncx ") == 3


def test_vqe_command(capsys):
    code, out, _ = invoke(capsys, "vqe", "--n", "4", "--v", "1.0", "--w", "0.3",
                          "--seed", "5", "--restarts", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["estimator"] == "exact"
    assert payload["abs_error"] < 1e-6
    assert payload["sector"] == {"m": 2, "nu_a": 0, "nu_b": 0}


def test_benchmark_command(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "benchmark", "--n", "3", "--v", "0.9", "--w", "0.2",
                          "--out", str(out_path))
    assert code == 0
    report = json.loads(out_path.read_text())
    rows = [row for sector in report["sectors"] for row in sector["rows"]]
    assert len(rows) == 4
    assert all(row["fidelity_linear"] >= 1 - 1e-10 for row in rows)


def test_byte_identical_output(capsys):
    args = ("spectrum", "--n", "6", "--v", "1.1", "--w", "0.4")
    _, first, _ = invoke(capsys, *args)
    _, second, _ = invoke(capsys, *args)
    assert first == second
    args = ("vqe", "--n", "4", "--v", "1.0", "--w", "0.0", "--seed", "3", "--restarts", "2")
    _, first, _ = invoke(capsys, *args)
    _, second, _ = invoke(capsys, *args)
    assert first == second


def test_computation_failure_exit_code(capsys):
    # rational instance: the pair-energy solver must refuse with a JSON error
    code, out, err = invoke(capsys, "bethe", "--n", "4", "--v", "1.0", "--w", "1.0",
                            "--sector", "0,0")
    assert code == 1
    assert out == ""
    payload = json.loads(err)
    assert payload["error"]["type"] == "UnsupportedRegimeError"


def test_invalid_sector_is_computation_error(capsys):
    code, _, err = invoke(capsys, "bethe", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--sector", "0,0")
    assert code == 1
    assert "InvalidArgumentError" in err


def test_bad_flags_exit_two():
    proc = subprocess.run(
        [sys.executable, "-m", "lmg.cli", "spectrum", "--n", "7"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "lmg.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "lmg" in proc.stdout


def test_verify_list_and_single_check(capsys):
    code, out, _ = invoke(capsys, "verify", "--list")
    assert code == 0
    assert "n7-pairons" in out
    code, out, _ = invoke(capsys, "verify", "--only", "n7-pairons", "n7-angles")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("ok ")) == 2
    assert "2/2 checks passed" in out


def test_spectrum_rational_instance(capsys):
    code, out, _ = invoke(capsys, "spectrum", "--n", "4", "--v", "1.0", "--w", "1.0")
    assert code == 0
    levels = json.loads(out)["levels"]
    assert len(levels) == 5
    assert all("omega_bethe" not in lvl for lvl in levels)


def test_angles_csv(capsys):
    code, out, _ = invoke(capsys, "angles", "--n", "7", "--v", "0.75", "--w", "0.5",
                          "--index", "1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "j,theta"
    assert len(lines) == 4


def test_simulate_requires_sector_for_odd_particles(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = invoke(capsys, "circuit", "--n", "7", "--v", "0.75", "--w", "0.5",
                        "--index", "1", "--out", str(path))
    assert code == 0
    code, _, err = invoke(capsys, "simulate", "--circuit", str(path), "--report-energy",
                          "--n", "7", "--v", "0.75", "--w", "0.5")
    assert code == 1
    assert "sector" in err
