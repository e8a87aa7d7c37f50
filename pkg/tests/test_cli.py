import csv
import io
import json

import pytest

from spinbus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_tables_red_rb_matches_reference(capsys):
    code, out, _ = run(capsys, "tables", "--lattice", "red", "--species", "Rb")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 1
    row = rows[0]
    assert float(row["V_max_MHz"]) == pytest.approx(364, rel=0.03)
    assert float(row["nu_osc_kHz"]) == pytest.approx(172, rel=0.03)
    assert float(row["a_osc_a0"]) == pytest.approx(347, rel=0.03)


def test_tables_blue_has_all_species(capsys):
    code, out, _ = run(capsys, "tables", "--lattice", "blue")
    assert code == 0
    rows = parse_csv(out)
    assert [r["species"] for r in rows] == ["Li", "Na", "K", "Rb", "Cs"]
    assert float(rows[3]["gamma_eff_Hz"]) == pytest.approx(0.6, rel=0.1)


def test_tables_unknown_species_exit_1(capsys):
    code, _, err = run(capsys, "tables", "--lattice", "red", "--species", "Xx")
    assert code == 1
    assert "Xx" in err


def test_tables_json_and_determinism(capsys):
    code, out1, _ = run(capsys, "tables", "--lattice", "red", "--format", "json")
    assert code == 0
    doc = json.loads(out1)
    assert set(doc) == {"Li", "Na", "K", "Rb", "Cs"}
    _, out2, _ = run(capsys, "tables", "--lattice", "red", "--format", "json")
    assert out1 == out2


def test_scan_two_points(capsys):
    code, out, _ = run(capsys, "scan", "--z0-min", "800", "--z0-max", "1200", "--points", "2")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 2
    assert list(rows[0]) == [
        "z0_a0", "J_exchange_Hz", "J_dipolar_Hz", "J_total_Hz", "method", "stderr_Hz", "J_pointdipole_Hz",
    ]
    # dipolar approaches the point-dipole reference as z0 grows
    r = rows[1]
    assert float(r["J_dipolar_Hz"]) / float(r["J_pointdipole_Hz"]) > 0.5


def test_scan_validates_range(capsys):
    code, _, err = run(capsys, "scan", "--z0-min", "-5", "--z0-max", "100", "--points", "3")
    assert code == 1


def test_scan_mc_byte_deterministic(capsys):
    args = ["scan", "--z0-min", "700", "--z0-max", "900", "--points", "2",
            "--mode", "mc", "--samples", "50000", "--seed", "3"]
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2 and "monte_carlo" in out1


def test_scan_mc_agrees_with_quadrature(capsys):
    args = ["scan", "--z0-min", "600", "--z0-max", "900", "--points", "2"]
    code, out_q, _ = run(capsys, *args)
    code2, out_m, _ = run(capsys, *args, "--mode", "mc", "--samples", "200000", "--seed", "11")
    assert code == 0 and code2 == 0
    for rq, rm in zip(parse_csv(out_q), parse_csv(out_m)):
        assert abs(float(rm["J_dipolar_Hz"]) - float(rq["J_dipolar_Hz"])) <= 3 * float(rm["stderr_Hz"])


def test_gatecheck_passes_and_reports(capsys, tmp_path):
    out_path = tmp_path / "gates.json"
    code, _, _ = run(capsys, "gatecheck", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["pass"] is True
    assert {r["gate"] for r in doc["identities"]} >= {
        "heisenberg_swap", "ising_phase_gate", "xor_gate", "swap_from_xors",
    }
    for r in doc["identities"]:
        assert r["fidelity"] >= 1 - 1e-9
    fids = [r["fidelity"] for r in doc["rwa_scan"]]
    assert fids[0] >= 0.999
    assert all(b <= a + 1e-3 for a, b in zip(fids, fids[1:]))


def test_gatecheck_impossible_tolerance_fails_cleanly(capsys):
    code, _, err = run(capsys, "gatecheck", "--tolerance", "2.0")
    assert code == 2
    assert "threshold" in err


def test_transport_command_meets_budget(capsys):
    code, out, _ = run(capsys, "transport", "--budget", "1e-4")
    assert code == 0
    doc = json.loads(out)
    assert doc["p_exact"] <= 1e-4 * (1 + 1e-9)
    assert doc["adiabatic"] is True
    assert set(doc) >= {"distance", "tau", "transit_time", "p_first_order", "p_exact", "phase"}


def test_compile_then_simulate_round_trip(capsys, tmp_path):
    circuit = tmp_path / "circuit.txt"
    circuit.write_text("# two-gate demo\nXOR q0 q1\nH q0\n")
    schedule_path = tmp_path / "schedule.json"
    code, _, _ = run(capsys, "compile", str(circuit), "--out", str(schedule_path))
    assert code == 0
    doc = json.loads(schedule_path.read_text())
    assert doc["format"] == "spinbus-schedule/1"
    assert doc["budget"]["ratio"] > 0

    code2, out, _ = run(capsys, "simulate", str(schedule_path))
    assert code2 == 0
    rep = json.loads(out)
    assert rep["fidelity"] >= 1 - 1e-9
    assert rep["matches"] is True

    # re-reading reproduces the same fidelity, byte for byte
    code3, out2, _ = run(capsys, "simulate", str(schedule_path))
    assert out == out2


def test_compile_malformed_circuit_names_line(capsys, tmp_path):
    circuit = tmp_path / "bad.txt"
    circuit.write_text("XOR q0 q1\nWOBBLE q0\n")
    code, _, err = run(capsys, "compile", str(circuit))
    assert code == 1
    assert "line 2" in err


def test_config_file_flows_through(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "species": {"Fr": {"mass_amu": 223.0, "alpha0_a03": 317.8, "lambda0_nm": 718.0}},
        "geometry": {"z0_a0": 900.0},
    }))
    code, out, _ = run(capsys, "--config", str(cfg), "tables", "--lattice", "red", "--species", "Fr")
    assert code == 0
    assert parse_csv(out)[0]["species"] == "Fr"


def test_config_unknown_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"geometri": {"z0_a0": 900.0}}))
    code, _, err = run(capsys, "--config", str(cfg), "tables", "--lattice", "red")
    assert code == 1
    assert "geometri" in err


def test_missing_circuit_file_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "compile", str(tmp_path / "nope.txt"))
    assert code == 1
