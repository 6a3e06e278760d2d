"""Tests for the command-line interface: behavior, formats, exit codes."""

import json
import math

import pytest

from convqec.cli import main

DEPOL = {"type": "depolarizing", "p": 0.01}


@pytest.fixture()
def channel_file(tmp_path):
    path = tmp_path / "channel.json"
    path.write_text(json.dumps(DEPOL))
    return str(path)


def run_cli(*argv):
    return main(list(argv))


def test_verify_passes(capsys):
    assert run_cli("verify", "--blocks", "1") == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_verify_larger_code():
    assert run_cli("verify", "--blocks", "12") == 0


def test_verify_rejects_zero_blocks(capsys):
    assert run_cli("verify", "--blocks", "0") == 2


def test_verify_describe_export(tmp_path, capsys):
    out = tmp_path / "code.json"
    assert run_cli("verify", "--blocks", "1", "--describe", str(out)) == 0
    capsys.readouterr()
    doc = json.loads(out.read_text())
    assert doc["n"] == 7
    assert doc["generators"] == [
        "XZIIIII", "ZXXZIII", "IZXXZII", "IIZXXZI", "IIIZXXZ", "IIIIIZX",
    ]
    assert doc["logical_x"] == ["IZIXIZI"]
    assert doc["logical_z"] == ["IZZZZZI"]


def test_decode_zero_syndrome(capsys, channel_file):
    assert run_cli("decode", "--blocks", "1", "--syndrome", "000000",
                   "--channel", channel_file) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"] == "IIIIIII"
    assert payload["log_likelihood"] == pytest.approx(7 * math.log(0.99), rel=1e-12)
    assert payload["tie_broken"] is False


def test_decode_single_error_syndrome(capsys, channel_file):
    assert run_cli("decode", "--blocks", "1", "--syndrome", "010000",
                   "--channel", channel_file) == 0
    assert json.loads(capsys.readouterr().out)["error"] == "XIIIIII"


def test_decode_wrong_syndrome_length(capsys, channel_file):
    assert run_cli("decode", "--blocks", "1", "--syndrome", "00000",
                   "--channel", channel_file) == 2
    assert "6 bits" in capsys.readouterr().err


def test_decode_infeasible_syndrome_exits_1(tmp_path, capsys):
    noiseless = tmp_path / "noiseless.json"
    noiseless.write_text(json.dumps({"type": "depolarizing", "p": 0.0}))
    assert run_cli("decode", "--blocks", "1", "--syndrome", "100000",
                   "--channel", str(noiseless)) == 1
    assert "no positive-probability error" in capsys.readouterr().err


def test_decode_random_tie_mode(capsys, channel_file):
    assert run_cli("decode", "--blocks", "1", "--syndrome", "010000",
                   "--channel", channel_file, "--tie", "random", "--seed", "5") == 0
    first = json.loads(capsys.readouterr().out)
    assert run_cli("decode", "--blocks", "1", "--syndrome", "010000",
                   "--channel", channel_file, "--tie", "random", "--seed", "5") == 0
    assert json.loads(capsys.readouterr().out) == first


def test_oracle_check_all_syndromes(capsys, channel_file):
    assert run_cli("oracle-check", "--blocks", "1", "--channel", channel_file,
                   "--all-syndromes") == 0
    out = capsys.readouterr().out
    assert "syndromes checked: 64" in out
    assert "mismatches: 0" in out


def test_oracle_check_sampled(capsys, channel_file):
    assert run_cli("oracle-check", "--blocks", "2", "--channel", channel_file,
                   "--samples", "50", "--seed", "3") == 0
    assert "mismatches: 0" in capsys.readouterr().out


def test_oracle_check_refuses_three_blocks(capsys, channel_file):
    assert run_cli("oracle-check", "--blocks", "3", "--channel", channel_file,
                   "--all-syndromes") == 2


def test_simulate_zero_noise(tmp_path, capsys):
    config = tmp_path / "sim.json"
    config.write_text(json.dumps({
        "blocks": 2,
        "channel": {"type": "depolarizing", "p": 0.0},
        "trials": 50,
        "seed": 1,
    }))
    assert run_cli("simulate", str(config)) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[1].split(",")[4] == "0"  # logical_errors
    assert lines[1].split(",")[5] == "0.0"


def test_simulate_strict_config(tmp_path, capsys):
    config = tmp_path / "sim.json"
    config.write_text(json.dumps({
        "blocks": 2, "channel": DEPOL, "trials": 10, "seed": 1, "typo_key": 3,
    }))
    assert run_cli("simulate", str(config)) == 2
    assert "typo_key" in capsys.readouterr().err


def test_simulate_missing_key(tmp_path, capsys):
    config = tmp_path / "sim.json"
    config.write_text(json.dumps({"blocks": 2, "channel": DEPOL, "trials": 10}))
    assert run_cli("simulate", str(config)) == 2
    assert "seed" in capsys.readouterr().err


def test_simulate_invalid_json_reports_line(tmp_path, capsys):
    config = tmp_path / "sim.json"
    config.write_text('{"blocks": 2,\n  "trials": }')
    assert run_cli("simulate", str(config)) == 2
    assert "line 2" in capsys.readouterr().err


def test_simulate_schedule_channel(tmp_path, capsys):
    rows = [[0.98, 0.01, 0.005, 0.005]] * 7
    config = tmp_path / "sim.json"
    config.write_text(json.dumps({
        "blocks": 1,
        "channel": {"type": "schedule", "probs": rows},
        "trials": 30,
        "seed": 2,
    }))
    assert run_cli("simulate", str(config)) == 0
    row = capsys.readouterr().out.strip().split("\n")[1]
    assert row.split(",")[2].startswith("schedule-")


def test_sweep_deterministic_and_parallel(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "blocks": [1, 2], "ps": [0.0, 0.01], "trials": 100, "seed": 3,
    }))
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    out_c = tmp_path / "c.csv"
    assert run_cli("sweep", str(config), "--out", str(out_a)) == 0
    assert run_cli("sweep", str(config), "--out", str(out_b)) == 0
    assert run_cli("sweep", str(config), "--jobs", "3", "--out", str(out_c)) == 0
    assert out_a.read_bytes() == out_b.read_bytes() == out_c.read_bytes()


def test_sweep_json_format(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "blocks": [1], "ps": [0.0], "trials": 20, "seed": 3, "format": "json",
    }))
    assert run_cli("sweep", str(config)) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["rate"] == 0.0


def test_sweep_rejects_bad_p(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"blocks": [1], "ps": [1.5], "trials": 5, "seed": 0}))
    assert run_cli("sweep", str(config)) == 2


def test_export_circuit_layout(tmp_path):
    out = tmp_path / "enc.txt"
    assert run_cli("export-circuit", "--blocks", "1", "--which", "encode",
                   "--out", str(out)) == 0
    sections = out.read_text().strip().split("\n\n")
    assert len(sections) == 6
    assert sections[0].startswith("H 1")

    again = tmp_path / "enc2.txt"
    assert run_cli("export-circuit", "--blocks", "1", "--which", "encode",
                   "--out", str(again)) == 0
    assert out.read_bytes() == again.read_bytes()

    dec = tmp_path / "dec.txt"
    assert run_cli("export-circuit", "--blocks", "1", "--which", "decode",
                   "--out", str(dec)) == 0
    dec_sections = dec.read_text().strip().split("\n\n")
    assert dec_sections == list(reversed(sections))


def test_unknown_command_exits_2():
    assert run_cli("frobnicate") == 2


def test_console_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "convqec.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "convqec" in proc.stdout
