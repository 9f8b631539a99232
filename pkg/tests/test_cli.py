"""Command-line interface: exit codes, formats, determinism."""

import json
import subprocess
import sys

import pytest

from freecircle.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_free_consistent(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "3", "4", "8", "--schedule", "r=4:a->1"
    )
    assert code == 0
    assert "free-consistent: yes" in out
    assert "0:1 2:1 4:1 6:1 8:1 10:1 12:1 14:1" in out
    assert "Q[x,y,w,z]/<x^2" in out


def test_analyze_without_schedule_fails_freeness(capsys):
    code, out, _ = run_cli(capsys, "analyze", "3", "4", "8")
    assert code == 2
    assert "NOT free-consistent" in out


def test_analyze_parse_error(capsys):
    code, _, err = run_cli(
        capsys, "analyze", "3", "4", "8", "--schedule", "r=4:a->??"
    )
    assert code == 1
    assert "error" in err


def test_analyze_invalid_signature(capsys):
    code, _, err = run_cli(capsys, "analyze", "4", "3", "8")
    assert code == 1


def test_analyze_223(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "2", "2", "3", "--schedule", "r=4:c->1"
    )
    assert code == 0
    assert "0:1 2:3 4:3 6:1" in out


def test_enumerate_348_labels(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "3", "4", "8")
    assert code == 0
    assert "r=4:a->1" in out
    assert "da/1/l>=m+n" in out


def test_enumerate_246_empty_with_note(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "2", "4", "6")
    assert code == 0
    assert "no admissible pattern" in out


def test_enumerate_111_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "enumerate", "1", "1", "1")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_index_348(capsys):
    code, out, _ = run_cli(
        capsys, "index", "3", "4", "8", "--schedule", "r=4:a->1"
    )
    assert code == 0
    assert "s = 1" in out
    assert "i(X) = 4" in out


def test_index_requires_free_consistency(capsys):
    code, _, err = run_cli(
        capsys, "index", "3", "4", "8", "--schedule", "r=2:c->ab"
    )
    assert code == 2
    assert "not free-consistent" in err


def test_index_json_round_trip(capsys):
    code, out, _ = run_cli(
        capsys, "index", "1", "3", "9", "--schedule", "r=2:a->1",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["volovikov_index"] == 2
    assert json.loads(json.dumps(payload)) == payload


def test_verify_small_sweep_json(capsys):
    code, out, _ = run_cli(capsys, "verify", "--max", "3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["totals"]["engine_side"] == 0
    assert payload["totals"]["kunneth_mismatches"] == 0
    assert payload["engine_side_clean"] is True


def test_verify_byte_identical_runs(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(
            capsys, "verify", "--max", "4", "--format", "json"
        )
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "freecircle.cli", "analyze", "3", "4", "8",
         "--schedule", "r=4:a->1", "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["free_consistent"] is True
    assert payload["betti"]["14"] == 1


def test_verify_custom_annotation_file(tmp_path, capsys):
    # an empty annotation file demotes the misprinted displays to
    # engine-side mismatches; exit code 3 signals it
    empty = tmp_path / "annotations.txt"
    empty.write_text("# nothing\n")
    code, out, _ = run_cli(
        capsys, "verify", "--max", "4", "--annotations", str(empty),
        "--format", "json",
    )
    assert code == 3
    payload = json.loads(out)
    assert payload["totals"]["engine_side"] > 0
