# File: src/test_cli.py
"""
Tests for the command-line interface
"""

import sys
from pathlib import Path

project_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

from cli import main


def test_construct_verify_emit(tmp_path, capsys):
    print("🚀 CLI round trip")
    path = tmp_path / "state.json"
    assert main(["construct", "--steps", "2", "--n-start", "3", "--quiet", "--checkpoint", str(path)]) == 0
    assert path.exists()
    assert main(["verify", "--checkpoint", str(path)]) == 0
    capsys.readouterr()

    assert main(["emit", "--checkpoint", str(path), "--kind", "base:2"]) == 0
    assert capsys.readouterr().out.strip().startswith("0.1")
    assert main(["emit", "--checkpoint", str(path), "--target", "inv", "--count", "2"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "1"
    assert main(["emit", "--checkpoint", str(path), "--kind", "base:3"]) == 1
    assert "joins at step" in capsys.readouterr().out


def test_verify_rejects_broken_checkpoint(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"format": "normals-checkpoint/1"}', encoding="utf-8")
    assert main(["verify", "--checkpoint", str(path)]) == 1
    assert "❌" in capsys.readouterr().out


def test_analyze_reference_stream(tmp_path, capsys):
    out = tmp_path / "euler.csv"
    assert main(["analyze", "--reference", "euler", "--count", "60", "--every", "20", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "pattern,n,count,discrepancy_lower,discrepancy_upper"
    assert len(lines) == 1 + 3 * 6
    assert lines[1].startswith("1,20,") and lines[-1].startswith("2 2,60,")

    digits = tmp_path / "binary.txt"
    digits.write_text("0.10110100", encoding="utf-8")
    assert main(["analyze", "--digits", str(digits), "--base", "2"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("2,8,")
    assert main(["analyze", "--reference", "nope"]) == 1


def test_bounds(capsys):
    assert main(["bounds", "schedule", "10", "5"]) == 0
    assert "t=2 epsilon=1/2 n0=7" in capsys.readouterr().out
    assert main(["bounds", "activation", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["bounds", "n0", "1"]) == 1
