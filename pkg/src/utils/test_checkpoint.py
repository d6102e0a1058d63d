# File: src/utils/test_checkpoint.py
"""
Tests for checkpoint documents
"""

import copy
import json
import sys
from pathlib import Path

import pytest

src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

from graph.construction_graph import step
from graph.state import init
from utils.checkpoint import CheckpointError, checkpoint, load_checkpoint, restore, same_state, save_checkpoint
from utils.config import ConstructionConfig

CONFIG = ConstructionConfig(n_start=3)


@pytest.fixture(scope="module")
def state():
    return step(step(init(CONFIG)))


def test_round_trip(state, tmp_path):
    print("💾 checkpoint round trip")
    assert same_state(restore(checkpoint(state)), state)
    assert same_state(restore(checkpoint(init(CONFIG)), CONFIG), init(CONFIG))
    path = save_checkpoint(state, tmp_path / "run" / "state.json")
    document = json.loads(path.read_text(encoding="utf-8"))
    # integers travel as strings
    assert all(isinstance(d, str) for d in document["cf_digits"])
    assert same_state(load_checkpoint(path, CONFIG), state)


def test_tampered_digit_is_rejected(state):
    document = copy.deepcopy(checkpoint(state))
    document["cf_digits"][-1] = str(int(document["cf_digits"][-1]) + 1)
    with pytest.raises(CheckpointError, match="audit"):
        restore(document)


def test_tampered_binary_stream_is_rejected(state):
    document = copy.deepcopy(checkpoint(state))
    entry = next(e for e in document["emitted_bary"] if e["target"] == "x")
    entry["digits"][0] = "0" if entry["digits"][0] == "1" else "1"
    with pytest.raises(CheckpointError):
        restore(document)

def test_forged_records_are_rejected(state):
    document = copy.deepcopy(checkpoint(state))
    first, second = document["history"]
    first["n_used"] = "99"
    first["margins"] = {name: "-5" for name in first["margins"]}
    second["epsilon"] = "1/1000"
    second["t"] = "7"
    with pytest.raises(CheckpointError, match="audit") as info:
        restore(document)
    message = str(info.value)
    assert "record[2].n_used" in message or "record[2].margins" in message


def test_forged_orders_are_rejected(state):
    document = copy.deepcopy(checkpoint(state))
    record = document["history"][-1]
    m, n = record["bases"]["2"]
    record["bases"]["2"] = [str(int(m) + 1), str(int(n) + 1)]
    with pytest.raises(CheckpointError, match="audit"):
        restore(document)


def test_configuration_mismatch(state):
    document = checkpoint(state)
    with pytest.raises(CheckpointError, match="different configuration"):
        restore(document, ConstructionConfig(n_start=4))
    edited = copy.deepcopy(document)
    edited["config"]["n_start"] = 9
    with pytest.raises(CheckpointError, match="hash"):
        restore(edited)


def test_malformed_documents(state, tmp_path):
    with pytest.raises(CheckpointError):
        restore({"format": "something-else"})
    document = copy.deepcopy(checkpoint(state))
    del document["cylinders"]
    with pytest.raises(CheckpointError, match="malformed"):
        restore(document)
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_checkpoint(path)
