# File: src/utils/checkpoint.py
"""
JSON checkpoints of a construction state

Every integer is written as a decimal string and every rational as "p/q",
so documents survive any JSON reader. Restoring rebuilds the bricks from
the cf digits and cylinder triples and re-runs the full state audit.
"""

import json
from pathlib import Path
from typing import Optional, Union

from agents.refinement_agent import Brick, BrickPair
from agents.verifier_agent import verify_state
from arith.cylinders import BaryCylinder, cf_cylinder
from arith.rational_core import format_rational, parse_rational
from graph.state import TARGETS, ConstructionState, StepRecord
from utils.config import ConstructionConfig, config_hash

FORMAT = "normals-checkpoint/1"


class CheckpointError(ValueError):
    """Malformed document, configuration mismatch or failed audit on load"""


def _ints(values) -> list:
    return [str(v) for v in values]


def _cylinders(brick: Brick) -> list:
    return [_ints(brick.bary[b].as_triple()) for b in sorted(brick.bary)]


def _record_to_dict(record: StepRecord) -> dict:
    return {
        "s": str(record.s),
        "t": str(record.t),
        "epsilon": format_rational(record.epsilon),
        "n_used": str(record.n_used),
        "block": _ints(record.block),
        "binding_window": record.binding_window,
        "bases": {str(b): _ints(pair) for b, pair in record.bases.items()},
        "margins": {name: format_rational(value) for name, value in record.margins.items()},
        "cf_length": str(record.cf_length),
        "bary_lengths": [[target, str(b), str(length)] for (target, b), length in record.bary_lengths.items()],
        "candidates_tried": str(record.candidates_tried),
        "extended": record.extended,
    }


def _record_from_dict(data: dict) -> StepRecord:
    return StepRecord(
        s=int(data["s"]),
        t=int(data["t"]),
        epsilon=parse_rational(data["epsilon"]),
        n_used=int(data["n_used"]),
        block=tuple(int(d) for d in data["block"]),
        binding_window=data["binding_window"],
        bases={int(b): (int(m), int(n)) for b, (m, n) in data["bases"].items()},
        margins={name: parse_rational(value) for name, value in data["margins"].items()},
        cf_length=int(data["cf_length"]),
        bary_lengths={(target, int(b)): int(length) for target, b, length in data["bary_lengths"]},
        candidates_tried=int(data["candidates_tried"]),
        extended=bool(data["extended"]),
    )


def checkpoint(state: ConstructionState) -> dict:
    return {
        "format": FORMAT,
        "config_hash": config_hash(state.config),
        "config": state.config.to_dict(),
        "step": str(state.step),
        "t": str(state.t),
        "base_extended": state.pair.base_extended,
        "cf_digits": _ints(state.emitted_cf),
        "cylinders": {"x": _cylinders(state.pair.x_brick), "y": _cylinders(state.pair.y_brick)},
        "emitted_bary": [
            {"target": target, "base": str(b), "digits": _ints(digits)}
            for (target, b), digits in sorted(state.emitted_bary.items())
        ],
        "history": [_record_to_dict(record) for record in state.history],
    }


def _brick(word, t: int, triples) -> Brick:
    bary = {}
    for triple in triples:
        base, order, start, width = (int(v) for v in triple)
        bary[base] = BaryCylinder(base, order, start, width)
    return Brick(t, cf_cylinder(word), bary)


def restore(document: dict, config: Optional[ConstructionConfig] = None) -> ConstructionState:
    if not isinstance(document, dict) or document.get("format") != FORMAT:
        raise CheckpointError(f"not a {FORMAT} document")
    try:
        stored = ConstructionConfig.from_dict(document["config"])
        if config_hash(stored) != document["config_hash"]:
            raise CheckpointError("config hash does not match the stored configuration")
        if config is not None and config_hash(config) != document["config_hash"]:
            raise CheckpointError("checkpoint was written with a different configuration")
        t = int(document["t"])
        digits = tuple(int(d) for d in document["cf_digits"])
        pair = BrickPair(
            _brick((1,) + digits, t, document["cylinders"]["x"]),
            _brick(digits, t, document["cylinders"]["y"]),
            base_extended=bool(document["base_extended"]),
        )
        emitted_bary = {}
        for entry in document["emitted_bary"]:
            if entry["target"] not in TARGETS:
                raise CheckpointError(f"unknown target {entry['target']!r}")
            emitted_bary[(entry["target"], int(entry["base"]))] = tuple(int(d) for d in entry["digits"])
        state = ConstructionState(
            step=int(document["step"]),
            pair=pair,
            emitted_cf=digits,
            emitted_bary=emitted_bary,
            config=config or stored,
            history=tuple(_record_from_dict(r) for r in document["history"]),
        )
    except CheckpointError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"malformed checkpoint: {e}") from e

    diag = verify_state(state)
    if not diag.ok:
        raise CheckpointError(f"checkpoint fails the state audit: {diag.summary()}")
    return state


def save_checkpoint(state: ConstructionState, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(checkpoint(state), indent=2), encoding="utf-8")
    print(f"💾 Checkpoint written: {path} (step {state.step})")
    return path


def load_checkpoint(path: Union[str, Path], config: Optional[ConstructionConfig] = None) -> ConstructionState:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CheckpointError(f"{path} is not valid JSON: {e}") from e
    return restore(document, config)


def same_state(a: ConstructionState, b: ConstructionState) -> bool:
    """Structural equality, including history and config hash"""
    return checkpoint(a) == checkpoint(b) and a == b
