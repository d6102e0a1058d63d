# File: src/graph/state.py
"""
Construction state and the per-step evidence records
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from agents.refinement_agent import BrickPair, seed_pair
from arith.rational_core import CfWord
from utils.config import ConstructionConfig

TARGETS = ("x", "one_over_x")
BaryKey = Tuple[str, int]


class ConstructionError(RuntimeError):
    def __init__(self, message: str, step: int):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class StepRecord:
    s: int
    t: int
    epsilon: Fraction
    n_used: int
    block: CfWord
    binding_window: str
    bases: Dict[int, Tuple[int, int]]
    margins: Dict[str, Fraction]
    cf_length: int
    bary_lengths: Dict[BaryKey, int]
    candidates_tried: int
    extended: bool = False


@dataclass(frozen=True)
class ConstructionState:
    step: int
    pair: BrickPair
    emitted_cf: CfWord
    emitted_bary: Dict[BaryKey, Tuple[int, ...]]
    config: ConstructionConfig
    history: Tuple[StepRecord, ...] = field(default_factory=tuple)

    @property
    def t(self) -> int:
        return self.pair.t


def init(config: ConstructionConfig = None) -> ConstructionState:
    """Step 1: x in (1/2, 1), y in (0, 1), t = 2, nothing emitted"""
    return ConstructionState(
        step=1,
        pair=seed_pair(),
        emitted_cf=(),
        emitted_bary={},
        config=config or ConstructionConfig(),
    )
