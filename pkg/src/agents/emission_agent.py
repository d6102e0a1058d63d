# File: src/agents/emission_agent.py
"""
Emission Agent - digit streams of x and 1/x determined by the current bricks

cf digits: x = [0; 1, a_2, a_3, ...] and 1/x = [1; a_2, a_3, ...], where
a_2, a_3, ... is the shared block history. Base-b digits of x come from the
x cf interval, those of 1/x = 1 + y from the y cf interval.
"""

from dataclasses import dataclass
from typing import Dict, Tuple, Union

from agents.refinement_agent import BrickPair
from arith.cylinders import bary_digits_common_prefix
from arith.measures import activation_step
from graph.state import TARGETS, BaryKey, ConstructionState


class InactiveBaseError(ValueError):
    def __init__(self, base: int, activation: int):
        super().__init__(f"base {base} is not active yet; it joins at step {activation}")
        self.base = base
        self.activation_step = activation


@dataclass(frozen=True)
class DigitStream:
    target: str
    kind: str
    integer_part: int
    digits: Tuple[int, ...]

    @property
    def base(self) -> int:
        return 0 if self.kind == "cf" else int(self.kind)


def bary_prefixes(pair: BrickPair) -> Dict[BaryKey, Tuple[int, ...]]:
    """Every base-b digit of x and of 1/x fixed by the pair's cf intervals."""
    prefixes = {}
    for b in range(2, pair.t + 1):
        prefixes[("x", b)] = bary_digits_common_prefix(pair.x_brick.cf.interval, b)
        prefixes[("one_over_x", b)] = bary_digits_common_prefix(pair.y_brick.cf.interval, b)
    return prefixes


def parse_kind(kind: Union[str, int]) -> str:
    """'cf', 'base:B' or an integer base"""
    if isinstance(kind, int):
        return str(kind)
    kind = kind.strip().lower()
    if kind == "cf":
        return kind
    if kind.startswith("base:"):
        kind = kind[len("base:"):]
    if not kind.isdigit() or int(kind) < 2:
        raise ValueError(f"kind must be 'cf' or 'base:B' with B >= 2, got {kind!r}")
    return str(int(kind))


def emit_digits(state: ConstructionState, target: str, kind: Union[str, int] = "cf") -> DigitStream:
    if target in ("inv", "1/x"):
        target = "one_over_x"
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}, got {target!r}")
    kind = parse_kind(kind)
    integer_part = 1 if target == "one_over_x" else 0

    if kind == "cf":
        digits = state.emitted_cf if target == "one_over_x" else (1,) + state.emitted_cf
        return DigitStream(target, kind, integer_part, tuple(digits))

    b = int(kind)
    if b > state.t:
        raise InactiveBaseError(b, activation_step(b, state.config.schedule_override or None))
    return DigitStream(target, kind, integer_part, state.emitted_bary.get((target, b), ()))
