# File: src/utils/config.py
"""
Construction settings from NORMALS_* environment variables (.env supported)
"""

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple, Union

from dotenv import load_dotenv

from agents.refinement_agent import MODES, RefinementSettings
from arith.measures import BoundConstants, ScheduleEntry, default_n_start, default_slack
from arith.rational_core import format_rational, parse_rational

PROJECT_ROOT = Path(__file__).resolve().parents[2]
MIN_PRECISION_BITS = 32


@dataclass(frozen=True)
class ConstructionConfig:
    mode: str = "search"
    n_start: int = 5
    constants: BoundConstants = BoundConstants()
    slack: Fraction = Fraction(3495)
    precision_bits: int = 64
    max_precision_bits: int = 4096
    n_ceiling: int = 40
    max_order: int = 64
    schedule_override: Tuple[ScheduleEntry, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_start < 1:
            raise ValueError(f"n_start must be >= 1, got {self.n_start}")
        if self.n_ceiling < self.n_start:
            raise ValueError(f"n_ceiling ({self.n_ceiling}) must be >= n_start ({self.n_start})")
        if self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION_BITS}, got {self.precision_bits}")
        if self.max_precision_bits < self.precision_bits:
            raise ValueError("max_precision_bits must be >= precision_bits")
        if self.slack <= 0:
            raise ValueError(f"slack must be positive, got {self.slack}")
        if not 1 <= self.max_order:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        validate_override(self.schedule_override)

    def refinement_settings(self) -> RefinementSettings:
        return RefinementSettings(
            constants=self.constants,
            slack=self.slack,
            precision_bits=self.precision_bits,
            max_precision_bits=self.max_precision_bits,
            n_ceiling=self.n_ceiling,
            max_order=self.max_order,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["slack"] = format_rational(self.slack)
        data["schedule_override"] = [
            [entry.from_step, entry.t, format_rational(Fraction(entry.epsilon))]
            for entry in self.schedule_override
        ]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ConstructionConfig":
        return cls(
            mode=data["mode"],
            n_start=int(data["n_start"]),
            constants=BoundConstants(**{key: int(value) for key, value in data["constants"].items()}),
            slack=parse_rational(data["slack"]),
            precision_bits=int(data["precision_bits"]),
            max_precision_bits=int(data["max_precision_bits"]),
            n_ceiling=int(data["n_ceiling"]),
            max_order=int(data["max_order"]),
            schedule_override=tuple(
                ScheduleEntry(int(s), int(t), parse_rational(eps)) for s, t, eps in data["schedule_override"]),
        )


def config_hash(config: ConstructionConfig) -> str:
    """SHA-256 of the canonical JSON of every field"""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# -------------------------------
# Schedule override tables
# -------------------------------
def validate_override(entries: Tuple[ScheduleEntry, ...]) -> None:
    previous = None
    for entry in entries:
        if entry.from_step < 1:
            raise ValueError(f"override step must be >= 1, got {entry.from_step}")
        if entry.t < 2:
            raise ValueError(f"override t must be >= 2, got {entry.t}")
        if not 0 < entry.epsilon <= Fraction(1, entry.t):
            raise ValueError(f"override epsilon {entry.epsilon} not in (0, 1/{entry.t}]")
        if previous is not None:
            if entry.from_step <= previous.from_step:
                raise ValueError("override steps must be strictly increasing")
            if not previous.t <= entry.t <= previous.t + 1:
                raise ValueError(f"t may grow by at most 1 per entry ({previous.t} -> {entry.t})")
        elif entry.t > 3:
            # the default schedule has t = 2 for every step a desk run reaches
            raise ValueError(f"the first override entry may raise t to 3 at most, got {entry.t}")
        previous = entry


def parse_schedule_override(text: str) -> Tuple[ScheduleEntry, ...]:
    """Lines 'from_step t [epsilon]'; '#' starts a comment"""
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"override line {number}: expected 'from_step t [epsilon]', got {raw!r}")
        try:
            from_step, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"override line {number}: step and t must be integers") from None
        epsilon = parse_rational(parts[2]) if len(parts) == 3 else Fraction(1, t)
        entries.append(ScheduleEntry(from_step, t, epsilon))
    entries = tuple(entries)
    validate_override(entries)
    return entries


def load_schedule_override(path: Union[str, Path]) -> Tuple[ScheduleEntry, ...]:
    path = Path(path)
    if not path.is_absolute() and not path.exists():
        path = PROJECT_ROOT / path
    if not path.exists():
        raise FileNotFoundError(f"schedule override file not found: {path}")
    return parse_schedule_override(path.read_text(encoding="utf-8"))


# -------------------------------
# Environment
# -------------------------------
def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def _env_rational(name: str) -> Optional[Fraction]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return parse_rational(raw.strip())
    except ValueError as e:
        raise ValueError(f"{name}: {e}") from None


def load_config(**overrides) -> ConstructionConfig:
    """
    Environment first, keyword overrides on top. Recognized overrides are the
    ConstructionConfig fields plus n_floor and schedule_override_path.
    """
    load_dotenv()
    n_floor = overrides.pop("n_floor", None) or _env_int("NORMALS_N_FLOOR", 5)
    constants = overrides.pop("constants", None) or BoundConstants(
        K=_env_int("NORMALS_CONST_K", 1),
        C=_env_int("NORMALS_CONST_C", 1),
        N1=_env_int("NORMALS_CONST_N1", 10),
    )
    override_path = overrides.pop("schedule_override_path", None) or os.getenv("NORMALS_SCHEDULE_OVERRIDE")
    schedule_override = overrides.pop("schedule_override", None)
    if schedule_override is None:
        schedule_override = load_schedule_override(override_path) if override_path else ()

    slack = overrides.pop("slack", None)
    if slack is None:
        slack = _env_rational("NORMALS_SLACK")
    if slack is None:
        slack = default_slack(constants.C)

    values = dict(
        mode=os.getenv("NORMALS_MODE", "search").strip() or "search",
        n_start=_env_int("NORMALS_N_START", default_n_start(n_floor)),
        constants=constants,
        slack=Fraction(slack),
        precision_bits=_env_int("NORMALS_PRECISION_BITS", 64),
        max_precision_bits=_env_int("NORMALS_MAX_PRECISION_BITS", 4096),
        n_ceiling=_env_int("NORMALS_N_CEILING", 40),
        max_order=_env_int("NORMALS_MAX_ORDER", 64),
        schedule_override=tuple(schedule_override),
    )
    for key, value in overrides.items():
        if key not in values:
            raise ValueError(f"unknown config field {key!r}")
        if value is not None:
            values[key] = value
    return ConstructionConfig(**values)
