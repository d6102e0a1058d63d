# File: src/utils/test_config.py
"""
Tests for environment configuration and schedule override tables
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

import utils.config as config_module
from arith.measures import BoundConstants, ScheduleEntry
from utils.config import (
    ConstructionConfig,
    config_hash,
    load_config,
    load_schedule_override,
    parse_schedule_override,
)

ENV_NAMES = [
    "NORMALS_MODE", "NORMALS_N_FLOOR", "NORMALS_N_START", "NORMALS_SLACK", "NORMALS_PRECISION_BITS",
    "NORMALS_MAX_PRECISION_BITS", "NORMALS_N_CEILING", "NORMALS_CONST_K", "NORMALS_CONST_C",
    "NORMALS_CONST_N1", "NORMALS_MAX_ORDER", "NORMALS_SCHEDULE_OVERRIDE",
]


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr(config_module, "load_dotenv", lambda *args, **kwargs: False)
    return monkeypatch


def test_defaults(clean_env):
    config = load_config()
    assert config == ConstructionConfig()
    assert config.slack == 3495
    assert config.n_start == 5 and config.mode == "search"


def test_environment_and_overrides(clean_env):
    clean_env.setenv("NORMALS_MODE", "schedule")
    clean_env.setenv("NORMALS_N_FLOOR", "7")
    clean_env.setenv("NORMALS_SLACK", "100/3")
    clean_env.setenv("NORMALS_PRECISION_BITS", "128")
    config = load_config()
    assert config.mode == "schedule"
    assert config.n_start == 7
    assert config.slack == Fraction(100, 3)
    assert config.precision_bits == 128

    # keyword overrides win; None means "keep"
    config = load_config(mode="search", n_start=None, precision_bits=96)
    assert (config.mode, config.n_start, config.precision_bits) == ("search", 7, 96)


def test_bad_values(clean_env):
    clean_env.setenv("NORMALS_N_CEILING", "many")
    with pytest.raises(ValueError, match="NORMALS_N_CEILING"):
        load_config()
    clean_env.delenv("NORMALS_N_CEILING")
    with pytest.raises(ValueError):
        load_config(precision_bits=16)
    with pytest.raises(ValueError, match="unknown config field"):
        load_config(colour="blue")
    with pytest.raises(ValueError):
        ConstructionConfig(mode="guess")
    with pytest.raises(ValueError):
        ConstructionConfig(n_start=10, n_ceiling=5)


def test_slack_follows_constants(clean_env):
    config = load_config(constants=BoundConstants(C=2))
    assert config.slack > 3495 * 50


def test_parse_override():
    entries = parse_schedule_override("# desk\n10 3\n20 3 1/4\n30 4\n")
    assert entries == (
        ScheduleEntry(10, 3, Fraction(1, 3)),
        ScheduleEntry(20, 3, Fraction(1, 4)),
        ScheduleEntry(30, 4, Fraction(1, 4)),
    )
    for bad in ("10", "10 3\n5 3", "10 3\n20 5", "10 4", "10 3 1/2", "1 1", "x 3"):
        with pytest.raises(ValueError):
            parse_schedule_override(bad)


def test_load_override_file(tmp_path, clean_env):
    path = tmp_path / "table.txt"
    path.write_text("3 3\n", encoding="utf-8")
    assert load_schedule_override(path) == (ScheduleEntry(3, 3, Fraction(1, 3)),)
    assert load_config(schedule_override_path=str(path)).schedule_override[0].from_step == 3
    assert load_schedule_override("schedules/desk.txt")[0] == ScheduleEntry(10, 3, Fraction(1, 3))
    with pytest.raises(FileNotFoundError):
        load_schedule_override(tmp_path / "missing.txt")


def test_config_hash():
    base = ConstructionConfig()
    assert config_hash(base) == config_hash(ConstructionConfig())
    assert len(config_hash(base)) == 64
    assert config_hash(base) != config_hash(ConstructionConfig(n_start=6))
    assert config_hash(base) != config_hash(ConstructionConfig(slack=Fraction(3496)))
    with_table = ConstructionConfig(schedule_override=(ScheduleEntry(3, 3, Fraction(1, 3)),))
    assert ConstructionConfig.from_dict(with_table.to_dict()) == with_table
    assert config_hash(with_table) != config_hash(base)
