# File: src/utils/test_digit_io.py
"""
Tests for digit stream formatting and parsing
"""

import csv
import sys
from pathlib import Path

import pytest

src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

from agents.emission_agent import DigitStream
from utils.digit_io import (
    format_digits,
    format_stream,
    parse_bary_digits,
    parse_cf_digits,
    parse_patterns,
    read_text,
    write_rows,
)


def test_format_streams():
    assert format_stream(DigitStream("x", "cf", 0, (1, 4, 2))) == "1\n4\n2"
    assert format_stream(DigitStream("one_over_x", "cf", 1, (4, 2))) == "1\n4\n2"
    assert format_stream(DigitStream("one_over_x", "cf", 1, ())) == "1"
    assert format_stream(DigitStream("x", "2", 0, (1, 0, 1))) == "0.101"
    assert format_stream(DigitStream("one_over_x", "12", 1, (11, 3))) == "1;11,3"
    assert format_digits((3, 10), "16") == "3,10"


def test_parse_cf_digits():
    assert parse_cf_digits("1\n4, 2 # tail\n\n7") == (1, 4, 2, 7)
    with pytest.raises(ValueError):
        parse_cf_digits("1 0 2")


def test_parse_bary_digits():
    assert parse_bary_digits("0.1011", 2) == (1, 0, 1, 1)
    assert parse_bary_digits("10\n11\n", 2) == (1, 0, 1, 1)
    assert parse_bary_digits("1;11,3", 12) == (11, 3)
    with pytest.raises(ValueError, match="position 2"):
        parse_bary_digits("12", 2)


def test_parse_patterns():
    assert parse_patterns("1\n1 2\n# skip\n2,2\n") == [(1,), (1, 2), (2, 2)]
    with pytest.raises(ValueError):
        parse_patterns("# nothing\n")


def test_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_text(tmp_path / "absent.txt")
    out = write_rows(tmp_path / "out" / "profile.csv", ["n", "value"], [[1, "1/2"], [2, "1/4"]])
    with out.open(encoding="utf-8") as handle:
        assert list(csv.reader(handle)) == [["n", "value"], ["1", "1/2"], ["2", "1/4"]]
