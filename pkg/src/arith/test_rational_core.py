# File: src/arith/test_rational_core.py
"""
Tests for exact cf / rational conversions and the shift maps
"""

import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

# Add src to Python path
src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

from arith.rational_core import (
    bary_shift,
    canonical_word,
    cf_to_rational,
    convergents,
    gauss_map,
    parse_rational,
    rational_to_cf,
    reciprocal_shift,
)


def _pair(word, index):
    pair = convergents(word)[index + 1]
    assert pair.index == index
    return pair.p, pair.q


def test_convergents_examples():
    print("🧪 convergents on small words")
    assert _pair([1], 1) == (1, 1)
    assert _pair([1, 2], 2) == (2, 3)
    assert _pair([1, 1], 2) == (1, 2)
    seeds = convergents([])
    assert [(c.p, c.q, c.index) for c in seeds] == [(1, 0, -1), (0, 1, 0)]


def test_cf_to_rational_examples():
    assert cf_to_rational([1]) == 1
    assert cf_to_rational([1, 2]) == Fraction(2, 3)
    assert cf_to_rational([2]) == Fraction(1, 2)
    with pytest.raises(ValueError):
        cf_to_rational([])
    with pytest.raises(ValueError):
        cf_to_rational([1, 0])


def test_rational_to_cf_examples():
    assert rational_to_cf(Fraction(1, 2)) == (2,)
    assert rational_to_cf(Fraction(2, 3)) == (1, 2)
    assert rational_to_cf(Fraction(1)) == (1,)
    for bad in (Fraction(0), Fraction(3, 2), Fraction(-1, 3)):
        with pytest.raises(ValueError):
            rational_to_cf(bad)


def test_round_trip_all_small_denominators():
    print("🔄 round trip p/q for q <= 1000")
    for q in range(1, 1001):
        for p in range(1, q + 1):
            value = Fraction(p, q)
            if value.denominator != q:
                continue
            word = rational_to_cf(value)
            assert cf_to_rational(word) == value
            assert len(word) == 1 or word[-1] >= 2
    print("✅ round trip holds")


def test_gauss_map_examples():
    assert gauss_map(Fraction(0)) == 0
    assert gauss_map(Fraction(2, 3)) == Fraction(1, 2)
    assert gauss_map(Fraction(1, 2)) == 0


def test_gauss_map_is_left_shift():
    for length in range(2, 6):
        for word in product(range(1, 6), repeat=length):
            word = canonical_word(word)
            if len(word) < 2:
                continue
            shifted = gauss_map(cf_to_rational(word))
            assert rational_to_cf(shifted) == canonical_word(word[1:])


def test_bary_shift_examples():
    assert bary_shift(Fraction(1, 2), 2) == 0
    assert bary_shift(Fraction(1, 3), 2) == Fraction(2, 3)
    assert bary_shift(Fraction(2, 3), 3) == 0
    with pytest.raises(ValueError):
        bary_shift(Fraction(1, 2), 1)


def test_convergent_denominators_increase():
    for word in product(range(1, 5), repeat=6):
        qs = [c.q for c in convergents(word)]
        # indices 1..n sit at list positions 2..n+1
        assert all(a <= b for a, b in zip(qs[2:], qs[3:]))
        assert all(a < b for a, b in zip(qs[3:], qs[4:]))


def test_reciprocal_shift_examples_and_identity():
    assert reciprocal_shift([1, 1, 1]) == (1, 1)
    assert cf_to_rational([1, 1, 1]) == Fraction(2, 3)
    assert cf_to_rational([1, 1]) == 1 / Fraction(2, 3) - 1
    assert reciprocal_shift([1, 2]) == (2,)
    assert reciprocal_shift([2], "prepend") == (1, 2)
    with pytest.raises(ValueError):
        reciprocal_shift([2, 1])

    for length in range(2, 7):
        for tail in product(range(1, 4), repeat=length - 1):
            word = (1,) + tail
            y_word = reciprocal_shift(word)
            assert reciprocal_shift(y_word, "prepend") == word
            assert cf_to_rational(y_word) == 1 / cf_to_rational(word) - 1


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_rational("1/0")
