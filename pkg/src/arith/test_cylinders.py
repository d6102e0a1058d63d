# File: src/arith/test_cylinders.py
"""
Tests for cf and b-ary cylinders, relative enumeration and digit prefixes
"""

import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

from arith.cylinders import (
    BaryCylinder,
    Interval,
    bary_digits_common_prefix,
    cf_cylinder,
    cf_cylinder_length,
    enclosing_bary,
    enumerate_relative_cylinders,
    walk_relative_cylinders,
)


def _iv(a, b):
    return Interval(Fraction(a), Fraction(b))


def _all_words(max_len, max_digit):
    for length in range(1, max_len + 1):
        yield from product(range(1, max_digit + 1), repeat=length)


def test_cf_cylinder_examples():
    assert cf_cylinder([1]).interval == _iv(Fraction(1, 2), 1)
    c = cf_cylinder([1, 2])
    assert c.interval == _iv(Fraction(2, 3), Fraction(3, 4))
    assert c.length == Fraction(1, 12)
    assert cf_cylinder([2]).interval == _iv(Fraction(1, 3), Fraction(1, 2))
    assert cf_cylinder([]).interval == _iv(0, 1)


def test_cf_cylinder_length_examples():
    assert cf_cylinder_length([1]) == Fraction(1, 2)
    assert cf_cylinder_length([1, 2]) == Fraction(1, 12)
    assert cf_cylinder_length([1, 1]) == Fraction(1, 6)


def test_length_formula_and_prepended_one_bounds():
    print("🧪 1364 words: length formula and prepended-1 bounds")
    checked = 0
    for word in _all_words(5, 4):
        cylinder = cf_cylinder(word)
        assert cf_cylinder_length(word) == cylinder.interval.right - cylinder.interval.left
        with_one = cf_cylinder_length((1,) + word)
        plain = cylinder.length
        assert plain / 4 <= with_one <= plain
        checked += 1
    assert checked == 1364
    print(f"✅ {checked} words checked")


def test_partition_with_tail_bound():
    for D in (3, 7, 20):
        assert sum(cf_cylinder_length((a,)) for a in range(1, D + 1)) + Fraction(1, D + 1) == 1
        total = sum(cf_cylinder_length((a, c)) for a in range(1, D + 1) for c in range(1, D + 1))
        # inside I_[a], the digits c > D fill the gap between 1/a and [0; a, D+1]
        inner_tail = sum(Fraction(1, a * (a * (D + 1) + 1)) for a in range(1, D + 1))
        assert total + inner_tail + Fraction(1, D + 1) == 1


def test_child_order_follows_parity():
    for parent in [(), (1,), (2, 3), (1, 1, 1)]:
        lefts = [cf_cylinder(parent + (d,)).interval.left for d in range(1, 8)]
        if len(parent) % 2 == 0:
            assert lefts == sorted(lefts, reverse=True)
        else:
            assert lefts == sorted(lefts)


def test_enumerate_examples():
    blocks = list(enumerate_relative_cylinders([], 1, Fraction(1, 6), Fraction(1, 2)))
    assert sorted(blocks) == [(1,), (2,)]
    # ordered by left endpoint: (1/3,1/2) before (1/2,1)
    assert blocks == [(2,), (1,)]
    assert list(enumerate_relative_cylinders([1], 1, Fraction(1, 4), Fraction(1))) == [(1,)]
    assert list(enumerate_relative_cylinders([1, 2], 2, Fraction(3, 2), Fraction(2))) == []


def _brute_force(parent, n, low, high, cap):
    parent_len = cf_cylinder_length(parent)
    found = []
    for block in product(range(1, cap + 1), repeat=n):
        ratio = cf_cylinder_length(tuple(parent) + block) / parent_len
        if low <= ratio <= high:
            found.append(block)
    found.sort(key=lambda blk: cf_cylinder(tuple(parent) + blk).interval.left)
    return found


@pytest.mark.parametrize("parent", [(), (1,), (2,), (1, 3), (3, 1, 2)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_brute_force(parent, n):
    low, high = Fraction(1, 400), Fraction(1, 20)
    # a digit above 1/low can never reach the lower bound
    cap = 400 if n == 1 else 40
    expected = _brute_force(parent, n, low, high, cap)
    got = list(enumerate_relative_cylinders(parent, n, low, high))
    assert got == expected


def test_walk_reports_relative_length_and_prunes():
    parent = (1, 2)
    found = list(walk_relative_cylinders(parent, 2, Fraction(1, 300), Fraction(1, 10)))
    assert found
    parent_len = cf_cylinder_length(parent)
    for item in found:
        assert item.word == parent + item.block
        assert item.relative_length == cf_cylinder_length(item.word) / parent_len
        assert item.interval == cf_cylinder(item.word).interval
    lefts = [item.interval.left for item in found]
    assert lefts == sorted(lefts)

    no_ones = list(walk_relative_cylinders(parent, 2, Fraction(1, 300), Fraction(1, 10),
                                           accept_prefix=lambda block, iv: 1 not in block))
    assert no_ones == [item for item in found if 1 not in item.block]


def test_enumeration_rejects_bad_windows():
    with pytest.raises(ValueError):
        list(enumerate_relative_cylinders([], 1, Fraction(0), Fraction(1, 2)))
    with pytest.raises(ValueError):
        list(enumerate_relative_cylinders([], 1, Fraction(1, 2), Fraction(1, 4)))
    with pytest.raises(ValueError):
        list(enumerate_relative_cylinders([], 65, Fraction(1, 2), Fraction(3, 4)))


def test_enclosing_bary_examples():
    assert enclosing_bary(_iv(Fraction(3, 10), Fraction(7, 20)), 2, 4) == BaryCylinder(2, 4, 4, 2)
    assert enclosing_bary(_iv(Fraction(1, 5), Fraction(1, 4)), 2, 2) == BaryCylinder(2, 2, 0, 1)
    assert enclosing_bary(_iv(Fraction(2, 3), Fraction(3, 4)), 2, 1) == BaryCylinder(2, 1, 1, 1)
    with pytest.raises(ValueError):
        enclosing_bary(_iv(0, Fraction(1, 2)), 2, 1)


def test_enclosing_bary_is_minimal():
    for word in _all_words(4, 3):
        iv = cf_cylinder(word).interval
        for b in (2, 3, 5):
            m = 0
            while Fraction(1, b ** (m + 1)) > iv.length:
                m += 1
            cyl = enclosing_bary(iv, b, m)
            assert cyl.interval.contains(iv)
            if cyl.width_units == 2:
                for a in range(b ** m):
                    assert not BaryCylinder(b, m, a, 1).interval.contains(iv)


def test_common_prefix_examples():
    assert bary_digits_common_prefix(_iv(Fraction(2, 3), Fraction(3, 4)), 2) == (1, 0, 1)
    assert bary_digits_common_prefix(_iv(0, 1), 2) == ()
    assert bary_digits_common_prefix(_iv(Fraction(1, 3), Fraction(1, 2)), 3) == (1,)


def _greedy_digits(x, b, count):
    digits = []
    for _ in range(count):
        x *= b
        digit = x.numerator // x.denominator
        digits.append(digit)
        x -= digit
    return tuple(digits)


def test_common_prefix_is_sound():
    for word in _all_words(4, 4):
        iv = cf_cylinder(word).interval
        for b in (2, 3, 10):
            prefix = bary_digits_common_prefix(iv, b)
            for k in range(1, 8):
                point = iv.left + iv.length * Fraction(k, 8)
                assert _greedy_digits(point, b, len(prefix)) == prefix


def test_bary_cylinder_constituents():
    cyl = BaryCylinder(2, 3, 3, 2)
    assert cyl.constituents() == [(0, 1, 1), (1, 0, 0)]
    assert cyl.interval == _iv(Fraction(3, 8), Fraction(5, 8))
    with pytest.raises(ValueError):
        BaryCylinder(2, 2, 3, 2)
