# File: src/arith/cylinders.py
"""
cf-ary and b-ary cylinder intervals.

Intervals are open with exact Fraction endpoints. A cf cylinder I_w is the
set of reals in (0,1) whose continued fraction starts with the word w; a
b-ary cylinder of order k is (a/b^k, (a+1)/b^k), and a BaryCylinder of
width 2 is the union of two consecutive ones of the same order.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from arith.rational_core import ConvergentPair, CfWord, as_word, tail_convergents

DEFAULT_MAX_ORDER = 64


@dataclass(frozen=True)
class Interval:
    left: Fraction
    right: Fraction

    def __post_init__(self):
        if not self.left < self.right:
            raise ValueError(f"interval needs left < right, got ({self.left}, {self.right})")

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def contains_point(self, x) -> bool:
        return self.left < x < self.right

    def contains(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def reciprocal_image(self) -> "Interval":
        """Image under u -> 1/u - 1 (decreasing, so endpoints swap)."""
        if self.left <= 0:
            raise ValueError("reciprocal image needs an interval away from 0")
        return Interval(1 / self.right - 1, 1 / self.left - 1)

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


UNIT_INTERVAL = Interval(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class CfCylinder:
    word: CfWord
    interval: Interval
    tail_convergents: Tuple[ConvergentPair, ConvergentPair]

    @property
    def order(self) -> int:
        return len(self.word)

    @property
    def length(self) -> Fraction:
        return self.interval.length


@dataclass(frozen=True)
class BaryCylinder:
    base: int
    order: int
    start_index: int
    width_units: int = 1

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if self.width_units not in (1, 2):
            raise ValueError(f"width_units must be 1 or 2, got {self.width_units}")
        if self.start_index < 0 or self.start_index + self.width_units > self.base ** self.order:
            raise ValueError(
                f"cylinder ({self.start_index}, +{self.width_units}) out of range for "
                f"order {self.order} in base {self.base}")

    @property
    def scale(self) -> int:
        return self.base ** self.order

    @property
    def interval(self) -> Interval:
        return Interval(Fraction(self.start_index, self.scale),
                        Fraction(self.start_index + self.width_units, self.scale))

    @property
    def length(self) -> Fraction:
        return Fraction(self.width_units, self.scale)

    def constituents(self) -> List[Tuple[int, ...]]:
        """Digit words of the one or two order-k cylinders making up this one."""
        return [bary_word(self.start_index + offset, self.order, self.base)
                for offset in range(self.width_units)]

    def as_triple(self) -> Tuple[int, int, int, int]:
        return (self.base, self.order, self.start_index, self.width_units)


@dataclass(frozen=True)
class RelativeCylinder:
    block: CfWord
    word: CfWord
    interval: Interval
    relative_length: Fraction


# -------------------------------
# cf cylinders
# -------------------------------
def _cf_interval(prev: ConvergentPair, last: ConvergentPair, depth: int) -> Interval:
    near = Fraction(last.p, last.q)
    far = Fraction(last.p + prev.p, last.q + prev.q)
    if depth % 2 == 0:
        return Interval(near, far)
    return Interval(far, near)


def cf_cylinder(word: Sequence[int]) -> CfCylinder:
    """I_w with endpoints [w] and [w with last digit + 1]; the empty word gives (0, 1)."""
    word = as_word(word)
    prev, last = tail_convergents(word)
    return CfCylinder(word, _cf_interval(prev, last, len(word)), (prev, last))


def cf_cylinder_length(word: Sequence[int]) -> Fraction:
    """|I_w| = 1 / (q_n (q_n + q_{n-1}))."""
    prev, last = tail_convergents(as_word(word))
    return Fraction(1, last.q * (last.q + prev.q))


# -------------------------------
# Relative-order enumeration
# -------------------------------
def _complete_with_ones(q_prev: int, q: int, remaining: int) -> Tuple[int, int]:
    for _ in range(remaining):
        q_prev, q = q, q + q_prev
    return q_prev, q


def _digit_cap(q_prev: int, q: int, remaining: int, scaled_parent: int, low_num: int) -> int:
    """
    Largest digit d such that appending d and then `remaining` ones keeps
    low_num * Q(Q+Q') <= scaled_parent; 0 when even d = 1 is too short.
    """
    def fits(d: int) -> bool:
        c_prev, c = _complete_with_ones(q, d * q + q_prev, remaining)
        return low_num * c * (c + c_prev) <= scaled_parent

    if not fits(1):
        return 0
    hi = 2
    while fits(hi):
        hi *= 2
    lo = hi // 2
    # fits(lo) holds, fits(hi) fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _digit_floor(q_prev: int, q: int, scaled_parent_high: int, high_num: int, cap: int) -> int:
    """Smallest final digit d <= cap with high_num * Q(Q+Q') >= scaled_parent_high, or cap + 1."""
    def long_enough(d: int) -> bool:
        c = d * q + q_prev
        return high_num * c * (c + q) >= scaled_parent_high

    if long_enough(1):
        return 1
    if not long_enough(cap):
        return cap + 1
    lo, hi = 1, cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if long_enough(mid):
            hi = mid
        else:
            lo = mid
    return hi


def walk_relative_cylinders(parent: Sequence[int], n: int, len_low: Fraction, len_high: Fraction,
                            accept_prefix: Optional[Callable[[CfWord, Interval], bool]] = None,
                            max_order: int = DEFAULT_MAX_ORDER) -> Iterator[RelativeCylinder]:
    """
    Depth-first walk over the blocks of length n whose cylinder, relative to
    the parent cylinder, has length in [len_low, len_high].

    Children are visited by increasing left endpoint, so the stream is ordered
    by the left endpoint of the child cylinder. Digit caps come from the
    lower bound: the longest completion of a prefix appends ones only.
    accept_prefix(block_prefix, interval) may veto a prefix and its subtree.
    """
    parent = as_word(parent)
    len_low, len_high = Fraction(len_low), Fraction(len_high)
    if n < 1:
        raise ValueError(f"relative order must be >= 1, got {n}")
    if n > max_order:
        raise ValueError(f"relative order {n} exceeds the enumeration maximum {max_order}")
    if len_low <= 0:
        raise ValueError("len_low must be positive to bound the digits")
    if not len_low < len_high:
        raise ValueError(f"need len_low < len_high, got [{len_low}, {len_high}]")
    if len_low > 1:
        return

    prev, last = tail_convergents(parent)
    parent_scale = last.q * (last.q + prev.q)
    # r = parent_scale / (Q(Q+Q')); r >= a/c  <=>  a Q(Q+Q') <= c parent_scale
    low_num, low_den = len_low.numerator, len_low.denominator
    high_num, high_den = len_high.numerator, len_high.denominator
    scaled_low = low_den * parent_scale
    scaled_high = high_den * parent_scale
    base_depth = len(parent)

    def visit(block: CfWord, p_prev: int, q_prev: int, p: int, q: int):
        position = len(block) + 1
        remaining = n - position
        cap = _digit_cap(q_prev, q, remaining, scaled_low, low_num)
        if cap == 0:
            return
        floor_digit = 1
        if remaining == 0:
            floor_digit = _digit_floor(q_prev, q, scaled_high, high_num, cap)
            if floor_digit > cap:
                return
        depth = base_depth + position
        digits = range(cap, floor_digit - 1, -1) if depth % 2 else range(floor_digit, cap + 1)
        for digit in digits:
            np_, nq = digit * p + p_prev, digit * q + q_prev
            child_block = block + (digit,)
            interval = _cf_interval(ConvergentPair(p, q, depth - 1), ConvergentPair(np_, nq, depth), depth)
            if accept_prefix is not None and not accept_prefix(child_block, interval):
                continue
            if remaining == 0:
                yield RelativeCylinder(child_block, parent + child_block, interval,
                                       Fraction(parent_scale, nq * (nq + q)))
            else:
                yield from visit(child_block, p, q, np_, nq)

    yield from visit((), prev.p, prev.q, last.p, last.q)


def enumerate_relative_cylinders(parent: Sequence[int], n: int, len_low: Fraction, len_high: Fraction,
                                 max_order: int = DEFAULT_MAX_ORDER) -> Iterator[CfWord]:
    """Blocks (l_1..l_n) with |I_{parent.block}| / |I_parent| in [len_low, len_high], leftmost first."""
    for found in walk_relative_cylinders(parent, n, len_low, len_high, max_order=max_order):
        yield found.block


# -------------------------------
# b-ary cylinders
# -------------------------------
def bary_word(index: int, order: int, base: int) -> Tuple[int, ...]:
    """The order-length digit word of the index-th b-ary cylinder."""
    digits = []
    for _ in range(order):
        index, digit = divmod(index, base)
        digits.append(digit)
    return tuple(reversed(digits))


def enclosing_bary(iv: Interval, b: int, m: int) -> BaryCylinder:
    """Smallest order-m b-ary cylinder, or union of two, containing iv (needs |iv| < b^-m)."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    if iv.left < 0 or iv.right > 1:
        raise ValueError(f"{iv} is not inside the unit interval")
    scale = b ** m
    if iv.length * scale >= 1:
        raise ValueError(f"interval of length {iv.length} is not shorter than {b}^-{m}")
    start = (iv.left.numerator * scale) // iv.left.denominator
    if iv.right * scale <= start + 1:
        return BaryCylinder(b, m, start, 1)
    return BaryCylinder(b, m, start, 2)


def bary_digits_common_prefix(iv: Interval, b: int, max_digits: Optional[int] = None) -> Tuple[int, ...]:
    """
    Longest digit word shared by the greedy base-b expansions of every point of iv.

    At depth k the points just inside the endpoints sit in cylinders
    floor(b^k left) and ceil(b^k right) - 1; the prefix runs while they agree.
    """
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if iv.left < 0 or iv.right > 1:
        raise ValueError(f"{iv} is not inside the unit interval")
    digits: List[int] = []
    ln, ld = iv.left.numerator, iv.left.denominator
    rn, rd = iv.right.numerator, iv.right.denominator
    power = 1
    while max_digits is None or len(digits) < max_digits:
        power *= b
        low_index = (ln * power) // ld
        high_index = -((-rn * power) // rd) - 1
        if low_index != high_index:
            break
        digits.append(low_index % b)
    return tuple(digits)


def bary_digits_between(iv: Interval, b: int, start: int, stop: int) -> Tuple[int, ...]:
    """
    Digits at positions start+1 .. stop shared by every point of iv, stopping
    at the first undetermined position. Empty when iv already straddles an
    order-(start+1) boundary.
    """
    digits: List[int] = []
    ln, ld = iv.left.numerator, iv.left.denominator
    rn, rd = iv.right.numerator, iv.right.denominator
    power = b ** start
    for _ in range(start, stop):
        power *= b
        low_index = (ln * power) // ld
        high_index = -((-rn * power) // rd) - 1
        if low_index != high_index:
            break
        digits.append(low_index % b)
    return tuple(digits)
