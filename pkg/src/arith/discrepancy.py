# File: src/arith/discrepancy.py
"""
Discrepancy of digit words.

cf discrepancy of a word w for a pattern v is |count/n - mu(I_v)| where
count is the number of windows of w (fully inside its n digits) equal to v.
b-ary simple discrepancy is max over digits of |count/n - 1/b|, exact.
Decisions of the form "discrepancy < threshold" are exact: they reduce to
an integer range of admissible counts, decided from certified floors.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import cycle, islice, product
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from arith.certified import (
    DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_PRECISION_BITS,
    CertifiedReal,
    PrecisionExhausted,
    enclose,
)
from arith.cylinders import cf_cylinder
from arith.measures import gauss_measure
from arith.rational_core import CfWord, as_word


@dataclass(frozen=True)
class CfDiscrepancyResult:
    pattern: CfWord
    prefix_length: int
    occurrence_count: int
    value: CertifiedReal

    def below(self, threshold) -> bool:
        """Certified test value < threshold (the enclosure's upper end decides)."""
        return self.value.upper < Fraction(threshold)


@dataclass(frozen=True)
class BaryDiscrepancyResult:
    base: int
    prefix_length: int
    per_digit: Dict[int, Fraction]
    value: Fraction


@dataclass(frozen=True)
class ConcatItem:
    name: str
    hypothesis: bool
    conclusion: bool

    @property
    def holds(self) -> bool:
        return (not self.hypothesis) or self.conclusion


@dataclass
class ConcatReport:
    items: List[ConcatItem] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(item.holds for item in self.items)

    def item(self, name: str) -> ConcatItem:
        for entry in self.items:
            if entry.name == name:
                return entry
        raise KeyError(name)


# -------------------------------
# Counting
# -------------------------------
def count_occurrences(w: Sequence[int], v: Sequence[int]) -> int:
    """Windows w_j..w_{j+k-1} equal to v with j + k - 1 <= len(w)."""
    w, v = tuple(w), tuple(v)
    k = len(v)
    if k == 0:
        raise ValueError("pattern must be nonempty")
    return sum(1 for j in range(len(w) - k + 1) if w[j:j + k] == v)


def window_counter(w: Sequence[int], k: int) -> Counter:
    """Counts of every length-k window of w; one pass serves every pattern of that length."""
    w = tuple(w)
    return Counter(w[j:j + k] for j in range(len(w) - k + 1))


@lru_cache(maxsize=4096)
def pattern_measure(v: CfWord, precision_bits: int = DEFAULT_PRECISION_BITS) -> CertifiedReal:
    return gauss_measure(cf_cylinder(v).interval, precision_bits)


def _absolute_gap(frequency: Fraction, measure: CertifiedReal) -> Tuple[Fraction, Fraction]:
    if frequency >= measure.upper:
        return frequency - measure.upper, frequency - measure.lower
    if frequency <= measure.lower:
        return measure.lower - frequency, measure.upper - frequency
    return Fraction(0), max(frequency - measure.lower, measure.upper - frequency)


def cf_discrepancy(w: Sequence[int], v: Sequence[int],
                   precision_bits: int = DEFAULT_PRECISION_BITS) -> CfDiscrepancyResult:
    w, v = as_word(w), as_word(v)
    if not w or not v:
        raise ValueError("cf_discrepancy needs a nonempty word and pattern")
    count = count_occurrences(w, v)
    return _cf_result(v, len(w), count, precision_bits)


def _cf_result(v: CfWord, n: int, count: int, precision_bits: int) -> CfDiscrepancyResult:
    measure = pattern_measure(v, precision_bits)
    lower, upper = _absolute_gap(Fraction(count, n), measure)
    return CfDiscrepancyResult(v, n, count, CertifiedReal(lower, upper, measure.precision_bits))


@lru_cache(maxsize=65536)
def count_bounds(v: CfWord, n: int, threshold: Fraction,
                 precision_bits: int = DEFAULT_PRECISION_BITS,
                 max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> Tuple[int, int]:
    """
    Exact range [c_min, c_max] of counts c with |c/n - mu(I_v)| < threshold.

    mu(I_v) is irrational for a nonempty v, so n(mu -+ threshold) is never an
    integer: c_max = floor(n(mu + thr)) and c_min = floor(n(mu - thr)) + 1.
    An empty range comes back as c_min > c_max.
    """
    v = as_word(v)
    threshold = Fraction(threshold)
    if not v:
        raise ValueError("pattern must be nonempty")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    bits = precision_bits
    while True:
        measure = pattern_measure(v, bits)
        hi_low, hi_high = math.floor(n * (measure.lower + threshold)), math.floor(n * (measure.upper + threshold))
        lo_low, lo_high = math.floor(n * (measure.lower - threshold)), math.floor(n * (measure.upper - threshold))
        if hi_low == hi_high and lo_low == lo_high:
            return max(0, lo_low + 1), min(n, hi_low)
        if bits >= max_precision_bits:
            raise PrecisionExhausted(f"count bounds for {list(v)} at n={n} undecided at {bits} bits")
        bits = min(2 * bits, max_precision_bits)


def discrepancy_below(w: Sequence[int], v: Sequence[int], threshold,
                      precision_bits: int = DEFAULT_PRECISION_BITS) -> bool:
    """Exact decision of D^cf_{v,|w|}(w) < threshold."""
    w, v = tuple(w), as_word(v)
    if not w:
        raise ValueError("word must be nonempty")
    c_min, c_max = count_bounds(v, len(w), Fraction(threshold), precision_bits)
    return c_min <= count_occurrences(w, v) <= c_max


def bary_discrepancy(w: Sequence[int], b: int) -> BaryDiscrepancyResult:
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    w = tuple(w)
    if not w:
        raise ValueError("bary_discrepancy needs a nonempty word")
    for position, digit in enumerate(w, start=1):
        if not 0 <= digit < b:
            raise ValueError(f"digit {digit} at position {position} is not a base-{b} digit")
    n = len(w)
    counts = Counter(w)
    per_digit = {digit: abs(Fraction(counts.get(digit, 0), n) - Fraction(1, b)) for digit in range(b)}
    return BaryDiscrepancyResult(b, n, per_digit, max(per_digit.values()))


# -------------------------------
# Concatenation properties
# -------------------------------
def check_cf_concat(w: Sequence[int], u: Sequence[int], v: Sequence[int], epsilon,
                    precision_bits: int = DEFAULT_PRECISION_BITS) -> ConcatReport:
    """
    Evaluate the three concatenation implications on concrete words:
    1:  D(w) < eps and D(u) < eps - (k-1)/s      =>  D_{n+s}(wu) < eps
    2a: D(w) < eps and s/n < eps                  =>  D_{n+l}(wu) < 2eps for 1 <= l <= s
    2b: D(w) < eps and s/n < eps                  =>  D_{n+s}(uw) < 2eps
    """
    w, u, v = as_word(w), as_word(u), as_word(v)
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not w or not v:
        raise ValueError("check_cf_concat needs nonempty w and v")
    n, s, k = len(w), len(u), len(v)
    wu, uw = w + u, u + w

    def below(word, threshold) -> bool:
        return discrepancy_below(word, v, threshold, precision_bits)

    w_ok = below(w, epsilon)
    report = ConcatReport()

    hyp1 = w_ok and s > 0 and below(u, epsilon - Fraction(k - 1, s))
    report.items.append(ConcatItem("1", hyp1, below(wu, epsilon) if hyp1 else False))

    hyp2 = w_ok and Fraction(s, n) < epsilon
    concl_2a = hyp2 and all(below(wu[:n + ell], 2 * epsilon) for ell in range(1, s + 1))
    report.items.append(ConcatItem("2a", hyp2, concl_2a))
    report.items.append(ConcatItem("2b", hyp2, below(uw, 2 * epsilon) if hyp2 else False))
    return report


def check_bary_concat(u: Sequence[int], v: Sequence[int], b: int, epsilon) -> ConcatReport:
    """
    1:  D(u) < eps and D(v) < eps        =>  D(uv) < eps
    2a: D(v) < eps and |u|/|v| < eps     =>  D_{|v|+l}(vu) < 2eps for 0 <= l <= |u|
    2b: D(v) < eps and |u|/|v| < eps     =>  D(uv) < 2eps
    """
    u, v = tuple(u), tuple(v)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    def d(word) -> Fraction:
        return bary_discrepancy(word, b).value

    report = ConcatReport()
    v_ok = bool(v) and d(v) < epsilon
    hyp1 = bool(u) and v_ok and d(u) < epsilon
    report.items.append(ConcatItem("1", hyp1, d(u + v) < epsilon if hyp1 else False))

    hyp2 = v_ok and Fraction(len(u), len(v)) < epsilon
    vu = v + u
    concl_2a = hyp2 and all(d(vu[:len(v) + ell]) < 2 * epsilon for ell in range(len(u) + 1))
    report.items.append(ConcatItem("2a", hyp2, concl_2a))
    report.items.append(ConcatItem("2b", hyp2, d(u + v) < 2 * epsilon if hyp2 else False))
    return report


# -------------------------------
# Large-deviation checks at small scale
# -------------------------------
def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bernstein_bad_fraction(b: int, delta, n: int) -> Fraction:
    """
    Exact fraction of the b^n words of length n with D_n > delta.

    Words are grouped by digit counts; each count vector stands for a
    multinomial number of words, so every word is accounted for exactly once.
    """
    delta = Fraction(delta)
    if b < 2 or n < 1:
        raise ValueError("need b >= 2 and n >= 1")
    bad = 0
    for counts in _compositions(n, b):
        deviation = max(abs(Fraction(c, n) - Fraction(1, b)) for c in counts)
        if deviation > delta:
            words = math.factorial(n)
            for c in counts:
                words //= math.factorial(c)
            bad += words
    return Fraction(bad, b ** n)


def bernstein_bad_fraction_bruteforce(b: int, delta, n: int) -> Fraction:
    """Word-by-word version of bernstein_bad_fraction, for small n."""
    delta = Fraction(delta)
    bad = sum(1 for word in product(range(b), repeat=n) if bary_discrepancy(word, b).value > delta)
    return Fraction(bad, b ** n)


def kpw_bad_measure(v: Sequence[int], n: int, delta, digit_cap: int,
                    precision_bits: int = DEFAULT_PRECISION_BITS) -> Tuple[Fraction, Fraction]:
    """
    Bracket [lower, upper] on the Gauss measure of the reals whose first n cf
    digits have discrepancy > delta for v. Words with all digits <= digit_cap
    are enumerated; every other word lies in {a_j > digit_cap} for some j <= n,
    whose measure is at most n log2(1 + 1/(digit_cap + 1)).
    """
    v = as_word(v)
    delta = Fraction(delta)
    measure = pattern_measure(v, precision_bits)
    lower = Fraction(0)
    upper = Fraction(0)
    for word in product(range(1, digit_cap + 1), repeat=n):
        lo, hi = _absolute_gap(Fraction(count_occurrences(word, v), n), measure)
        if lo > delta:
            mass = gauss_measure(cf_cylinder(word).interval, precision_bits)
            lower += mass.lower
            upper += mass.upper
        elif hi > delta:
            # undecided at this precision: only counts towards the upper end
            upper += gauss_measure(cf_cylinder(word).interval, precision_bits).upper
    ratio = Fraction(digit_cap + 2, digit_cap + 1)
    tail = enclose(lambda ctx: n * ctx.log(ctx.mpf(ratio.numerator) / ratio.denominator) / ctx.log(2),
                   precision_bits)
    return lower, min(Fraction(1), upper + tail.upper)


# -------------------------------
# Reference streams and profiles
# -------------------------------
def euler_cf_digits(count: int) -> CfWord:
    """cf digits of e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]."""
    def stream():
        yield 1
        k = 1
        while True:
            yield 2 * k
            yield 1
            yield 1
            k += 1
    return tuple(islice(stream(), count))


def periodic_cf_digits(period: Sequence[int], count: int) -> CfWord:
    """cf digits of the quadratic irrational [0; period, period, ...]."""
    return tuple(islice(cycle(as_word(period)), count))


def prefix_profile(digits: Sequence[int], patterns: Iterable[Sequence[int]], checkpoints: Iterable[int],
                   precision_bits: int = DEFAULT_PRECISION_BITS) -> List[CfDiscrepancyResult]:
    """cf discrepancy of every pattern at every prefix length in checkpoints."""
    digits = tuple(digits)
    patterns = [as_word(v) for v in patterns]
    rows = []
    for n in checkpoints:
        if not 1 <= n <= len(digits):
            continue
        prefix = digits[:n]
        counters: Dict[int, Counter] = {}
        for pattern in patterns:
            k = len(pattern)
            if k not in counters:
                counters[k] = window_counter(prefix, k)
            rows.append(_cf_result(pattern, n, counters[k][pattern], precision_bits))
    return rows


def bary_prefix_profile(digits: Sequence[int], b: int, checkpoints: Iterable[int]) -> List[BaryDiscrepancyResult]:
    digits = tuple(digits)
    return [bary_discrepancy(digits[:n], b) for n in checkpoints if 1 <= n <= len(digits)]
