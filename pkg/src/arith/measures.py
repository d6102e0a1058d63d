# File: src/arith/measures.py
"""
Certified evaluation of the Gauss measure, Levy's constant and the bounds
and schedules driving the construction.

All values come back as CertifiedReal enclosures (see arith.certified) or
as integers decided from such enclosures. Nothing here uses floats.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

from arith.certified import (
    DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_PRECISION_BITS,
    CertifiedReal,
    certified_ceil,
    certified_compare,
    certified_floor,
    enclose,
    iv_rational,
)
from arith.cylinders import Interval


@dataclass(frozen=True)
class BoundConstants:
    """K, C, N1 of the many-large-subintervals estimate; only existence is known."""
    K: int = 1
    C: int = 1
    N1: int = 10

    def __post_init__(self):
        for name in ("K", "C", "N1"):
            if getattr(self, name) < 1:
                raise ValueError(f"bound constant {name} must be >= 1, got {getattr(self, name)}")


class ScheduleEntry(NamedTuple):
    from_step: int
    t: int
    epsilon: Fraction


@dataclass(frozen=True)
class Schedule:
    s: int
    t: int
    epsilon: Fraction
    n0: int
    n_start: int
    overridden: bool = False


# -------------------------------
# Gauss measure and Levy's constant
# -------------------------------
def gauss_measure(iv: Interval, precision_bits: int = DEFAULT_PRECISION_BITS,
                  max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """mu(iv) = log2((1 + right) / (1 + left))."""
    if iv.left < 0 or iv.right > 1:
        raise ValueError(f"{iv} is not inside [0, 1]")
    ratio = (1 + iv.right) / (1 + iv.left)
    return enclose(lambda ctx: ctx.log(iv_rational(ctx, ratio)) / ctx.log(2),
                   precision_bits, max_precision_bits)


def _levy(ctx):
    return ctx.pi ** 2 / (12 * ctx.log(2))


def levy_constant(precision_bits: int = DEFAULT_PRECISION_BITS,
                  max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    return enclose(_levy, precision_bits, max_precision_bits)


# -------------------------------
# Large-deviation bounds
# -------------------------------
def _check_delta(delta: Fraction) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return delta


def deviation_M(delta: Fraction, k: int, precision_bits: int = DEFAULT_PRECISION_BITS,
                max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> int:
    """M(delta, k) = ceil(k - log(delta^2 / (2 log 2)))."""
    delta = _check_delta(delta)
    if k < 1:
        raise ValueError(f"pattern length k must be >= 1, got {k}")
    square = delta * delta
    return certified_ceil(
        lambda ctx: k - ctx.log(iv_rational(ctx, square) / (2 * ctx.log(2))),
        precision_bits, max_precision_bits)


def kpw_bound(delta: Fraction, n: int, k: int, precision_bits: int = DEFAULT_PRECISION_BITS,
              max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """6 M exp(-delta^2 n / (2M)): relative measure of cf words with discrepancy > delta."""
    delta = _check_delta(delta)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    M = deviation_M(delta, k, precision_bits, max_precision_bits)
    exponent = delta * delta * n / (2 * M)
    return enclose(lambda ctx: 6 * M * ctx.exp(-iv_rational(ctx, exponent)),
                   precision_bits, max_precision_bits)


def bernstein_bound(b: int, delta: Fraction, n: int, precision_bits: int = DEFAULT_PRECISION_BITS,
                    check_range: bool = True,
                    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """2 b^(n+1) exp(-b delta^2 n / 6), stated for 6/n <= delta <= 1/b."""
    delta = Fraction(delta)
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if check_range and not Fraction(6, n) <= delta <= Fraction(1, b):
        raise ValueError(f"delta={delta} outside [6/{n}, 1/{b}]")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    exponent = b * delta * delta * n / 6
    return enclose(lambda ctx: 2 * ctx.mpf(b) ** (n + 1) * ctx.exp(-iv_rational(ctx, exponent)),
                   precision_bits, max_precision_bits)


def _a_of_b(ctx, b: int, epsilon: Fraction, C: int):
    eps2 = iv_rational(ctx, epsilon * epsilon)
    tail = b * eps2 * (ctx.mpf(C) / (3 * ctx.log(b)) + ctx.mpf(1) / 2)
    return 384 * ctx.exp(4 * ctx.mpf(C)) * b * b * ctx.exp(tail)


def a_of_b(b: int, epsilon: Fraction, C: int, precision_bits: int = DEFAULT_PRECISION_BITS,
           max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """A(b) = 384 e^{4C} b^2 e^{b eps^2 (C/(3 log b) + 1/2)}."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    epsilon = Fraction(epsilon)
    return enclose(lambda ctx: _a_of_b(ctx, b, epsilon, C), precision_bits, max_precision_bits)


def cf_bad_zone_bound(t: int, epsilon: Fraction, n: int, precision_bits: int = DEFAULT_PRECISION_BITS,
                      max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """t^t 6M e^{-(eps/2)^2 n / (2M)} with M = M(eps/2, t)."""
    half = Fraction(epsilon) / 2
    M = deviation_M(half, t, precision_bits, max_precision_bits)
    exponent = half * half * n / (2 * M)
    return enclose(lambda ctx: ctx.mpf(t) ** t * 6 * M * ctx.exp(-iv_rational(ctx, exponent)),
                   precision_bits, max_precision_bits)


def bary_bad_zone_bound(b: int, epsilon: Fraction, n: int, C: int,
                        precision_bits: int = DEFAULT_PRECISION_BITS,
                        max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """A(b) e^{-b eps^2 L n / (3 log b)}."""
    epsilon = Fraction(epsilon)

    def build(ctx):
        eps2 = iv_rational(ctx, epsilon * epsilon)
        rate = b * eps2 * _levy(ctx) * n / (3 * ctx.log(b))
        return _a_of_b(ctx, b, epsilon, C) * ctx.exp(-rate)
    return enclose(build, precision_bits, max_precision_bits)


def proof_n0(t: int, epsilon: Fraction, constants: BoundConstants,
             precision_bits: int = DEFAULT_PRECISION_BITS,
             max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> int:
    """
    The explicit relative order that guarantees a valid block exists:
    max of -2/r log(gamma r) over the cf and b-ary bad zones, 6/eps,
    2(t-1)/eps and N1, rounded up from certified upper bounds.
    """
    epsilon = Fraction(epsilon)
    M = deviation_M(epsilon, t, precision_bits, max_precision_bits)
    K = constants.K

    def needed(build_r, build_gamma) -> Fraction:
        def value(ctx):
            r = build_r(ctx)
            return -2 / r * ctx.log(build_gamma(ctx) * r)
        return enclose(value, precision_bits, max_precision_bits).upper

    candidates = [Fraction(6) / epsilon, 2 * (t - 1) / epsilon, Fraction(constants.N1)]
    candidates.append(needed(
        lambda ctx: iv_rational(ctx, epsilon * epsilon) / (8 * M),
        lambda ctx: ctx.mpf(K) / (6 * M * ctx.mpf(t) ** (t + 1))))
    for b in range(2, t + 1):
        candidates.append(needed(
            lambda ctx, b=b: b * iv_rational(ctx, epsilon * epsilon) * _levy(ctx) / (3 * ctx.log(b)),
            lambda ctx, b=b: ctx.mpf(K) / (t * _a_of_b(ctx, b, epsilon, constants.C))))
    return math.ceil(max(candidates))


# -------------------------------
# Windows
# -------------------------------
def relative_window(n: int, constants: BoundConstants, precision_bits: int = DEFAULT_PRECISION_BITS,
                    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> Tuple[CertifiedReal, CertifiedReal]:
    """(e^{-2nL-2C}/4, 2 e^{-2nL+2C}): admissible relative lengths at relative order n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    C = constants.C
    low = enclose(lambda ctx: ctx.exp(-2 * n * _levy(ctx) - 2 * C) / 4, precision_bits, max_precision_bits)
    high = enclose(lambda ctx: 2 * ctx.exp(-2 * n * _levy(ctx) + 2 * C), precision_bits, max_precision_bits)
    return low, high


def nb_window(n: int, b: int, C: int, precision_bits: int = DEFAULT_PRECISION_BITS,
              max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> Tuple[CertifiedReal, CertifiedReal]:
    """Bounds 2nL/log b -+ (2C/log b + 3) on the number of b-ary digits added per step."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    lower = enclose(lambda ctx: (2 * n * _levy(ctx) - 2 * C) / ctx.log(b) - 3, precision_bits, max_precision_bits)
    upper = enclose(lambda ctx: (2 * n * _levy(ctx) + 2 * C) / ctx.log(b) + 3, precision_bits, max_precision_bits)
    return lower, upper


def default_slack(C: int) -> Fraction:
    """ceil(64 e^{4C}) = ceil(4 * 16 e^{4C}), the brick inequality constant."""
    return Fraction(certified_ceil(lambda ctx: 64 * ctx.exp(4 * ctx.mpf(C))))


# -------------------------------
# Schedules
# -------------------------------
def default_n_start(floor: int = 5) -> int:
    """Smallest n_start >= 1 with n0(1) = floor(log 1) + n_start >= floor."""
    return max(1, floor)


def _floor_log(s: int, precision_bits: int, max_precision_bits: int) -> int:
    if s == 1:
        return 0
    return certified_floor(lambda ctx: ctx.log(ctx.mpf(s)), precision_bits, max_precision_bits)


def _default_t(s: int, precision_bits: int, max_precision_bits: int) -> int:
    # t(s) >= k  <=>  log s >= k^5
    t = 2
    while certified_compare(lambda ctx: ctx.log(ctx.mpf(s)), (t + 1) ** 5,
                            precision_bits, max_precision_bits) >= 0:
        t += 1
    return t


def schedule(s: int, n_start: int, override: Optional[Sequence[ScheduleEntry]] = None,
             precision_bits: int = DEFAULT_PRECISION_BITS,
             max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> Schedule:
    """t(s) = max(2, floor((log s)^(1/5))), eps = 1/t, n0 = floor(log s) + n_start."""
    if s < 1:
        raise ValueError(f"step must be >= 1, got {s}")
    if n_start < 1:
        raise ValueError(f"n_start must be >= 1, got {n_start}")
    n0 = _floor_log(s, precision_bits, max_precision_bits) + n_start
    entry = None
    for candidate in override or ():
        if candidate.from_step <= s:
            entry = candidate
    if entry is not None:
        return Schedule(s, entry.t, Fraction(entry.epsilon), n0, n_start, overridden=True)
    t = _default_t(s, precision_bits, max_precision_bits)
    return Schedule(s, t, Fraction(1, t), n0, n_start)


def activation_step(b: int, override: Optional[Sequence[ScheduleEntry]] = None) -> int:
    """First step s whose schedule has t(s) >= b."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if b == 2:
        return 1
    for entry in override or ():
        if entry.t >= b:
            return entry.from_step
    if override:
        # the override table ends below b; the default schedule no longer applies
        raise ValueError(f"base {b} never activates under the given schedule override")
    # first integer above e^{b^5}; e^{b^5} has about 1.45 b^5 bits
    bits = int(1.45 * b ** 5) + 64
    return certified_floor(lambda ctx: ctx.exp(ctx.mpf(b) ** 5), bits, 4 * bits) + 1
