# File: src/arith/certified.py
"""
Certified real enclosures on top of mpmath's interval context.

Every transcendental quantity in the construction is evaluated with
mpmath.iv (outward rounding) and brought back as a pair of exact
Fractions. Decisions (floor, ceiling, comparison with a rational) are
only returned once the enclosure settles them; otherwise the working
precision is doubled up to a ceiling, then PrecisionExhausted is raised.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import iv, libmp

GUARD_BITS = 16
DEFAULT_PRECISION_BITS = 64
DEFAULT_MAX_PRECISION_BITS = 4096

# iv.prec is process-global
_IV_LOCK = threading.RLock()


class PrecisionExhausted(ArithmeticError):
    """A certified evaluation or decision needed more precision than allowed."""


@dataclass(frozen=True)
class CertifiedReal:
    lower: Fraction
    upper: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value) -> bool:
        return self.lower <= Fraction(value) <= self.upper

    def certainly_less(self, value) -> bool:
        return self.upper < Fraction(value)

    def certainly_greater(self, value) -> bool:
        return self.lower > Fraction(value)

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        return f"[{float(self.lower):.12g}, {float(self.upper):.12g}]"


Builder = Callable[[object], object]


def iv_rational(ctx, value) -> object:
    """Enclose an exact rational in the interval context."""
    value = Fraction(value)
    return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        if raw == libmp.fzero:
            return Fraction(0)
        raise ArithmeticError("interval endpoint is not finite")
    value = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -value if sign else value


def interval_endpoints(value) -> tuple:
    a, b = value._mpi_
    return _raw_to_fraction(a), _raw_to_fraction(b)


def _evaluate(build: Builder, bits: int):
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = bits
        try:
            return interval_endpoints(build(iv))
        finally:
            iv.prec = saved


def enclose(build: Builder, precision_bits: int = DEFAULT_PRECISION_BITS,
            max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> CertifiedReal:
    """
    Evaluate build(iv) until the enclosure is at most 2^-precision_bits wide.

    Working precision starts at precision_bits + GUARD_BITS and doubles; large
    magnitudes need more working bits than the requested absolute width.
    """
    if precision_bits < 1:
        raise ValueError(f"precision_bits must be >= 1, got {precision_bits}")
    if precision_bits > max_precision_bits:
        raise PrecisionExhausted(
            f"requested {precision_bits} bits, maximum is {max_precision_bits}")
    target = Fraction(1, 2 ** precision_bits)
    bits = precision_bits + GUARD_BITS
    ceiling = 4 * max_precision_bits + GUARD_BITS
    while True:
        lower, upper = _evaluate(build, bits)
        if upper - lower <= target:
            return CertifiedReal(lower, upper, precision_bits)
        if bits >= ceiling:
            raise PrecisionExhausted(
                f"enclosure still {float(upper - lower):.3g} wide at {bits} working bits")
        bits = min(2 * bits, ceiling)


def _settle(build: Builder, decide, precision_bits: int, max_precision_bits: int, what: str):
    bits = precision_bits
    while True:
        real = enclose(build, bits, max_precision_bits)
        verdict = decide(real)
        if verdict is not None:
            return verdict
        if bits >= max_precision_bits:
            raise PrecisionExhausted(f"{what} undecided at {bits} bits: {real}")
        bits = min(2 * bits, max_precision_bits)


def certified_floor(build: Builder, precision_bits: int = DEFAULT_PRECISION_BITS,
                    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> int:
    def decide(real: CertifiedReal):
        low, high = math.floor(real.lower), math.floor(real.upper)
        return low if low == high else None
    return _settle(build, decide, precision_bits, max_precision_bits, "floor")


def certified_ceil(build: Builder, precision_bits: int = DEFAULT_PRECISION_BITS,
                   max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> int:
    def decide(real: CertifiedReal):
        low, high = math.ceil(real.lower), math.ceil(real.upper)
        return low if low == high else None
    return _settle(build, decide, precision_bits, max_precision_bits, "ceiling")


def certified_compare(build: Builder, value, precision_bits: int = DEFAULT_PRECISION_BITS,
                      max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS) -> int:
    """Sign of (build - value): -1 or 1, or 0 when the enclosure collapses onto value."""
    value = Fraction(value)

    def decide(real: CertifiedReal):
        if real.upper < value:
            return -1
        if real.lower > value:
            return 1
        if real.lower == real.upper == value:
            return 0
        return None
    return _settle(build, decide, precision_bits, max_precision_bits, f"comparison with {value}")
