# File: src/arith/rational_core.py
"""
Exact rational arithmetic for continued fractions.

Words are tuples of positive integers (a_1, ..., a_n) standing for
[0; a_1, ..., a_n]. The empty word stands for the whole unit interval.
Everything here is exact: values are fractions.Fraction, never floats.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

Rational = Fraction
CfWord = Tuple[int, ...]


@dataclass(frozen=True)
class ConvergentPair:
    p: int
    q: int
    index: int


# -------------------------------
# Parsing / validation
# -------------------------------
def as_word(digits: Sequence[int]) -> CfWord:
    """Validate a digit sequence and freeze it as a CfWord."""
    word = tuple(int(d) for d in digits)
    for position, digit in enumerate(word, start=1):
        if digit < 1:
            raise ValueError(f"cf digit at position {position} must be >= 1, got {digit}")
    return word


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q" or an integer literal. Decimal strings are not accepted."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    raw = text.strip()
    if "." in raw or "e" in raw.lower():
        raise ValueError(f"expected a fraction 'p/q', got {text!r}")
    if "/" in raw:
        num, den = raw.split("/", 1)
        if int(den) <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(raw))


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


# -------------------------------
# Convergents
# -------------------------------
def convergents(word: Sequence[int]) -> List[ConvergentPair]:
    """
    Convergents (p_k, q_k) for k = -1 .. n.

    Seeds are p_{-1}=1, q_{-1}=0, p_0=0, q_0=1 and
    p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2}.
    """
    word = as_word(word)
    pairs = [ConvergentPair(1, 0, -1), ConvergentPair(0, 1, 0)]
    p_prev, q_prev, p, q = 1, 0, 0, 1
    for index, digit in enumerate(word, start=1):
        p_prev, p = p, digit * p + p_prev
        q_prev, q = q, digit * q + q_prev
        pairs.append(ConvergentPair(p, q, index))
    return pairs


def tail_convergents(word: Sequence[int]) -> Tuple[ConvergentPair, ConvergentPair]:
    """The last two convergents (index n-1 and n) without building the whole list."""
    p_prev, q_prev, p, q = 1, 0, 0, 1
    n = 0
    for n, digit in enumerate(word, start=1):
        if digit < 1:
            raise ValueError(f"cf digit at position {n} must be >= 1, got {digit}")
        p_prev, p = p, digit * p + p_prev
        q_prev, q = q, digit * q + q_prev
    return ConvergentPair(p_prev, q_prev, n - 1), ConvergentPair(p, q, n)


def cf_to_rational(word: Sequence[int]) -> Fraction:
    if len(word) == 0:
        raise ValueError("the empty cf word has no value")
    _, last = tail_convergents(word)
    return Fraction(last.p, last.q)


def canonical_word(word: Sequence[int]) -> CfWord:
    """Rewrite a trailing digit 1 into the previous digit (…, a, 1) -> (…, a+1)."""
    word = as_word(word)
    if len(word) > 1 and word[-1] == 1:
        return word[:-2] + (word[-2] + 1,)
    return word


def rational_to_cf(x: Fraction) -> CfWord:
    """Finite cf expansion of 0 < x <= 1, canonical (last digit >= 2 unless the word is (1,))."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"rational_to_cf expects 0 < x <= 1, got {x}")
    digits: List[int] = []
    num, den = x.numerator, x.denominator
    # Euclid on 1/x = den/num
    while num:
        digit, rem = divmod(den, num)
        digits.append(digit)
        den, num = num, rem
    return tuple(digits)


# -------------------------------
# Shift maps
# -------------------------------
def gauss_map(x: Fraction) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"gauss_map expects 0 <= x <= 1, got {x}")
    if x == 0:
        return Fraction(0)
    inverse = 1 / x
    return inverse - (inverse.numerator // inverse.denominator)


def bary_shift(x: Fraction, b: int) -> Fraction:
    x = Fraction(x)
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if not 0 <= x <= 1:
        raise ValueError(f"bary_shift expects 0 <= x <= 1, got {x}")
    scaled = b * x
    return scaled - (scaled.numerator // scaled.denominator)


def drop_leading_one(word: Sequence[int]) -> CfWord:
    """x-word [1, a_2, ..., a_n] -> y-word [a_2, ..., a_n]."""
    word = as_word(word)
    if len(word) < 2 or word[0] != 1:
        raise ValueError(f"cannot drop a leading 1 from {list(word)}")
    return word[1:]


def prepend_one(word: Sequence[int]) -> CfWord:
    """y-word [a_1, ..., a_n] -> x-word [1, a_1, ..., a_n]."""
    return (1,) + as_word(word)


def reciprocal_shift(word: Sequence[int], direction: str = "drop") -> CfWord:
    """Move between the cf words of x and y = 1/x - 1."""
    if direction == "drop":
        return drop_leading_one(word)
    if direction == "prepend":
        return prepend_one(word)
    raise ValueError(f"direction must be 'drop' or 'prepend', got {direction!r}")


def reciprocal_image(x: Fraction) -> Fraction:
    """u -> 1/u - 1, the map carrying x-values to y-values."""
    return 1 / Fraction(x) - 1


if __name__ == "__main__":
    sample = input("💬 Enter a fraction p/q in (0,1]: ") or "2/3"
    value = parse_rational(sample)
    word = rational_to_cf(value)
    print(f"🔢 cf({format_rational(value)}) = {list(word)}")
    for pair in convergents(word)[2:]:
        print(f"   p_{pair.index}/q_{pair.index} = {pair.p}/{pair.q}")
    print(f"✅ round trip: {cf_to_rational(word) == value}")
