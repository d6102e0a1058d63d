# File: src/agents/refinement_agent.py
"""
Refinement Agent - refines a brick pair by one shared cf block

A brick is one cf cylinder plus, for every base b = 2..t, a b-ary cylinder
(or the union of two neighbours) containing it. The pair couples the brick
of x with the brick of y = 1/x - 1: the x word is (1,) followed by the y
word, so appending the same block to both keeps them coupled.

refine_pair looks for the leftmost block whose two new cf cylinders land in
the relative-length window, whose cf pattern counts are certified close to
the Gauss measure, and whose new b-ary digits are close to uniform for every
active base. Every candidate is checked with exact arithmetic; nothing is
taken on trust from the existence argument.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from arith.certified import DEFAULT_MAX_PRECISION_BITS, DEFAULT_PRECISION_BITS, CertifiedReal, PrecisionExhausted
from arith.cylinders import (
    DEFAULT_MAX_ORDER,
    BaryCylinder,
    CfCylinder,
    Interval,
    bary_digits_between,
    cf_cylinder,
    enclosing_bary,
    walk_relative_cylinders,
)
from arith.discrepancy import bary_discrepancy, cf_discrepancy, count_bounds, discrepancy_below, window_counter
from arith.measures import BoundConstants, default_slack, relative_window
from arith.rational_core import CfWord, format_rational

MODES = ("search", "schedule")
DEFAULT_N_CEILING = 40


# -------------------------------
# Errors
# -------------------------------
class RefinementError(RuntimeError):
    """Raised when no refinement can be produced."""


class UnsatisfiableRefinement(RefinementError):
    """epsilon - (t-1)/n is not positive for any n the search may use."""


class NoValidBlockError(RefinementError):
    def __init__(self, message: str, stats: Counter, n_range: Tuple[int, int]):
        super().__init__(message)
        self.stats = stats
        self.n_range = n_range


class BaseExtensionError(RuntimeError):
    """A base was added twice without a refinement in between."""


# -------------------------------
# Bricks
# -------------------------------
@dataclass(frozen=True)
class Brick:
    t: int
    cf: CfCylinder
    bary: Mapping[int, BaryCylinder]

    @property
    def word(self) -> CfWord:
        return self.cf.word

    def bases(self) -> List[int]:
        return sorted(self.bary)


@dataclass(frozen=True)
class BrickPair:
    x_brick: Brick
    y_brick: Brick
    base_extended: bool = False

    @property
    def t(self) -> int:
        return self.x_brick.t


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    margin: Optional[Fraction] = None
    detail: str = ""


@dataclass
class Diagnostics:
    """Pass/fail per invariant; margins are exact (or certified lower bounds)."""
    checks: List[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, margin: Optional[Fraction] = None, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), margin, detail))
        return bool(passed)

    def extend(self, other: "Diagnostics") -> "Diagnostics":
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]

    def margins(self) -> Dict[str, Fraction]:
        return {check.name: check.margin for check in self.checks if check.margin is not None}

    def summary(self) -> str:
        failed = self.failures()
        if not failed:
            return f"{len(self.checks)} checks passed"
        names = ", ".join(check.name for check in failed[:5])
        return f"{len(failed)} of {len(self.checks)} checks failed: {names}"


@dataclass(frozen=True)
class BaseExtension:
    base: int
    order: int
    x_new_digits: Tuple[Tuple[int, ...], ...]
    y_new_digits: Tuple[Tuple[int, ...], ...]

    @property
    def n_b(self) -> int:
        return len(self.x_new_digits[0])


@dataclass(frozen=True)
class RefinementSettings:
    constants: BoundConstants = BoundConstants()
    slack: Optional[Fraction] = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS
    n_ceiling: int = DEFAULT_N_CEILING
    max_order: int = DEFAULT_MAX_ORDER

    def resolved_slack(self) -> Fraction:
        if self.slack is not None:
            return Fraction(self.slack)
        return default_slack(self.constants.C)


@dataclass
class RefinementOutcome:
    block: CfWord
    new_pair: BrickPair
    n_used: int
    per_base_extensions: Dict[int, BaseExtension]
    diagnostics: Diagnostics
    binding_window: str
    threshold: Fraction
    pattern_bounds: Dict[CfWord, Fraction]
    failure_stats: Counter
    candidates_tried: int


def seed_pair() -> BrickPair:
    """x in (1/2, 1) with sigma_2 = (1/2, 1); y in (0, 1) with Sigma_2 = (0, 1)."""
    x_brick = Brick(2, cf_cylinder((1,)), {2: BaryCylinder(2, 1, 1, 1)})
    y_brick = Brick(2, cf_cylinder(()), {2: BaryCylinder(2, 0, 0, 1)})
    return BrickPair(x_brick, y_brick)


def pattern_set(t: int) -> List[CfWord]:
    """Every word of length 1..t with digits 1..t."""
    return [word for length in range(1, t + 1) for word in product(range(1, t + 1), repeat=length)]


# -------------------------------
# Validation
# -------------------------------
def _validate_brick(brick: Brick, slack: Fraction, label: str, diag: Diagnostics) -> None:
    expected = list(range(2, brick.t + 1))
    diag.add(f"{label}.t", brick.t >= 2, detail=f"t={brick.t}")
    diag.add(f"{label}.bases", brick.bases() == expected,
             detail=f"bases {brick.bases()} against {expected}")
    cf_iv = brick.cf.interval
    for b, cyl in sorted(brick.bary.items()):
        bary_iv = cyl.interval
        inside = min(cf_iv.left - bary_iv.left, bary_iv.right - cf_iv.right)
        diag.add(f"{label}.contains[{b}]", inside >= 0, inside, f"{cf_iv} in {bary_iv}")
        spare = brick.cf.length * slack * b - cyl.length
        diag.add(f"{label}.brick[{b}]", spare >= 0, spare,
                 f"|cf| * {format_rational(slack)} * {b} >= |bary|")
        diag.add(f"{label}.width[{b}]", cyl.width_units in (1, 2) and cyl.base == b,
                 detail=f"width {cyl.width_units}, base {cyl.base}")


def validate_brick_pair(pair: BrickPair, slack) -> Diagnostics:
    """Exact check of every brick and pair invariant; never raises for a broken pair."""
    slack = Fraction(slack)
    diag = Diagnostics()
    x, y = pair.x_brick, pair.y_brick
    _validate_brick(x, slack, "x", diag)
    _validate_brick(y, slack, "y", diag)

    diag.add("pair.t", x.t == y.t, detail=f"x t={x.t}, y t={y.t}")
    diag.add("pair.shared_tail", x.word == (1,) + y.word,
             detail=f"x word length {len(x.word)}, y word length {len(y.word)}")

    x_len, y_len = x.cf.length, y.cf.length
    margin = min(x_len - y_len / 4, y_len - x_len)
    diag.add("pair.length_ratio", margin >= 0, margin, "|y|/4 <= |x| <= |y|")

    initial = y.word == ()
    for b in sorted(set(x.bary) & set(y.bary)):
        gap = abs(x.bary[b].length - y.bary[b].length)
        diag.add(f"pair.equal_bary[{b}]", initial or gap == 0, -gap,
                 "initial pair" if initial else f"|x_{b}| = |y_{b}|")

    try:
        coupled = x.cf.interval.reciprocal_image() == y.cf.interval
    except ValueError:
        coupled = False
    diag.add("pair.reciprocal", coupled, detail="image of x under u -> 1/u - 1")
    return diag


# -------------------------------
# Certified window decisions
# -------------------------------
@lru_cache(maxsize=1024)
def _window(n: int, constants: BoundConstants, bits: int, max_bits: int) -> Tuple[CertifiedReal, CertifiedReal]:
    return relative_window(n, constants, bits, max_bits)


def _window_bits(n: int, settings: RefinementSettings) -> int:
    # the window shrinks like e^{-2nL}, about 3.4n bits
    return min(settings.precision_bits + 4 * n + 8, settings.max_precision_bits)


def _against_window(value: Fraction, n: int, side: int, settings: RefinementSettings) -> Tuple[int, Fraction]:
    """Sign of value - bound (side 0: lower end, 1: upper end) and a certified lower bound on the gap."""
    bits = _window_bits(n, settings)
    while True:
        bound = _window(n, settings.constants, bits, settings.max_precision_bits)[side]
        if value > bound.upper:
            return 1, value - bound.upper
        if value < bound.lower:
            return -1, bound.lower - value
        if bits >= settings.max_precision_bits:
            raise PrecisionExhausted(f"window comparison at n={n} undecided at {bits} bits")
        bits = min(2 * bits, settings.max_precision_bits)


def _in_window(relative: Fraction, n: int, settings: RefinementSettings) -> Tuple[bool, Fraction, Fraction]:
    low_sign, low_gap = _against_window(relative, n, 0, settings)
    if low_sign < 0:
        return False, -low_gap, Fraction(0)
    high_sign, high_gap = _against_window(relative, n, 1, settings)
    if high_sign > 0:
        return False, low_gap, -high_gap
    return True, low_gap, high_gap


def _max_order(base: int, parent_length: Fraction, n: int, floor: int, settings: RefinementSettings) -> int:
    """Largest m > floor with (upper window) * parent_length <= base^-m, or floor when there is none."""
    m = floor
    while True:
        limit = 1 / (parent_length * base ** (m + 1))
        sign, _ = _against_window(limit, n, 1, settings)
        if sign < 0:
            return m
        m += 1


# -------------------------------
# Search guards
# -------------------------------
class _PatternGuard:
    """Count ranges [c_min, c_max] per pattern; prunes prefixes that can no longer fit."""

    def __init__(self, patterns: Sequence[CfWord], n: int, threshold: Fraction, settings: RefinementSettings):
        self.n = n
        self.top_digit = max(max(v) for v in patterns)
        self.bounds: Dict[CfWord, Tuple[int, int]] = {}
        self.by_length: Dict[int, List[Tuple[CfWord, int, int]]] = {}
        self._seen: Dict[CfWord, bool] = {}
        for v in patterns:
            c_min, c_max = count_bounds(v, n, threshold, settings.precision_bits, settings.max_precision_bits)
            self.bounds[v] = (c_min, c_max)
            self.by_length.setdefault(len(v), []).append((v, c_min, c_max))

    @property
    def feasible(self) -> bool:
        return all(c_min <= c_max for c_min, c_max in self.bounds.values())

    def admits(self, block: CfWord) -> bool:
        # digits above every pattern digit are interchangeable for counting
        key = tuple(d if d <= self.top_digit else 0 for d in block)
        verdict = self._seen.get(key)
        if verdict is None:
            verdict = self._seen[key] = self._admits(key)
        return verdict

    def _admits(self, block: CfWord) -> bool:
        size = len(block)
        for k, entries in self.by_length.items():
            total = max(0, self.n - k + 1)
            seen = max(0, size - k + 1)
            counts = window_counter(block, k) if seen else Counter()
            remaining = total - seen
            for v, c_min, c_max in entries:
                c = counts.get(v, 0)
                if c > c_max or c + remaining < c_min:
                    return False
        return True


@dataclass(frozen=True)
class _DigitGuard:
    """Simple-discrepancy allowance for the n_b new digits at positions old_order+1..order."""
    base: int
    old_order: int
    order: int
    epsilon: Fraction

    @property
    def n_b(self) -> int:
        return self.order - self.old_order

    def admits(self, digits: Sequence[int]) -> bool:
        n_b = self.n_b
        upper = n_b * (Fraction(1, self.base) + self.epsilon)
        lower = n_b * (Fraction(1, self.base) - self.epsilon)
        remaining = n_b - len(digits)
        counts = Counter(digits)
        for digit in range(self.base):
            c = counts.get(digit, 0)
            if c >= upper or c + remaining <= lower:
                return False
        return True

    def admits_interval(self, iv: Interval) -> bool:
        digits = bary_digits_between(iv, self.base, self.old_order, self.order)
        return not digits or self.admits(digits)

    def new_digits(self, cyl: BaryCylinder) -> Tuple[Tuple[int, ...], ...]:
        return tuple(word[self.old_order:] for word in cyl.constituents())

    def accepts(self, cyl: BaryCylinder) -> bool:
        return all(bary_discrepancy(digits, self.base).value < self.epsilon for digits in self.new_digits(cyl))


def _widenings(cyl: BaryCylinder) -> List[BaryCylinder]:
    """Width-2 cylinders containing a width-1 one: right neighbour first, then left."""
    options = []
    if cyl.start_index + 2 <= cyl.scale:
        options.append(BaryCylinder(cyl.base, cyl.order, cyl.start_index, 2))
    if cyl.start_index >= 1:
        options.append(BaryCylinder(cyl.base, cyl.order, cyl.start_index - 1, 2))
    return options


def _matched_enclosures(x_iv: Interval, y_iv: Interval, base: int, order: int,
                        x_parent: Optional[BaryCylinder], y_parent: Optional[BaryCylinder],
                        x_guard: Optional[_DigitGuard] = None,
                        y_guard: Optional[_DigitGuard] = None) -> Optional[Tuple[BaryCylinder, BaryCylinder]]:
    """
    Order-m enclosures of both intervals with the same width. The narrower
    one is widened inside its parent when the minimal widths differ.
    """
    scale = base ** order
    if x_iv.length * scale >= 1 or y_iv.length * scale >= 1:
        return None
    x_cyl = enclosing_bary(x_iv, base, order)
    y_cyl = enclosing_bary(y_iv, base, order)

    def fits(cyl, parent, guard) -> bool:
        if parent is not None and not parent.interval.contains(cyl.interval):
            return False
        return guard is None or guard.accepts(cyl)

    if x_cyl.width_units == y_cyl.width_units:
        if fits(x_cyl, x_parent, x_guard) and fits(y_cyl, y_parent, y_guard):
            return x_cyl, y_cyl
        return None
    if x_cyl.width_units == 1:
        if not fits(y_cyl, y_parent, y_guard):
            return None
        for wide in _widenings(x_cyl):
            if fits(wide, x_parent, x_guard):
                return wide, y_cyl
        return None
    if not fits(x_cyl, x_parent, x_guard):
        return None
    for wide in _widenings(y_cyl):
        if fits(wide, y_parent, y_guard):
            return x_cyl, wide
    return None


# -------------------------------
# Refinement
# -------------------------------
def _binding(stats: Counter) -> str:
    x_side, y_side = stats.get("x_window", 0), stats.get("y_window", 0)
    if x_side and y_side:
        return "both"
    if x_side:
        return "x"
    if y_side:
        return "y"
    return "none"


def _search_at(pair: BrickPair, n: int, epsilon: Fraction, patterns: List[CfWord],
               settings: RefinementSettings, slack: Fraction, stats: Counter) -> Optional[RefinementOutcome]:
    t = pair.t
    x, y = pair.x_brick, pair.y_brick
    threshold = epsilon - Fraction(t - 1, n)
    guard = _PatternGuard(patterns, n, threshold, settings)
    if not guard.feasible:
        stats["pattern_infeasible"] += 1
        return None

    digit_guards: Dict[int, Tuple[_DigitGuard, _DigitGuard]] = {}
    for b in range(2, t + 1):
        old_x, old_y = x.bary[b].order, y.bary[b].order
        m_b = _max_order(b, y.cf.length, n, max(old_x, old_y), settings)
        if m_b <= max(old_x, old_y):
            stats["nb_infeasible"] += 1
            return None
        digit_guards[b] = (_DigitGuard(b, old_x, m_b, epsilon), _DigitGuard(b, old_y, m_b, epsilon))

    def accept_prefix(block: CfWord, iv: Interval) -> bool:
        if not guard.admits(block):
            stats["pruned_cf"] += 1
            return False
        y_iv = iv.reciprocal_image()
        for x_guard, y_guard in digit_guards.values():
            if not x_guard.admits_interval(iv) or not y_guard.admits_interval(y_iv):
                stats["pruned_bary"] += 1
                return False
        return True

    low, high = _window(n, settings.constants, _window_bits(n, settings), settings.max_precision_bits)
    if low.lower <= 0:
        raise PrecisionExhausted(f"lower window end at n={n} not separated from 0")
    tried = 0
    local = Counter()
    for found in walk_relative_cylinders(x.word, n, low.lower, high.upper, accept_prefix, settings.max_order):
        tried += 1
        ok, x_low_gap, x_high_gap = _in_window(found.relative_length, n, settings)
        if not ok:
            local["x_window"] += 1
            continue
        tau = found.interval
        y_cf = cf_cylinder(y.word + found.block)
        r_y = y_cf.length / y.cf.length
        ok, y_low_gap, y_high_gap = _in_window(r_y, n, settings)
        if not ok:
            local["y_window"] += 1
            continue

        chosen: Dict[int, Tuple[BaryCylinder, BaryCylinder]] = {}
        for b, (x_guard, y_guard) in digit_guards.items():
            match = _matched_enclosures(tau, y_cf.interval, b, x_guard.order, x.bary[b], y.bary[b],
                                        x_guard, y_guard)
            if match is None:
                break
            chosen[b] = match
        if len(chosen) != len(digit_guards):
            local["bary"] += 1
            continue

        x_cf = cf_cylinder(found.word)
        new_pair = BrickPair(
            Brick(t, x_cf, {b: match[0] for b, match in chosen.items()}),
            Brick(t, y_cf, {b: match[1] for b, match in chosen.items()}),
        )
        validation = validate_brick_pair(new_pair, slack)
        if not validation.ok:
            local[validation.failures()[0].name.split("[")[0]] += 1
            continue

        diag = Diagnostics()
        diag.add("window.x_low", True, x_low_gap)
        diag.add("window.x_high", True, x_high_gap)
        diag.add("window.y_low", True, y_low_gap)
        diag.add("window.y_high", True, y_high_gap)
        pattern_bounds: Dict[CfWord, Fraction] = {}
        for v in patterns:
            value = cf_discrepancy(found.block, v, settings.precision_bits).value
            pattern_bounds[v] = value.upper
            c_min, c_max = guard.bounds[v]
            count = window_counter(found.block, len(v)).get(v, 0)
            diag.add(f"cf[{','.join(map(str, v))}]", c_min <= count <= c_max, threshold - value.upper)
        extensions: Dict[int, BaseExtension] = {}
        for b, (x_cyl, y_cyl) in chosen.items():
            x_guard, y_guard = digit_guards[b]
            x_digits, y_digits = x_guard.new_digits(x_cyl), y_guard.new_digits(y_cyl)
            worst = max(bary_discrepancy(d, b).value for d in x_digits + y_digits)
            diag.add(f"bary[{b}]", worst < epsilon, epsilon - worst)
            extensions[b] = BaseExtension(b, x_guard.order, x_digits, y_digits)
        diag.extend(validation)

        stats.update(local)
        return RefinementOutcome(
            block=found.block,
            new_pair=new_pair,
            n_used=n,
            per_base_extensions=extensions,
            diagnostics=diag,
            binding_window=_binding(local),
            threshold=threshold,
            pattern_bounds=pattern_bounds,
            failure_stats=Counter(stats),
            candidates_tried=tried,
        )
    stats.update(local)
    stats["exhausted"] += 1
    return None


def refine_pair(pair: BrickPair, t_new: int, epsilon, mode: str = "search", n_hint: int = 1,
                settings: Optional[RefinementSettings] = None) -> RefinementOutcome:
    """
    Append the leftmost valid block to both cf words and re-enclose every base.

    mode="schedule" tries exactly n = n_hint; mode="search" tries n_hint,
    n_hint + 1, ... up to the configured ceiling. With t_new = t + 1 the
    refined pair also gets the next base through extend_base.
    """
    settings = settings or RefinementSettings()
    epsilon = Fraction(epsilon)
    t = pair.t
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if t_new not in (t, t + 1):
        raise ValueError(f"t_new must be {t} or {t + 1}, got {t_new}")
    if epsilon <= 0:
        raise UnsatisfiableRefinement(f"epsilon = {epsilon}: no count can beat a non-positive threshold")
    if epsilon > Fraction(1, t):
        raise ValueError(f"epsilon must be <= 1/{t}, got {epsilon}")
    if not 1 <= n_hint <= settings.max_order:
        raise ValueError(f"n_hint must be in 1..{settings.max_order}, got {n_hint}")

    if mode == "schedule":
        n_values = [n_hint]
    else:
        n_values = list(range(n_hint, max(n_hint, settings.n_ceiling) + 1))
    n_values = [n for n in n_values if n <= settings.max_order]
    usable = [n for n in n_values if epsilon > Fraction(t - 1, n)]
    if not usable:
        raise UnsatisfiableRefinement(
            f"epsilon = {epsilon} <= {t - 1}/n for every n in {n_values[0]}..{n_values[-1]}")

    slack = settings.resolved_slack()
    patterns = pattern_set(t)
    stats: Counter = Counter()
    stats["threshold"] += len(n_values) - len(usable)
    print(f"🧱 Refinement Agent working: t={t}, epsilon={format_rational(epsilon)}, "
          f"n in {usable[0]}..{usable[-1]}, mode={mode}")
    for n in usable:
        outcome = _search_at(pair, n, epsilon, patterns, settings, slack, stats)
        if outcome is None:
            continue
        print(f"✅ Block of length {n} after {outcome.candidates_tried} candidates "
              f"(binding window: {outcome.binding_window})")
        if t_new == t + 1:
            outcome.new_pair = extend_base(outcome.new_pair)
            outcome.diagnostics.extend(validate_brick_pair(outcome.new_pair, slack))
        return outcome

    reasons = ", ".join(f"{key}={value}" for key, value in stats.most_common())
    raise NoValidBlockError(
        f"no valid block for n in {usable[0]}..{usable[-1]} ({reasons})", stats, (usable[0], usable[-1]))


# -------------------------------
# Replay
# -------------------------------
@dataclass
class BlockAudit:
    diagnostics: Diagnostics
    new_pair: Optional[BrickPair]
    bases: Dict[int, Tuple[int, int]]


def recheck_block(pair: BrickPair, block: Sequence[int], epsilon,
                  settings: Optional[RefinementSettings] = None) -> BlockAudit:
    """
    Re-derive one refinement from its block alone.

    The windows, the pattern counts and every base's order and digits are
    decided again from pair and block; bases maps b to (m_b, n_b) as the
    search chose them. new_pair is None when any check fails.
    """
    settings = settings or RefinementSettings()
    epsilon = Fraction(epsilon)
    block = tuple(block)
    n = len(block)
    t = pair.t
    x, y = pair.x_brick, pair.y_brick
    diag = Diagnostics()
    if not diag.add("block.length", 1 <= n <= settings.max_order and epsilon > Fraction(t - 1, n),
                    detail=f"n={n}"):
        return BlockAudit(diag, None, {})

    x_cf, y_cf = cf_cylinder(x.word + block), cf_cylinder(y.word + block)
    for label, new, old in (("x", x_cf, x.cf), ("y", y_cf, y.cf)):
        ok, low_gap, high_gap = _in_window(new.length / old.length, n, settings)
        diag.add(f"window.{label}", ok, min(low_gap, high_gap))

    threshold = epsilon - Fraction(t - 1, n)
    for v in pattern_set(t):
        diag.add(f"cf[{','.join(map(str, v))}]",
                 discrepancy_below(block, v, threshold, settings.precision_bits))

    chosen: Dict[int, Tuple[BaryCylinder, BaryCylinder]] = {}
    bases: Dict[int, Tuple[int, int]] = {}
    for b in range(2, t + 1):
        old_x, old_y = x.bary[b].order, y.bary[b].order
        floor = max(old_x, old_y)
        m_b = _max_order(b, y.cf.length, n, floor, settings)
        bases[b] = (m_b, m_b - old_x)
        match = None
        if m_b > floor:
            match = _matched_enclosures(x_cf.interval, y_cf.interval, b, m_b, x.bary[b], y.bary[b],
                                        _DigitGuard(b, old_x, m_b, epsilon), _DigitGuard(b, old_y, m_b, epsilon))
        if diag.add(f"bary[{b}]", match is not None, detail=f"order {m_b}"):
            chosen[b] = match
    if not diag.ok:
        return BlockAudit(diag, None, bases)

    new_pair = BrickPair(
        Brick(t, x_cf, {b: match[0] for b, match in chosen.items()}),
        Brick(t, y_cf, {b: match[1] for b, match in chosen.items()}),
    )
    diag.extend(validate_brick_pair(new_pair, settings.resolved_slack()))
    return BlockAudit(diag, new_pair if diag.ok else None, bases)


def extend_base(pair: BrickPair, announce: bool = True) -> BrickPair:
    """
    Add base t+1 to both bricks at the largest order m with |y cf| <= (t+1)^-m.

    Both enclosures get the same width. The y brick meets the bound
    |y cf| >= |y_{t+1}| / (2(t+1)); the x brick, a quarter as long at worst,
    meets it with 8(t+1).
    """
    if pair.base_extended:
        raise BaseExtensionError(f"base {pair.t} was just added; refine before extending again")
    t = pair.t
    b = t + 1
    x, y = pair.x_brick, pair.y_brick
    y_len = y.cf.length
    m = 0
    while y_len * b ** (m + 1) <= 1:
        m += 1
    if y_len * b ** m == 1:
        m -= 1
    if m < 0:
        raise ValueError("the y cylinder is the whole unit interval; refine before adding a base")
    match = _matched_enclosures(x.cf.interval, y.cf.interval, b, m, None, None)
    if match is None:
        raise BaseExtensionError(f"no matched base-{b} enclosures at order {m}")
    x_cyl, y_cyl = match
    if announce:
        print(f"🧱 Base {b} added at order {m} (width {x_cyl.width_units})")
    return BrickPair(
        Brick(b, x.cf, {**x.bary, b: x_cyl}),
        Brick(b, y.cf, {**y.bary, b: y_cyl}),
        base_extended=True,
    )


if __name__ == "__main__":
    pair = seed_pair()
    print(validate_brick_pair(pair, default_slack(1)).summary())
    for _ in range(3):
        outcome = refine_pair(pair, pair.t, Fraction(1, 2), n_hint=5)
        print(f"🔢 block {list(outcome.block)}  ->  {outcome.diagnostics.summary()}")
        pair = outcome.new_pair
