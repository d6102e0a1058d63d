# File: src/agents/test_refinement_agent.py
"""
Tests for brick validation, refinement and base extension
"""

import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

src_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(src_root))

from agents.refinement_agent import (
    BaseExtensionError,
    Brick,
    BrickPair,
    NoValidBlockError,
    RefinementSettings,
    UnsatisfiableRefinement,
    extend_base,
    pattern_set,
    recheck_block,
    refine_pair,
    seed_pair,
    validate_brick_pair,
)
from arith.cylinders import BaryCylinder, cf_cylinder, cf_cylinder_length, enclosing_bary
from arith.discrepancy import bary_discrepancy, discrepancy_below
from arith.measures import BoundConstants, default_slack, relative_window
from graph.construction_graph import step
from graph.state import init
from utils.config import ConstructionConfig

SLACK = default_slack(1)
EPS = Fraction(1, 2)


def _failed(diag):
    return {check.name for check in diag.failures()}


def test_seed_pair_passes():
    print("🧪 seed pair validation")
    pair = seed_pair()
    assert pair.x_brick.cf.interval.left == Fraction(1, 2)
    assert pair.y_brick.cf.interval.left == 0 and pair.y_brick.cf.interval.right == 1
    diag = validate_brick_pair(pair, SLACK)
    assert diag.ok, diag.summary()


def test_containment_failure_is_flagged():
    seed = seed_pair()
    broken = BrickPair(Brick(2, seed.x_brick.cf, {2: BaryCylinder(2, 1, 0, 1)}), seed.y_brick)
    diag = validate_brick_pair(broken, SLACK)
    assert not diag.ok
    assert "x.contains[2]" in _failed(diag)


def test_coupling_failure_is_flagged():
    seed = seed_pair()
    x_brick = Brick(2, cf_cylinder((2,)), {2: BaryCylinder(2, 0, 0, 1)})
    diag = validate_brick_pair(BrickPair(x_brick, seed.y_brick), SLACK)
    assert {"pair.shared_tail", "pair.reciprocal"} <= _failed(diag)


def test_pattern_set():
    assert pattern_set(2) == [(1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(pattern_set(3)) == 3 + 9 + 27


def test_unsatisfiable_and_bad_arguments():
    pair = seed_pair()
    with pytest.raises(UnsatisfiableRefinement):
        refine_pair(pair, 2, Fraction(0))
    with pytest.raises(UnsatisfiableRefinement):
        refine_pair(pair, 2, Fraction(1, 50), n_hint=5)
    with pytest.raises(UnsatisfiableRefinement):
        refine_pair(pair, 2, Fraction(1, 5), mode="schedule", n_hint=5)
    with pytest.raises(ValueError):
        refine_pair(pair, 4, EPS)
    with pytest.raises(ValueError):
        refine_pair(pair, 2, Fraction(3, 4))
    with pytest.raises(ValueError):
        refine_pair(pair, 2, EPS, mode="guess")


# -------------------------------
# Independent oracle
# -------------------------------
@lru_cache(maxsize=None)
def _window(n):
    return relative_window(n, BoundConstants(), 256)


def _inside(value, n):
    low, high = _window(n)
    assert not (low.lower <= value <= low.upper or high.lower <= value <= high.upper)
    return low.upper < value < high.lower


def _orders(pair, n, bases):
    _, high = _window(n)
    y_len = pair.y_brick.cf.length
    orders = {}
    for b in bases:
        m = 0
        while high.upper * y_len * b ** (m + 1) <= 1:
            m += 1
        assert high.lower * y_len * b ** (m + 1) > 1
        orders[b] = m
    return orders


def _options(x_cyl, y_cyl):
    if x_cyl.width_units == y_cyl.width_units:
        return [(x_cyl, y_cyl)]

    def widen(cyl):
        return [BaryCylinder(cyl.base, cyl.order, start, 2) for start in (cyl.start_index, cyl.start_index - 1)
                if 0 <= start and start + 2 <= cyl.scale]

    if x_cyl.width_units == 1:
        return [(wide, y_cyl) for wide in widen(x_cyl)]
    return [(x_cyl, wide) for wide in widen(y_cyl)]


def _oracle_valid(pair, block, n, epsilon, orders):
    x_word, y_word = pair.x_brick.word, pair.y_brick.word
    if not _inside(cf_cylinder_length(x_word + block) / cf_cylinder_length(x_word), n):
        return False
    if not _inside(cf_cylinder_length(y_word + block) / cf_cylinder_length(y_word), n):
        return False
    threshold = epsilon - Fraction(pair.t - 1, n)
    if not all(discrepancy_below(block, v, threshold) for v in pattern_set(pair.t)):
        return False
    tau, big_t = cf_cylinder(x_word + block), cf_cylinder(y_word + block)
    for b, m in orders.items():
        x_parent, y_parent = pair.x_brick.bary[b], pair.y_brick.bary[b]
        x_min, y_min = enclosing_bary(tau.interval, b, m), enclosing_bary(big_t.interval, b, m)
        good = False
        for x_cyl, y_cyl in _options(x_min, y_min):
            if not (x_parent.interval.contains(x_cyl.interval) and y_parent.interval.contains(y_cyl.interval)):
                continue
            words = [w[x_parent.order:] for w in x_cyl.constituents()] + \
                    [w[y_parent.order:] for w in y_cyl.constituents()]
            if all(bary_discrepancy(w, b).value < epsilon for w in words):
                good = True
                break
        if not good:
            return False
    return True


def _blocks_left_of(x_word, n, floor, chosen_left, prefix=()):
    """Blocks of length n whose x cylinder keeps relative length >= floor and starts left of chosen_left"""
    if len(prefix) == n:
        yield prefix
        return
    base = cf_cylinder_length(x_word)
    digit = 1
    while cf_cylinder_length(x_word + prefix + (digit,)) / base >= floor:
        if cf_cylinder(x_word + prefix + (digit,)).interval.left < chosen_left:
            yield from _blocks_left_of(x_word, n, floor, chosen_left, prefix + (digit,))
        digit += 1


def _assert_leftmost(pair, block, n, epsilon, orders):
    """No valid block of length n starts left of the chosen one"""
    chosen_left = cf_cylinder(pair.x_brick.word + block).interval.left
    low, _ = _window(n)
    earlier = 0
    for candidate in _blocks_left_of(pair.x_brick.word, n, low.lower, chosen_left):
        assert not _oracle_valid(pair, candidate, n, epsilon, orders), candidate
        earlier += 1
    return earlier


def test_refinement_matches_bruteforce_oracle():
    print("🔎 brute-force oracle on early refinements")
    pair = seed_pair()
    checked = 0
    for _ in range(4):
        outcome = refine_pair(pair, 2, EPS, n_hint=3)
        n = outcome.n_used
        assert outcome.diagnostics.ok, outcome.diagnostics.summary()
        assert validate_brick_pair(outcome.new_pair, SLACK).ok
        orders = _orders(pair, n, [2])
        assert {b: ext.order for b, ext in outcome.per_base_extensions.items()} == orders
        assert _oracle_valid(pair, outcome.block, n, EPS, orders)
        _assert_leftmost(pair, outcome.block, n, EPS, orders)
        checked += 1
        pair = outcome.new_pair
    assert checked == 4
    print(f"✅ {checked} refinements confirmed leftmost")


@pytest.mark.slow
def test_default_steps_match_bruteforce_oracle():
    print("🔎 brute-force oracle on the first 5 default steps")
    state = init(ConstructionConfig())
    checked = 0
    for _ in range(5):
        nxt = step(state)
        record = nxt.history[-1]
        n, pair = record.n_used, state.pair
        assert n == len(record.block)
        orders = _orders(pair, n, [2])
        assert record.bases[2][0] == orders[2]
        assert _oracle_valid(pair, record.block, n, record.epsilon, orders)
        earlier = _assert_leftmost(pair, record.block, n, record.epsilon, orders)
        print(f"   step {record.s}: n={n}, {earlier} blocks further left rejected")
        checked += 1
        state = nxt
    assert checked == 5


def test_refinement_conditions_and_nesting():
    pair = seed_pair()
    for _ in range(3):
        outcome = refine_pair(pair, 2, EPS, n_hint=3)
        new = outcome.new_pair
        x_old, x_new = pair.x_brick, new.x_brick
        assert x_new.word == x_old.word + outcome.block
        assert new.y_brick.word == pair.y_brick.word + outcome.block
        assert x_old.cf.interval.contains(x_new.cf.interval) and x_new.cf.interval != x_old.cf.interval
        for b in (2,):
            assert x_old.bary[b].interval.contains(x_new.bary[b].interval)
            assert pair.y_brick.bary[b].interval.contains(new.y_brick.bary[b].interval)
            assert x_new.bary[b].length == new.y_brick.bary[b].length
        threshold = EPS - Fraction(1, outcome.n_used)
        assert outcome.threshold == threshold
        assert set(outcome.pattern_bounds) == set(pattern_set(2))
        for v in outcome.pattern_bounds:
            assert discrepancy_below(outcome.block, v, threshold)
        assert outcome.binding_window in ("x", "y", "both", "none")
        pair = new


def test_recheck_reproduces_the_search():
    pair = seed_pair()
    for _ in range(2):
        outcome = refine_pair(pair, 2, EPS, n_hint=3)
        audit = recheck_block(pair, outcome.block, EPS)
        assert audit.diagnostics.ok, audit.diagnostics.summary()
        assert audit.new_pair == outcome.new_pair
        assert audit.bases == {b: (ext.order, ext.n_b) for b, ext in outcome.per_base_extensions.items()}
        pair = outcome.new_pair
    # a block that is too short for the threshold is refused before any search
    assert not recheck_block(pair, (1,), EPS).diagnostics.ok
    assert recheck_block(pair, (1,), EPS).new_pair is None


def test_refinement_is_deterministic():
    first = refine_pair(seed_pair(), 2, EPS, n_hint=3)
    second = refine_pair(seed_pair(), 2, EPS, n_hint=3)
    assert first.block == second.block
    assert first.new_pair == second.new_pair


def test_schedule_mode_failure_carries_stats():
    settings = RefinementSettings(slack=Fraction(1))
    with pytest.raises(NoValidBlockError) as info:
        refine_pair(seed_pair(), 2, EPS, mode="schedule", n_hint=3, settings=settings)
    assert info.value.n_range == (3, 3)
    assert sum(info.value.stats.values()) > 0


def _pair_for(y_word):
    x_word = (1,) + tuple(y_word)
    trivial = {2: BaryCylinder(2, 0, 0, 1)}
    return BrickPair(Brick(2, cf_cylinder(x_word), dict(trivial)), Brick(2, cf_cylinder(y_word), dict(trivial)))


def test_extend_base_order_example():
    pair = _pair_for((1, 2))
    assert pair.y_brick.cf.length == Fraction(1, 12)
    extended = extend_base(pair)
    assert extended.t == 3 and extended.base_extended
    y3, x3 = extended.y_brick.bary[3], extended.x_brick.bary[3]
    assert y3.order == 2 == x3.order
    assert y3.width_units == x3.width_units
    assert y3.interval.contains(extended.y_brick.cf.interval)
    assert x3.interval.contains(extended.x_brick.cf.interval)
    with pytest.raises(BaseExtensionError):
        extend_base(extended)


def test_refine_with_next_base():
    outcome = refine_pair(seed_pair(), 3, EPS, n_hint=3)
    new = outcome.new_pair
    assert new.t == 3 and new.base_extended
    assert validate_brick_pair(new, SLACK).ok
    x3, y3 = new.x_brick.bary[3], new.y_brick.bary[3]
    assert new.y_brick.cf.length * 2 * 3 >= y3.length
    assert new.x_brick.cf.length * 8 * 3 >= x3.length

    # any refinement clears the flag
    seed = seed_pair()
    flagged = BrickPair(seed.x_brick, seed.y_brick, base_extended=True)
    assert not refine_pair(flagged, 2, EPS, n_hint=3).new_pair.base_extended
