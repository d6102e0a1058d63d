# File: src/agents/verifier_agent.py
"""
Verifier Agent - re-runs every invariant of a construction state from scratch

Used after each step, by the `verify` subcommand and when a checkpoint is
restored. Nothing here trusts the history: every recorded block is replayed
from the seed pair and the result has to be the stored pair.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from agents.emission_agent import bary_prefixes
from agents.refinement_agent import (
    BaseExtensionError,
    Diagnostics,
    extend_base,
    recheck_block,
    seed_pair,
    validate_brick_pair,
)
from arith.certified import CertifiedReal
from arith.discrepancy import bary_discrepancy, cf_discrepancy
from arith.measures import schedule
from arith.rational_core import CfWord, as_word, format_rational
from graph.state import ConstructionState


def _replay_history(state: ConstructionState, diag: Diagnostics) -> None:
    """Every record re-decided from seed_pair and its block; the replayed pair must be state.pair"""
    config = state.config
    settings = config.refinement_settings()
    pair = seed_pair()
    for record in state.history:
        name = f"record[{record.s}]"
        plan = schedule(record.s, config.n_start, config.schedule_override or None,
                        config.precision_bits, config.max_precision_bits)
        diag.add(f"{name}.n_used", record.n_used == len(record.block),
                 detail=f"n_used={record.n_used}, block of {len(record.block)}")
        diag.add(f"{name}.schedule", (record.t, record.epsilon) == (plan.t, plan.epsilon),
                 detail=f"t={record.t}, epsilon={format_rational(record.epsilon)}; schedule says "
                        f"t={plan.t}, epsilon={format_rational(plan.epsilon)}")
        negative = sorted(key for key, margin in record.margins.items() if margin < 0)
        diag.add(f"{name}.margins", not negative, detail=", ".join(negative))
        if pair is None:
            continue

        grows = plan.t > pair.t
        audit = recheck_block(pair, record.block, plan.epsilon, settings)
        for check in audit.diagnostics.failures():
            diag.add(f"{name}.{check.name}", False, check.margin, check.detail)
        diag.add(f"{name}.bases", audit.bases == record.bases,
                 detail=f"recorded {record.bases}, replayed {audit.bases}")
        diag.add(f"{name}.extended", record.extended == grows)
        pair = audit.new_pair
        if pair is not None and grows:
            try:
                pair = extend_base(pair, announce=False)
            except (BaseExtensionError, ValueError) as e:
                diag.add(f"{name}.extend", False, detail=str(e))
                pair = None
    diag.add("state.replay", pair == state.pair, detail="seed pair refined by every recorded block")


def verify_state(state: ConstructionState) -> Diagnostics:
    config = state.config
    diag = validate_brick_pair(state.pair, config.slack)
    x_word, y_word = state.pair.x_brick.word, state.pair.y_brick.word

    blocks = tuple(digit for record in state.history for digit in record.block)
    diag.add("state.blocks", blocks == state.emitted_cf, detail="emitted cf = concatenated blocks")
    diag.add("state.x_word", x_word == (1,) + state.emitted_cf, detail="x word = (1,) + emitted cf")
    diag.add("state.y_word", y_word == state.emitted_cf, detail="y word = emitted cf")
    diag.add("state.history", len(state.history) == state.step - 1,
             detail=f"{len(state.history)} records at step {state.step}")
    diag.add("state.record_steps", [r.s for r in state.history] == list(range(2, state.step + 1)),
             detail="records numbered 2..step")
    lengths_ok = all(
        r.cf_length == sum(len(q.block) for q in state.history[:i + 1])
        for i, r in enumerate(state.history))
    diag.add("state.record_lengths", lengths_ok, detail="cumulative block lengths")

    expected_t = schedule(state.step, config.n_start, config.schedule_override or None,
                          config.precision_bits, config.max_precision_bits).t
    diag.add("state.t", state.t == expected_t, detail=f"t={state.t}, schedule says {expected_t}")

    if state.step == 1:
        diag.add("state.emitted_bary", not state.emitted_bary, detail="nothing emitted at step 1")
    else:
        prefixes = bary_prefixes(state.pair)
        diag.add("state.emitted_keys", set(state.emitted_bary) == set(prefixes),
                 detail=f"{sorted(state.emitted_bary)} against active bases 2..{state.t}")
        for key, digits in sorted(state.emitted_bary.items()):
            expected = prefixes.get(key, ())
            diag.add(f"state.emitted[{key[0]},{key[1]}]", tuple(digits) == expected[:len(digits)],
                     detail=f"{len(digits)} digits against {len(expected)} determined")
    _replay_history(state, diag)
    return diag


def verify_step(before: ConstructionState, after: ConstructionState) -> Diagnostics:
    """Nesting and prefix monotonicity between two consecutive states"""
    diag = Diagnostics()
    for label, old, new in (("x", before.pair.x_brick, after.pair.x_brick),
                            ("y", before.pair.y_brick, after.pair.y_brick)):
        old_iv, new_iv = old.cf.interval, new.cf.interval
        strict = old_iv.contains(new_iv) and new_iv != old_iv
        diag.add(f"nest.{label}.cf", strict, detail=f"{new_iv} in {old_iv}")
        for b, cyl in old.bary.items():
            inner = new.bary.get(b)
            diag.add(f"nest.{label}.bary[{b}]", inner is not None and cyl.interval.contains(inner.interval))
    diag.add("monotone.cf", after.emitted_cf[:len(before.emitted_cf)] == before.emitted_cf)
    for key, digits in before.emitted_bary.items():
        later = after.emitted_bary.get(key, ())
        diag.add(f"monotone.bary[{key[0]},{key[1]}]", later[:len(digits)] == digits)
    diag.add("step.increment", after.step == before.step + 1)
    return diag


# -------------------------------
# Discrepancy trend
# -------------------------------
@dataclass
class TrendRow:
    s: int
    prefix_length: int
    cf_values: Dict[CfWord, CertifiedReal]
    bary_length: int
    bary_value: Optional[Fraction]


@dataclass
class TrendReport:
    patterns: List[CfWord]
    burn_in: int
    bound: Fraction
    rows: List[TrendRow] = field(default_factory=list)

    def below_bound(self) -> bool:
        """Every certified value past burn-in sits below 4 eps(s_0)"""
        for row in self.rows:
            if any(value.upper >= self.bound for value in row.cf_values.values()):
                return False
            if row.bary_value is not None and row.bary_value >= self.bound:
                return False
        return True

    def improved(self, pattern: Sequence[int], early: int, late: int) -> Optional[bool]:
        """Whether the value at step `late` is certainly below the one at step `early`"""
        pattern = as_word(pattern)
        rows = {row.s: row for row in self.rows}
        if early not in rows or late not in rows:
            return None
        return rows[late].cf_values[pattern].upper < rows[early].cf_values[pattern].lower


def discrepancy_trend(state: ConstructionState, patterns: Sequence[Sequence[int]], burn_in: int = 1,
                      precision_bits: int = 64) -> TrendReport:
    """
    D^cf of x's emitted cf digits at each step boundary with s >= burn_in, and
    D^2 of x's emitted binary digits as of that step.
    """
    patterns = [as_word(v) for v in patterns]
    burn_in = max(burn_in, 2)
    epsilon_0 = next((r.epsilon for r in state.history if r.s >= burn_in), Fraction(1, 2))
    report = TrendReport(patterns, burn_in, 4 * epsilon_0)
    stream = (1,) + state.emitted_cf
    binary = state.emitted_bary.get(("x", 2), ())
    for record in state.history:
        if record.s < burn_in:
            continue
        prefix = stream[:record.cf_length + 1]
        values = {v: cf_discrepancy(prefix, v, precision_bits).value for v in patterns}
        bary_length = record.bary_lengths.get(("x", 2), 0)
        bary_value = bary_discrepancy(binary[:bary_length], 2).value if bary_length else None
        report.rows.append(TrendRow(record.s, len(prefix), values, bary_length, bary_value))
    return report