# File: src/graph/construction_graph.py
"""
LangGraph construction pipeline - one graph invocation per construction step

plan -> refine -> [extend] -> emit -> verify -> END, with every node able to
hand over to error_handler.
"""

import os
import sys
from typing import Any, Dict, Optional, TypedDict

from langgraph.graph import END, StateGraph
from tqdm import tqdm

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), ".."))

from agents.emission_agent import bary_prefixes
from agents.refinement_agent import BrickPair, Diagnostics, RefinementOutcome, extend_base, refine_pair
from agents.verifier_agent import verify_state, verify_step
from arith.measures import Schedule, schedule
from arith.rational_core import format_rational
from graph.state import ConstructionError, ConstructionState, StepRecord, init
from utils.config import ConstructionConfig, config_hash
from utils.run_logger import get_logger


class StepState(TypedDict, total=False):
    state: ConstructionState
    schedule: Schedule
    outcome: RefinementOutcome
    pair: BrickPair
    grows: bool
    result: ConstructionState
    diagnostics: Diagnostics
    error: str
    exception: Any


def plan_node(step_state: StepState) -> StepState:
    """Node 1: schedule for the next step"""
    try:
        state = step_state["state"]
        config = state.config
        plan = schedule(state.step + 1, config.n_start, config.schedule_override or None,
                        config.precision_bits, config.max_precision_bits)
        if plan.t > state.t + 1:
            raise ValueError(f"schedule jumps from t={state.t} to t={plan.t}")
        if plan.t < state.t:
            raise ValueError(f"schedule lowers t from {state.t} to {plan.t}")
        print(f"🧭 Step {plan.s}: t={plan.t}, epsilon={format_rational(plan.epsilon)}, n0={plan.n0}")
        return {**step_state, "schedule": plan, "grows": plan.t > state.t}
    except Exception as e:
        return {**step_state, "error": f"Planning failed: {e}", "exception": e}


def refine_node(step_state: StepState) -> StepState:
    """Node 2: shared block for both bricks"""
    try:
        state, plan = step_state["state"], step_state["schedule"]
        config = state.config
        outcome = refine_pair(state.pair, state.t, plan.epsilon, config.mode, plan.n0,
                              config.refinement_settings())
        return {**step_state, "outcome": outcome, "pair": outcome.new_pair}
    except Exception as e:
        return {**step_state, "error": f"Refinement failed: {e}", "exception": e}


def extend_node(step_state: StepState) -> StepState:
    """Node 3: next base, only when t grows"""
    try:
        return {**step_state, "pair": extend_base(step_state["pair"])}
    except Exception as e:
        return {**step_state, "error": f"Base extension failed: {e}", "exception": e}


def emit_node(step_state: StepState) -> StepState:
    """Node 4: append the block and collect every newly determined digit"""
    try:
        state, plan = step_state["state"], step_state["schedule"]
        outcome, pair = step_state["outcome"], step_state["pair"]
        emitted_cf = state.emitted_cf + outcome.block
        emitted_bary = bary_prefixes(pair)
        record = StepRecord(
            s=plan.s,
            t=pair.t,
            epsilon=plan.epsilon,
            n_used=outcome.n_used,
            block=outcome.block,
            binding_window=outcome.binding_window,
            bases={b: (ext.order, ext.n_b) for b, ext in sorted(outcome.per_base_extensions.items())},
            margins=outcome.diagnostics.margins(),
            cf_length=len(emitted_cf),
            bary_lengths={key: len(digits) for key, digits in sorted(emitted_bary.items())},
            candidates_tried=outcome.candidates_tried,
            extended=step_state.get("grows", False),
        )
        binary = emitted_bary.get(("x", 2), ())
        print(f"🔢 {len(emitted_cf)} cf digits, {len(binary)} binary digits of x")
        result = ConstructionState(
            step=plan.s,
            pair=pair,
            emitted_cf=emitted_cf,
            emitted_bary=emitted_bary,
            config=state.config,
            history=state.history + (record,),
        )
        return {**step_state, "result": result}
    except Exception as e:
        return {**step_state, "error": f"Emission failed: {e}", "exception": e}


def verify_node(step_state: StepState) -> StepState:
    """Node 5: audit the new state against the old one"""
    try:
        diag = verify_step(step_state["state"], step_state["result"])
        diag.extend(verify_state(step_state["result"]))
        if not diag.ok:
            return {**step_state, "diagnostics": diag, "error": f"Verification failed: {diag.summary()}"}
        print(f"🔍 {diag.summary()}")
        return {**step_state, "diagnostics": diag}
    except Exception as e:
        return {**step_state, "error": f"Verification failed: {e}", "exception": e}


def error_node(step_state: StepState) -> StepState:
    print(f"❌ Construction error: {step_state.get('error', 'unknown error')}")
    return step_state


def _next_or_error(target: str):
    return lambda step_state: "error_handler" if step_state.get("error") else target


def build_construction_graph():
    workflow = StateGraph(StepState)
    workflow.add_node("plan", plan_node)
    workflow.add_node("refine", refine_node)
    workflow.add_node("extend", extend_node)
    workflow.add_node("emit", emit_node)
    workflow.add_node("verify", verify_node)
    workflow.add_node("error_handler", error_node)

    workflow.set_entry_point("plan")
    workflow.add_conditional_edges("plan", _next_or_error("refine"))
    workflow.add_conditional_edges(
        "refine",
        lambda s: "error_handler" if s.get("error") else ("extend" if s.get("grows") else "emit"),
    )
    workflow.add_conditional_edges("extend", _next_or_error("emit"))
    workflow.add_conditional_edges("emit", _next_or_error("verify"))
    workflow.add_conditional_edges("verify", lambda s: "error_handler" if s.get("error") else END)
    workflow.add_edge("error_handler", END)
    return workflow.compile()


# Global graph instance
construction_graph = build_construction_graph()


def step(state: ConstructionState) -> ConstructionState:
    """Advance one step; the incoming state is never modified"""
    result = construction_graph.invoke({"state": state})
    if result.get("error"):
        raise ConstructionError(result["error"], state.step + 1) from result.get("exception")
    return result["result"]


def run(config: Optional[ConstructionConfig] = None, steps: int = 1,
        start: Optional[ConstructionState] = None, progress: bool = True) -> ConstructionState:
    """
    Take `steps` steps from init(config), or from `start` when resuming.
    A resumed run ends in the same state as an uninterrupted one.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if start is not None:
        if config is not None and config_hash(config) != config_hash(start.config):
            raise ValueError("resume state was built with a different configuration")
        state = start
    else:
        state = init(config)
    print(f"🚀 Starting construction at step {state.step} for {steps} steps "
          f"(mode={state.config.mode}, config {config_hash(state.config)[:12]})")
    logger = get_logger()
    with logger.capture_logs(real_time=True):
        for _ in tqdm(range(steps), desc="steps", disable=not progress, file=sys.__stderr__):
            state = step(state)
    print(f"✅ Construction complete: step {state.step}, t={state.t}, {len(state.emitted_cf)} cf digits")
    return state


def run_summary(state: ConstructionState) -> Dict[str, Any]:
    return {
        "step": state.step,
        "t": state.t,
        "cf_digits": len(state.emitted_cf),
        "bary_digits": {f"{target}:{b}": len(d) for (target, b), d in sorted(state.emitted_bary.items())},
        "n_used": [record.n_used for record in state.history],
    }


if __name__ == "__main__":
    final = run(ConstructionConfig(), 5)
    print(run_summary(final))
