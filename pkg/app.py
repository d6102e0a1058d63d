# File: app.py
"""
Normal Numbers Construction - Streamlit UI
Run the construction step by step and inspect the digit streams, the step
records and the discrepancy trend.
"""

import json
import sys
from pathlib import Path
from typing import List

import streamlit as st

# Add src to path for imports
current_dir = Path(__file__).parent
src_path = current_dir / "src"
sys.path.insert(0, str(src_path))

from agents.emission_agent import InactiveBaseError, emit_digits
from agents.refinement_agent import pattern_set
from agents.verifier_agent import discrepancy_trend, verify_state
from arith.measures import activation_step, nb_window, schedule
from arith.rational_core import format_rational
from graph.construction_graph import run_summary, step
from graph.state import ConstructionError, init
from utils.checkpoint import checkpoint
from utils.config import config_hash, load_config
from utils.run_logger import get_logger

st.set_page_config(
    page_title="Normal Numbers Construction",
    page_icon="🔢",
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown("""
<style>
    .main-header {
        font-size: 2.4rem;
        background: linear-gradient(135deg, #667eea 0%, #764ba2 100%);
        -webkit-background-clip: text;
        -webkit-text-fill-color: transparent;
        text-align: center;
        font-weight: 800;
    }
    .log-container {
        background: #1e1e1e;
        color: #d4d4d4;
        padding: 1rem;
        border-radius: 10px;
        font-family: 'Courier New', monospace;
        font-size: 0.85rem;
        max-height: 400px;
        overflow-y: auto;
    }
    .log-entry { padding: 0.15rem 0; }
    .log-info { color: #d4d4d4; }
    .log-agent { color: #9cdcfe; }
    .log-success { color: #4ec9b0; }
    .log-warning { color: #dcdcaa; }
    .log-error { color: #f48771; }
    .digits {
        font-family: 'Courier New', monospace;
        word-break: break-all;
    }
</style>
""", unsafe_allow_html=True)


def render_logs(placeholder, logs: List[tuple]):
    """Terminal-like log block"""
    if not logs:
        placeholder.markdown("_Waiting for the first step..._")
        return
    html = '<div class="log-container">'
    for level, message in logs[-200:]:
        html += f'<div class="log-entry log-{level}">{message}</div>'
    html += '</div>'
    placeholder.markdown(html, unsafe_allow_html=True)


def sidebar_config():
    with st.sidebar:
        st.markdown("### ⚙️ Configuration")
        mode = st.selectbox("Mode", ["search", "schedule"], index=0,
                            help="search tries n0, n0+1, ...; schedule uses n0 only")
        n_start = st.number_input("n_start", min_value=1, max_value=40, value=5)
        precision = st.number_input("Working precision (bits)", min_value=32, max_value=1024, value=64, step=32)
        n_ceiling = st.number_input("Block length ceiling", min_value=int(n_start), max_value=64, value=40)
        override = st.text_input("Schedule override file", value="",
                                 help="lines 'from_step t [epsilon]', e.g. schedules/desk.txt")
        steps = st.number_input("Steps per run", min_value=1, max_value=200, value=10)
        config = load_config(
            mode=mode,
            n_start=int(n_start),
            precision_bits=int(precision),
            n_ceiling=int(n_ceiling),
            schedule_override_path=override.strip() or None,
        )
        st.markdown("---")
        st.markdown("### 📊 Current State")
        state = st.session_state.get("construction")
        if state is not None:
            st.metric("Step", state.step)
            st.metric("t", state.t)
            st.metric("cf digits", len(state.emitted_cf))
        else:
            st.info("No construction yet")
        return config, int(steps)


def advance(config, steps: int):
    """Take `steps` steps, resuming when the stored state has the same configuration"""
    state = st.session_state.get("construction")
    if state is None or config_hash(state.config) != config_hash(config):
        state = init(config)

    logger = get_logger()
    logger.clear()
    progress_bar = st.progress(0)
    status = st.empty()
    log_placeholder = st.empty()

    def on_line(level, message):
        if level in ("agent", "success", "error"):
            status.markdown(f"**[step {logger.current_step or state.step}]** {message}")

    logger.set_callback(on_line)
    try:
        with logger.capture_logs(real_time=True):
            for done in range(steps):
                state = step(state)
                st.session_state.construction = state
                progress_bar.progress((done + 1) / steps)
    except ConstructionError as e:
        st.error(f"❌ {e}")
    finally:
        logger.set_callback(None)
        render_logs(log_placeholder, logger.get_logs())
    progress_bar.progress(1.0)
    status.markdown(f"**✅ Step {state.step} reached**")


def show_streams(state):
    st.markdown("### 🔢 Digit Streams")
    cf = emit_digits(state, "x", "cf").digits
    st.markdown(f"**x = [0; {', '.join(map(str, cf[:200]))}{', ...' if len(cf) > 200 else ''}]**")
    st.markdown(f"1/x = [1; {', '.join(map(str, state.emitted_cf[:200]))}]")
    base = st.number_input("Base", min_value=2, max_value=36, value=2)
    for target, label in (("x", "x"), ("one_over_x", "1/x")):
        try:
            stream = emit_digits(state, target, int(base))
        except InactiveBaseError as e:
            st.info(f"Base {e.base} joins at step {e.activation_step}")
            return
        body = "".join(map(str, stream.digits)) if base <= 10 else ",".join(map(str, stream.digits))
        st.markdown(f'{label} in base {base} ({len(stream.digits)} digits):<div class="digits">'
                    f'{stream.integer_part}.{body}</div>', unsafe_allow_html=True)


def show_history(state):
    st.markdown("### 🧱 Step Records")
    rows = [
        {
            "s": record.s,
            "t": record.t,
            "epsilon": format_rational(record.epsilon),
            "n": record.n_used,
            "block": " ".join(map(str, record.block)),
            "binding": record.binding_window,
            "m_2": record.bases.get(2, (None, None))[0],
            "n_2": record.bases.get(2, (None, None))[1],
            "candidates": record.candidates_tried,
            "extended": record.extended,
        }
        for record in state.history
    ]
    st.dataframe(rows, use_container_width=True)
    diag = verify_state(state)
    if diag.ok:
        st.success(f"🔍 {diag.summary()}")
    else:
        st.error(f"🔍 {diag.summary()}")
    with st.expander("📋 Run summary and checkpoint", expanded=False):
        st.json(run_summary(state))
        st.download_button("💾 Download checkpoint", data=json.dumps(checkpoint(state), indent=2),
                           file_name=f"checkpoint-step{state.step}.json", mime="application/json")


def show_trend(state):
    st.markdown("### 📉 Discrepancy Trend")
    burn_in = st.number_input("Burn-in step", min_value=2, max_value=max(2, state.step), value=2)
    patterns = pattern_set(2)
    report = discrepancy_trend(state, patterns, burn_in=int(burn_in))
    if not report.rows:
        st.info("No steps past the burn-in yet")
        return
    chart = {" ".join(map(str, v)): [float(row.cf_values[v].upper) for row in report.rows] for v in patterns}
    chart["binary"] = [float(row.bary_value or 0) for row in report.rows]
    st.line_chart(chart)
    st.caption(f"Bound 4·eps = {format_rational(report.bound)}; every value below it: {report.below_bound()}")


def show_bounds(config):
    st.markdown("### 🧮 Schedule and Bounds")
    col1, col2 = st.columns(2)
    with col1:
        s = st.number_input("Step s", min_value=1, value=10)
        plan = schedule(int(s), config.n_start, config.schedule_override or None)
        st.metric("t(s)", plan.t)
        st.metric("epsilon(s)", format_rational(plan.epsilon))
        st.metric("n0(s)", plan.n0)
    with col2:
        n = st.number_input("Block length n", min_value=1, max_value=64, value=min(plan.n0, 64))
        low, high = nb_window(int(n), 2, config.constants.C)
        st.metric("binary digits per step", f"{float(low.lower):.1f} .. {float(high.upper):.1f}")
        try:
            activation = str(activation_step(3, config.schedule_override or None))
        except ValueError:
            activation = "never"
        st.metric("base 3 activation step", activation if len(activation) < 24 else f"~10^{len(activation) - 1}")


def main():
    st.markdown('<div class="main-header">🔢 Normal Numbers Construction</div>', unsafe_allow_html=True)
    st.markdown('<div style="text-align: center; color: #6b7280; margin-bottom: 2rem;">'
                'x and 1/x, continued-fraction normal and absolutely normal, built in exact arithmetic'
                '</div>', unsafe_allow_html=True)

    try:
        config, steps = sidebar_config()
    except (ValueError, FileNotFoundError) as e:
        st.error(f"❌ Configuration error: {e}")
        return

    tab1, tab2, tab3, tab4 = st.tabs(["🚀 Run", "🧱 History", "📉 Trend", "🧮 Bounds"])
    with tab1:
        col1, col2 = st.columns([1, 1])
        if col1.button("🚀 Run steps", use_container_width=True, type="primary"):
            advance(config, steps)
        if col2.button("🔄 Reset", use_container_width=True):
            st.session_state.construction = None
            st.rerun()
        state = st.session_state.get("construction")
        if state is not None:
            show_streams(state)
    state = st.session_state.get("construction")
    with tab2:
        if state is None:
            st.info("Run the construction first")
        else:
            show_history(state)
    with tab3:
        if state is None:
            st.info("Run the construction first")
        else:
            show_trend(state)
    with tab4:
        show_bounds(config)


if 'construction' not in st.session_state:
    st.session_state.construction = None

if __name__ == "__main__":
    main()
