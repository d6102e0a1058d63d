# File: cli.py
"""
Command-line interface: construct, emit, verify, analyze, bounds
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

# Add src to path for imports
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir / "src"))

from agents.emission_agent import emit_digits
from agents.verifier_agent import verify_state
from arith.discrepancy import (
    bary_prefix_profile,
    euler_cf_digits,
    periodic_cf_digits,
    prefix_profile,
)
from arith.measures import (
    BoundConstants,
    a_of_b,
    activation_step,
    bernstein_bound,
    kpw_bound,
    nb_window,
    proof_n0,
    schedule,
)
from arith.rational_core import format_rational, parse_rational
from graph.construction_graph import run, run_summary
from utils.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from utils.config import load_config
from utils.digit_io import format_stream, parse_bary_digits, parse_cf_digits, parse_patterns, read_text, write_rows


def _config_from(args):
    return load_config(
        mode=getattr(args, "mode", None),
        n_start=getattr(args, "n_start", None),
        slack=parse_rational(args.slack) if getattr(args, "slack", None) else None,
        precision_bits=getattr(args, "precision", None),
        n_ceiling=getattr(args, "n_ceiling", None),
        schedule_override_path=getattr(args, "schedule_override", None),
    )


def _add_config_flags(parser):
    parser.add_argument("--mode", choices=["search", "schedule"], default=None)
    parser.add_argument("--n-start", type=int, default=None)
    parser.add_argument("--slack", default=None, help="brick slack as p/q or an integer")
    parser.add_argument("--precision", type=int, default=None, help="working precision in bits (>= 32)")
    parser.add_argument("--n-ceiling", type=int, default=None)
    parser.add_argument("--schedule-override", default=None, help="file of 'from_step t [epsilon]' lines")


# -------------------------------
# Subcommands
# -------------------------------
def cmd_construct(args) -> int:
    config = _config_from(args)
    start = load_checkpoint(args.resume, config) if args.resume else None
    state = run(config, args.steps, start=start, progress=not args.quiet)
    if args.checkpoint:
        save_checkpoint(state, args.checkpoint)
    summary = run_summary(state)
    print(f"📋 step {summary['step']}, t={summary['t']}, {summary['cf_digits']} cf digits, "
          f"n_used per step {summary['n_used']}")
    return 0


def cmd_emit(args) -> int:
    if args.checkpoint:
        state = load_checkpoint(args.checkpoint)
    else:
        state = run(_config_from(args), args.steps, progress=False)
    stream = emit_digits(state, args.target, args.kind)
    if args.count is not None:
        stream = replace(stream, digits=stream.digits[:args.count])
    sys.stdout.write(format_stream(stream) + "\n")
    return 0


def cmd_verify(args) -> int:
    try:
        state = load_checkpoint(args.checkpoint)
    except CheckpointError as e:
        print(f"❌ {e}")
        return 1
    diag = verify_state(state)
    for check in diag.checks:
        if args.verbose or not check.passed:
            mark = "✅" if check.passed else "❌"
            margin = f" margin={float(check.margin):.3g}" if check.margin is not None else ""
            print(f"{mark} {check.name}{margin} {check.detail}")
    print(f"🔍 {diag.summary()}")
    return 0 if diag.ok else 1


def _analysis_digits(args):
    if args.reference:
        name = args.reference
        if name == "euler":
            return euler_cf_digits(args.count)
        if name.startswith("periodic:"):
            period = [int(d) for d in name.split(":", 1)[1].split(",")]
            return periodic_cf_digits(period, args.count)
        raise ValueError(f"unknown reference stream {name!r}")
    text = read_text(args.digits)
    if args.cf:
        return parse_cf_digits(text)
    return parse_bary_digits(text, args.base)


def cmd_analyze(args) -> int:
    if not args.cf and args.base is None and not args.reference:
        raise ValueError("choose --cf or --base B")
    digits = _analysis_digits(args)
    total = len(digits)
    checkpoints = list(range(args.every, total + 1, args.every)) if args.every else [total]
    if checkpoints and checkpoints[-1] != total:
        checkpoints.append(total)

    if args.cf or args.reference:
        patterns = parse_patterns(read_text(args.patterns)) if args.patterns else [(1,), (2,), (1, 1), (1, 2),
                                                                                  (2, 1), (2, 2)]
        results = prefix_profile(digits, patterns, checkpoints)
        header = ["pattern", "n", "count", "discrepancy_lower", "discrepancy_upper"]
        rows = [[" ".join(map(str, r.pattern)), r.prefix_length, r.occurrence_count,
                 float(r.value.lower), float(r.value.upper)] for r in results]
    else:
        results = bary_prefix_profile(digits, args.base, checkpoints)
        header = ["base", "n", "discrepancy"]
        rows = [[r.base, r.prefix_length, format_rational(r.value)] for r in results]

    if args.out:
        write_rows(args.out, header, rows)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(str(cell) for cell in row))
    return 0


def cmd_bounds(args) -> int:
    kind, values = args.kind, args.values

    def need(count):
        if len(values) != count:
            raise ValueError(f"bounds {kind} takes {count} values, got {len(values)}")

    if kind == "kpw":
        need(3)
        result = kpw_bound(parse_rational(values[0]), int(values[1]), int(values[2]))
    elif kind == "bernstein":
        need(3)
        result = bernstein_bound(int(values[0]), parse_rational(values[1]), int(values[2]))
    elif kind == "aofb":
        need(3)
        result = a_of_b(int(values[0]), parse_rational(values[1]), int(values[2]))
    elif kind == "schedule":
        need(2)
        plan = schedule(int(values[0]), int(values[1]))
        print(f"s={plan.s} t={plan.t} epsilon={format_rational(plan.epsilon)} n0={plan.n0}")
        return 0
    elif kind == "nb":
        need(3)
        low, high = nb_window(int(values[0]), int(values[1]), int(values[2]))
        print(f"[{low}, {high}]")
        return 0
    elif kind == "n0":
        need(2)
        print(schedule(int(values[0]), int(values[1])).n0)
        return 0
    elif kind == "proof-n0":
        need(2)
        print(proof_n0(int(values[0]), parse_rational(values[1]), BoundConstants()))
        return 0
    elif kind == "activation":
        need(1)
        print(activation_step(int(values[0])))
        return 0
    else:
        raise ValueError(f"unknown bound {kind!r}")
    print(f"{result}  (~{float(result):.6g})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Construct a real x with x and 1/x continued-fraction normal and absolutely normal.")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="run the construction")
    construct.add_argument("--steps", type=int, default=10)
    construct.add_argument("--checkpoint", default=None, help="write the final state here")
    construct.add_argument("--resume", default=None, help="continue from this checkpoint")
    construct.add_argument("--quiet", action="store_true")
    _add_config_flags(construct)
    construct.set_defaults(handler=cmd_construct)

    emit = sub.add_parser("emit", help="print a digit stream")
    emit.add_argument("--target", choices=["x", "inv"], default="x")
    emit.add_argument("--kind", default="cf", help="cf or base:B")
    emit.add_argument("--count", type=int, default=None)
    emit.add_argument("--steps", type=int, default=10)
    emit.add_argument("--checkpoint", default=None, help="read the state from this checkpoint")
    _add_config_flags(emit)
    emit.set_defaults(handler=cmd_emit)

    verify = sub.add_parser("verify", help="re-run every invariant on a checkpoint")
    verify.add_argument("--checkpoint", required=True)
    verify.add_argument("--verbose", action="store_true")
    verify.set_defaults(handler=cmd_verify)

    analyze = sub.add_parser("analyze", help="discrepancy profile of a digit file")
    analyze.add_argument("--digits", default=None)
    analyze.add_argument("--base", type=int, default=None)
    analyze.add_argument("--cf", action="store_true")
    analyze.add_argument("--patterns", default=None, help="one cf pattern per line")
    analyze.add_argument("--every", type=int, default=None, help="report every K-th prefix length")
    analyze.add_argument("--reference", default=None, help="euler or periodic:D1,D2,... instead of a file")
    analyze.add_argument("--count", type=int, default=1000, help="length of a reference stream")
    analyze.add_argument("--out", default=None, help="CSV output path")
    analyze.set_defaults(handler=cmd_analyze)

    bounds = sub.add_parser("bounds", help="bound calculators")
    bounds.add_argument("kind", choices=["kpw", "bernstein", "aofb", "schedule", "nb", "n0", "proof-n0",
                                         "activation"])
    bounds.add_argument("values", nargs="*")
    bounds.set_defaults(handler=cmd_bounds)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "digits", None) is None and args.command == "analyze" and not args.reference:
        print("❌ analyze needs --digits FILE or --reference NAME")
        return 2
    try:
        return args.handler(args)
    except (ValueError, FileNotFoundError, ArithmeticError, RuntimeError) as e:
        print(f"❌ {type(e).__name__}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
