"""Command line entry point: run a trace file or a generated trace and report verdicts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from ..faulty_ram import SafeStoreOverflow
from .adversaries import STRATEGIES
from .generate import KINDS, GenParams, generate
from .runner import RunConfig, run_trace
from .trace import TraceError, format_trace, parse_trace


def _weights(text: str):
    lo, sep, hi = text.partition("..")
    try:
        pair = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if not 1 <= pair[0] <= pair[1]:
        raise argparse.ArgumentTypeError("weights must satisfy 1 <= LO <= HI")
    return pair


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="faultytree", description=__doc__)
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace", type=Path, help="trace file to run")
    src.add_argument("--generate", choices=KINDS, help="generate a trace of this kind")
    ap.add_argument("--delta", type=int, help="spacing parameter and default budget (default: trace META or 4)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--adversary", choices=STRATEGIES, default="none")
    ap.add_argument("--budget", type=int, help="corruption budget (default: delta)")
    ap.add_argument("--rate", type=float, help="per-access corruption probability for random/adaptive strategies")
    ap.add_argument("--n", type=int, default=64, help="vertices in a generated trace")
    ap.add_argument("--weights", type=_weights, help="vertex weight range LO..HI for generated traces")
    ap.add_argument("--queries", type=float, default=0.5, help="queries per insertion in generated traces")
    ap.add_argument("--corruptions", type=int, help="scripted CORRUPT directives in a generated trace")
    ap.add_argument("--check-oracle", action="store_true", help="classify every answer against the oracle")
    ap.add_argument("--audit-forest", action="store_true", help="cross-check every forest call against a mirror")
    ap.add_argument("--report", type=Path, help="write the JSON report here")
    ap.add_argument("--emit-trace", type=Path, help="write the (generated) trace text here")
    ap.add_argument("--safe-words", type=int, default=128)
    ap.add_argument("--profile", choices=("wide", "packed"), default="wide")
    ap.add_argument("--quiet", action="store_true", help="do not echo per-directive output")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.trace is not None:
            trace = parse_trace(args.trace.read_text())
            delta = args.delta if args.delta is not None else int(trace.meta.get("delta", 4))
        else:
            delta = args.delta if args.delta is not None else 4
            hi = 63 if args.profile == "packed" else 100
            corr = args.corruptions
            if corr is None:
                corr = delta if args.adversary == "scripted" else 0
            params = GenParams(n=args.n, delta=delta, weights=args.weights or (1, hi),
                               query_density=args.queries, corruptions=corr)
            trace = generate(args.generate, params, args.seed)
    except (OSError, TraceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if delta < 1:
        print("error: --delta must be at least 1", file=sys.stderr)
        return 2
    if args.emit_trace is not None:
        args.emit_trace.write_text(format_trace(trace))
    config = RunConfig(delta=delta, seed=args.seed, adversary=args.adversary, budget=args.budget,
                       rate=args.rate, profile=args.profile, safe_words=args.safe_words,
                       check_oracle=args.check_oracle, audit_forest=args.audit_forest)
    try:
        report = run_trace(trace, config)
    except SafeStoreOverflow as exc:
        print(f"error: safe store overflow: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        for line in report.outputs:
            print(line)
    v = report.verdicts
    print(f"n={report.n_vertices} q_nodes={report.black_trajectory[-1] if report.black_trajectory else 0} "
          f"corruptions={len(report.corruption_log)} match={v['match']} exempt={v['exempt-mismatch']} "
          f"violations={v['VIOLATION']} safe_high_water={report.safe_high_water}", file=sys.stderr)
    if args.report is not None:
        args.report.write_text(report.to_json(indent=1))
    return 0 if report.clean else 1


if __name__ == "__main__":
    sys.exit(main())
