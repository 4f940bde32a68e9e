"""Run many adversarial simulations per strategy and summarise the verdicts.

Example:
    python3 scripts/adversarial_sweep.py --runs 1000 --strategies random adaptive-path
"""

import argparse
import json
import sys
import time

from faultytree.harness.sweeps import ADVERSARIAL, adversarial_sweep, equivalence_sweep, lemma_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--max-delta", type=int, default=16)
    ap.add_argument("--strategies", nargs="+", choices=ADVERSARIAL, default=list(ADVERSARIAL))
    ap.add_argument("--audit-forest", action="store_true", help="cross-check every forest call against a mirror")
    ap.add_argument("--profile", choices=("wide", "packed"), default="wide")
    ap.add_argument("--equivalence", action="store_true", help="also run the corruption-free sweep")
    ap.add_argument("--lemmas", type=int, default=0, metavar="RUNS", help="also sample the invariants over RUNS runs")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    summary = {}
    if args.equivalence:
        t = time.perf_counter()
        r = equivalence_sweep(profile=args.profile)
        summary["none"] = {"runs": r.runs, "queries": r.queries, **r.verdicts,
                           "seconds": round(time.perf_counter() - t, 1)}
    for s in args.strategies:
        t = time.perf_counter()
        r = adversarial_sweep(s, args.runs, args.max_delta, args.audit_forest, args.profile)
        summary[s] = {"runs": r.runs, "queries": r.queries, **r.verdicts, "corruptions": r.corruptions,
                      "bound_failures": r.bound_failures, "forest_mismatches": r.forest_mismatches,
                      "exceptional_events": r.exceptional_events, "safe_high_water": r.safe_high_water,
                      "seconds": round(time.perf_counter() - t, 1), "violations": r.violations[:5]}
    if args.lemmas:
        summary["invariants"] = {k: {"checked": v.checked, "informative": v.informative,
                                     "failures": len(v.failures)}
                                 for k, v in lemma_sweep(args.lemmas).items()}
    if args.json:
        json.dump(summary, sys.stdout, indent=1)
        print()
    else:
        for name, row in summary.items():
            print(name, " ".join(f"{k}={v}" for k, v in row.items() if k != "violations"))
    bad = any(row.get("VIOLATION", 0) or row.get("bound_failures", 0) for row in summary.values())
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
