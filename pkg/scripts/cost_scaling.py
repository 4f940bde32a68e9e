"""Per-operation access counts as delta grows, at fixed n."""

import argparse
import json
import sys

from faultytree.harness.cost import dq_bound_constant, measure, stability


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--queries", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--profile", choices=("wide", "packed"), default="packed")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    deltas = (2, 4, 8, 16)
    rows = measure(args.n, deltas, args.queries, args.seed, args.profile)
    if args.json:
        json.dump({f"{d}/{op}": r for (d, op), r in rows.items()}, sys.stdout, indent=1)
        return
    print(f"{'delta':>5} {'op':>12} {'core':>9} {'core/d':>8} {'dq':>9} {'dq/(d lg n)':>11} {'max':>7}")
    for (d, op), r in sorted(rows.items()):
        print(f"{d:>5} {op:>12} {r['core']:>9.1f} {r['core_per_delta']:>8.2f} {r['dq']:>9.1f}"
              f" {r['dq_per_delta_log']:>11.2f} {r['dq_max_per_delta_log']:>7.2f}")
    for op, ratio in stability(rows, deltas).items():
        print(f"{op}: max/min of core/delta across delta = {ratio:.2f}")
    worst = max(r["dq_max_per_delta_log"] for r in rows.values())
    print(f"D_Q: worst accesses / (delta log2 n) = {worst:.2f}, analytic bound {dq_bound_constant(args.n):.2f}")


if __name__ == "__main__":
    main()
