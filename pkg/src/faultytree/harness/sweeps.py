"""Batches of runs behind the acceptance checks and the experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .generate import GenParams, generate
from .lemmas import Checker, Tally
from .runner import EXEMPT, MATCH, VIOLATION, Run, RunConfig, run_trace

SHAPES = ("chain", "caterpillar", "random_attach", "star_of_paths")
ADVERSARIAL = ("scripted", "random", "targeted-flags", "adaptive-path")


@dataclass
class SweepResult:
    runs: int = 0
    queries: int = 0
    verdicts: Dict[str, int] = field(default_factory=lambda: {MATCH: 0, EXEMPT: 0, VIOLATION: 0})
    violations: List[dict] = field(default_factory=list)
    bound_failures: int = 0
    forest_mismatches: int = 0
    corruptions: int = 0
    safe_high_water: int = 0
    exceptional_events: int = 0

    def absorb(self, rep, seed) -> None:
        self.runs += 1
        for k, v in rep.verdicts.items():
            self.verdicts[k] += v
        self.queries += sum(rep.verdicts.values())
        self.violations.extend({**x, "seed": seed} for x in rep.violations)
        self.bound_failures += len(rep.bound_failures)
        self.forest_mismatches += rep.forest_mismatches
        self.corruptions += len(rep.corruption_log)
        self.safe_high_water = max(self.safe_high_water, rep.safe_high_water)
        self.exceptional_events += rep.exceptional_events


def equivalence_params(i: int, deltas: Sequence[int] = (1, 2, 3, 5, 8), n_max: int = 5000):
    """(kind, params, delta) for the i-th corruption-free trace; a few traces are large."""
    rng = random.Random(f"equivalence/{i}")
    delta = deltas[i % len(deltas)]
    n = n_max if i % 25 == 0 else rng.randint(50, 600)
    kind = SHAPES[i % len(SHAPES)]
    hi = rng.choice((1, 8, 40))
    p = GenParams(n=n, delta=delta, weights=(1, hi), query_density=0.25 if n > 1000 else 0.8,
                  final_queries=50, legs=rng.randint(2, 6))
    return kind, p, delta


def equivalence_sweep(traces: int = 100, deltas=(1, 2, 3, 5, 8), n_max: int = 5000,
                      profile: str = "wide") -> SweepResult:
    out = SweepResult()
    for i in range(traces):
        kind, p, delta = equivalence_params(i, deltas, n_max)
        rep = run_trace(generate(kind, p, seed=i),
                        RunConfig(delta=delta, seed=i, profile=profile, record_ops=False))
        out.absorb(rep, i)
    return out


def adversarial_params(strategy: str, i: int, max_delta: int = 16):
    rng = random.Random(f"{strategy}/{i}")
    delta = rng.choice([d for d in (1, 2, 3, 4, 6, 8, 12, 16) if d <= max_delta])
    kind = SHAPES[i % len(SHAPES)]
    n = rng.randint(40, 40 + 12 * delta)
    p = GenParams(n=n, delta=delta, weights=(1, rng.choice((1, 8))), query_density=1.0,
                  corruptions=delta if strategy == "scripted" else 0, final_queries=20,
                  legs=rng.randint(2, 5))
    return kind, p, delta


def adversarial_sweep(strategy: str, runs: int = 1000, max_delta: int = 16, audit_forest: bool = False,
                      profile: str = "wide") -> SweepResult:
    out = SweepResult()
    for i in range(runs):
        kind, p, delta = adversarial_params(strategy, i, max_delta)
        cfg = RunConfig(delta=delta, seed=i, adversary=strategy, profile=profile,
                        audit_forest=audit_forest, record_ops=False)
        out.absorb(run_trace(generate(kind, p, seed=i), cfg), i)
    return out


def lemma_sweep(runs: int = 200, samples: int = 120, strategies=ADVERSARIAL,
                checkpoints: int = 3) -> Dict[str, Tally]:
    """Sample every invariant at a few points of many adversarial runs."""
    totals = {name: Tally(name) for name in
              ("spent_flag", "black_window", "periodic", "no_exception", "split_parents")}
    for i in range(runs):
        strategy = strategies[i % len(strategies)]
        rng = random.Random(f"lemmas/{i}")
        delta = rng.choice((1, 2, 3, 4, 6, 8))
        # long paths are needed for the periodic and split invariants
        kind = ("chain", "caterpillar", "star_of_paths")[i % 3]
        p = GenParams(n=rng.randint(20 * delta, 20 * delta + 200), delta=delta,
                      weights=(1, 8), query_density=0.2,
                      corruptions=delta if strategy == "scripted" else 0, legs=rng.randint(2, 4))
        trace = generate(kind, p, seed=i)
        total = len(trace.directives)
        marks = {total * (k + 1) // checkpoints - 1 for k in range(checkpoints)}
        run = Run(RunConfig(delta=delta, seed=i, adversary=strategy, record_ops=False, check_oracle=False))
        for k, d in enumerate(trace.directives):
            run.step(d)
            if k in marks:
                checker = Checker(run.structure, run.oracle, random.Random(f"check/{i}/{k}"))
                for tally in checker.all(samples):
                    totals[tally.name].merge(tally)
    return totals
