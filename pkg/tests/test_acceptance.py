"""End-to-end acceptance checks, one test per criterion, each reporting a PASS/FAIL line."""

import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from faultytree.harness.cost import dq_bound_constant, measure, stability
from faultytree.harness.runner import VIOLATION
from faultytree.harness.sweeps import ADVERSARIAL, adversarial_sweep, equivalence_sweep, lemma_sweep
from faultytree.static_la import WORKED_EXAMPLE_DELTA, WORKED_EXAMPLE_PARENTS, WORKED_EXAMPLE_QUERY, build_static
from test_replication import exhaustive_decode
from test_static_la import random_parents

ADVERSARIAL_RUNS = 1000
LEMMA_SAMPLES = 10_000


def report(name, passed, detail):
    ACCEPTANCE_LINES.append((name, passed, detail))
    print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    assert passed, detail


@pytest.fixture(scope="module")
def equivalence():
    t = time.perf_counter()
    res = equivalence_sweep(traces=100, deltas=(1, 2, 3, 5, 8), n_max=5000)
    return res, time.perf_counter() - t


@pytest.fixture(scope="module")
def adversarial():
    out = {}
    t = time.perf_counter()
    for s in ADVERSARIAL:
        out[s] = adversarial_sweep(s, runs=ADVERSARIAL_RUNS, max_delta=16)
    return out, time.perf_counter() - t


def test_zero_corruption_equivalence(equivalence):
    res, secs = equivalence
    ok = res.runs == 100 and res.queries >= 10_000 and res.verdicts["match"] == res.queries and secs < 60
    report("zero-corruption equivalence", ok,
           f"{res.runs} traces, {res.queries} queries, {res.queries - res.verdicts['match']} mismatches, {secs:.1f}s")


def test_resilience_contract(adversarial):
    sweeps, secs = adversarial
    parts = [f"{s}: {r.runs} runs/{r.queries} queries/{r.corruptions} faults/{r.verdicts[VIOLATION]} violations"
             for s, r in sweeps.items()]
    ok = (all(r.runs >= ADVERSARIAL_RUNS and r.verdicts[VIOLATION] == 0 for r in sweeps.values())
          and secs < 600)
    report("resilience contract", ok, "; ".join(parts) + f"; {secs:.1f}s")


def test_black_node_bound(equivalence, adversarial):
    sweeps, _ = adversarial
    runs = [equivalence[0], *sweeps.values()]
    failures = sum(r.bound_failures for r in runs)
    report("black-node bound", failures == 0,
           f"{failures} operations over the bound in {sum(r.runs for r in runs)} runs")


def test_lemma_suites():
    totals = lemma_sweep(runs=160, samples=120)
    parts = [f"{k} {v.checked} checked/{len(v.failures)} failed" for k, v in totals.items()]
    ok = all(v.checked >= LEMMA_SAMPLES and v.ok for v in totals.values())
    report("structural invariants", ok, "; ".join(parts))


def test_replication_exhaustive():
    t = time.perf_counter()
    patterns = sum(exhaustive_decode(d) for d in (1, 2, 3, 4))
    secs = time.perf_counter() - t
    report("replication", secs < 1.0, f"{patterns} corruption patterns decoded, {secs:.2f}s")


def test_static_structure():
    rng = random.Random(1)
    over = 0
    for _ in range(50):
        n, delta = rng.randint(1, 400), rng.randint(1, 9)
        coloring, _ = build_static(random_parents(n, rng), delta)
        over += coloring.black_count > n // delta
    short = []
    for delta in (2, 3, 4, 5):
        coloring, _ = build_static([-1] + list(range(2 * delta - 2)), delta)
        short.append([v for v, b in enumerate(coloring.is_black) if b] == [0])
    _, s = build_static(WORKED_EXAMPLE_PARENTS, WORKED_EXAMPLE_DELTA)
    answer = s.la(*WORKED_EXAMPLE_QUERY)
    fig = s.last_query == {"d": 3, "q_steps": 1, "k_rest": 2} and answer == 1
    report("static structure", over == 0 and all(short) and fig,
           f"{over}/50 trees over floor(n/delta); short paths root-only {all(short)}; "
           f"illustrated query {s.last_query} -> {answer}")


def test_cost_scaling():
    n = 4096
    rows = measure(n=n, deltas=(2, 4, 8, 16), queries=400)
    ratios = stability(rows)
    worst_dq = max(r["dq_max_per_delta_log"] for r in rows.values())
    bound = dq_bound_constant(n)
    ok = all(r <= 2.0 for r in ratios.values()) and worst_dq <= bound
    report("cost scaling", ok, ", ".join(f"{op} {r:.2f}x" for op, r in ratios.items())
           + f"; D_Q worst {worst_dq:.1f} <= {bound:.1f} per delta*log2 n")


def test_safe_store_budget(equivalence, adversarial):
    sweeps, _ = adversarial
    high = max(r.safe_high_water for r in [equivalence[0], *sweeps.values()])
    report("safe-store budget", high <= 128, f"high-water mark {high} words")
