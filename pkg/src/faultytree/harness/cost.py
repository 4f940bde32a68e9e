"""Per-operation access counts as delta grows, at fixed n.

:func:`measure` returns one row per (delta, op) with the mean core record
accesses, accesses/delta, mean D_Q word accesses and D_Q accesses per
(delta * log2 n), mean and worst case.

Every op is measured in the regime where its delta-dependent branch runs:
queries whose defining path spans at least 10 * delta levels, and insertions
that end up coloring a vertex.  ``add_leaf_all`` averages over every insertion
and is reported for information only; short queries and early-exit insertions
cost O(1) or O(k) and say nothing about the dependence on delta.
"""

from __future__ import annotations

import math
import random
import statistics

from ..config import TreeConfig
from ..tree import ResilientTree

OPS = ("add_leaf", "la", "wla", "bvq", "lca")
INFO_OPS = ("add_leaf_all",)


def build(n, delta, seed, profile="packed"):
    rng = random.Random(seed)
    t = ResilientTree(TreeConfig(delta=delta, profile=profile))
    parent, depth = [-1], [0]
    cost = []
    tip = 0
    for i in range(1, n):
        # broom: long branches forking at random points, so every delta has paths longer than 10 * delta
        par = tip if rng.random() < 0.995 else rng.randrange(i)
        tip = i
        before = t.access_counts()
        t.add_leaf(par, rng.randint(1, 20))
        cost.append(_diff(before, t.access_counts()))
        parent.append(par)
        depth.append(depth[par] + 1)
    return t, parent, depth, cost, rng


def _lca(parent, depth, u, v):
    while depth[u] > depth[v]:
        u = parent[u]
    while depth[v] > depth[u]:
        v = parent[v]
    while u != v:
        u, v = parent[u], parent[v]
    return u


def _far_pair(rng, parent, depth, deep, delta):
    """Two vertices whose lowest common ancestor lies at least 10 * delta above both."""
    for _ in range(10000):
        u, v = rng.choice(deep), rng.choice(deep)
        z = depth[_lca(parent, depth, u, v)]
        if min(depth[u], depth[v]) - z >= 10 * delta:
            return u, v
    raise RuntimeError("tree has no pair of far-apart branches; increase n")


def _diff(a, b):
    return {k: b[k] - a[k] for k in a}


def measure(n=4096, deltas=(2, 4, 8, 16), queries=400, seed=0, profile="packed"):
    rows = {}
    for delta in deltas:
        t, parent, depth, add_cost, rng = build(n, delta, seed, profile)
        coloring = sorted({e.inserted for e in t.colorings.values()})
        per = {"add_leaf": [add_cost[x - 1] for x in coloring], "add_leaf_all": add_cost}
        for op in OPS[1:]:
            per[op] = []
            deep = [v for v in range(n) if depth[v] >= 12 * delta]
            for _ in range(queries):
                v = rng.choice(deep)
                # long queries only: the defining path spans at least 10 * delta levels
                if op == "la":
                    arg = rng.randint(10 * delta, depth[v])
                elif op == "wla":
                    arg = rng.randint(10 * delta * 20, 10 * delta * 20 + 10 * delta)
                elif op == "bvq" and rng.random() < 0.5:
                    arg = t.la(v, rng.randint(10 * delta, depth[v]))
                else:
                    v, arg = _far_pair(rng, parent, depth, deep, delta)
                before = t.access_counts()
                getattr(t, op)(v, arg)
                per[op].append(_diff(before, t.access_counts()))
        for op, cs in per.items():
            core = statistics.mean(c["core_reads"] + c["core_writes"] for c in cs)
            dqs = [c["dq_reads"] + c["dq_writes"] for c in cs]
            dq = statistics.mean(dqs)
            scale = delta * math.log2(n)
            rows[(delta, op)] = {"core": core, "core_per_delta": core / delta, "dq": dq,
                                 "dq_per_delta_log": dq / scale, "dq_max_per_delta_log": max(dqs) / scale}
    return rows


def stability(rows, deltas=(2, 4, 8, 16)):
    """max/min of core accesses per delta, per op."""
    out = {}
    for op in OPS:
        vals = [rows[(d, op)]["core_per_delta"] for d in deltas]
        out[op] = max(vals) / min(vals)
    return out


def dq_bound_constant(n: int) -> float:
    """c' for the bound D_Q accesses <= c' * delta * log2 n, delta >= 2.

    Derived for an insertion, the costliest op: at most 5 replicated reads per
    lifting level plus 2, and 4 replicated cells per level plus 7 appended, each
    append costing at most 5 word accesses with migration; a replicated cell is
    2 * delta + 1 <= 2.5 * delta words and there are at most log2 n + 1 levels.
    Queries are only checked against it empirically.
    """
    lg = math.log2(n)
    return 2.5 * (62 + 25 * lg) / lg
