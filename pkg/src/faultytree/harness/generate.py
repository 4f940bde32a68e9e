"""Deterministic trace generators.  Same (kind, params, seed) gives the same trace text."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..records import FIELDS, SPENT, UNSET, UNSPENT, Annotation, CbaSet
from ..static_la import WORKED_EXAMPLE_DELTA, WORKED_EXAMPLE_PARENTS, WORKED_EXAMPLE_QUERY
from .trace import QUERY_OPS, Directive, Trace

KINDS = ("chain", "caterpillar", "random_attach", "star_of_paths", "worked_example")


@dataclass
class GenParams:
    n: int = 64
    delta: int = 4
    weights: Tuple[int, int] = (1, 1)
    query_density: float = 0.5
    queries: Tuple[str, ...] = QUERY_OPS
    corruptions: int = 0  # scripted CORRUPT directives, spread over the trace
    final_queries: int = 0  # extra queries appended after the last insertion
    legs: int = 3  # star_of_paths: number of paths; caterpillar: max leg length


class _Builder:
    def __init__(self, p: GenParams, rng: random.Random):
        self.p = p
        self.rng = rng
        self.parent: List[int] = [-1]
        self.depth: List[int] = [0]
        self.wsum: List[int] = [1]  # path weight from the root, vertex included
        self.out: List[Directive] = []

    def add(self, par: int) -> int:
        w = self.rng.randint(*self.p.weights)
        v = len(self.parent)
        self.parent.append(par)
        self.depth.append(self.depth[par] + 1)
        self.wsum.append(self.wsum[par] + w)
        self.out.append(Directive("ADDLEAF", (par, w)))
        return v

    def query(self) -> None:
        rng = self.rng
        kind = rng.choice(self.p.queries)
        n = len(self.parent)
        # bias towards deep vertices so long queries are common
        a = max(rng.randrange(n), rng.randrange(n))
        if kind == "LA":
            b = rng.randint(0, self.depth[a] + 1)
        elif kind == "WLA":
            b = rng.randint(1, self.wsum[a] + 2)
        else:
            b = max(rng.randrange(n), rng.randrange(n))
        self.out.append(Directive(kind, (a, b)))

    def corrupt(self) -> None:
        rng = self.rng
        n = len(self.parent)
        v = rng.randrange(n)
        name = rng.choice(FIELDS)
        if name == "p":
            value = rng.randrange(n + 2)
        elif name == "q":
            value = rng.randrange(max(1, n // max(1, self.p.delta)) + 1)
        elif name == "flag":
            value = rng.choice([SPENT, UNSPENT, Annotation(rng.randrange(1, n + 1), rng.randint(1, self.p.delta))])
        elif name == "cba":
            value = rng.choice([UNSET, CbaSet(rng.randrange(n // max(1, self.p.delta) + 1)),
                                Annotation(rng.randrange(1, n + 1), rng.randint(1, 2 * self.p.delta))])
        elif name == "depth":
            value = max(0, self.depth[v] + rng.randint(-3, 3))
        else:
            value = rng.randint(*self.p.weights)
        self.out.append(Directive("CORRUPT", (v, "FIELD", name, value)))


def _grow(kind: str, b: _Builder) -> None:
    p, rng = b.p, b.rng
    n = p.n
    corrupt_at = set(rng.sample(range(1, max(2, n)), min(p.corruptions, max(1, n - 1)))) if p.corruptions else set()
    paths: List[int] = []
    spine = [0]
    leg_left = 0
    leg_tip = 0
    for step in range(1, n):
        if kind == "chain":
            par = step - 1
        elif kind == "random_attach":
            r = rng.random()
            if r < 0.75:
                par = rng.randrange(max(0, step - 4), step)
            elif r < 0.9:
                par = rng.randrange(max(0, step - 40), step)
            else:
                par = rng.randrange(step)
        elif kind == "caterpillar":
            on_spine = False
            if leg_left > 0:
                par, leg_left = leg_tip, leg_left - 1
            elif rng.random() < 0.5:
                par, on_spine = spine[-1], True
            else:
                par = rng.choice(spine[-3 * p.delta:])
                leg_left = rng.randint(0, max(0, p.legs - 1))
        elif kind == "star_of_paths":
            if len(paths) < p.legs:
                par = 0
            else:
                i = rng.randrange(len(paths))
                par = paths[i]
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
        v = b.add(par)
        if kind == "caterpillar":
            if on_spine:
                spine.append(v)
            else:
                leg_tip = v
        elif kind == "star_of_paths":
            if par == 0 and len(paths) < p.legs:
                paths.append(v)
            else:
                paths[paths.index(par)] = v
        if step in corrupt_at:
            b.corrupt()
        if rng.random() < p.query_density:
            b.query()
    for _ in range(p.final_queries):
        b.query()


def generate(kind: str, params: Optional[GenParams] = None, seed: int = 0) -> Trace:
    p = params or GenParams()
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {', '.join(KINDS)}")
    rng = random.Random(f"{kind}/{seed}")
    meta = {"kind": kind, "n": str(p.n), "delta": str(p.delta), "seed": str(seed),
            "weights": f"{p.weights[0]}..{p.weights[1]}"}
    if kind == "worked_example":
        meta.update(n=str(len(WORKED_EXAMPLE_PARENTS)), delta=str(WORKED_EXAMPLE_DELTA))
        ds = [Directive("BUILD_STATIC", (WORKED_EXAMPLE_DELTA, tuple(WORKED_EXAMPLE_PARENTS))),
              Directive("LA", WORKED_EXAMPLE_QUERY)]
        return Trace(ds, meta)
    b = _Builder(p, rng)
    _grow(kind, b)
    return Trace(b.out, meta)
