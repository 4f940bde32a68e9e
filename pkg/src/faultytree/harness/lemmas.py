"""Structural invariants of the coloring, checked on snapshots of a running simulation.

Every checker samples paths of the true tree (from the oracle) that contain
no ever-corrupted vertex, inspects the structure without disturbing it, and
returns a :class:`Tally`.  The invariants:

``spent_flag``      a spent flag at w implies a black vertex within delta levels above w (w included)
``black_window``    every uncorrupted window of 3*delta levels contains a black vertex
``periodic``        long uncorrupted paths are black exactly every delta levels below some
                    anchor near the top, with Q-parent links matching delta-parents
``no_exception``    a black vertex at the bottom of an uncorrupted 2*delta path was colored
                    without an exceptional situation
``split_parents``   for black u, v joined by an uncorrupted path, the topmost Q ancestors of
                    u and v still on the path have the same Q parent (when both have one)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional

from ..records import SPENT


@dataclass
class Tally:
    name: str
    checked: int = 0  # sampled paths meeting the premise
    informative: int = 0  # of those, how many had a non-vacuous conclusion
    failures: List[tuple] = field(default_factory=list)

    def merge(self, other: "Tally") -> None:
        self.checked += other.checked
        self.informative += other.informative
        self.failures.extend(other.failures)

    @property
    def ok(self) -> bool:
        return not self.failures


def quiet(tree):
    """Suspend access counting and adversary hooks on every memory of ``tree``."""
    return tree.quiet_counts()


def _forest(tree):
    return getattr(tree.forest, "inner", tree.forest)


def _up(oracle, v: int, k: int) -> List[int]:
    """[v, parent(v), ..., k-th ancestor]; shorter if the root comes first."""
    return oracle.path_up(v, k)


def _clean(oracle, path) -> bool:
    c = oracle.corrupted
    return not any(x in c for x in path)


def _black(tree, v: int) -> bool:
    return tree.peek(v).q != tree.q_null


class Checker:
    def __init__(self, tree, oracle, rng: Optional[random.Random] = None):
        self.t = tree
        self.o = oracle
        self.rng = rng or random.Random(0)
        self.d = tree.delta

    def _sample(self, min_depth: int, count: int):
        o = self.o
        deep = [v for v in range(len(o)) if o.depth[v] >= min_depth]
        if not deep:
            return []
        return [self.rng.choice(deep) for _ in range(count)]

    def spent_flag(self, count: int) -> Tally:
        out, d, t = Tally("spent_flag"), self.d, self.t
        with quiet(t):
            for w in self._sample(d, count):
                path = _up(self.o, w, d)  # w .. z
                if not _clean(self.o, path):
                    continue
                out.checked += 1
                if t.peek(w).flag is not SPENT:
                    continue
                out.informative += 1
                if not any(_black(t, x) for x in path[:-1]):
                    out.failures.append(("spent_flag", w))
        return out

    def black_window(self, count: int) -> Tally:
        out, d, t = Tally("black_window"), self.d, self.t
        with quiet(t):
            for x in self._sample(3 * d, count):
                path = _up(self.o, x, 3 * d)  # x .. z
                if not _clean(self.o, path):
                    continue
                out.checked += 1
                out.informative += 1
                if not any(_black(t, y) for y in path[1:]):
                    out.failures.append(("black_window", x))
        return out

    def periodic(self, count: int) -> Tally:
        out, d, t, o = Tally("periodic"), self.d, self.t, self.o
        F = _forest(t)
        with quiet(t):
            for v in self._sample(7 * d, count):
                length = self.rng.randint(7 * d, o.depth[v])
                path = _up(o, v, length)  # v .. u
                if not _clean(o, path):
                    continue
                out.checked += 1
                out.informative += 1
                top = path[::-1]  # u .. v, top[i] at distance i from u
                lo, hi = 5 * d, len(top) - 1 - d  # u~ and v~
                good = False
                for s in range(lo, lo + d + 1):
                    if not _black(t, top[s]):
                        continue
                    ok = True
                    for i in range(s, hi + 1):
                        if _black(t, top[i]) != ((i - s) % d == 0):
                            ok = False
                            break
                        if i > s and (i - s) % d == 0:
                            hq = t.peek(top[i]).q
                            pq = F.parent_q(hq)
                            if pq is None or F.satellite(pq) != top[i - d]:
                                ok = False
                                break
                    if ok:
                        good = True
                        break
                if not good:
                    out.failures.append(("periodic", v, length))
        return out

    def no_exception(self, count: int) -> Tally:
        out, d, t, o = Tally("no_exception"), self.d, self.t, self.o
        with quiet(t):
            blacks = [v for v in t.black_vertices() if o.depth[v] >= 2 * d]
            for _ in range(count if blacks else 0):
                x = self.rng.choice(blacks)
                if not _clean(o, _up(o, x, 2 * d)):
                    continue
                out.checked += 1
                ev = t.colorings.get(x)
                if ev is None:
                    out.failures.append(("no_exception", x, "never colored"))
                    continue
                out.informative += 1
                if ev.exceptional:
                    out.failures.append(("no_exception", x))
        return out

    def split_parents(self, count: int, distance_stats: Optional[dict] = None) -> Tally:
        out, d, t, o = Tally("split_parents"), self.d, self.t, self.o
        F = _forest(t)
        with quiet(t):
            blacks = t.black_vertices()
            if len(blacks) < 2:
                return out
            for _ in range(count):
                u, v = self.rng.choice(blacks), self.rng.choice(blacks)
                if not _clean(o, o.path_between(u, v)):
                    continue
                w = o.o_lca(u, v)
                out.checked += 1
                tops = []
                for end in (u, v):
                    on_path = set(_up(o, end, o.depth[end] - o.depth[w]))
                    h = t.peek(end).q
                    while True:
                        p = F.parent_q(h)
                        if p is None or F.satellite(p) not in on_path:
                            break
                        h = p
                    tops.append((h, p))
                    a = F.satellite(h)
                    gap = o.depth[a] - o.depth[w]
                    if o.depth[end] - o.depth[w] >= 7 * d and gap > 6 * d:
                        out.failures.append(("split_parents/distance", end, w, gap))
                    if distance_stats is not None:
                        distance_stats["max_gap"] = max(distance_stats.get("max_gap", 0), gap)
                (_, pa), (_, pb) = tops
                if pa is not None and pb is not None:
                    out.informative += 1
                    if pa != pb:
                        out.failures.append(("split_parents", u, v, pa, pb))
        return out

    def all(self, count: int) -> List[Tally]:
        return [self.spent_flag(count), self.black_window(count), self.periodic(count),
                self.no_exception(count), self.split_parents(count)]
