"""Resilient level ancestor on a tree known in advance.

A vertex is black when its depth is a multiple of ``delta`` and its subtree
has height at least ``delta - 1``.  Each vertex record is a single 64-bit
word (parent index in the low half, Q handle in the high half, all ones for
null).  The build is assumed fault-free; queries run in faulty memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .black_forest import BlackForest, ForestError
from .faulty_ram import Adversary, SafeStore, UnreliableMemory
from .outcomes import ERROR, ROOT_REACHED

HALF = 32
NULL32 = (1 << HALF) - 1
STATIC_QUERY_SAFE_WORDS = 8


class ConstructionError(ValueError):
    pass


@dataclass
class StaticColoring:
    is_black: List[bool]
    q_of: List[Optional[int]]

    @property
    def black_count(self) -> int:
        return sum(self.is_black)


def _validate(parents: Sequence[int]):
    n = len(parents)
    if n == 0:
        raise ConstructionError("empty tree")
    roots = [v for v, p in enumerate(parents) if p == -1]
    if len(roots) != 1:
        raise ConstructionError(f"expected exactly one root, found {len(roots)}")
    children: List[List[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parents):
        if p == -1:
            continue
        if not (type(p) is int and 0 <= p < n) or p == v:
            raise ConstructionError(f"vertex {v}: bad parent {p!r}")
        children[p].append(v)
    order = [roots[0]]
    for v in order:
        order.extend(children[v])
    if len(order) != n:
        raise ConstructionError("parent array contains a cycle")
    return roots[0], children, order


def color_static(parents: Sequence[int], delta: int):
    """Depths, heights and the black coloring, computed on plain lists."""
    root, children, order = _validate(parents)
    n = len(parents)
    depth = [0] * n
    for v in order:
        for c in children[v]:
            depth[c] = depth[v] + 1
    height = [0] * n
    for v in reversed(order):
        for c in children[v]:
            height[v] = max(height[v], height[c] + 1)
    black = [depth[v] % delta == 0 and height[v] >= delta - 1 for v in range(n)]
    return root, order, depth, black


class StaticLA:
    def __init__(self, parents: Sequence[int], delta: int, adversary: Optional[Adversary] = None):
        if delta < 1:
            raise ConstructionError("delta must be at least 1")
        if len(parents) >= NULL32:
            raise ConstructionError("tree too large for 32-bit indices")
        self.delta = delta
        self.n = len(parents)
        self.safe = SafeStore()
        root, order, depth, black = color_static(parents, delta)
        self.root = root
        self.depth = depth
        self.forest = BlackForest(delta, self.safe)
        q_of: List[Optional[int]] = [None] * self.n
        lowest_black: List[Optional[int]] = [None] * self.n
        for v in order:
            p = parents[v]
            above = None if p == -1 else (q_of[p] if black[p] else lowest_black[p])
            lowest_black[v] = above
            if black[v]:
                q_of[v] = (self.forest.new_tree_q(v) if above is None
                           else self.forest.add_leaf_q(above, v))
        self.coloring = StaticColoring(black, q_of)
        self.core = UnreliableMemory("static")
        for v in range(self.n):
            p = NULL32 if parents[v] == -1 else parents[v]
            q = NULL32 if q_of[v] is None else q_of[v]
            self.core.append(p | (q << HALF))
        # build is fault-free and not part of the query cost
        self.core.reads = self.core.writes = 0
        self.last_query: dict = {}
        if adversary is not None:
            self.attach(adversary)

    def attach(self, adversary: Adversary) -> None:
        adversary.attach(self.core)
        adversary.attach(self.forest.dir)
        adversary.attach(self.forest.nodes)

    def record(self, v: int):
        w = self.core.read(v)
        return w & NULL32, w >> HALF

    def record_word(self, p: Optional[int], q: Optional[int]) -> int:
        return (NULL32 if p is None else p) | ((NULL32 if q is None else q) << HALF)

    def climb(self, v: int, i: int):
        """Follow i parent pointers; ROOT_REACHED at a null parent, ERROR at an invalid one."""
        for _ in range(i):
            p, _q = self.record(v)
            if p == NULL32:
                return ROOT_REACHED
            if p >= self.n:
                return ERROR
            v = p
        return v

    def la(self, v: int, k: int):
        if not (type(v) is int and 0 <= v < self.n):
            raise IndexError(f"vertex {v} out of range")
        d = self.delta
        if k < 0:
            return ERROR
        if k <= 2 * d:
            return self.climb(v, k)
        with self.safe.frame(STATIC_QUERY_SAFE_WORDS):
            z = v
            for dist in range(2 * d):
                p, q = self.record(z)
                if q != NULL32:
                    break
                if p == NULL32:
                    return ROOT_REACHED
                if p >= self.n or dist == 2 * d - 1:
                    return ERROR
                z = p
            rest = k - dist
            j = rest // d
            k_rest = rest - j * d
            self.last_query = {"d": dist, "q_steps": j, "k_rest": k_rest}
            try:
                if j > self.forest.depth_q(q):
                    return ROOT_REACHED
                u = self.forest.la_q(q, j)
            except ForestError:
                return ERROR
            if not (0 <= u < self.n):
                return ERROR
            return self.climb(u, k_rest)


def build_static(parents: Sequence[int], delta: int, adversary: Optional[Adversary] = None):
    """(coloring, structure) for a parent array whose root has parent -1."""
    s = StaticLA(parents, delta, adversary)
    return s.coloring, s


def la_static(s: StaticLA, v: int, k: int):
    return s.la(v, k)


def climb(s: StaticLA, v: int, i: int):
    return s.climb(v, i)


# Illustrative tree for delta=3: v (id 9) is a leaf at depth 9 whose lowest
# black ancestor sits at depth 6; LA(v, 8) climbs 3, jumps one Q level, climbs 2.
WORKED_EXAMPLE_PARENTS = [-1, 0, 1, 2, 3, 4, 5, 6, 7, 8,
                          0, 10, 11, 12, 2, 14, 15, 4, 17, 6, 19, 7]
WORKED_EXAMPLE_DELTA = 3
WORKED_EXAMPLE_QUERY = (9, 8)
