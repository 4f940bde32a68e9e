"""Resilient dynamic tree: leaf insertion with black/white coloring and level ancestor queries.

Records live in the ``core`` unreliable memory in insertion order, so an
uncorrupted parent index is always smaller than the child's index.  Any
parent index ``p >= v`` read from vertex ``v`` is treated as 0 (the root);
the parent pointers seen this way form the *noisy tree*.

A vertex is black when its record holds a Q handle.  Insertions spend
``delta`` flags to create one black vertex, so the forest stays small; the
resulting coloring is regular (one black vertex every ``delta`` levels) on
every path far enough from corruptions, which is what the queries rely on.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, List, Optional

from .black_forest import INF, BlackForest, ForestError
from .config import TreeConfig
from .faulty_ram import Adversary, SafeStore, UnreliableMemory
from .outcomes import ERROR, ROOT_REACHED, is_vertex
from .records import (SPENT, UNSET, UNSPENT, Annotation, CbaSet, NodeRecord,
                      make_records)

# x's staged record plus y, y', i, l, W, W', near_black, x', q_{y'}, min, witness, exceptional
ADD_LEAF_SAFE_WORDS = 16
QUERY_SAFE_WORDS = 12


@dataclass
class ColorEvent:
    """Instrumentation: which insertion colored a vertex, and how."""

    inserted: int
    kind: str  # "near" or "free"
    exceptional: bool
    handle: int


class ResilientTree:
    # extra levels left to the final climb of a long LA query; 0 is enough
    la_slack = 0

    def __init__(self, config: Optional[TreeConfig] = None, root_weight: int = 1,
                 adversary: Optional[Adversary] = None, forest=None, **kw):
        cfg = config if config is not None else TreeConfig(**kw)
        self.config = cfg
        self.delta = cfg.delta
        self.w_max = cfg.w_max
        self.safe = SafeStore(cfg.safe_words)
        self._size_slot = self.safe.reserve(1)
        self.core = UnreliableMemory("core", word_bits=64 if cfg.profile == "wide" else 128)
        self.records = make_records(cfg.profile, self.core)
        self.layout = self.records.layout
        self.q_null = self.layout.q_null
        if forest is None:
            forest = BlackForest(cfg.delta, self.safe, w_max=cfg.w_max,
                                 qdir=UnreliableMemory("qdir"), qnodes=UnreliableMemory("qnodes"))
        self.forest = forest
        self.colorings: Dict[int, ColorEvent] = {}
        self.exceptional_events: List[int] = []
        self.last_query: dict = {}
        self.audit_literal_fallback = False
        self.literal_fallback_differs = 0
        self.records.append(NodeRecord(p=self.layout.p_null, q=self.q_null, depth=0,
                                       weight=self._clamp(root_weight)))
        self.safe.slots[self._size_slot] = 1
        if adversary is not None:
            self.attach(adversary)

    def attach(self, adversary: Adversary) -> None:
        adversary.attach(self.core)
        adversary.attach(self.forest_memories()[0])
        adversary.attach(self.forest_memories()[1])

    def forest_memories(self):
        f = getattr(self.forest, "inner", self.forest)
        return f.dir, f.nodes

    @property
    def size(self) -> int:
        return self.safe.slots[self._size_slot]

    def __len__(self) -> int:
        return self.size

    # primitive reads -------------------------------------------------------

    def _clamp(self, w) -> int:
        return min(max(int(w), 1), self.w_max)

    def parent(self, v: int) -> int:
        """Parent in the noisy tree (v must not be the root)."""
        p = self.records.p(v)
        return p if p < v else 0

    def weight(self, v: int) -> int:
        return self._clamp(self.records.weight(v))

    def is_black(self, v: int) -> bool:
        return self.records.q(v) != self.q_null

    def depth_diff(self, a: int, b: int):
        """``depth(a) - depth(b)`` recovered modulo the depth field width, or None if implausible."""
        mod = self.layout.depth_mod
        d = (self.records.depth(a) - self.records.depth(b)) % mod
        if d >= mod // 2:
            d -= mod
        return d if abs(d) <= self.size else None

    def check_vertex(self, v: int) -> None:
        if not (type(v) is int and 0 <= v < self.size):
            raise IndexError(f"vertex {v} out of range [0, {self.size})")

    def climb(self, v: int, i: int):
        """Follow ``i`` parent pointers; ROOT_REACHED if the root's parent is needed."""
        for _ in range(i):
            if v == 0:
                return ROOT_REACHED
            p = self.records.p(v)
            v = p if p < v else 0
        return v

    # insertion ------------------------------------------------------------

    def add_leaf(self, x_par: int, weight: int = 1) -> int:
        with self.safe.frame(ADD_LEAF_SAFE_WORDS + self.records.words_per_record):
            x = self.size
            if not (type(x_par) is int and 0 <= x_par < x):
                x_par = 0
            depth = (self.records.depth(x_par) + 1) % self.layout.depth_mod
            staged = NodeRecord(p=x_par, q=self.q_null, flag=UNSPENT, cba=UNSET,
                                depth=depth, weight=self._clamp(weight))
            try:
                self._recolor(x, staged)
            finally:
                self.records.append(staged)
                self.safe.slots[self._size_slot] = x + 1
        return x

    def _recolor(self, x: int, staged: NodeRecord) -> None:
        R = self.records
        d = self.delta

        def up(v):
            return staged.p if v == x else self.parent(v)

        def wt(v):
            return staged.weight if v == x else self.weight(v)

        # discovery: the lowest delta proper ancestors must carry unspent flags
        y, W = x, 0
        for i in range(1, d + 1):
            if y == 0:
                return
            W += wt(y)
            y = up(y)
            if R.flag(y) is SPENT:
                return
            R.set_flag(y, Annotation(x, i))
            self._annotate_cba(y, x, i)

        # is y near-a-black?
        y1, l, near, qy1 = y, 0, False, None
        while l < d and y1 != 0 and not near:
            W += wt(y1)
            y1 = up(y1)
            l += 1
            self._annotate_cba(y1, x, d + l)
            q = R.q(y1)
            if q != self.q_null:
                near, qy1 = True, q

        # otherwise, is it black-free?
        if not near:
            z = y1
            for _ in range(d - 1):
                if z == 0:
                    break
                z = up(z)
                if self.is_black(z):
                    return

        # execution: re-climb, verify annotations, spend flags
        z, W2, xp, exceptional = x, 0, None, False
        best_w, best_v = None, None
        last = d + l - 1 if near else d
        for i in range(1, last + 1):
            if z == 0:
                if i <= d:
                    return
                exceptional = True
                break
            if near and i <= l:
                W2 += wt(z)
            z = up(z)
            if i <= d:
                if R.flag(z) != Annotation(x, i):
                    return
                if near and i == l:
                    xp = z
                R.set_flag(z, SPENT)
            if near and i >= l:
                w = self.weight(z)
                if best_w is None or w < best_w:
                    best_w, best_v = w, z
                c = R.cba(z)
                if c == CbaSet(qy1):
                    pass
                elif c == Annotation(x, i):
                    R.set_cba(z, CbaSet(qy1))
                else:
                    exceptional = True

        F = self.forest
        if near:
            seg = W - W2
            handle = None
            if not exceptional:
                try:
                    handle = F.add_leaf_q(qy1, xp, seg, best_w, best_v)
                except ForestError:
                    exceptional = True
            if exceptional:
                handle = F.new_tree_q(xp, seg, best_w, best_v)
                self.exceptional_events.append(x)
            R.set_q(xp, handle)
            self.colorings[xp] = ColorEvent(x, "near", exceptional, handle)
        else:
            handle = F.new_tree_q(y, self.weight(y), INF, None)
            R.set_q(y, handle)
            self.colorings[y] = ColorEvent(x, "free", False, handle)

    def _annotate_cba(self, v: int, x: int, i: int) -> None:
        c = self.records.cba(v)
        if c is UNSET or isinstance(c, Annotation):
            self.records.set_cba(v, Annotation(x, i))

    # level ancestor -------------------------------------------------------

    def la(self, v: int, k: int):
        """k-th ancestor of v; correct whenever the path to it is uncorrupted."""
        self.check_vertex(v)
        d = self.delta
        if k < 0:
            return ERROR
        if k <= 7 * d:
            return self.climb(v, k)
        with self.safe.frame(QUERY_SAFE_WORDS):
            z = self.climb(v, d)
            if not is_vertex(z):
                return ROOT_REACHED
            dist = d
            while not self.is_black(z):
                if dist == 2 * d:
                    return ERROR
                if z == 0:
                    return ROOT_REACHED
                z = self.parent(z)
                dist += 1
            j = (k - dist - 5 * d - self.la_slack) // d
            try:
                u = self.forest.la_q(self.records.q(z), j)
            except ForestError:
                return ERROR
            k_rest = k - dist - j * d
            self.last_query = {"d": dist, "q_steps": j, "k_rest": k_rest}
            if k_rest > 7 * d:
                return ERROR
            return self.climb(u, k_rest)

    # remaining query types live in queries.py --------------------------------

    def wla(self, v: int, k: int):
        from .queries import weighted_la
        return weighted_la(self, v, k)

    def bvq(self, u: int, v: int):
        from .queries import bvq
        return bvq(self, u, v)

    def lca(self, u: int, v: int):
        from .queries import lca
        return lca(self, u, v)

    # instrumentation (uncounted, adversary-invisible reads) ------------------

    def peek(self, v: int) -> NodeRecord:
        return self.records.peek(v)

    def black_vertices(self) -> List[int]:
        return [v for v in range(self.size) if self.records.peek(v).q != self.q_null]

    @contextmanager
    def quiet_counts(self):
        """Suspend counting and adversary hooks; for instrumentation that must not perturb a run."""
        mems = [self.core, *self.forest_memories()]
        saved = [(m, m.observer, m.reads, m.writes) for m in mems]
        for m in mems:
            m.observer = None
        try:
            yield
        finally:
            for m, obs, r, w in saved:
                m.observer, m.reads, m.writes = obs, r, w

    def access_counts(self) -> dict:
        qdir, qnodes = self.forest_memories()
        return {
            "core_reads": self.core.reads, "core_writes": self.core.writes,
            "dq_reads": qdir.reads + qnodes.reads, "dq_writes": qdir.writes + qnodes.writes,
        }
