"""The black forest Q, stored fully replicated so every answer survives corruption.

Each Q vertex is a block of replicated cells in the ``qnodes`` memory; a
replicated directory in ``qdir`` maps handles to block addresses.  Ancestor
queries use binary lifting: ``jump[j]`` is the ``2**j``-th ancestor and the
aggregates cover the ``2**j`` vertices from the node itself (included) up to
``jump[j]`` (excluded).

Every Q vertex carries two segment weights because weighted LA and BVQ assign
different values to the same vertex: ``seg_sum`` (total weight of its T
segment) and ``seg_min`` with ``seg_witness`` (minimum-weight T vertex of the
segment, or ``INF`` for roots created black-free).
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Tuple

from .faulty_ram import SafeStore, UnreliableMemory
from .replication import REP_READ_SAFE_WORDS, majority, slots_for

NULL = (1 << 64) - 1
INF = NULL

PARENT, DEPTH, SATELLITE, SEG_SUM, SEG_MIN, SEG_WIT = range(6)
HEADER_CELLS = 6
JUMP, AGG_SUM, AGG_MIN, AGG_WIT = range(4)
LEVEL_CELLS = 4

# registers held by a forest operation while it runs (handles, counters, partial aggregates)
FOREST_SAFE_WORDS = 10 + REP_READ_SAFE_WORDS


class ForestError(Exception):
    """Query-error signal: invalid handle or out-of-range request."""


class SameTree(NamedTuple):
    lca: int
    a: int  # child of lca towards u, or lca itself when u == lca
    b: int


class DifferentTrees(NamedTuple):
    root_u: int
    root_v: int


def _min_pair(lower, upper):
    # ties keep the deeper witness
    return upper if upper[0] < lower[0] else lower


class BlackForest:
    def __init__(self, delta: int, safe: Optional[SafeStore] = None, w_max: int = 1 << 20,
                 sum_cap: Optional[int] = None, qdir: Optional[UnreliableMemory] = None,
                 qnodes: Optional[UnreliableMemory] = None):
        self.delta = delta
        self.s = slots_for(delta)
        self.safe = safe if safe is not None else SafeStore()
        self.w_max = w_max
        self.sum_cap = sum_cap if sum_cap is not None else max(1, delta) * w_max
        self.dir = qdir if qdir is not None else UnreliableMemory("qdir")
        self.nodes = qnodes if qnodes is not None else UnreliableMemory("qnodes")
        self._count_slot = self.safe.reserve(1)

    def __len__(self) -> int:
        return self.safe.slots[self._count_slot]

    # replicated field access ----------------------------------------------

    def _base(self, h: int) -> int:
        if not 0 <= h < len(self):
            raise ForestError(f"invalid Q handle {h}")
        return majority(self.dir, h * self.s, self.s)

    def _cell(self, base: int, idx: int) -> int:
        return majority(self.nodes, base + idx * self.s, self.s)

    def _level(self, base: int, j: int, what: int) -> int:
        return majority(self.nodes, base + (HEADER_CELLS + LEVEL_CELLS * j + what) * self.s, self.s)

    def depth_q(self, h: int) -> int:
        return self._cell(self._base(h), DEPTH)

    def parent_q(self, h: int) -> Optional[int]:
        p = self._cell(self._base(h), PARENT)
        return None if p == NULL else p

    def satellite(self, h: int) -> int:
        return self._cell(self._base(h), SATELLITE)

    def seg_sum(self, h: int) -> int:
        return self._cell(self._base(h), SEG_SUM)

    def segment_min(self, h: int) -> Tuple[int, Optional[int]]:
        base = self._base(h)
        w = self._cell(base, SEG_MIN)
        wit = self._cell(base, SEG_WIT)
        return w, (None if wit == NULL else wit)

    # updates ----------------------------------------------------------------

    def _clamp_sum(self, w) -> int:
        return min(max(int(w), 1), self.sum_cap)

    def _clamp_min(self, w) -> int:
        if w is None or w == INF:
            return INF
        return min(max(int(w), 1), self.w_max)

    def _append_block(self, cells) -> int:
        nodes = self.nodes
        base = len(nodes)
        for value in cells:
            for _ in range(self.s):
                nodes.append(value)
        h = len(self)
        for _ in range(self.s):
            self.dir.append(base)
        self.safe.slots[self._count_slot] = h + 1
        return h

    def new_tree_q(self, v: int, seg_sum: int = 1, seg_min=INF, witness: Optional[int] = None) -> int:
        with self.safe.frame(FOREST_SAFE_WORDS):
            wit = NULL if witness is None else witness
            return self._append_block([NULL, 0, v, self._clamp_sum(seg_sum), self._clamp_min(seg_min), wit])

    def add_leaf_q(self, parent: int, v: int, seg_sum: int = 1, seg_min=INF,
                   witness: Optional[int] = None) -> int:
        with self.safe.frame(FOREST_SAFE_WORDS):
            pbase = self._base(parent)
            depth = self._cell(pbase, DEPTH) + 1
            ssum = self._clamp_sum(seg_sum)
            smin = self._clamp_min(seg_min)
            wit = NULL if witness is None else witness
            cells = [parent, depth, v, ssum, smin, wit]
            # level 0 spans the node itself
            jump, agg_sum, agg = parent, ssum, (smin, wit)
            cells += [jump, agg_sum, agg[0], agg[1]]
            j = 1
            while (1 << j) <= depth:
                mid = self._base(jump)
                nxt = self._level(mid, j - 1, JUMP)
                agg_sum += self._level(mid, j - 1, AGG_SUM)
                agg = _min_pair(agg, (self._level(mid, j - 1, AGG_MIN), self._level(mid, j - 1, AGG_WIT)))
                jump = nxt
                cells += [jump, agg_sum, agg[0], agg[1]]
                j += 1
            return self._append_block(cells)

    # queries ----------------------------------------------------------------

    def ancestor_q(self, h: int, k: int) -> int:
        """Handle of the k-th ancestor of ``h`` in Q."""
        with self.safe.frame(FOREST_SAFE_WORDS):
            base = self._base(h)
            depth = self._cell(base, DEPTH)
            if k < 0 or k > depth:
                raise ForestError(f"k={k} exceeds Q depth {depth}")
            j = 0
            while k:
                if k & 1:
                    h = self._level(base, j, JUMP)
                    base = self._base(h)
                k >>= 1
                j += 1
            return h

    def la_q(self, h: int, k: int) -> int:
        """T vertex associated with the k-th ancestor of ``h``."""
        return self.satellite(self.ancestor_q(h, k))

    def wla_q(self, h: int, k: int) -> Optional[Tuple[int, int, int]]:
        """Shallowest ancestor whose Q path to ``h`` weighs at most ``k``.

        Returns ``(satellite, total, handle)`` or None when ``h`` alone is too heavy.
        """
        with self.safe.frame(FOREST_SAFE_WORDS):
            base = self._base(h)
            own = self._cell(base, SEG_SUM)
            if own > k:
                return None
            acc = 0  # weight of the path from h up to cur, cur excluded
            cur, cur_sum = h, own
            depth = self._cell(base, DEPTH)
            for j in range(depth.bit_length() - 1, -1, -1):
                if (1 << j) > depth:
                    continue
                top = self._level(base, j, JUMP)
                tbase = self._base(top)
                top_sum = self._cell(tbase, SEG_SUM)
                span = self._level(base, j, AGG_SUM)
                if acc + span + top_sum <= k:
                    acc += span
                    cur, base, cur_sum = top, tbase, top_sum
                    depth = self._cell(base, DEPTH)
            return self._cell(base, SATELLITE), acc + cur_sum, cur

    def bvq_q(self, a: int, b: int) -> Tuple[int, Optional[int]]:
        """Minimum ``seg_min`` on the Q path from ``b`` up to its ancestor ``a`` (inclusive)."""
        with self.safe.frame(FOREST_SAFE_WORDS):
            abase = self._base(a)
            bbase = self._base(b)
            d = self._cell(bbase, DEPTH) - self._cell(abase, DEPTH)
            if d < 0:
                raise ForestError("first argument is deeper than the second")
            best = (INF, NULL)
            cur, base, j = b, bbase, 0
            while d:
                if d & 1:
                    best = _min_pair(best, (self._level(base, j, AGG_MIN), self._level(base, j, AGG_WIT)))
                    cur = self._level(base, j, JUMP)
                    base = self._base(cur)
                d >>= 1
                j += 1
            if cur != a:
                raise ForestError("first argument is not an ancestor of the second")
            best = _min_pair(best, (self._cell(abase, SEG_MIN), self._cell(abase, SEG_WIT)))
            return best[0], (None if best[1] == NULL else best[1])

    def lca_q(self, u: int, v: int):
        with self.safe.frame(FOREST_SAFE_WORDS):
            du, dv = self.depth_q(u), self.depth_q(v)
            a = self.ancestor_q(u, du - dv) if du > dv else u
            b = self.ancestor_q(v, dv - du) if dv > du else v
            if a == b:
                ca = self.ancestor_q(u, du - dv - 1) if du > dv else u
                cb = self.ancestor_q(v, dv - du - 1) if dv > du else v
                return SameTree(a, ca, cb)
            abase, bbase = self._base(a), self._base(b)
            depth = min(du, dv)
            for j in range(depth.bit_length() - 1, -1, -1):
                if (1 << j) > depth:
                    continue
                ja = self._level(abase, j, JUMP)
                jb = self._level(bbase, j, JUMP)
                if ja != jb:
                    a, b = ja, jb
                    abase, bbase = self._base(a), self._base(b)
                    depth -= 1 << j
            pa = self._cell(abase, PARENT)
            pb = self._cell(bbase, PARENT)
            if pa == NULL or pb == NULL or pa != pb:
                return DifferentTrees(a, b)
            return SameTree(pa, a, b)
