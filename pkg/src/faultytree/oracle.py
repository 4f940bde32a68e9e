"""Ground truth kept outside the simulated memory.

:class:`OracleTree` replays the insertions on plain Python lists and answers
every query by brute force.  :meth:`OracleTree.must_match` decides whether
the resilient structure is obliged to agree: it is when no vertex on the
query's defining path was ever rewritten by the adversary.
"""

from __future__ import annotations

from typing import List, Optional, Set

from .black_forest import INF, DifferentTrees, ForestError, SameTree
from .outcomes import ROOT_REACHED


class OracleTree:
    def __init__(self, root_weight: int = 1, w_max: Optional[int] = None):
        self.w_max = w_max
        self.parent: List[int] = [-1]
        self.depth: List[int] = [0]
        self.weight: List[int] = [self._clamp(root_weight)]
        self.corrupted: Set[int] = set()

    @classmethod
    def from_parents(cls, parents: List[int], weights=None) -> "OracleTree":
        """Static tree from a parent array (root has parent -1); ids in any order."""
        o = cls()
        n = len(parents)
        o.parent = list(parents)
        o.weight = list(weights) if weights is not None else [1] * n
        o.depth = [-1] * n
        for v in range(n):
            path = []
            z = v
            while z != -1 and o.depth[z] < 0:
                path.append(z)
                z = o.parent[z]
            base = -1 if z == -1 else o.depth[z]
            for z in reversed(path):
                base += 1
                o.depth[z] = base
        return o

    def _clamp(self, w):
        if self.w_max is None:
            return max(int(w), 1)
        return min(max(int(w), 1), self.w_max)

    def __len__(self) -> int:
        return len(self.parent)

    def add_leaf(self, x_par: int, weight: int = 1) -> int:
        if not 0 <= x_par < len(self.parent):
            x_par = 0
        self.parent.append(x_par)
        self.depth.append(self.depth[x_par] + 1)
        self.weight.append(self._clamp(weight))
        return len(self.parent) - 1

    def mark_corrupted(self, v: int) -> None:
        self.corrupted.add(v)

    # brute force ------------------------------------------------------------

    def path_up(self, v: int, k: int) -> List[int]:
        """v and its ancestors up to distance k (fewer if the root comes first)."""
        out = [v]
        while len(out) <= k and self.parent[out[-1]] != -1:
            out.append(self.parent[out[-1]])
        return out

    def o_la(self, v: int, k: int):
        if k > self.depth[v]:
            return ROOT_REACHED
        z = v
        for _ in range(k):
            z = self.parent[z]
        return z

    def o_wla(self, v: int, k: int):
        acc, z = 0, v
        while True:
            acc += self.weight[z]
            if acc >= k:
                return z
            if self.parent[z] == -1:
                return ROOT_REACHED
            z = self.parent[z]

    def o_lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def o_bvq(self, u: int, v: int) -> int:
        """Minimum weight on u..v; ties go to the v side, then to the deeper vertex."""
        z = self.o_lca(u, v)
        best = None
        for side in (v, u):
            x = side
            while True:
                if best is None or self.weight[x] < self.weight[best]:
                    best = x
                if x == z:
                    break
                x = self.parent[x]
        return best

    # contract ----------------------------------------------------------------

    def path_between(self, u: int, v: int) -> List[int]:
        z = self.o_lca(u, v)
        out = []
        for side in (u, v):
            x = side
            while x != z:
                out.append(x)
                x = self.parent[x]
        out.append(z)
        return out

    def defining_path(self, kind: str, a: int, b: int) -> Optional[List[int]]:
        if kind == "LA":
            ans = self.o_la(a, b)
            return None if ans is ROOT_REACHED else self.path_up(a, b)
        if kind == "WLA":
            ans = self.o_wla(a, b)
            return None if ans is ROOT_REACHED else self.path_up(a, self.depth[a] - self.depth[ans])
        return self.path_between(a, b)

    def answer(self, kind: str, a: int, b: int):
        return {"LA": self.o_la, "WLA": self.o_wla, "LCA": self.o_lca, "BVQ": self.o_bvq}[kind](a, b)

    def must_match(self, kind: str, a: int, b: int) -> bool:
        """True iff the query has an answer and its defining path avoids every corrupted vertex.

        Queries without an answer (k beyond the root) are not meaningful and never obligate.
        """
        path = self.defining_path(kind, a, b)
        if path is None:
            return False
        c = self.corrupted
        return not any(x in c for x in path)


class MirrorForest:
    """Plain-list replica of the black forest, answering by walking parent links."""

    def __init__(self):
        self.parent: List[Optional[int]] = []
        self.sat: List[int] = []
        self.ssum: List[int] = []
        self.smin: List[tuple] = []
        self.w_max = None
        self.sum_cap = None

    def __len__(self):
        return len(self.parent)

    def _check(self, h):
        if not (type(h) is int and 0 <= h < len(self.parent)):
            raise ForestError(f"invalid Q handle {h}")

    def depth_q(self, h):
        self._check(h)
        d = 0
        while self.parent[h] is not None:
            h = self.parent[h]
            d += 1
        return d

    def _push(self, parent, v, seg_sum, seg_min, witness):
        self.parent.append(parent)
        self.sat.append(v)
        self.ssum.append(min(max(int(seg_sum), 1), self.sum_cap))
        if seg_min is None or seg_min == INF:
            self.smin.append((INF, None))
        else:
            self.smin.append((min(max(int(seg_min), 1), self.w_max), witness))
        return len(self.parent) - 1

    def new_tree_q(self, v, seg_sum=1, seg_min=INF, witness=None):
        return self._push(None, v, seg_sum, seg_min, witness)

    def add_leaf_q(self, parent, v, seg_sum=1, seg_min=INF, witness=None):
        self._check(parent)
        return self._push(parent, v, seg_sum, seg_min, witness)

    def parent_q(self, h):
        self._check(h)
        return self.parent[h]

    def satellite(self, h):
        self._check(h)
        return self.sat[h]

    def seg_sum(self, h):
        self._check(h)
        return self.ssum[h]

    def ancestor_q(self, h, k):
        self._check(h)
        if k < 0 or k > self.depth_q(h):
            raise ForestError("k exceeds Q depth")
        for _ in range(k):
            h = self.parent[h]
        return h

    def la_q(self, h, k):
        return self.sat[self.ancestor_q(h, k)]

    def wla_q(self, h, k):
        self._check(h)
        if self.ssum[h] > k:
            return None
        acc, cur = self.ssum[h], h
        while self.parent[cur] is not None and acc + self.ssum[self.parent[cur]] <= k:
            cur = self.parent[cur]
            acc += self.ssum[cur]
        return self.sat[cur], acc, cur

    def bvq_q(self, a, b):
        self._check(a)
        self._check(b)
        best, cur = (INF, None), b
        while True:
            if self.smin[cur][0] < best[0]:
                best = self.smin[cur]
            if cur == a:
                return best
            cur = self.parent[cur]
            if cur is None:
                raise ForestError("first argument is not an ancestor of the second")

    def lca_q(self, u, v):
        self._check(u)
        self._check(v)
        anc_u = [u]
        while self.parent[anc_u[-1]] is not None:
            anc_u.append(self.parent[anc_u[-1]])
        pos = {h: i for i, h in enumerate(anc_u)}
        prev, cur = v, v
        while cur not in pos:
            prev = cur
            if self.parent[cur] is None:
                return DifferentTrees(anc_u[-1], cur)
            cur = self.parent[cur]
        i = pos[cur]
        a = anc_u[i - 1] if i > 0 else cur
        b = prev if cur != v else cur
        return SameTree(cur, a, b)


class AuditedForest:
    """Runs every forest call on the real structure and on a mirror; counts disagreements."""

    def __init__(self, inner, mirror: Optional[MirrorForest] = None):
        self.inner = inner
        self.mirror = mirror if mirror is not None else MirrorForest()
        self.mirror.w_max = inner.w_max
        self.mirror.sum_cap = inner.sum_cap
        self.calls = 0
        self.mismatches: List[tuple] = []

    def __len__(self):
        return len(self.inner)

    def __getattr__(self, name):
        real = getattr(self.inner, name)
        shadow = getattr(self.mirror, name, None)
        if not callable(real) or shadow is None:
            return real

        def call(*args):
            self.calls += 1
            try:
                got = ("ok", real(*args))
            except ForestError:
                got = ("err", None)
            try:
                want = ("ok", shadow(*args))
            except ForestError:
                want = ("err", None)
            if got != want:
                self.mismatches.append((name, args, got, want))
            if got[0] == "err":
                raise ForestError(f"{name}{args}")
            return got[1]

        return call
