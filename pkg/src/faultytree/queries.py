"""Weighted level ancestor, bottleneck vertex and lowest common ancestor queries.

Every query climbs O(delta) records of the noisy tree and makes O(1) calls
into the black forest.  Results are vertex ids or one of the sentinels in
:mod:`faultytree.outcomes`.
"""

from __future__ import annotations

from .black_forest import INF, DifferentTrees, ForestError
from .outcomes import ERROR, INCONCLUSIVE, ROOT_REACHED, is_vertex
from .tree import QUERY_SAFE_WORDS


def weighted_la(t, v: int, k: int):
    """Deepest ancestor u of v whose path v..u weighs at least k."""
    t.check_vertex(v)
    d = t.delta
    with t.safe.frame(QUERY_SAFE_WORDS):
        z, acc = v, 0
        for step in range(10 * d + 1):
            acc += t.weight(z)
            if acc >= k:
                return z
            if step == 10 * d:
                break
            if z == 0:
                return ROOT_REACHED
            z = t.parent(z)

        # climb delta levels, then look for a black anchor within delta more
        z, W = v, 0
        for _ in range(d):
            if z == 0:
                return ROOT_REACHED
            W += t.weight(z)
            z = t.parent(z)
        for step in range(d + 1):
            if t.is_black(z):
                break
            if step == d:
                return ERROR
            if z == 0:
                return ROOT_REACHED
            W += t.weight(z)
            z = t.parent(z)
        b = z
        F = t.forest
        try:
            res = F.wla_q(t.records.q(b), k - W)
            if res is None:
                start, W2 = b, 0
            else:
                start, total, h = res
                # the final climb re-reads the segment of the returned Q vertex from T
                W2 = total - F.seg_sum(h)
        except ForestError:
            return ERROR

        acc, z = W + W2, start
        for step in range(6 * d + 1):
            acc += t.weight(z)
            if acc >= k:
                return z
            if step == 6 * d:
                break
            if z == 0:
                return ROOT_REACHED
            z = t.parent(z)
        return ERROR


def _track(best, w, v):
    # upward scans: ties keep the deeper vertex
    if best is None or w < best[0]:
        return (w, v)
    return best


def bvq_ancestor(t, a: int, v: int):
    """(weight, vertex) of the minimum on the path from v up to its ancestor a, or ERROR."""
    d = t.delta
    dist = t.depth_diff(v, a)
    if dist is None or dist < 0:
        return ERROR
    with t.safe.frame(QUERY_SAFE_WORDS):
        if dist < 10 * d:
            best, z = None, v
            for step in range(dist + 1):
                best = _track(best, t.weight(z), z)
                if step == dist:
                    break
                if z == 0:
                    return ERROR
                z = t.parent(z)
            return best if z == a else ERROR

        best, z = None, v
        for _ in range(d):
            best = _track(best, t.weight(z), z)
            if z == 0:
                return ERROR
            z = t.parent(z)
        for step in range(d + 1):
            best = _track(best, t.weight(z), z)
            if t.is_black(z):
                break
            if step == d or z == 0:
                return ERROR
            z = t.parent(z)
        F = t.forest
        try:
            qb = t.records.q(z)
            hp = F.ancestor_q(qb, dist // d - 7)
            bp = F.satellite(hp)
            qw, qwit = F.bvq_q(hp, qb)
        except ForestError:
            return ERROR
        if qwit is not None and qw != INF and qw < best[0]:
            best = (qw, qwit)
        top, z = None, bp
        for step in range(7 * d + 1):
            top = _track(top, t.weight(z), z)
            if z == a:
                break
            if step == 7 * d or z == 0:
                return ERROR
            z = t.parent(z)
        if top[0] < best[0]:
            best = top
        return best


def bvq(t, u: int, v: int):
    """Minimum-weight vertex on the u..v path.

    Ties prefer the v side of the path and, within a side, the deeper vertex.
    """
    t.check_vertex(u)
    t.check_vertex(v)
    z = lca(t, u, v)
    if not is_vertex(z):
        return ERROR
    rv = bvq_ancestor(t, z, v)
    ru = bvq_ancestor(t, z, u)
    if rv is ERROR or ru is ERROR:
        return ERROR
    return ru[1] if ru[0] < rv[0] else rv[1]


def naive_lca(t, u: int, v: int):
    """LCA when one endpoint lies within 10*delta levels of it; INCONCLUSIVE otherwise."""
    d = t.delta
    k = t.depth_diff(u, v)
    if k is None:
        return INCONCLUSIVE
    with t.safe.frame(QUERY_SAFE_WORDS):
        if k >= 0:
            a, b = t.la(u, k), v
        else:
            a, b = u, t.la(v, -k)
        if not (is_vertex(a) and is_vertex(b)):
            return INCONCLUSIVE
        for step in range(10 * d + 1):
            if a == b:
                return a
            if step == 10 * d or a == 0 or b == 0:
                break
            a, b = t.parent(a), t.parent(b)
        return INCONCLUSIVE


def first_black(t, v: int):
    """Closest black ancestor of v (v included) within 2*delta levels, or ERROR."""
    z = v
    for step in range(2 * t.delta + 1):
        if t.is_black(z):
            return z
        if z == 0:
            break
        z = t.parent(z)
    return ERROR


def lca(t, u: int, v: int):
    t.check_vertex(u)
    t.check_vertex(v)
    r = naive_lca(t, u, v)
    if is_vertex(r):
        return r
    with t.safe.frame(QUERY_SAFE_WORDS):
        ub, vb = first_black(t, u), first_black(t, v)
        if not (is_vertex(ub) and is_vertex(vb)):
            return ERROR
        return _lca_black(t, ub, vb)


def _lca_black(t, u: int, v: int):
    F = t.forest
    try:
        res = F.lca_q(t.records.q(u), t.records.q(v))
        if not isinstance(res, DifferentTrees):
            r = naive_lca(t, F.satellite(res.a), F.satellite(res.b))
            return r if is_vertex(r) else ERROR
        ra, rb = F.satellite(res.root_u), F.satellite(res.root_v)
    except ForestError:
        return ERROR
    sides = [(ra, u, v), (rb, v, u)]
    dd = t.depth_diff(ra, rb)
    if dd is not None and dd < 0:
        sides.reverse()
    for attempt, (root, own, other) in enumerate(sides):
        k = t.depth_diff(own, root)
        if k is None or k < 0:
            continue
        if t.la(own, k) != root:
            continue
        r = naive_lca(t, root, other)
        if attempt and t.audit_literal_fallback:
            # the fallback read literally pairs the root with its own endpoint
            with t.quiet_counts():
                if naive_lca(t, root, own) != r:
                    t.literal_fallback_differs += 1
        if is_vertex(r):
            return r
    return ERROR
