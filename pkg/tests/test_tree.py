import random

import pytest
from hypothesis import given, strategies as st

from faultytree import ERROR, ROOT_REACHED, Adversary, OracleTree, ResilientTree, TreeConfig
from faultytree.records import SPENT, UNSPENT


def chain(n, delta, profile="wide"):
    t = ResilientTree(TreeConfig(delta=delta, profile=profile))
    for v in range(1, n):
        t.add_leaf(v - 1)
    return t


def test_fresh_tree():
    t = ResilientTree(TreeConfig(delta=3))
    assert t.size == 1 and t.peek(0).depth == 0
    assert t.peek(0).flag is UNSPENT and not t.is_black(0)
    assert t.la(0, 0) == 0
    assert t.la(0, 1) is ROOT_REACHED


def test_config_validation():
    with pytest.raises(ValueError):
        TreeConfig(delta=0)
    with pytest.raises(ValueError):
        TreeConfig(profile="packed", w_max=64)


def test_parent_index_at_or_above_self_reads_as_root():
    t = chain(12, 2)
    m = 6
    adv = Adversary(1)
    t.attach(adv)
    adv.corrupt(t.core, *t.records.corrupted_word(m, "p", m + 5))
    assert t.parent(m) == 0
    assert t.climb(m + 1, 2) == 0
    assert t.climb(9, 10) is ROOT_REACHED


def test_clean_chain_climb():
    t = chain(11, 3)
    assert t.climb(10, 10) == 0
    assert t.climb(10, 0) == 10


@pytest.mark.parametrize("delta", [1, 2, 3, 5])
def test_chain_of_delta_blackens_root(delta):
    t = chain(delta, delta)
    assert t.black_vertices() == []
    t.add_leaf(delta - 1)
    assert t.black_vertices() == [0]
    assert t.forest.parent_q(t.peek(0).q) is None
    assert all(t.peek(v).flag is SPENT for v in range(delta))
    assert t.peek(delta).flag is UNSPENT


def test_spent_flag_stops_discovery():
    t = chain(3, 3)
    adv = Adversary(1)
    t.attach(adv)
    adv.corrupt(t.core, *t.records.corrupted_word(1, "flag", SPENT))
    spent = [t.peek(v).flag is SPENT for v in range(3)]
    t.add_leaf(2)
    # vertices below the spent flag may carry annotations, but nothing new is spent
    assert [t.peek(v).flag is SPENT for v in range(3)] == spent
    assert t.black_vertices() == [] and len(t.forest) == 0


@pytest.mark.parametrize("delta,m", [(2, 2), (3, 4), (4, 6)])
def test_clean_path_is_black_every_delta(delta, m):
    t = chain(m * delta + 1, delta)
    blacks = t.black_vertices()
    assert blacks == [i * delta for i in range(m)]
    for a, b in zip(blacks, blacks[1:]):
        assert t.forest.parent_q(t.peek(b).q) == t.peek(a).q


@given(st.integers(1, 6), st.sampled_from(["wide", "packed"]), st.integers(0, 2**32),
       st.integers(2, 300))
def test_clean_level_ancestor_matches_oracle(delta, profile, seed, n):
    rng = random.Random(seed)
    t = ResilientTree(TreeConfig(delta=delta, profile=profile))
    o = OracleTree()
    for v in range(1, n):
        p = v - 1 if rng.random() < 0.8 else rng.randrange(v)
        assert t.add_leaf(p) == o.add_leaf(p)
    assert len(t.black_vertices()) <= (n + delta) / delta
    for _ in range(60):
        v = rng.randrange(n)
        k = rng.randint(0, o.depth[v] + 1)
        assert t.la(v, k) == o.o_la(v, k)


def test_corruptions_off_a_path_leave_its_queries_intact():
    rng = random.Random(11)
    delta = 3
    t = ResilientTree(TreeConfig(delta=delta))
    o = OracleTree()
    path = [0]
    for v in range(1, 400):
        if rng.random() < 0.6:
            p = path[-1]
        else:
            p = rng.randrange(v)
        t.add_leaf(p)
        o.add_leaf(p)
        if p == path[-1]:
            path.append(v)
    adv = Adversary(delta)
    t.attach(adv)
    off = [v for v in range(400) if v not in set(path)]
    for v in rng.sample(off, delta):
        adv.corrupt(t.core, *t.records.corrupted_word(v, "p", rng.randrange(400)))
    leaf = path[-1]
    for k in range(len(path)):
        assert t.la(leaf, k) == path[-1 - k]


def test_out_of_range_vertex():
    t = chain(3, 1)
    with pytest.raises(IndexError):
        t.la(3, 0)
    assert t.la(2, -1) is ERROR
    assert t.add_leaf(99) == 3 and t.parent(3) == 0
