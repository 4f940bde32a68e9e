import pytest

from faultytree import ROOT_REACHED, OracleTree


def path_tree(weights):
    o = OracleTree(root_weight=weights[0])
    for v, w in enumerate(weights[1:], start=1):
        o.add_leaf(v - 1, w)
    return o


def test_brute_force_examples():
    o = path_tree([4, 1, 9])
    assert o.o_la(2, 0) == 2
    assert o.o_la(2, 3) is ROOT_REACHED
    assert o.o_lca(1, 1) == 1
    assert o.o_bvq(0, 2) == 1
    assert o.o_wla(2, 10) == 1
    assert o.o_wla(2, 15) is ROOT_REACHED


def test_contract_predicate():
    o = path_tree([1] * 6)
    assert all(o.must_match("LA", 5, k) for k in range(6))
    o.mark_corrupted(3)
    assert o.must_match("LA", 5, 1)
    assert not o.must_match("LA", 5, 2)
    assert not o.must_match("LCA", 5, 0)


def test_correct_below_a_corrupted_ancestor():
    # w sits three levels below the corrupted vertex; its lowest two ancestors are still trustworthy
    o = OracleTree()
    for v in range(1, 8):
        o.add_leaf(v - 1)
    o.add_leaf(2)  # a sibling branch that stays clean
    o.mark_corrupted(4)
    w = 7
    assert [o.must_match("LA", w, k) for k in range(5)] == [True, True, True, False, False]
    assert o.must_match("LCA", 8, 2)


def test_queries_without_answers_never_obligate():
    o = path_tree([1, 1, 1])
    assert o.defining_path("LA", 2, 5) is None
    assert not o.must_match("LA", 2, 5)
    assert not o.must_match("WLA", 2, 10)


def test_static_ids_in_any_order():
    o = OracleTree.from_parents([2, -1, 1, 0])
    assert o.depth == [2, 0, 1, 3]
    assert o.o_lca(3, 2) == 2


def test_weight_clamping():
    o = OracleTree(w_max=10)
    o.add_leaf(0, 99)
    o.add_leaf(0, -4)
    assert o.weight[1:] == [10, 1]


@pytest.mark.parametrize("kind", ["LA", "WLA", "LCA", "BVQ"])
def test_answer_dispatch(kind):
    o = path_tree([2, 2, 2])
    assert o.answer(kind, 2, 1) == {"LA": 1, "WLA": 2, "LCA": 1, "BVQ": 1}[kind]
