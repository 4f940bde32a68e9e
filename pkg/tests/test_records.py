import pytest
from hypothesis import given, strategies as st

from faultytree import UnreliableMemory
from faultytree.records import (PACKED, SPENT, UNSET, UNSPENT, Annotation, CbaSet, NodeRecord,
                                make_records)

flags = st.one_of(st.just(UNSPENT), st.just(SPENT),
                  st.builds(Annotation, st.integers(0, 2**20 - 1), st.integers(1, 255)))
cbas = st.one_of(st.just(UNSET), st.builds(CbaSet, st.integers(0, PACKED.q_null - 1)),
                 st.builds(Annotation, st.integers(0, 2**20 - 1), st.integers(1, 255)))


@pytest.mark.parametrize("profile", ["wide", "packed"])
@given(p=st.integers(0, 2**20 - 1), q=st.integers(0, 2**18 - 1), flag=flags, cba=cbas,
       depth=st.integers(0, 2**16 - 1), weight=st.integers(1, 63))
def test_round_trip(profile, p, q, flag, cba, depth, weight):
    recs = make_records(profile, UnreliableMemory(word_bits=128))
    rec = NodeRecord(p, q, flag, cba, depth, weight)
    v = recs.append(rec)
    assert recs.peek(v) == rec
    assert (recs.p(v), recs.q(v), recs.flag(v), recs.cba(v), recs.depth(v), recs.weight(v)) == \
        (p, q, flag, cba, depth, weight)


@pytest.mark.parametrize("profile", ["wide", "packed"])
def test_field_updates_leave_other_fields(profile):
    recs = make_records(profile, UnreliableMemory(word_bits=128))
    v = recs.append(NodeRecord(3, recs.layout.q_null, depth=7, weight=5))
    recs.set_flag(v, Annotation(9, 2))
    recs.set_cba(v, CbaSet(4))
    recs.set_q(v, 11)
    assert recs.peek(v) == NodeRecord(3, 11, Annotation(9, 2), CbaSet(4), 7, 5)


@given(st.integers(0, 2**30 - 1))
def test_garbage_decodes_conservatively(word):
    # every bit pattern decodes to some legal state; unknown flags read as spent
    f = PACKED.dec_flag(word)
    assert f in (UNSPENT, SPENT) or isinstance(f, Annotation)
    if word & 3 in (1, 3):
        assert f is SPENT
    c = PACKED.dec_cba(word)
    assert c is UNSET or isinstance(c, (Annotation, CbaSet))
    if word & 3 == 3:
        assert c == CbaSet(PACKED.invalid_handle)


def test_annotation_with_zero_distance_is_not_legal():
    assert PACKED.dec_flag(2) is SPENT


def test_unknown_profile():
    with pytest.raises(ValueError):
        make_records("narrow", UnreliableMemory())
