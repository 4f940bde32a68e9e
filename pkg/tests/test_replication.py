import itertools
import time

import pytest

from faultytree import UnreliableMemory
from faultytree.replication import majority, rep_alloc, rep_read, rep_write, slots_for


def _cells(values):
    m = UnreliableMemory()
    for v in values:
        m.append(v)
    return m


@pytest.mark.parametrize("delta,slots", [(0, 1), (1, 3), (2, 5), (3, 7)])
def test_slot_counts(delta, slots):
    assert slots_for(delta) == slots


def test_alloc_write_read():
    m = UnreliableMemory()
    cell = rep_alloc(m, 0, 2)
    assert m.snapshot() == [0] * 5
    rep_write(m, cell, 9)
    rep_write(m, cell, 4)
    assert rep_read(m, cell) == 4


def test_hundred_allocs_under_delta_three():
    m = UnreliableMemory()
    for _ in range(100):
        rep_alloc(m, 1, 3)
    assert len(m) == 700


@pytest.mark.parametrize("slots,want", [([5, 5, 5], 5), ([5, 9, 5], 5), ([3, 7, 3, 7, 3], 3)])
def test_majority_examples(slots, want):
    assert majority(_cells(slots), 0, len(slots)) == want


def exhaustive_decode(delta: int, written: int = 9) -> int:
    """Every placement of at most delta corrupted slots, each with an adversarial value choice."""
    s = slots_for(delta)
    checked = 0
    # two distinct garbage values suffice to realise any agreement pattern among corrupted slots
    garbage = (written + 1, written + 2)
    for k in range(delta + 1):
        for where in itertools.combinations(range(s), k):
            for vals in itertools.product(garbage, repeat=k):
                cells = [written] * s
                for i, v in zip(where, vals):
                    cells[i] = v
                assert majority(_cells(cells), 0, s) == written, (delta, cells)
                checked += 1
    return checked


def test_exhaustive_decoding_small_budgets():
    t = time.perf_counter()
    for delta in (1, 2, 3, 4):
        assert exhaustive_decode(delta) > 0
    assert time.perf_counter() - t < 1.0
