import pytest

from faultytree import Adversary, SafeStore, SafeStoreOverflow, ScriptedStrategy, SimulationError, UnreliableMemory
from faultytree.faulty_ram import FaultEvent, RandomStrategy


def test_read_write_and_counters():
    m = UnreliableMemory()
    a = m.append(7)
    assert a == 0 and m.read(0) == 7
    m.write(0, 3)
    m.write(0, 5)
    assert m.read(0) == 5
    for _ in range(1000):
        m.read(0)
    assert m.reads == 1002


def test_corruption_is_silent():
    m = UnreliableMemory()
    adv = Adversary(1)
    adv.attach(m)
    m.append(3)
    assert adv.corrupt(m, 0, 9)
    assert m.read(0) == 9
    assert adv.budget == 0 and len(adv.log) == 1
    assert not adv.corrupt(m, 0, 42)
    assert m.read(0) == 9


def test_zero_budget_is_a_no_op():
    m = UnreliableMemory()
    adv = Adversary(0)
    adv.attach(m)
    m.append(1)
    assert not adv.corrupt(m, 0, 2)
    assert adv.log == [] and m.read(0) == 1


def test_budget_caps_scripted_events():
    m = UnreliableMemory()
    events = [FaultEvent(lambda op, acc: True, "main", i, 100 + i) for i in range(5)]
    adv = Adversary(3, ScriptedStrategy(events))
    adv.attach(m)
    for i in range(5):
        m.append(i)
    assert len(adv.log) == 3 and adv.budget == 0


def test_out_of_range_is_a_simulation_error():
    m = UnreliableMemory()
    with pytest.raises(SimulationError):
        m.read(0)
    m.append(1)
    with pytest.raises(SimulationError):
        m.write(1, 0)


def test_appends_get_consecutive_indices_across_doublings():
    m = UnreliableMemory(capacity=2)
    assert [m.append(i * i) for i in range(1000)] == list(range(1000))
    assert m.snapshot() == [i * i for i in range(1000)]
    assert m.capacity >= 1000


def test_migration_never_strands_a_corruption():
    # a cell corrupted while still in the old array must read back corrupted after the move
    m = UnreliableMemory(capacity=4)
    for i in range(5):
        m.append(i)
    m.poke(3, 99)
    for i in range(20):
        m.append(i)
    assert m.read(3) == 99


def test_words_are_masked():
    m = UnreliableMemory(word_bits=8)
    m.append(0x1FF)
    assert m.read(0) == 0xFF


def test_safe_store_frames_and_overflow():
    s = SafeStore(16)
    with s.frame(10):
        with pytest.raises(SafeStoreOverflow):
            with s.frame(7):
                pass
        assert s.used == 10
    assert s.used == 0 and s.high_water_mark == 10


def test_determinism_of_random_strategy():
    def go():
        m = UnreliableMemory()
        adv = Adversary(5, RandomStrategy(seed=3, rate=0.2))
        adv.attach(m)
        for i in range(50):
            m.append(i)
            m.read(i // 2)
        return m.snapshot(), [(c.address, c.new) for c in adv.log], m.reads, m.writes

    assert go() == go()
