"""Replication strategy: one reliable word stored as 2*delta + 1 unreliable copies."""

from __future__ import annotations

from dataclasses import dataclass

from .faulty_ram import UnreliableMemory

# Boyer-Moore keeps a candidate and a counter; the loop index is the third register.
REP_READ_SAFE_WORDS = 3


@dataclass(frozen=True)
class ReplicatedCell:
    base: int
    slot_count: int


def slots_for(delta: int) -> int:
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return 2 * delta + 1


def rep_alloc(mem: UnreliableMemory, initial: int, delta: int) -> ReplicatedCell:
    s = slots_for(delta)
    base = mem.append(initial)
    for _ in range(s - 1):
        mem.append(initial)
    return ReplicatedCell(base, s)


def rep_write(mem: UnreliableMemory, cell: ReplicatedCell, w: int) -> None:
    write_slots(mem, cell.base, cell.slot_count, w)


def rep_read(mem: UnreliableMemory, cell: ReplicatedCell) -> int:
    return majority(mem, cell.base, cell.slot_count)


def write_slots(mem: UnreliableMemory, base: int, count: int, w: int) -> None:
    for a in range(base, base + count):
        mem.write(a, w)


def majority(mem: UnreliableMemory, base: int, count: int) -> int:
    """Single-pass Boyer-Moore vote over ``count`` consecutive slots.

    No verification pass: at most ``(count - 1) / 2`` slots can differ from the
    written value, so the surviving candidate is that value.
    """
    read = mem.read
    cand = read(base)
    votes = 1
    for a in range(base + 1, base + count):
        w = read(a)
        if votes == 0:
            cand = w
            votes = 1
        elif w == cand:
            votes += 1
        else:
            votes -= 1
    return cand
