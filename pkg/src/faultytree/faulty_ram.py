"""Simulated Faulty-RAM: unreliable word memory, a small safe store, and an adversary.

Each :class:`UnreliableMemory` is a growable array of machine words.  All
accesses go through :meth:`UnreliableMemory.read` / :meth:`UnreliableMemory.write`
/ :meth:`UnreliableMemory.append`, which count themselves and then notify the
attached observer (normally an :class:`Adversary`).  The adversary may rewrite
any cell at any of these points, up to its global budget.

Several memories may share one adversary; the budget is global.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional

WORD_BITS = 64


class SimulationError(Exception):
    """A programming error inside the simulation (never an adversary effect)."""


class SafeStoreOverflow(SimulationError):
    pass


class UnreliableMemory:
    """Growable array of words that an adversary may corrupt.

    Growth uses the incremental doubling scheme: when the backing array is
    full a new one of twice the capacity is allocated and two old cells are
    migrated per subsequent append, so every logical cell lives in exactly
    one physical slot at any instant.
    """

    def __init__(self, name: str = "main", word_bits: int = WORD_BITS, capacity: int = 8):
        self.name = name
        self.word_bits = word_bits
        self.mask = (1 << word_bits) - 1
        self.observer = None
        self.reads = 0
        self.writes = 0
        self._size = 0
        self._cur: List[int] = [0] * max(capacity, 2)
        self._prev: Optional[List[int]] = None
        self._moved = 0  # cells of _prev already copied into _cur

    def __len__(self) -> int:
        return self._size

    # physical addressing -------------------------------------------------

    def _locate(self, addr: int):
        prev = self._prev
        if prev is not None and self._moved <= addr < len(prev):
            return prev
        return self._cur

    def _migrate_step(self) -> None:
        prev = self._prev
        for _ in range(2):
            if self._moved >= len(prev):
                break
            i = self._moved
            self.reads += 1
            self._cur[i] = prev[i]
            self.writes += 1
            prev[i] = None
            self._moved += 1
        if self._moved >= len(prev):
            self._prev = None

    # word access ---------------------------------------------------------

    def read(self, addr: int) -> int:
        if not 0 <= addr < self._size:
            raise SimulationError(f"{self.name}: read of address {addr} out of range [0, {self._size})")
        w = self._locate(addr)[addr]
        self.reads += 1
        if self.observer is not None:
            self.observer.on_access(self, "read", addr, w, w)
        return w

    def write(self, addr: int, w: int) -> None:
        if not 0 <= addr < self._size:
            raise SimulationError(f"{self.name}: write of address {addr} out of range [0, {self._size})")
        arr = self._locate(addr)
        old = arr[addr]
        arr[addr] = w & self.mask
        self.writes += 1
        if self.observer is not None:
            self.observer.on_access(self, "write", addr, old, arr[addr])

    def append(self, w: int) -> int:
        if self._size == len(self._cur):
            if self._prev is not None:  # cannot happen: migration finishes in half a doubling
                raise SimulationError("migration still in progress at capacity")
            self._prev = self._cur
            self._cur = [0] * (2 * len(self._prev))
            self._moved = 0
        addr = self._size
        self._cur[addr] = w & self.mask
        self._size += 1
        self.writes += 1
        if self._prev is not None:
            self._migrate_step()
        if self.observer is not None:
            self.observer.on_access(self, "append", addr, None, self._cur[addr])
        return addr

    # out-of-band access (adversary and instrumentation; not counted) ----

    def peek(self, addr: int) -> int:
        if not 0 <= addr < self._size:
            raise SimulationError(f"{self.name}: peek of address {addr} out of range")
        return self._locate(addr)[addr]

    def poke(self, addr: int, w: int) -> int:
        """Overwrite a cell without counting; returns the previous word."""
        if not 0 <= addr < self._size:
            raise SimulationError(f"{self.name}: poke of address {addr} out of range")
        arr = self._locate(addr)
        old = arr[addr]
        arr[addr] = w & self.mask
        return old

    def snapshot(self) -> List[int]:
        return [self.peek(a) for a in range(self._size)]

    @property
    def capacity(self) -> int:
        return len(self._cur)


class SafeStore:
    """The O(1) incorruptible region.

    Operations reserve a fixed number of words for their registers with
    :meth:`frame`; nested calls stack their frames.  ``high_water_mark`` is
    the deepest stack ever reached.
    """

    def __init__(self, capacity: int = 128):
        self.capacity = capacity
        self.slots = [0] * capacity
        self.used = 0
        self.high_water_mark = 0

    def reserve(self, words: int) -> int:
        base = self.used
        if base + words > self.capacity:
            raise SafeStoreOverflow(f"safe store overflow: need {base + words} > {self.capacity} words")
        self.used = base + words
        if self.used > self.high_water_mark:
            self.high_water_mark = self.used
        return base

    def release(self, words: int) -> None:
        self.used -= words
        if self.used < 0:
            raise SimulationError("safe store released more words than reserved")

    @contextmanager
    def frame(self, words: int) -> Iterator[int]:
        base = self.reserve(words)
        try:
            yield base
        finally:
            self.release(words)


@dataclass
class FaultEvent:
    """A scripted corruption: fires once, when ``trigger(op_index, accesses)`` holds."""

    trigger: Callable[[int, int], bool]
    memory: str
    address: int
    new_value: int
    fired: bool = False


@dataclass
class Corruption:
    memory: str
    address: int
    old: int
    new: int
    op_index: int
    access_index: int


class Strategy:
    """Adversary behaviour.  Subclasses override the two hooks."""

    def on_access(self, adv: "Adversary", mem: UnreliableMemory, kind: str, addr: int, old, new) -> None:
        pass

    def between_ops(self, adv: "Adversary", op_index: int) -> None:
        pass


class ScriptedStrategy(Strategy):
    def __init__(self, events: List[FaultEvent]):
        self.events = list(events)

    def _fire(self, adv: "Adversary") -> None:
        for ev in self.events:
            if not ev.fired and ev.trigger(adv.op_index, adv.accesses):
                mem = adv.memories.get(ev.memory)
                # an event aimed past the end waits until the cell exists
                if mem is not None and ev.address < len(mem):
                    ev.fired = True
                    adv.corrupt(mem, ev.address, ev.new_value)

    def on_access(self, adv, mem, kind, addr, old, new):
        self._fire(adv)

    def between_ops(self, adv, op_index):
        self._fire(adv)


class RandomStrategy(Strategy):
    """After each access, with probability ``rate``, rewrite a random cell with a random word."""

    def __init__(self, seed: int, rate: float):
        self.rng = random.Random(seed)
        self.rate = rate

    def on_access(self, adv, mem, kind, addr, old, new):
        if adv.budget > 0 and self.rng.random() < self.rate:
            names = sorted(adv.memories)
            target = adv.memories[self.rng.choice(names)]
            if len(target):
                a = self.rng.randrange(len(target))
                adv.corrupt(target, a, self.rng.getrandbits(target.word_bits))


class Adversary:
    """Adaptive adversary with a global corruption budget.

    ``corrupt`` silently refuses once the budget is exhausted.  The log lives
    outside every simulated memory.
    """

    def __init__(self, budget: int, strategy: Optional[Strategy] = None):
        self.budget = budget
        self.initial_budget = budget
        self.strategy = strategy or Strategy()
        self.log: List[Corruption] = []
        self.memories = {}
        self.op_index = 0
        self.accesses = 0
        self._busy = False

    def attach(self, mem: UnreliableMemory) -> None:
        self.memories[mem.name] = mem
        mem.observer = self

    def corrupt(self, mem: UnreliableMemory, addr: int, w: int) -> bool:
        if self.budget <= 0:
            return False
        old = mem.poke(addr, w)
        self.budget -= 1
        self.log.append(Corruption(mem.name, addr, old, mem.peek(addr), self.op_index, self.accesses))
        return True

    def on_access(self, mem, kind, addr, old, new) -> None:
        self.accesses += 1
        if self._busy or self.budget <= 0:
            return
        self._busy = True
        try:
            self.strategy.on_access(self, mem, kind, addr, old, new)
        finally:
            self._busy = False

    def between_ops(self, op_index: int) -> None:
        self.op_index = op_index
        if self.budget <= 0:
            return
        self._busy = True
        try:
            self.strategy.between_ops(self, op_index)
        finally:
            self._busy = False


def mem_read(mem: UnreliableMemory, addr: int) -> int:
    return mem.read(addr)


def mem_write(mem: UnreliableMemory, addr: int, w: int) -> None:
    mem.write(addr, w)


def mem_append(mem: UnreliableMemory, w: int) -> int:
    return mem.append(w)


def corrupt(adv: Adversary, mem: UnreliableMemory, addr: int, w: int) -> bool:
    return adv.corrupt(mem, addr, w)
