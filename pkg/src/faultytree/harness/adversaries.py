"""Adversary strategies that know the record layout of the structure under attack.

All of them spend from the same global budget held by :class:`Adversary`;
none of them reads the safe store.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Optional

from ..faulty_ram import Adversary, Strategy
from ..records import FIELDS, SPENT, UNSET, UNSPENT, Annotation, CbaSet
from ..static_la import StaticLA

STRATEGIES = ("none", "scripted", "random", "targeted-flags", "adaptive-path")


class TreeStrategy(Strategy):
    """Base for strategies that forge plausible field values."""

    def __init__(self, seed: int = 0, rate: float = 0.05):
        self.rng = random.Random(seed)
        self.rate = rate
        self.target = None

    def bind(self, target) -> None:
        self.target = target

    def forge(self, v: int, name: Optional[str] = None):
        """(address, word) rewriting one field of vertex v to a plausible wrong value."""
        t, rng = self.target, self.rng
        n = t.n if isinstance(t, StaticLA) else t.size
        if isinstance(t, StaticLA):
            name = name or rng.choice(("p", "q"))
            p, q = t.core.peek(v) & 0xFFFFFFFF, t.core.peek(v) >> 32
            if name == "p":
                p = rng.randrange(n + 1)
            else:
                q = rng.randrange(len(t.forest) + 1)
            return v, p | (q << 32)
        d = t.delta
        nq = len(t.forest)
        name = name or rng.choice(FIELDS)
        if name == "p":
            value = rng.randrange(n + 1)
        elif name == "q":
            value = rng.choice([t.q_null, rng.randrange(nq + 1)])
        elif name == "flag":
            value = rng.choice([SPENT, UNSPENT, Annotation(rng.randrange(1, n + 1), rng.randint(1, d))])
        elif name == "cba":
            value = rng.choice([UNSET, CbaSet(rng.randrange(nq + 1)),
                                Annotation(rng.randrange(1, n + 1), rng.randint(1, 2 * d))])
        elif name == "depth":
            value = max(0, t.peek(v).depth + rng.randint(-2 * d, 2 * d))
        else:
            value = rng.randint(1, t.w_max)
        return t.records.corrupted_word(v, name, value)

    def core(self):
        return self.target.core

    def corrupt_vertex(self, adv: Adversary, v: int, name: Optional[str] = None) -> bool:
        addr, word = self.forge(v, name)
        return adv.corrupt(self.core(), addr, word)


class RandomFaults(TreeStrategy):
    """After each access, with probability ``rate``: forge a record field, or write a random word anywhere."""

    def on_access(self, adv, mem, kind, addr, old, new):
        rng = self.rng
        if rng.random() >= self.rate:
            return
        if rng.random() < 0.75:
            n = self.target.n if isinstance(self.target, StaticLA) else self.target.size
            self.corrupt_vertex(adv, rng.randrange(n))
        else:
            target = adv.memories[rng.choice(sorted(adv.memories))]
            if len(target):
                adv.corrupt(target, rng.randrange(len(target)), rng.getrandbits(target.word_bits))


class TargetedFlags(TreeStrategy):
    """Mark fresh vertices' flags spent before their descendants arrive, then restore them.

    This manufactures irregular black patterns on paths that are themselves
    never touched.
    """

    def __init__(self, seed: int = 0, rate: float = 0.15, hold: Optional[int] = None):
        super().__init__(seed, rate)
        self.hold = hold
        self.pending = deque()  # (release_size, vertex)

    def between_ops(self, adv, op_index):
        t, rng = self.target, self.rng
        if isinstance(t, StaticLA):
            return
        n = t.size
        while self.pending and self.pending[0][0] <= n:
            _, v = self.pending.popleft()
            self.corrupt_vertex_to(adv, v, UNSPENT)
        if adv.budget >= 2 and n > 1 and rng.random() < self.rate:
            v = rng.randrange(max(1, n - 2 * t.delta), n)
            if t.peek(v).flag is not SPENT:
                hold = self.hold or rng.randint(t.delta, 4 * t.delta)
                if self.corrupt_vertex_to(adv, v, SPENT):
                    self.pending.append((n + hold, v))

    def corrupt_vertex_to(self, adv, v, flag) -> bool:
        addr, word = self.target.records.corrupted_word(v, "flag", flag)
        return adv.corrupt(self.target.core, addr, word)


class AdaptivePath(TreeStrategy):
    """Watches record reads and corrupts vertices the running operation has just climbed past."""

    def __init__(self, seed: int = 0, rate: float = 0.02, window: int = 8):
        super().__init__(seed, rate)
        self.recent = deque(maxlen=window)

    def on_access(self, adv, mem, kind, addr, old, new):
        t = self.target
        if mem is not t.core or kind != "read":
            return
        v = addr if isinstance(t, StaticLA) else t.records.vertex_of(addr)
        if not self.recent or self.recent[-1] != v:
            self.recent.append(v)
        if len(self.recent) > 1 and self.rng.random() < self.rate:
            # a vertex already passed, so the running operation may come back through it
            victim = self.rng.choice(list(self.recent)[:-1])
            self.corrupt_vertex(adv, victim)


def make_strategy(name: str, seed: int = 0, rate: Optional[float] = None) -> Strategy:
    if name in ("none", "scripted"):
        return Strategy()
    if name == "random":
        return RandomFaults(seed, 0.01 if rate is None else rate)
    if name == "targeted-flags":
        return TargetedFlags(seed, 0.15 if rate is None else rate)
    if name == "adaptive-path":
        return AdaptivePath(seed, 0.02 if rate is None else rate)
    raise ValueError(f"unknown adversary {name!r}; expected one of {', '.join(STRATEGIES)}")
