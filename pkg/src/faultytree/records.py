"""Vertex records and their word layouts.

Two profiles:

``wide``
    one 64-bit word per field, six words per record (p, q, flag, cba,
    depth, weight).  The record group is the unit of corruption.
``packed``
    the whole record in a single 128-bit word::

        bits   0..19   p        (all ones = null)
        bits  20..37   q        (all ones = null)
        bits  38..53   depth    (mod 2**16)
        bits  54..59   weight
        bits  60..89   flag     (2-bit tag, 20-bit x, 8-bit i)
        bits  90..119  cba      (2-bit tag, 28-bit payload)

Flag and cba words share one encoding: a 2-bit tag in the low bits followed
by the payload.  Bit patterns that decode to no legal variant are read
conservatively: a flag as SPENT, a cba as SET to an invalid handle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Union

from .faulty_ram import UnreliableMemory


class FlagState(enum.Enum):
    UNSPENT = 0
    SPENT = 1


class CbaState(enum.Enum):
    UNSET = 0


UNSPENT = FlagState.UNSPENT
SPENT = FlagState.SPENT
UNSET = CbaState.UNSET


class Annotation(NamedTuple):
    """``(x, i)``: vertex x is being inserted and observed this vertex at distance i."""

    x: int
    i: int


class CbaSet(NamedTuple):
    q: int


Flag = Union[FlagState, Annotation]
Cba = Union[CbaState, Annotation, CbaSet]

FIELDS = ("p", "q", "flag", "cba", "depth", "weight")


def flag_is_unspent(f) -> bool:
    return f is UNSPENT or isinstance(f, Annotation)


@dataclass
class NodeRecord:
    p: int
    q: int
    flag: Flag = UNSPENT
    cba: Cba = UNSET
    depth: int = 0
    weight: int = 1


class Layout:
    """Bit widths of one profile."""

    def __init__(self, name, word_bits, p_bits, q_bits, depth_bits, weight_bits, x_bits, i_bits):
        self.name = name
        self.word_bits = word_bits
        self.p_bits = p_bits
        self.q_bits = q_bits
        self.depth_bits = depth_bits
        self.weight_bits = weight_bits
        self.x_bits = x_bits
        self.i_bits = i_bits
        self.p_null = (1 << p_bits) - 1
        self.q_null = (1 << q_bits) - 1
        self.depth_mod = 1 << depth_bits
        self.tag_bits = 2
        self.tagged_bits = 2 + x_bits + i_bits
        # cba SET payload must hold a handle; the reserved all-ones handle marks garbage
        self.invalid_handle = self.q_null

    # flag ------------------------------------------------------------------

    def enc_flag(self, f) -> int:
        if f is UNSPENT:
            return 0
        if f is SPENT:
            return 1
        x, i = f
        return 2 | (x << 2) | (i << (2 + self.x_bits))

    def dec_flag(self, w: int):
        tag = w & 3
        payload = w >> 2
        if tag == 0 and payload == 0:
            return UNSPENT
        if tag == 2:
            x = payload & ((1 << self.x_bits) - 1)
            i = payload >> self.x_bits
            if i >= 1:
                return Annotation(x, i)
        return SPENT

    # cba -------------------------------------------------------------------

    def enc_cba(self, c) -> int:
        if c is UNSET:
            return 0
        if isinstance(c, CbaSet):
            return 2 | (c.q << 2)
        x, i = c
        return 1 | (x << 2) | (i << (2 + self.x_bits))

    def dec_cba(self, w: int):
        tag = w & 3
        payload = w >> 2
        if tag == 0 and payload == 0:
            return UNSET
        if tag == 1:
            x = payload & ((1 << self.x_bits) - 1)
            i = payload >> self.x_bits
            if i >= 1:
                return Annotation(x, i)
        if tag == 2 and payload < self.invalid_handle:
            return CbaSet(payload)
        return CbaSet(self.invalid_handle)


WIDE = Layout("wide", 64, 64, 64, 64, 64, 40, 20)
PACKED = Layout("packed", 128, 20, 18, 16, 6, 20, 8)

P_OFF, Q_OFF, FLAG_OFF, CBA_OFF, DEPTH_OFF, WEIGHT_OFF = 0, 20, 60, 90, 38, 54


class WideRecords:
    """Six words per vertex; each field is read or written on its own."""

    layout = WIDE
    words_per_record = 6
    _off = {name: k for k, name in enumerate(FIELDS)}

    def __init__(self, mem: UnreliableMemory):
        self.mem = mem

    def __len__(self) -> int:
        return len(self.mem) // 6

    def vertex_of(self, addr: int) -> int:
        return addr // 6

    def append(self, rec: NodeRecord) -> int:
        v = len(self)
        for w in self.encode(rec):
            self.mem.append(w)
        return v

    def encode(self, rec: NodeRecord):
        L = self.layout
        return [rec.p & L.p_null, rec.q & L.q_null, L.enc_flag(rec.flag), L.enc_cba(rec.cba),
                rec.depth % L.depth_mod, rec.weight]

    def decode(self, words) -> NodeRecord:
        L = self.layout
        return NodeRecord(words[0], words[1], L.dec_flag(words[2]), L.dec_cba(words[3]), words[4], words[5])

    def p(self, v: int) -> int:
        return self.mem.read(6 * v)

    def q(self, v: int) -> int:
        return self.mem.read(6 * v + 1)

    def flag(self, v: int):
        return self.layout.dec_flag(self.mem.read(6 * v + 2))

    def cba(self, v: int):
        return self.layout.dec_cba(self.mem.read(6 * v + 3))

    def depth(self, v: int) -> int:
        return self.mem.read(6 * v + 4)

    def weight(self, v: int) -> int:
        return self.mem.read(6 * v + 5)

    def set_q(self, v: int, q: int) -> None:
        self.mem.write(6 * v + 1, q)

    def set_flag(self, v: int, f) -> None:
        self.mem.write(6 * v + 2, self.layout.enc_flag(f))

    def set_cba(self, v: int, c) -> None:
        self.mem.write(6 * v + 3, self.layout.enc_cba(c))

    def peek(self, v: int) -> NodeRecord:
        return self.decode([self.mem.peek(6 * v + k) for k in range(6)])

    def field_address(self, v: int, name: str) -> int:
        return 6 * v + self._off[name]

    def corrupted_word(self, v: int, name: str, value) -> tuple:
        """(address, word) that rewrites one field of ``v`` to ``value``."""
        rec = self.peek(v)
        setattr(rec, name, value)
        return self.field_address(v, name), self.encode(rec)[self._off[name]]


class PackedRecords:
    """One 128-bit word per vertex; field updates are read-modify-write."""

    layout = PACKED
    words_per_record = 1

    def __init__(self, mem: UnreliableMemory):
        self.mem = mem

    def __len__(self) -> int:
        return len(self.mem)

    def vertex_of(self, addr: int) -> int:
        return addr

    def encode_word(self, rec: NodeRecord) -> int:
        L = self.layout
        return ((rec.p & L.p_null) << P_OFF | (rec.q & L.q_null) << Q_OFF
                | (rec.depth % L.depth_mod) << DEPTH_OFF | (rec.weight & 63) << WEIGHT_OFF
                | L.enc_flag(rec.flag) << FLAG_OFF | L.enc_cba(rec.cba) << CBA_OFF)

    def encode(self, rec: NodeRecord):
        return [self.encode_word(rec)]

    def decode(self, words) -> NodeRecord:
        L = self.layout
        w = words[0]
        t = (1 << L.tagged_bits) - 1
        return NodeRecord(_bits(w, P_OFF, 20), _bits(w, Q_OFF, 18),
                          L.dec_flag((w >> FLAG_OFF) & t), L.dec_cba((w >> CBA_OFF) & t),
                          _bits(w, DEPTH_OFF, 16), _bits(w, WEIGHT_OFF, 6))

    def append(self, rec: NodeRecord) -> int:
        return self.mem.append(self.encode_word(rec))

    def p(self, v: int) -> int:
        return _bits(self.mem.read(v), P_OFF, 20)

    def q(self, v: int) -> int:
        return _bits(self.mem.read(v), Q_OFF, 18)

    def flag(self, v: int):
        return self.layout.dec_flag(_bits(self.mem.read(v), FLAG_OFF, 30))

    def cba(self, v: int):
        return self.layout.dec_cba(_bits(self.mem.read(v), CBA_OFF, 30))

    def depth(self, v: int) -> int:
        return _bits(self.mem.read(v), DEPTH_OFF, 16)

    def weight(self, v: int) -> int:
        return _bits(self.mem.read(v), WEIGHT_OFF, 6)

    def _rmw(self, v: int, off: int, width: int, value: int) -> None:
        w = self.mem.read(v)
        m = ((1 << width) - 1) << off
        self.mem.write(v, (w & ~m) | ((value << off) & m))

    def set_q(self, v: int, q: int) -> None:
        self._rmw(v, Q_OFF, 18, q & self.layout.q_null)

    def set_flag(self, v: int, f) -> None:
        self._rmw(v, FLAG_OFF, 30, self.layout.enc_flag(f))

    def set_cba(self, v: int, c) -> None:
        self._rmw(v, CBA_OFF, 30, self.layout.enc_cba(c))

    def peek(self, v: int) -> NodeRecord:
        return self.decode([self.mem.peek(v)])

    def field_address(self, v: int, name: str) -> int:
        return v

    def corrupted_word(self, v: int, name: str, value) -> tuple:
        rec = self.peek(v)
        setattr(rec, name, value)
        return v, self.encode_word(rec)


def _bits(w: int, off: int, width: int) -> int:
    return (w >> off) & ((1 << width) - 1)


def make_records(profile: str, mem: UnreliableMemory):
    if profile == "wide":
        return WideRecords(mem)
    if profile == "packed":
        return PackedRecords(mem)
    raise ValueError(f"unknown profile {profile!r}")
