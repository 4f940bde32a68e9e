"""Line-oriented trace format.

    # comment
    META delta=4 seed=1 adversary=random
    ADDLEAF <parent> <weight>
    LA <v> <k> | WLA <v> <k> | LCA <u> <v> | BVQ <u> <v>
    CORRUPT <v> FIELD <name>=<value>
    CORRUPT <v> RAW <hex> [<field>]
    CHECKPOINT
    BUILD_STATIC <delta>
    <parent array, whitespace separated, root is -1>
    END

Flag values are UNSPENT, SPENT or x:i; cba values are UNSET, SET:h or x:i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..records import FIELDS, SPENT, UNSET, UNSPENT, Annotation, CbaSet

QUERY_OPS = ("LA", "WLA", "LCA", "BVQ")


class TraceError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass
class Directive:
    op: str
    args: tuple
    line: int = 0


@dataclass
class Trace:
    directives: List[Directive] = field(default_factory=list)
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def is_static(self) -> bool:
        return any(d.op == "BUILD_STATIC" for d in self.directives)


def _int(tok: str, line: int) -> int:
    try:
        return int(tok, 0)
    except ValueError:
        raise TraceError(line, f"expected an integer, got {tok!r}") from None


def parse_field_value(name: str, text: str, line: int = 0):
    if name in ("p", "q", "depth", "weight"):
        return _int(text, line)
    if name == "flag":
        if text == "UNSPENT":
            return UNSPENT
        if text == "SPENT":
            return SPENT
    elif name == "cba":
        if text == "UNSET":
            return UNSET
        if text.startswith("SET:"):
            return CbaSet(_int(text[4:], line))
    else:
        raise TraceError(line, f"unknown field {name!r}")
    x, sep, i = text.partition(":")
    if not sep:
        raise TraceError(line, f"bad {name} value {text!r}")
    return Annotation(_int(x, line), _int(i, line))


def format_field_value(value) -> str:
    if value is UNSPENT or value is SPENT or value is UNSET:
        return value.name
    if isinstance(value, CbaSet):
        return f"SET:{value.q}"
    if isinstance(value, Annotation):
        return f"{value.x}:{value.i}"
    return str(value)


def parse_trace(text: str) -> Trace:
    trace = Trace()
    lines = text.splitlines()
    n_vertices = 1
    dynamic_seen = False
    k = 0
    while k < len(lines):
        lineno = k + 1
        raw = lines[k].split("#", 1)[0].strip()
        k += 1
        if not raw:
            continue
        tok = raw.split()
        op = tok[0].upper()
        if op == "META":
            for kv in tok[1:]:
                key, sep, val = kv.partition("=")
                if not sep:
                    raise TraceError(lineno, f"META entries are key=value, got {kv!r}")
                trace.meta[key] = val
            continue
        if op == "ADDLEAF":
            if trace.is_static:
                raise TraceError(lineno, "ADDLEAF after BUILD_STATIC")
            if len(tok) not in (2, 3):
                raise TraceError(lineno, "usage: ADDLEAF <parent> [<weight>]")
            parent = _int(tok[1], lineno)
            weight = _int(tok[2], lineno) if len(tok) == 3 else 1
            if not 0 <= parent < n_vertices:
                raise TraceError(lineno, f"parent {parent} does not exist yet")
            trace.directives.append(Directive("ADDLEAF", (parent, weight), lineno))
            n_vertices += 1
            dynamic_seen = True
            continue
        if op in QUERY_OPS:
            if len(tok) != 3:
                raise TraceError(lineno, f"usage: {op} <a> <b>")
            a, b = _int(tok[1], lineno), _int(tok[2], lineno)
            if not 0 <= a < n_vertices:
                raise TraceError(lineno, f"vertex {a} does not exist yet")
            if op in ("LCA", "BVQ") and not 0 <= b < n_vertices:
                raise TraceError(lineno, f"vertex {b} does not exist yet")
            if trace.is_static and op != "LA":
                raise TraceError(lineno, f"{op} is not supported on a static tree")
            trace.directives.append(Directive(op, (a, b), lineno))
            continue
        if op == "CORRUPT":
            if len(tok) < 4:
                raise TraceError(lineno, "usage: CORRUPT <v> FIELD name=value | RAW <hex> [field]")
            v = _int(tok[1], lineno)
            if not 0 <= v < n_vertices:
                raise TraceError(lineno, f"vertex {v} does not exist yet")
            mode = tok[2].upper()
            if mode == "FIELD" and len(tok) == 4:
                name, sep, val = tok[3].partition("=")
                if not sep or name not in FIELDS:
                    raise TraceError(lineno, f"bad field assignment {tok[3]!r}")
                trace.directives.append(Directive("CORRUPT", (v, "FIELD", name, parse_field_value(name, val, lineno)), lineno))
            elif mode == "RAW" and len(tok) in (4, 5):
                try:
                    word = int(tok[3], 16)
                except ValueError:
                    raise TraceError(lineno, f"bad hex word {tok[3]!r}") from None
                name = tok[4] if len(tok) == 5 else FIELDS[0]
                if name not in FIELDS:
                    raise TraceError(lineno, f"unknown field {name!r}")
                trace.directives.append(Directive("CORRUPT", (v, "RAW", name, word), lineno))
            else:
                raise TraceError(lineno, "usage: CORRUPT <v> FIELD name=value | RAW <hex> [field]")
            continue
        if op == "CHECKPOINT":
            trace.directives.append(Directive("CHECKPOINT", (), lineno))
            continue
        if op == "BUILD_STATIC":
            if dynamic_seen or trace.is_static:
                raise TraceError(lineno, "BUILD_STATIC must come first and only once")
            if len(tok) != 2:
                raise TraceError(lineno, "usage: BUILD_STATIC <delta>")
            delta = _int(tok[1], lineno)
            parents: List[int] = []
            while True:
                if k >= len(lines):
                    raise TraceError(lineno, "BUILD_STATIC block not closed by END")
                body = lines[k].split("#", 1)[0].split()
                k += 1
                if body and body[0].upper() == "END":
                    break
                parents.extend(_int(t, k) for t in body)
            trace.directives.append(Directive("BUILD_STATIC", (delta, tuple(parents)), lineno))
            n_vertices = len(parents)
            continue
        raise TraceError(lineno, f"unknown directive {tok[0]!r}")
    return trace


def format_directive(d: Directive) -> str:
    if d.op == "ADDLEAF" or d.op in QUERY_OPS:
        return f"{d.op} {d.args[0]} {d.args[1]}"
    if d.op == "CHECKPOINT":
        return "CHECKPOINT"
    if d.op == "CORRUPT":
        v, mode, name, value = d.args
        if mode == "RAW":
            return f"CORRUPT {v} RAW {value:x} {name}"
        return f"CORRUPT {v} FIELD {name}={format_field_value(value)}"
    if d.op == "BUILD_STATIC":
        delta, parents = d.args
        rows = [" ".join(str(p) for p in parents[i:i + 20]) for i in range(0, len(parents), 20)]
        return "\n".join([f"BUILD_STATIC {delta}", *rows, "END"])
    raise ValueError(d.op)


def format_trace(trace: Trace) -> str:
    out = []
    if trace.meta:
        out.append("META " + " ".join(f"{k}={v}" for k, v in trace.meta.items()))
    out.extend(format_directive(d) for d in trace.directives)
    return "\n".join(out) + "\n"


def count_ops(trace: Trace) -> Tuple[int, int]:
    """(insertions, queries)."""
    adds = sum(d.op == "ADDLEAF" for d in trace.directives)
    return adds, sum(d.op in QUERY_OPS for d in trace.directives)
