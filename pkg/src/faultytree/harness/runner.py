"""Execute a trace against the resilient structure and classify every answer."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

from ..config import TreeConfig
from ..faulty_ram import Adversary
from ..oracle import AuditedForest, OracleTree
from ..outcomes import Outcome
from ..static_la import StaticLA
from ..tree import ResilientTree
from .adversaries import TreeStrategy, make_strategy
from .trace import QUERY_OPS, Trace

MATCH, EXEMPT, VIOLATION = "match", "exempt-mismatch", "VIOLATION"
CORE_MEMORIES = ("core", "static")


@dataclass
class RunConfig:
    delta: int = 4
    seed: int = 0
    adversary: str = "none"
    budget: Optional[int] = None  # defaults to delta
    rate: Optional[float] = None
    profile: str = "wide"
    safe_words: int = 128
    w_max: Optional[int] = None
    check_oracle: bool = True
    audit_forest: bool = False
    record_ops: bool = True

    @property
    def effective_budget(self) -> int:
        return self.delta if self.budget is None else self.budget


@dataclass
class RunReport:
    config: dict
    outputs: List[str] = field(default_factory=list)
    ops: List[dict] = field(default_factory=list)
    black_trajectory: List[int] = field(default_factory=list)
    corruption_log: List[dict] = field(default_factory=list)
    verdicts: Dict[str, int] = field(default_factory=lambda: {MATCH: 0, EXEMPT: 0, VIOLATION: 0})
    violations: List[dict] = field(default_factory=list)
    safe_high_water: int = 0
    bound_failures: List[dict] = field(default_factory=list)
    forest_mismatches: int = 0
    exceptional_events: int = 0
    refused_corruptions: int = 0
    literal_fallback_differs: int = 0
    n_vertices: int = 1

    @property
    def violation_count(self) -> int:
        return self.verdicts[VIOLATION]

    @property
    def clean(self) -> bool:
        return self.violation_count == 0 and not self.bound_failures and self.forest_mismatches == 0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def format_answer(x) -> str:
    return x.value if isinstance(x, Outcome) else str(x)


class Run:
    """One simulation: structure, oracle and adversary.  Exposed for step-wise tests."""

    def __init__(self, config: RunConfig, observer: Optional[Callable] = None):
        self.config = config
        self.observer = observer
        self.report = RunReport(config=asdict(config))
        self.strategy = make_strategy(config.adversary, config.seed, config.rate)
        self.adversary = Adversary(config.effective_budget, self.strategy)
        self.structure = None
        self.oracle: Optional[OracleTree] = None
        self._seen_log = 0
        self.op_index = 0

    # setup -----------------------------------------------------------------

    def start_dynamic(self) -> ResilientTree:
        c = self.config
        t = ResilientTree(TreeConfig(delta=c.delta, profile=c.profile, w_max=c.w_max, safe_words=c.safe_words))
        if c.audit_forest:
            t.forest = AuditedForest(t.forest)
            t.audit_literal_fallback = True
        self._bind(t)
        self.oracle = OracleTree(w_max=t.w_max)
        return t

    def start_static(self, delta: int, parents) -> StaticLA:
        s = StaticLA(parents, delta)
        self._bind(s)
        self.oracle = OracleTree.from_parents(list(parents))
        return s

    def _bind(self, s) -> None:
        self.structure = s
        s.attach(self.adversary)
        if isinstance(self.strategy, TreeStrategy):
            self.strategy.bind(s)

    # bookkeeping -------------------------------------------------------------

    def _absorb_log(self) -> None:
        log = self.adversary.log
        s = self.structure
        for c in log[self._seen_log:]:
            entry = {"memory": c.memory, "address": c.address, "old": c.old, "new": c.new,
                     "op_index": c.op_index, "access_index": c.access_index, "vertex": None}
            if c.memory in CORE_MEMORIES:
                v = c.address if isinstance(s, StaticLA) else s.records.vertex_of(c.address)
                entry["vertex"] = v
                self.oracle.mark_corrupted(v)
            self.report.corruption_log.append(entry)
        self._seen_log = len(log)

    def counters(self) -> dict:
        s = self.structure
        if isinstance(s, StaticLA):
            return {"core_reads": s.core.reads, "core_writes": s.core.writes,
                    "dq_reads": s.forest.dir.reads + s.forest.nodes.reads,
                    "dq_writes": s.forest.dir.writes + s.forest.nodes.writes}
        return s.access_counts()

    def q_nodes(self) -> int:
        return len(self.structure.forest)

    def t_blacks(self) -> int:
        s = self.structure
        if isinstance(s, StaticLA):
            return s.coloring.black_count
        return len(s.black_vertices())

    def black_bound(self) -> float:
        s = self.structure
        if isinstance(s, StaticLA):
            return s.n // s.delta
        return (s.size + s.delta) / s.delta

    # execution ---------------------------------------------------------------

    def step(self, d) -> str:
        rep = self.report
        if self.structure is None:
            if d.op == "BUILD_STATIC":
                self.start_static(*d.args)
                rep.n_vertices = self.structure.n
                out = f"BUILD_STATIC n={self.structure.n} blacks={self.t_blacks()}"
                self._after(d, out, None, None, {})
                return out
            self.start_dynamic()
        self.adversary.between_ops(self.op_index)
        self._absorb_log()
        before = self.counters()
        s = self.structure
        verdict = None
        answer = None
        if d.op == "ADDLEAF":
            v = s.add_leaf(*d.args)
            self.oracle.add_leaf(*d.args)
            rep.n_vertices = s.size
            out = str(v)
        elif d.op in QUERY_OPS:
            a, b = d.args
            answer = s.la(a, b) if isinstance(s, StaticLA) else getattr(s, d.op.lower())(a, b)
            out = format_answer(answer)
        elif d.op == "CORRUPT":
            out = self._corrupt(*d.args)
        elif d.op == "CHECKPOINT":
            c = self.counters()
            out = (f"CHECKPOINT blacks={self.t_blacks()} q_nodes={self.q_nodes()} "
                   + " ".join(f"{k}={v}" for k, v in c.items()))
        else:
            raise ValueError(f"directive {d.op} not allowed here")
        self._absorb_log()
        after = self.counters()
        if d.op in QUERY_OPS and self.config.check_oracle:
            verdict = self._classify(d, answer)
        self._after(d, out, answer, verdict, {k: after[k] - before[k] for k in after})
        return out

    def _corrupt(self, v, mode, name, value) -> str:
        s = self.structure
        if isinstance(s, StaticLA):
            if mode == "RAW":
                addr, word = v, value
            else:
                p, q = s.core.peek(v) & 0xFFFFFFFF, s.core.peek(v) >> 32
                if name == "p":
                    p = value
                elif name == "q":
                    q = value
                else:
                    raise ValueError(f"static records have no {name} field")
                addr, word = v, s.record_word(p, q)
        elif mode == "RAW":
            addr, word = s.records.field_address(v, name), value
        else:
            addr, word = s.records.corrupted_word(v, name, value)
        ok = self.adversary.corrupt(s.core, addr, word & s.core.mask)
        if not ok:
            self.report.refused_corruptions += 1
        return "CORRUPTED" if ok else "REFUSED"

    def _classify(self, d, answer) -> str:
        a, b = d.args
        want = self.oracle.answer(d.op, a, b)
        if answer == want:
            v = MATCH
        elif self.oracle.must_match(d.op, a, b):
            v = VIOLATION
            self.report.violations.append({"op_index": self.op_index, "line": d.line, "op": d.op,
                                           "args": list(d.args), "got": format_answer(answer),
                                           "want": format_answer(want)})
        else:
            v = EXEMPT
        self.report.verdicts[v] += 1
        return v

    def _after(self, d, out, answer, verdict, delta_counts) -> None:
        rep = self.report
        rep.outputs.append(out)
        q = self.q_nodes()
        rep.black_trajectory.append(q)
        if q > self.black_bound():
            rep.bound_failures.append({"op_index": self.op_index, "n": rep.n_vertices, "q_nodes": q})
        if self.config.record_ops:
            entry = {"op": d.op, "args": [format_answer(x) if isinstance(x, Outcome) else x
                                          for x in d.args if not isinstance(x, tuple)],
                     "result": out, **delta_counts}
            if verdict is not None:
                entry["verdict"] = verdict
            rep.ops.append(entry)
        if self.observer is not None:
            self.observer(self, d)
        self.op_index += 1

    def finish(self) -> RunReport:
        rep = self.report
        s = self.structure
        if s is None:
            self.start_dynamic()
            s = self.structure
        rep.safe_high_water = s.safe.high_water_mark
        if isinstance(s, ResilientTree):
            rep.exceptional_events = len(s.exceptional_events)
            rep.literal_fallback_differs = s.literal_fallback_differs
            if isinstance(s.forest, AuditedForest):
                rep.forest_mismatches = len(s.forest.mismatches)
        return rep


def run_trace(trace: Trace, config: Optional[RunConfig] = None, observer: Optional[Callable] = None) -> RunReport:
    """Run every directive in order and return the report.  ``observer(run, directive)`` runs after each one."""
    run = Run(config or RunConfig(), observer)
    for d in trace.directives:
        run.step(d)
    return run.finish()
