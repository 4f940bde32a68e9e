"""Trace-driven simulation harness."""

from .generate import KINDS, GenParams, generate
from .runner import EXEMPT, MATCH, VIOLATION, Run, RunConfig, RunReport, run_trace
from .trace import Directive, Trace, TraceError, format_trace, parse_trace

__all__ = ["Directive", "EXEMPT", "GenParams", "KINDS", "MATCH", "Run", "RunConfig", "RunReport",
           "Trace", "TraceError", "VIOLATION", "format_trace", "generate", "parse_trace", "run_trace"]
