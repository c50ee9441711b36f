"""Exhaustive agreement check between forward and reverse evaluation.

Every query up to a path length is evaluated forwards and grouped by value;
each value is then run backwards.  A *violation* is an expanded reverse
answer that does not evaluate to the value, a *miss* is a defined query that
no reverse answer covers.  Queries whose forward evaluation hits a limit are
excluded from both checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backbone import RuleSet, compile_theory
from .chart import expand_answer, reverse_query
from .errors import LimitExceeded, Undefined
from .forward import EvalLimits, Query, enumerate_queries, eval_query
from .syntax import Theory

Value = tuple[str, ...]


@dataclass
class CrossCheckReport:
    max_len: int
    enumerated: int = 0
    defined: int = 0
    excluded: list[Query] = field(default_factory=list)
    violations: list[tuple[Query, Value, str]] = field(default_factory=list)
    misses: list[tuple[Query, Value]] = field(default_factory=list)
    suppressed: int = 0
    values: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.misses

    def as_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "enumerated": self.enumerated,
            "defined": self.defined,
            "values": self.values,
            "excluded": [str(q) for q in self.excluded],
            "soundness_violations": [
                {"query": str(q), "expected": " ".join(v), "actual": actual}
                for q, v, actual in self.violations],
            "completeness_misses": [{"query": str(q), "value": " ".join(v)} for q, v in self.misses],
            "suppressed": self.suppressed,
            "ok": self.ok,
        }

    def summary(self) -> str:
        lines = [
            f"queries enumerated: {self.enumerated} (max path length {self.max_len})",
            f"defined: {self.defined} over {self.values} distinct values",
            f"excluded (forward limit): {len(self.excluded)}",
            f"soundness violations: {len(self.violations)}",
            f"completeness misses: {len(self.misses)}",
            f"suppressed chart items: {self.suppressed}",
        ]
        for q, v, actual in self.violations:
            lines.append(f"  violation: {q} gives {actual}, expected {' '.join(v) or '(empty)'}")
        for q, v in self.misses:
            lines.append(f"  miss: {q} = {' '.join(v) or '(empty)'}")
        return "\n".join(lines)


def _outcome(theory: Theory, q: Query, limits: EvalLimits) -> Value | str:
    try:
        return eval_query(theory, q, limits)
    except Undefined:
        return "UNDEFINED"
    except LimitExceeded:
        return "LIMIT"


def crosscheck(theory: Theory, max_len: int, limits: EvalLimits | None = None,
               rules: RuleSet | None = None) -> CrossCheckReport:
    limits = limits or EvalLimits()
    rules = rules or compile_theory(theory)
    report = CrossCheckReport(max_len)
    outcomes: dict[Query, Value | str] = {}
    by_value: dict[Value, set[Query]] = {}
    for q in enumerate_queries(theory, max_len):
        report.enumerated += 1
        out = outcomes[q] = _outcome(theory, q, limits)
        if out == "LIMIT":
            report.excluded.append(q)
        elif out != "UNDEFINED":
            report.defined += 1
            by_value.setdefault(out, set()).add(q)
    report.values = len(by_value)

    for value in sorted(by_value):
        result = reverse_query(rules, value, limits)
        report.suppressed += result.suppressed
        covered: set[Query] = set()
        for answer in result.answers:
            covered |= expand_answer(answer, theory.attributes, max_len)
        for q in sorted(covered):
            out = outcomes.get(q)
            if out is None:
                # Answers may name nodes or atoms outside the enumeration.
                out = outcomes[q] = _outcome(theory, q, limits)
            if out == "LIMIT":
                continue
            if out != value:
                actual = out if isinstance(out, str) else (" ".join(out) or "(empty)")
                report.violations.append((q, value, actual))
        for q in sorted(by_value[value] - covered):
            report.misses.append((q, value))
    return report
