"""Forward and reverse query evaluation for DATR theories.

Reverse queries compile a theory into a context-free backbone and parse the
value bottom-up with a chart parser.
"""

from .backbone import NonTerminal, Rule, RuleSet, compile_theory, dump_rules
from .chart import ReverseAnswer, ReverseResult, expand_answer, reverse_query
from .crosscheck import CrossCheckReport, crosscheck
from .errors import (DatrError, DatrSyntaxError, DuplicateLhs, EvaluablePathUnsupported,
                     IllegalCharacter, LimitExceeded, QueryFailure, TheoryError, Undefined,
                     UnknownNode)
from .forward import EvalLimits, Query, eval_query, parse_query
from .syntax import Theory, format_theory, parse_theory, validate_theory

__version__ = "0.1.0"

__all__ = [
    "CrossCheckReport", "DatrError", "DatrSyntaxError", "DuplicateLhs", "EvalLimits",
    "EvaluablePathUnsupported", "IllegalCharacter", "LimitExceeded", "NonTerminal", "Query",
    "QueryFailure", "ReverseAnswer", "ReverseResult", "Rule", "RuleSet", "Theory", "TheoryError",
    "Undefined", "UnknownNode", "compile_theory", "crosscheck", "dump_rules", "eval_query",
    "expand_answer", "format_theory", "parse_query", "parse_theory", "reverse_query",
    "validate_theory",
]
