"""First-order interval temporal logic over finite intervals, with reflection."""

from .engine import (
    Termination, reduce_step, run_backward, run_forward, run_undo, undo_compose,
)
from .errors import (
    AuditFailure, Contradiction, DivisionByZero, EvaluationError, ItlError, NotExecutable,
    Overflow, ParseError, PremiseFailed, SortError, UnsortedVariable,
)
from .executability import (
    Property, backward_executable, check_duality, common_prefix, common_suffix,
    determinism_count, forward_executable,
)
from .intervals import (
    Domain, Interval, State, enumerate_intervals, format_trace, fuse, interval, parse_trace,
    prefix, project_trace, reverse, subinterval, suffix,
)
from .laws import ALL_LAWS, run_law_suite
from .parser import parse, parse_spec
from .printer import print_formula
from .reflection import check_reflection_law, reflect, reflect_expr, reflect_formula
from .semantics import EvalConfig, eval_expr, eval_formula, satisfiable_bounded, valid_bounded
from .syntax import Sort, VarName, bool_var, desugar, free_vars, int_var, unfold, well_sorted

__all__ = [
    "ALL_LAWS", "AuditFailure", "Contradiction", "DivisionByZero", "Domain", "EvalConfig",
    "EvaluationError", "Interval", "ItlError", "NotExecutable", "Overflow", "ParseError",
    "PremiseFailed", "Property", "Sort", "SortError", "State", "Termination",
    "UnsortedVariable", "VarName", "backward_executable", "bool_var", "check_duality",
    "check_reflection_law", "common_prefix", "common_suffix", "desugar", "determinism_count",
    "enumerate_intervals", "eval_expr", "eval_formula", "format_trace", "forward_executable",
    "free_vars", "fuse", "int_var", "interval", "parse", "parse_spec", "parse_trace",
    "prefix", "print_formula", "project_trace", "reduce_step", "reflect", "reflect_expr",
    "reflect_formula", "reverse", "run_backward", "run_forward", "run_law_suite", "run_undo",
    "satisfiable_bounded", "subinterval", "suffix", "undo_compose", "unfold", "valid_bounded",
    "well_sorted",
]
