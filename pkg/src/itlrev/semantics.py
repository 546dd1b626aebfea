"""Meaning of expressions and formulas over a finite interval."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import UnknownVariable
from .intervals import Domain, Interval, State
from .syntax import (
    OPERATORS, And, Apply, Chop, ChopStar, ConstBool, ConstInt, Exists, Expr, FinVar,
    Formula, NextVar, Not, Pred, PrevVar, Skip, Sort, TrueF, Var, VarName, desugar,
)

DEFAULT_DOMAIN = Domain((), (0, 1, 2), 3)


@dataclass(frozen=True)
class EvalConfig:
    """Fixed choice function for unconstrained reads plus the quantifier domain.

    ``default_int``/``default_bool`` answer ``V'`` and ``prev.V`` on a one-state
    interval, where any value would do; one fixed value keeps evaluation a function.
    """

    domain: Domain = DEFAULT_DOMAIN
    default_int: int = 0
    default_bool: bool = False

    def __post_init__(self):
        if self.default_int not in self.domain.int_values:
            raise ValueError(f"default_int {self.default_int} is outside the domain")

    @classmethod
    def for_domain(cls, d: Domain) -> "EvalConfig":
        default = 0 if 0 in d.int_values else d.int_values[0]
        return cls(d, default)

    def default_for(self, var: VarName):
        return self.default_bool if var.sort is Sort.BOOL else self.default_int


@lru_cache(maxsize=8192)
def kernel(f: Formula) -> Formula:
    """Cached :func:`desugar`."""
    return desugar(f)


def _apply_op(op: str, args):
    return OPERATORS[op].fn(*args)


class _Evaluator:
    """Evaluates kernel formulas on sub-intervals ``states[i..j]``, memoised."""

    def __init__(self, states, cfg: EvalConfig):
        self.states = states
        self.cfg = cfg
        self.memo = {}

    def expr(self, e: Expr, i: int, j: int):
        t = type(e)
        if t is ConstInt or t is ConstBool:
            return e.value
        if t is Var:
            return self.states[i][e.var]
        if t is FinVar:
            return self.states[j][e.var]
        if t is NextVar:
            return self.states[i + 1][e.var] if j > i else self.cfg.default_for(e.var)
        if t is PrevVar:
            return self.states[j - 1][e.var] if j > i else self.cfg.default_for(e.var)
        if t is Apply:
            return _apply_op(e.op, [self.expr(a, i, j) for a in e.args])
        raise TypeError(f"not an expression: {e!r}")

    def holds(self, f: Formula, i: int, j: int) -> bool:
        key = (id(f), i, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        t = type(f)
        if t is TrueF:
            out = True
        elif t is Pred:
            out = bool(self.expr(f.expr, i, j))
        elif t is Not:
            out = not self.holds(f.arg, i, j)
        elif t is And:
            out = self.holds(f.left, i, j) and self.holds(f.right, i, j)
        elif t is Skip:
            out = j - i == 1
        elif t is Chop:
            out = any(self.holds(f.left, i, k) and self.holds(f.right, k, j)
                      for k in range(i, j + 1))
        elif t is ChopStar:
            out = self.star(f.arg, i, j)
        elif t is Exists:
            out = self.exists(f.var, f.body, i, j)
        else:
            raise TypeError(f"not a kernel formula: {type(f).__name__}")
        self.memo[key] = out
        return out

    def star(self, f: Formula, i: int, j: int) -> bool:
        # memoised through holds(ChopStar) on each suffix start
        if i == j:
            return True
        key = ("*", id(f), i, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = any(self.holds(f, i, k) and self.star(f, k, j) for k in range(i + 1, j + 1))
        self.memo[key] = out
        return out

    def exists(self, var: VarName, body: Formula, i: int, j: int) -> bool:
        if all(v.name != var.name for v in _free_vars(body)):
            # nothing reads the quantified variable, and its value range is never empty
            return self.holds(body, i, j)
        window = self.states[i:j + 1]
        first = window[0]
        if var in first:
            def rebind(s, x):
                return s.replace(**{var.name: x})
        else:
            def rebind(s, x):
                return State(s.variables + (var,), s.values + (x,))
        values = self.cfg.domain.values_for(var)
        for combo in itertools.product(values, repeat=len(window)):
            alt = [rebind(s, x) for s, x in zip(window, combo)]
            if _Evaluator(alt, self.cfg).holds(body, 0, len(alt) - 1):
                return True
        return False


@lru_cache(maxsize=4096)
def _free_vars(f: Formula):
    from .syntax import free_vars
    return free_vars(f)


def eval_expr(e: Expr, sigma: Interval, cfg: EvalConfig | None = None):
    """Value of ``e`` on ``sigma``."""
    cfg = cfg or EvalConfig()
    return _Evaluator(sigma.states, cfg).expr(e, 0, sigma.length)


def eval_formula(f: Formula, sigma: Interval, cfg: EvalConfig | None = None) -> bool:
    """Truth of ``f`` on ``sigma`` (derived constructs are desugared first)."""
    cfg = cfg or EvalConfig()
    return _Evaluator(sigma.states, cfg).holds(kernel(f), 0, sigma.length)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a bounded check; truthy when the property holds."""

    holds: bool
    counterexample: Interval | None = None
    bound: Domain | None = None

    def __bool__(self):
        return self.holds


def _checked_domain(f: Formula, d: Domain) -> Domain:
    from .syntax import all_vars, free_vars

    names = {v.name for v in d.variables}
    missing = [v.name for v in free_vars(f) if v.name not in names]
    if missing:
        raise UnknownVariable(f"free variables {sorted(missing)} are not in the domain")
    return d.with_vars(all_vars(f))


def satisfiable_bounded(f: Formula, d: Domain, cfg: EvalConfig | None = None) -> Interval | None:
    """First interval of the bounded enumeration satisfying ``f``, or ``None``."""
    from .bounded import universe

    d = _checked_domain(f, d)
    u = universe(d, cfg)
    return u.first(u.sat(f))


def valid_bounded(f: Formula, d: Domain, cfg: EvalConfig | None = None) -> CheckResult:
    """Whether every enumerated interval satisfies ``f``; else the first that does not."""
    from .bounded import universe

    d = _checked_domain(f, d)
    u = universe(d, cfg)
    bad = u.first(~u.sat(f))
    return CheckResult(bad is None, bad, d)
