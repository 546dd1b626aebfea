"""Temporal reflection: the syntactic transformer ``f -> f^r`` and its semantic checks.

``reflect_formula`` is a total structural rewrite.  Kernel constructs follow
laws R0 to R7, expressions follow ER0 to ER5, and derived constructs go straight
to their dual (``box`` to ``boxi``, ``halt`` to ``initonly`` and so on) so the
output stays readable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .intervals import Domain, Interval, reverse
from .semantics import CheckResult, EvalConfig, _checked_domain
from .syntax import (
    And, Apply, Assign, Box, BoxA, BoxI, Chop, ChopStar, ConstBool, ConstInt, Diamond,
    DiamondA, DiamondI, Empty, Exists, Expr, Fin, FinVar, Formula, Gets, Halt, If, Iff,
    Implies, Init, InitOnly, Keep, Len, More, Next, NextVar, Not, Or, PastAssign, Pred,
    Prev, PrevVar, Skip, TempAssign, TrueF, UnitAssign, Var, VarName, While, WNext, WPrev,
    int_var, apply, SKIP, EMPTY,
)

_EXPR_LAW = {ConstInt: "ER0", ConstBool: "ER0", Var: "ER1", FinVar: "ER2",
             Apply: "ER3", NextVar: "ER4", PrevVar: "ER5"}


def reflect_expr(e: Expr, _log=None) -> Expr:
    """``e^r``: first and last state swap roles, as do next and previous."""
    t = type(e)
    if _log is not None:
        _log.append(_EXPR_LAW[t])
    if t is ConstInt or t is ConstBool:
        return e
    if t is Var:
        return FinVar(e.var)
    if t is FinVar:
        return Var(e.var)
    if t is NextVar:
        return PrevVar(e.var)
    if t is PrevVar:
        return NextVar(e.var)
    if t is Apply:
        return Apply(e.op, tuple(reflect_expr(a, _log) for a in e.args))
    raise TypeError(f"not an expression: {e!r}")


# unary constructs mapped to their dual with a reflected argument
_UNARY_DUALS = {
    Not: (Not, "R1"), ChopStar: (ChopStar, "R5"),
    Next: (Prev, "next"), Prev: (Next, "prev"),
    WNext: (WPrev, "wnext"), WPrev: (WNext, "wprev"),
    Diamond: (DiamondI, "diamond"), DiamondI: (Diamond, "diamondi"),
    Box: (BoxI, "box"), BoxI: (Box, "boxi"),
    DiamondA: (DiamondA, "diamonda"), BoxA: (BoxA, "boxa"),
    Halt: (InitOnly, "halt"), InitOnly: (Halt, "initonly"),
    Keep: (Keep, "keep"),
}
# both arguments reflected, order kept
_BINARY_SAME = {And: "R2", Or: "or", Implies: "implies", Iff: "iff"}
_ASSIGN_DUALS = {
    Assign: (TempAssign, "assign"), TempAssign: (Assign, "temp-assign"),
    UnitAssign: (PastAssign, "unit-assign"), PastAssign: (UnitAssign, "past-assign"),
}
_SELF_DUAL = {TrueF: "R0", Skip: "R3", Empty: "empty", More: "more"}


def _reflect(f: Formula, log: list) -> Formula:
    t = type(f)
    if t in _SELF_DUAL:
        log.append(_SELF_DUAL[t])
        return f
    if t is Len:
        log.append("len")
        return f
    if t is Pred:
        log.append("R6")
        return Pred(reflect_expr(f.expr, log))
    if t in _UNARY_DUALS:
        dual, law = _UNARY_DUALS[t]
        log.append(law)
        return dual(_reflect(f.arg, log))
    if t in _BINARY_SAME:
        log.append(_BINARY_SAME[t])
        return t(_reflect(f.left, log), _reflect(f.right, log))
    if t is Chop:
        log.append("R4")
        right = _reflect(f.right, log)
        return Chop(right, _reflect(f.left, log))
    if t is Exists:
        log.append("R7")
        return Exists(f.var, _reflect(f.body, log))
    if t in _ASSIGN_DUALS:
        dual, law = _ASSIGN_DUALS[t]
        log.append(law)
        return dual(f.var, reflect_expr(f.expr, log))
    if t is Gets:
        log.append("gets")
        return BoxA(Implies(SKIP, Assign(f.var, reflect_expr(f.expr, log))))
    if t is If:
        log.append("if")
        return If(_reflect(f.cond, log), _reflect(f.then, log), _reflect(f.orelse, log))
    # init/fin only ever look at a one-state interval, where reflection is the identity
    if t is Init:
        log.append("init")
        return Fin(f.arg)
    if t is Fin:
        log.append("fin")
        return Init(f.arg)
    if t is While:
        log.append("while")
        return And(ChopStar(And(_reflect(f.cond, log), _reflect(f.body, log))),
                   Init(Not(f.cond)))
    raise TypeError(f"cannot reflect {t.__name__}")


def reflect_formula(f: Formula) -> Formula:
    """``f^r``: holds on an interval exactly when ``f`` holds on its reversal."""
    return _reflect(f, [])


@dataclass(frozen=True)
class ReflectionReport:
    input: Formula
    output: Formula
    laws_applied: tuple = field(default=())


def reflect(f: Formula) -> ReflectionReport:
    """Reflect ``f`` and record the law identifiers used, in application order."""
    log: list = []
    out = _reflect(f, log)
    return ReflectionReport(f, out, tuple(dict.fromkeys(log)))


# ---------------------------------------------------------------- semantic checks


def check_reflection_law(f: Formula, d: Domain, cfg: EvalConfig | None = None) -> CheckResult:
    """Whether ``reflect(f)`` on every interval agrees with ``f`` on its reversal."""
    from .bounded import universe

    d = _checked_domain(f, d).with_vars(_bound_and_free(reflect_formula(f)))
    u = universe(d, cfg)
    diff = u.sat(reflect_formula(f)) != u.reflected(u.sat(f))
    bad = u.first(diff)
    return CheckResult(bad is None, bad, d)


def _bound_and_free(f):
    from .syntax import all_vars

    return all_vars(f)


def fixed_length_var_laws(var: VarName) -> tuple:
    """The three laws trading temporal variables on intervals of length 0 or 1."""
    v = Var(var)
    return (
        ("empty-fin", Implies(EMPTY, Pred(apply("=", FinVar(var), v)))),
        ("skip-fin-next", Implies(SKIP, Pred(apply("=", FinVar(var), NextVar(var))))),
        ("skip-prev", Implies(SKIP, Pred(apply("=", PrevVar(var), v)))),
    )


def check_fixed_length_var_laws(d: Domain, cfg: EvalConfig | None = None) -> bool:
    """Certify the three fixed-length laws for every variable of ``d``."""
    from .semantics import valid_bounded

    variables = d.variables or (int_var("A"),)
    d = d.with_vars(variables)
    return all(valid_bounded(law, d, cfg).holds
               for v in variables for _, law in fixed_length_var_laws(v))


def reflected_on(f: Formula, sigma: Interval, cfg=None) -> bool:
    """Meaning of ``f^r`` on ``sigma`` by definition: ``f`` on the reversal."""
    from .semantics import eval_formula

    return eval_formula(f, reverse(sigma), cfg)
