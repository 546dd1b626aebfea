"""Concrete-syntax rendering with as few parentheses as the grammar allows.

Formula precedence, loosest first: ``;`` (right-assoc), ``implies``/``iff``
(non-assoc), ``or``, ``and``, prefix keywords, postfix ``*``, atoms.  Binders
whose body runs to the right (``exists``, ``if``, ``while``) are parenthesised
unless they stand at the loosest level.

Expression precedence, loosest first: ``|``, ``&``, ``!``, relations
(non-assoc), ``+ -``, ``* div mod``, atoms.
"""

from __future__ import annotations

from .intervals import format_value
from .syntax import (
    And, Apply, Assign, Box, BoxA, BoxI, Chop, ChopStar, ConstBool, ConstInt, Diamond,
    DiamondA, DiamondI, Empty, Exists, Expr, Fin, FinVar, Formula, Gets, Halt, If, Iff,
    Implies, Init, InitOnly, Keep, Len, More, Next, NextVar, Not, Or, PastAssign, Pred,
    Prev, PrevVar, Skip, TempAssign, TrueF, UnitAssign, Var, While, WNext, WPrev,
)

# expression levels
_E_OR, _E_AND, _E_NOT, _E_REL, _E_ADD, _E_MUL, _E_ATOM = range(7)
_EXPR_BIN = {
    "or": ("|", _E_OR), "and": ("&", _E_AND),
    "=": ("=", _E_REL), "<": ("<", _E_REL), "<=": ("<=", _E_REL),
    ">": (">", _E_REL), ">=": (">=", _E_REL),
    "+": ("+", _E_ADD), "-": ("-", _E_ADD),
    "*": ("*", _E_MUL), "div": ("div", _E_MUL), "mod": ("mod", _E_MUL),
}

# formula levels
F_CHOP, F_IMP, F_OR, F_AND, F_UNARY, F_STAR, F_ATOM = range(7)

PREFIX_KEYWORDS = {
    Not: "not", Next: "next", WNext: "wnext", Prev: "prev", WPrev: "wprev",
    Box: "box", Diamond: "diamond", BoxI: "boxi", DiamondI: "diamondi",
    BoxA: "boxa", DiamondA: "diamonda", Init: "init", Fin: "fin", Halt: "halt",
    Keep: "keep", InitOnly: "initonly",
}
ASSIGN_SYMBOLS = {Assign: "=", UnitAssign: ":=", TempAssign: "<-", PastAssign: "=:", Gets: "gets"}


def _expr(e: Expr, ctx: int) -> str:
    t = type(e)
    if t is ConstInt or t is ConstBool:
        return format_value(e.value)
    if t is Var:
        return e.var.name
    if t is NextVar:
        return e.var.name + "'"
    if t is FinVar:
        return "fin." + e.var.name
    if t is PrevVar:
        return "prev." + e.var.name
    if t is Apply:
        if e.op == "not":
            out, level = "!" + _expr(e.args[0], _E_NOT), _E_NOT
        elif e.op in _EXPR_BIN and len(e.args) == 2:
            sym, level = _EXPR_BIN[e.op]
            # left-assoc, except relations which do not chain
            right_level = level + 1
            left_level = level + 1 if level == _E_REL else level
            out = f"{_expr(e.args[0], left_level)} {sym} {_expr(e.args[1], right_level)}"
        else:
            args = ", ".join(_expr(a, _E_OR) for a in e.args)
            out, level = f"{e.op}({args})", _E_ATOM
        return f"({out})" if level < ctx else out
    return repr(e)


def print_expr(e: Expr) -> str:
    return _expr(e, _E_OR)


def _formula(f: Formula, ctx: int) -> str:
    t = type(f)
    if t is TrueF:
        return "true"
    if t is Skip:
        return "skip"
    if t is Empty:
        return "empty"
    if t is More:
        return "more"
    if t is Len:
        return f"len({f.n})"
    if t is Pred:
        if isinstance(f.expr, ConstBool) and not f.expr.value:
            return "false"
        # a bare expression is an atom; wrap if it could be read as an operator chain
        text = _expr(f.expr, _E_OR)
        if isinstance(f.expr, ConstBool):
            return f"({text} = true)"
        return f"({text})" if ctx > F_STAR and not _expr_is_atomic(f.expr) else text
    if t in ASSIGN_SYMBOLS:
        text = f"{f.var.name} {ASSIGN_SYMBOLS[t]} {_expr(f.expr, _E_OR)}"
        return f"({text})" if ctx > F_STAR else text
    if t in PREFIX_KEYWORDS:
        out, level = f"{PREFIX_KEYWORDS[t]} {_formula(f.arg, F_UNARY)}", F_UNARY
    elif t is ChopStar:
        out, level = f"{_formula(f.arg, F_ATOM)}*", F_STAR
    elif t is Chop:
        out, level = f"{_formula(f.left, F_IMP)} ; {_formula(f.right, F_CHOP)}", F_CHOP
    elif t is Implies or t is Iff:
        kw = "implies" if t is Implies else "iff"
        out, level = f"{_formula(f.left, F_OR)} {kw} {_formula(f.right, F_OR)}", F_IMP
    elif t is Or:
        out, level = f"{_formula(f.left, F_OR)} or {_formula(f.right, F_AND)}", F_OR
    elif t is And:
        out, level = f"{_formula(f.left, F_AND)} and {_formula(f.right, F_UNARY)}", F_AND
    elif t is Exists:
        out = f"exists {f.var.name} : {f.var.sort} . {_formula(f.body, F_CHOP)}"
        level = F_CHOP if ctx == F_CHOP else -1
    elif t is If:
        out = (f"if {_formula(f.cond, F_CHOP)} then {_formula(f.then, F_CHOP)} "
               f"else {_formula(f.orelse, F_CHOP)}")
        level = F_CHOP if ctx == F_CHOP else -1
    elif t is While:
        out = f"while {_formula(f.cond, F_CHOP)} do {_formula(f.body, F_CHOP)}"
        level = F_CHOP if ctx == F_CHOP else -1
    else:
        return f"<{type(f).__name__}>"
    return f"({out})" if level < ctx else out


def _expr_is_atomic(e: Expr) -> bool:
    return not isinstance(e, Apply) or e.op not in _EXPR_BIN and e.op != "not"


def print_formula(f: Formula) -> str:
    """Render ``f`` in the concrete syntax accepted by :func:`itlrev.parser.parse`."""
    return _formula(f, F_CHOP)
