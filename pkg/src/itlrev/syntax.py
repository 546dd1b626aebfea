"""Abstract syntax of first-order ITL expressions and formulas.

Kernel formulas are ``TrueF``, ``Pred``, ``Not``, ``And``, ``Exists``, ``Skip``,
``Chop`` and ``ChopStar``.  Every other formula class is a derived construct;
its meaning is fixed by :func:`unfold`, and :func:`desugar` rewrites a formula
all the way down to the kernel.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, fields
from typing import Callable, Iterator, Mapping

from .errors import DivisionByZero, SortError, UnsortedVariable


class Sort(enum.Enum):
    INT = "int"
    BOOL = "bool"

    def __str__(self):
        return self.value


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(#[0-9]+)?\Z")


@dataclass(frozen=True)
class VarName:
    name: str
    sort: Sort

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")

    def __str__(self):
        return self.name


def int_var(name: str) -> VarName:
    return VarName(name, Sort.INT)


def bool_var(name: str) -> VarName:
    return VarName(name, Sort.BOOL)


def _node(cls):
    """Frozen dataclass whose hash is computed once and cached."""
    cls = dataclass(frozen=True)(cls)
    names = tuple(f.name for f in fields(cls))
    tag = cls.__name__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


# ---------------------------------------------------------------- expressions


class Expr:
    __slots__ = ()

    def __str__(self):
        from .printer import print_expr

        return print_expr(self)


@_node
class ConstInt(Expr):
    value: int


@_node
class ConstBool(Expr):
    value: bool


@_node
class Var(Expr):
    """Value of the variable in the first state."""

    var: VarName


@_node
class NextVar(Expr):
    """Value in the second state (``V'``)."""

    var: VarName


@_node
class FinVar(Expr):
    """Value in the last state (``fin.V``)."""

    var: VarName


@_node
class PrevVar(Expr):
    """Value in the penultimate state (``prev.V``)."""

    var: VarName


@_node
class Apply(Expr):
    op: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


TEMPORAL_VARS = (Var, NextVar, FinVar, PrevVar)


@dataclass(frozen=True)
class Operator:
    """A pure operator.  ``arg_sorts=None`` means two arguments of one (any) sort."""

    symbol: str
    arg_sorts: tuple | None
    result: Sort
    fn: Callable

    @property
    def arity(self):
        return 2 if self.arg_sorts is None else len(self.arg_sorts)


def _div(a, b):
    if b == 0:
        raise DivisionByZero(f"{a} div 0")
    return a // b


def _mod(a, b):
    if b == 0:
        raise DivisionByZero(f"{a} mod 0")
    return a % b


_II = (Sort.INT, Sort.INT)
_BB = (Sort.BOOL, Sort.BOOL)

OPERATORS: dict[str, Operator] = {}


def register_operator(symbol, arg_sorts, result, fn):
    """Add a pure operator usable in :class:`Apply` nodes."""
    op = Operator(symbol, None if arg_sorts is None else tuple(arg_sorts), result, fn)
    OPERATORS[symbol] = op
    return op


for _sym, _fn in (("+", lambda a, b: a + b), ("-", lambda a, b: a - b),
                  ("*", lambda a, b: a * b), ("div", _div), ("mod", _mod)):
    register_operator(_sym, _II, Sort.INT, _fn)
for _sym, _fn in (("<", lambda a, b: a < b), ("<=", lambda a, b: a <= b),
                  (">", lambda a, b: a > b), (">=", lambda a, b: a >= b)):
    register_operator(_sym, _II, Sort.BOOL, _fn)
register_operator("=", None, Sort.BOOL, lambda a, b: a == b)
register_operator("and", _BB, Sort.BOOL, lambda a, b: a and b)
register_operator("or", _BB, Sort.BOOL, lambda a, b: a or b)
register_operator("not", (Sort.BOOL,), Sort.BOOL, lambda a: not a)

RELATIONS = ("=", "<", "<=", ">", ">=")


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, VarName):
        return Var(x)
    if isinstance(x, bool):
        return ConstBool(x)
    if isinstance(x, int):
        return ConstInt(x)
    raise TypeError(f"cannot convert {x!r} to an expression")


def apply(op: str, *args) -> Apply:
    return Apply(op, tuple(as_expr(a) for a in args))


# ---------------------------------------------------------------- formulas


class Formula:
    __slots__ = ()

    def __str__(self):
        from .printer import print_formula

        return print_formula(self)


@_node
class TrueF(Formula):
    pass


@_node
class Pred(Formula):
    expr: Expr


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Exists(Formula):
    var: VarName
    body: Formula


@_node
class Skip(Formula):
    pass


@_node
class Chop(Formula):
    left: Formula
    right: Formula


@_node
class ChopStar(Formula):
    arg: Formula


KERNEL = (TrueF, Pred, Not, And, Exists, Skip, Chop, ChopStar)


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Iff(Formula):
    left: Formula
    right: Formula


@_node
class Next(Formula):
    arg: Formula


@_node
class WNext(Formula):
    arg: Formula


@_node
class Prev(Formula):
    arg: Formula


@_node
class WPrev(Formula):
    arg: Formula


@_node
class Diamond(Formula):
    arg: Formula


@_node
class Box(Formula):
    arg: Formula


@_node
class DiamondI(Formula):
    arg: Formula


@_node
class BoxI(Formula):
    arg: Formula


@_node
class DiamondA(Formula):
    arg: Formula


@_node
class BoxA(Formula):
    arg: Formula


@_node
class Empty(Formula):
    pass


@_node
class More(Formula):
    pass


@_node
class Assign(Formula):
    """``V = e``"""

    var: VarName
    expr: Expr


@_node
class UnitAssign(Formula):
    """``V := e``, i.e. ``V' = e``"""

    var: VarName
    expr: Expr


@_node
class TempAssign(Formula):
    """``V <- e``, i.e. ``fin.V = e``"""

    var: VarName
    expr: Expr


@_node
class PastAssign(Formula):
    """``V =: e``, i.e. ``prev.V = e``"""

    var: VarName
    expr: Expr


@_node
class Gets(Formula):
    var: VarName
    expr: Expr


@_node
class If(Formula):
    cond: Formula
    then: Formula
    orelse: Formula


@_node
class Len(Formula):
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"len takes a natural number, got {self.n!r}")


@_node
class Fin(Formula):
    arg: Formula


@_node
class Init(Formula):
    arg: Formula


@_node
class Halt(Formula):
    arg: Formula


@_node
class Keep(Formula):
    arg: Formula


@_node
class InitOnly(Formula):
    arg: Formula


@_node
class While(Formula):
    cond: Formula
    body: Formula


TRUE = TrueF()
FALSE = Pred(ConstBool(False))
SKIP = Skip()
EMPTY = Empty()
MORE = More()

ASSIGNMENTS = (Assign, UnitAssign, TempAssign, PastAssign, Gets)


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; ``TRUE`` when empty."""
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# ---------------------------------------------------------------- traversal


def formula_children(f: Formula) -> tuple:
    return tuple(getattr(f, fl.name) for fl in fields(f)
                 if isinstance(getattr(f, fl.name), Formula))


def map_formula(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``f`` with ``fn`` applied to each immediate sub-formula."""
    changes = {}
    for fl in fields(f):
        v = getattr(f, fl.name)
        if isinstance(v, Formula):
            nv = fn(v)
            if nv is not v:
                changes[fl.name] = nv
    if not changes:
        return f
    kwargs = {fl.name: changes.get(fl.name, getattr(f, fl.name)) for fl in fields(f)}
    return type(f)(**kwargs)


def formula_exprs(f: Formula) -> tuple:
    """Expressions stored directly in ``f`` (assignment targets count as ``Var``)."""
    if isinstance(f, Pred):
        return (f.expr,)
    if isinstance(f, ASSIGNMENTS):
        return (Var(f.var), f.expr)
    return ()


def subexprs(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Apply):
        for a in e.args:
            yield from subexprs(a)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in formula_children(f):
        yield from subformulas(c)


def expr_vars(e: Expr) -> Iterator[VarName]:
    for s in subexprs(e):
        if isinstance(s, TEMPORAL_VARS):
            yield s.var


def free_vars(f: Formula) -> frozenset:
    """Variables occurring outside the scope of an ``Exists`` that binds them."""
    if isinstance(f, Exists):
        return frozenset(v for v in free_vars(f.body) if v.name != f.var.name)
    out = set()
    for e in formula_exprs(f):
        out.update(expr_vars(e))
    for c in formula_children(f):
        out |= free_vars(c)
    return frozenset(out)


def all_vars(f: Formula) -> tuple:
    """Every variable, free or bound, in order of first occurrence."""
    seen: dict[VarName, None] = {}

    def walk(g):
        if isinstance(g, Exists):
            seen.setdefault(g.var)
        for e in formula_exprs(g):
            for v in expr_vars(e):
                seen.setdefault(v)
        for c in formula_children(g):
            walk(c)

    walk(f)
    return tuple(seen)


def sort_table(f: Formula, declarations: Mapping[str, Sort] | None = None) -> dict:
    """Map each variable name to its sort, raising on inconsistent use."""
    table = dict(declarations or {})
    for v in all_vars(f):
        known = table.setdefault(v.name, v.sort)
        if known is not v.sort:
            raise UnsortedVariable(f"{v.name} used as both {known} and {v.sort}")
    return table


# ---------------------------------------------------------------- sorts


def sort_of(e: Expr) -> Sort:
    """Sort of ``e``; raises :class:`SortError` when ``e`` is ill-sorted."""
    if isinstance(e, ConstInt):
        return Sort.INT
    if isinstance(e, ConstBool):
        return Sort.BOOL
    if isinstance(e, TEMPORAL_VARS):
        return e.var.sort
    if isinstance(e, Apply):
        op = OPERATORS.get(e.op)
        if op is None:
            raise SortError(f"unknown operator {e.op!r}")
        if len(e.args) != op.arity:
            raise SortError(f"{e.op} expects {op.arity} arguments, got {len(e.args)}")
        got = tuple(sort_of(a) for a in e.args)
        if op.arg_sorts is None:
            if got[0] is not got[1]:
                raise SortError(f"{e.op} applied to {got[0]} and {got[1]}")
        elif got != op.arg_sorts:
            raise SortError(f"{e.op} expects {op.arg_sorts}, got {got}")
        return op.result
    raise SortError(f"not an expression: {e!r}")


def check_sorts(f: Formula, declarations: Mapping[str, Sort] | None = None) -> None:
    sort_table(f, declarations)
    for g in subformulas(f):
        if isinstance(g, Pred):
            if sort_of(g.expr) is not Sort.BOOL:
                raise SortError(f"predicate over a non-Boolean expression: {g.expr}")
        elif isinstance(g, ASSIGNMENTS):
            if sort_of(g.expr) is not g.var.sort:
                raise SortError(f"{g.var} is {g.var.sort} but assigned a {sort_of(g.expr)}")


def well_sorted(f: Formula, declarations: Mapping[str, Sort] | None = None) -> bool:
    try:
        check_sorts(f, declarations)
    except (SortError, UnsortedVariable):
        return False
    return True


# ---------------------------------------------------------------- derived forms


def _len_chain(n: int) -> Formula:
    out: Formula = EMPTY
    for _ in range(n):
        out = Chop(SKIP, out)
    return out


def unfold(f: Formula) -> Formula:
    """Replace a derived construct by its defining formula (one level)."""
    t = type(f)
    if t in KERNEL:
        return f
    if t is Or:
        return Not(And(Not(f.left), Not(f.right)))
    if t is Implies:
        return Not(And(f.left, Not(f.right)))
    if t is Iff:
        return And(Implies(f.left, f.right), Implies(f.right, f.left))
    if t is Next:
        return Chop(SKIP, f.arg)
    if t is WNext:
        return Or(EMPTY, Next(f.arg))
    if t is Prev:
        return Chop(f.arg, SKIP)
    if t is WPrev:
        return Or(EMPTY, Prev(f.arg))
    if t is Diamond:
        return Chop(TRUE, f.arg)
    if t is Box:
        return Not(Diamond(Not(f.arg)))
    if t is DiamondI:
        return Chop(f.arg, TRUE)
    if t is BoxI:
        return Not(DiamondI(Not(f.arg)))
    if t is DiamondA:
        return Chop(TRUE, Chop(f.arg, TRUE))
    if t is BoxA:
        return Not(DiamondA(Not(f.arg)))
    if t is More:
        return Next(TRUE)
    if t is Empty:
        return Not(Chop(SKIP, TRUE))
    if t is Assign:
        return Pred(Apply("=", (Var(f.var), f.expr)))
    if t is UnitAssign:
        return Pred(Apply("=", (NextVar(f.var), f.expr)))
    if t is TempAssign:
        return Pred(Apply("=", (FinVar(f.var), f.expr)))
    if t is PastAssign:
        return Pred(Apply("=", (PrevVar(f.var), f.expr)))
    if t is Gets:
        return BoxA(Implies(SKIP, TempAssign(f.var, f.expr)))
    if t is If:
        return Or(And(f.cond, f.then), And(Not(f.cond), f.orelse))
    if t is Len:
        return _len_chain(f.n)
    if t is Fin:
        return Box(Implies(EMPTY, f.arg))
    if t is Init:
        return BoxI(Implies(EMPTY, f.arg))
    if t is Halt:
        return Box(Iff(EMPTY, f.arg))
    if t is Keep:
        return BoxA(Implies(SKIP, f.arg))
    if t is InitOnly:
        return BoxI(Iff(EMPTY, f.arg))
    if t is While:
        return And(ChopStar(And(f.cond, f.body)), Fin(Not(f.cond)))
    # leaf extensions (e.g. schema holes) pass through untouched
    return f


def _desugar(f: Formula, memo: dict) -> Formula:
    hit = memo.get(f)
    if hit is not None:
        return hit
    if type(f) in KERNEL or not formula_children(f) and type(f) not in (Empty, More, Len) \
            and not isinstance(f, ASSIGNMENTS):
        out = map_formula(f, lambda c: _desugar(c, memo))
    else:
        out = _desugar(unfold(f), memo)
    memo[f] = out
    return out


def desugar(f: Formula) -> Formula:
    """Rewrite ``f`` into kernel constructs only."""
    sort_table(f)
    return _desugar(f, {})


def is_kernel(f: Formula) -> bool:
    return all(type(g) in KERNEL for g in subformulas(f))
