"""Concrete syntax: a tokenizer, a recursive-descent parser and spec files.

Formula grammar, loosest first::

    chop    := imp (';' chop)?
    imp     := or (('implies' | 'iff') or)?
    or      := and ('or' and)*
    and     := unary ('and' unary)*
    unary   := PREFIX unary | postfix
    postfix := atom '*'*
    atom    := 'true' | 'false' | 'skip' | 'empty' | 'more' | 'len' '(' NAT ')'
             | 'exists' NAME ':' SORT '.' chop
             | 'if' chop 'then' chop 'else' chop | 'while' chop 'do' chop
             | NAME (':=' | '<-' | '=:' | 'gets') expr
             | '(' chop ')' | expr

Expressions use ``|``, ``&`` and ``!`` for Boolean operators so they cannot be
confused with the formula connectives.  ``V'`` reads the next state, ``fin.V``
the last, ``prev.V`` the penultimate.  Undeclared variables get the sort their
uses imply (integer when nothing says otherwise).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, SortError, UnsortedVariable
from .printer import PREFIX_KEYWORDS
from .syntax import (
    ASSIGNMENTS, EMPTY, FALSE, MORE, OPERATORS, SKIP, TEMPORAL_VARS, TRUE, And, Apply, Chop,
    ChopStar, ConstBool, ConstInt, Exists, Expr, FinVar, Formula, Gets, If, Iff, Implies, Len,
    NextVar, Or, PastAssign, Pred, PrevVar, Sort, TempAssign, UnitAssign, Var, VarName, While,
    check_sorts, expr_vars, formula_exprs, map_formula, subformulas,
)

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<tvar>(?:fin|prev)\.[A-Za-z][A-Za-z0-9_]*)
  | (?P<nvar>[A-Za-z][A-Za-z0-9_]*')
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<num>[0-9]+)
  | (?P<op>:=|<-|=:|<=|>=|\.\.|[-+*=<>();:.&|!,])
""", re.VERBOSE)

_PREFIX = {kw: cls for cls, kw in PREFIX_KEYWORDS.items()}
_ASSIGN_OPS = {":=": UnitAssign, "<-": TempAssign, "=:": PastAssign, "gets": Gets}
_RESERVED = set(_PREFIX) | {
    "true", "false", "skip", "empty", "more", "len", "exists", "if", "then", "else",
    "while", "do", "and", "or", "implies", "iff", "gets", "div", "mod", "int", "bool",
}
_REL = ("=", "<", "<=", ">", ">=")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1) -> list:
    out = []
    pos, col0 = 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, pos - col0 + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - col0 + 1))
    return out


# provisional sort for names the parser has not resolved yet
_PENDING = Sort.INT


class _Parser:
    def __init__(self, tokens, declared):
        self.toks = tokens
        self.i = 0
        self.declared = dict(declared)
        self.bound = []             # stack of (name, sort) from enclosing exists

    # -- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{msg} (found {found})", tok.line, tok.col)

    def at(self, *texts):
        return self.tok.kind in ("op", "name") and self.tok.text in texts

    def eat(self, text):
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        self.i += 1

    def var(self, name):
        for n, s in reversed(self.bound):
            if n == name:
                return VarName(name, s)
        return VarName(name, self.declared.get(name, _PENDING))

    # -- formulas
    def formula(self):
        left = self.imp()
        if self.at(";"):
            self.i += 1
            return Chop(left, self.formula())
        return left

    def imp(self):
        left = self.disj()
        if self.at("implies", "iff"):
            cls = Implies if self.tok.text == "implies" else Iff
            self.i += 1
            return cls(left, self.disj())
        return left

    def disj(self):
        out = self.conj()
        while self.at("or"):
            self.i += 1
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.at("and"):
            self.i += 1
            out = And(out, self.unary())
        return out

    def unary(self):
        if self.tok.kind == "name" and self.tok.text in _PREFIX:
            cls = _PREFIX[self.tok.text]
            self.i += 1
            return cls(self.unary())
        return self.postfix()

    def postfix(self):
        out = self.atom()
        while self.at("*"):
            self.i += 1
            out = ChopStar(out)
        return out

    def atom(self):
        t = self.tok
        if t.kind == "name":
            word = t.text
            simple = {"true": TRUE, "skip": SKIP, "empty": EMPTY, "more": MORE}
            if word in simple and not self._expr_follows(1):
                self.i += 1
                return simple[word]
            if word == "false" and not self._expr_follows(1):
                self.i += 1
                return FALSE
            if word == "len":
                self.i += 1
                self.eat("(")
                if self.tok.kind != "num":
                    raise self.error("len takes a natural number")
                n = int(self.tok.text)
                self.i += 1
                self.eat(")")
                return Len(n)
            if word == "exists":
                return self.exists()
            if word == "if":
                self.i += 1
                cond = self.formula()
                self.eat("then")
                then = self.formula()
                self.eat("else")
                return If(cond, then, self.formula())
            if word == "while":
                self.i += 1
                cond = self.formula()
                self.eat("do")
                return While(cond, self.formula())
            if word not in _RESERVED and self.peek().kind in ("op", "name") \
                    and self.peek().text in _ASSIGN_OPS:
                self.i += 1
                cls = _ASSIGN_OPS[self.tok.text]
                self.i += 1
                return cls(self.var(word), self.expr())
        if self.at("("):
            # a parenthesised formula, or the start of an expression like (A + 1) = 2
            save = self.i
            first = None
            try:
                self.i += 1
                inner = self.formula()
                self.eat(")")
                if not self._expr_continues():
                    return inner
            except ParseError as e:
                first = e
            self.i = save
            try:
                return self.pred()
            except ParseError as second:
                if first is not None and (first.line, first.column) > (second.line, second.column):
                    raise first from None
                raise
        return self.pred()

    def _expr_follows(self, k):
        # 'true = Q' is an expression even though 'true' alone is a formula
        nxt = self.peek(k)
        return nxt.kind == "op" and nxt.text in _REL + ("&", "|", "+", "-")

    def _expr_continues(self):
        t = self.tok
        if t.kind == "op" and t.text in _REL + ("&", "|", "+", "-"):
            return True
        if t.kind == "op" and t.text == "*":
            return self._starts_expr(self.peek())
        return t.kind == "name" and t.text in ("div", "mod")

    def exists(self):
        self.eat("exists")
        if self.tok.kind != "name" or self.tok.text in _RESERVED:
            raise self.error("expected a variable name")
        name = self.tok.text
        self.i += 1
        sort = Sort.INT     # an unannotated quantifier ranges over integers
        if self.at(":"):
            self.i += 1
            if not self.at("int", "bool"):
                raise self.error("expected a sort (int or bool)")
            sort = Sort.INT if self.tok.text == "int" else Sort.BOOL
            self.i += 1
        self.eat(".")
        self.bound.append((name, sort))
        try:
            body = self.formula()
        finally:
            self.bound.pop()
        return Exists(VarName(name, sort), body)

    def pred(self):
        start = self.tok
        e = self.expr()
        if isinstance(e, (ConstInt,)):
            raise self.error("a formula cannot be a bare number", start)
        return Pred(e)

    # -- expressions
    def expr(self):
        out = self.e_and()
        while self.at("|"):
            self.i += 1
            out = Apply("or", (out, self.e_and()))
        return out

    def e_and(self):
        out = self.e_not()
        while self.at("&"):
            self.i += 1
            out = Apply("and", (out, self.e_not()))
        return out

    def e_not(self):
        if self.at("!"):
            self.i += 1
            return Apply("not", (self.e_not(),))
        return self.e_rel()

    def e_rel(self):
        left = self.e_add()
        if self.tok.kind == "op" and self.tok.text in _REL:
            op = self.tok.text
            self.i += 1
            return Apply(op, (left, self.e_add()))
        return left

    def e_add(self):
        out = self.e_mul()
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            out = Apply(op, (out, self.e_mul()))
        return out

    def e_mul(self):
        out = self.e_atom()
        while True:
            if self.at("*") and self._starts_expr(self.peek()):
                op = "*"
            elif self.at("div", "mod"):
                op = self.tok.text
            else:
                return out
            self.i += 1
            out = Apply(op, (out, self.e_atom()))

    @staticmethod
    def _starts_expr(t):
        if t.kind in ("num", "tvar", "nvar"):
            return True
        if t.kind == "name":
            return t.text not in _RESERVED or t.text in ("true", "false")
        return t.kind == "op" and t.text in ("(", "-", "!")

    def e_atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return ConstInt(int(t.text))
        if self.at("-") and self.peek().kind == "num":
            self.i += 2
            return ConstInt(-int(self.peek(-1).text))
        if t.kind == "tvar":
            kind, _, name = t.text.partition(".")
            self.i += 1
            return (FinVar if kind == "fin" else PrevVar)(self.var(name))
        if t.kind == "nvar":
            self.i += 1
            return NextVar(self.var(t.text[:-1]))
        if t.kind == "name":
            if t.text in ("true", "false"):
                self.i += 1
                return ConstBool(t.text == "true")
            if t.text in _RESERVED:
                raise self.error("expected an expression")
            self.i += 1
            if self.at("(") and t.text in OPERATORS:
                self.i += 1
                args = [self.expr()]
                while self.at(","):
                    self.i += 1
                    args.append(self.expr())
                self.eat(")")
                return Apply(t.text, tuple(args))
            return Var(self.var(t.text))
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if self.at("!"):
            return self.e_not()
        raise self.error("expected an expression")


# ---------------------------------------------------------------- sort inference


def _infer(f: Formula, declared: dict) -> dict:
    """Names that must be Boolean, from how they are used; everything else is Int.

    Declared names and exists-bound names keep their sort.
    """
    fixed = dict(declared)
    for g in subformulas(f):
        if isinstance(g, Exists):
            fixed.setdefault(g.var.name, g.var.sort)
    bools = {n for n, s in fixed.items() if s is Sort.BOOL}
    links = []              # pairs of names/expressions that must share a sort

    def mark_bool(e):
        if isinstance(e, TEMPORAL_VARS):
            bools.add(e.var.name)

    def visit(e):
        if isinstance(e, Apply):
            op = OPERATORS.get(e.op)
            if op is not None and op.arg_sorts is not None:
                for a, s in zip(e.args, op.arg_sorts):
                    if s is Sort.BOOL:
                        mark_bool(a)
            if e.op == "=":
                links.append(e.args)
            for a in e.args:
                visit(a)

    for g in subformulas(f):
        if isinstance(g, Pred):
            mark_bool(g.expr)
            visit(g.expr)
        elif isinstance(g, ASSIGNMENTS):
            visit(g.expr)
            links.append((Var(g.var), g.expr))

    def is_bool(e):
        if isinstance(e, TEMPORAL_VARS):
            return e.var.name in bools
        if isinstance(e, ConstBool):
            return True
        if isinstance(e, Apply):
            return OPERATORS[e.op].result is Sort.BOOL if e.op in OPERATORS else False
        return False

    changed = True
    while changed:
        changed = False
        for a, b in links:
            for x, y in ((a, b), (b, a)):
                if is_bool(y) and isinstance(x, TEMPORAL_VARS) \
                        and x.var.name not in bools:
                    if fixed.get(x.var.name, Sort.BOOL) is Sort.BOOL:
                        bools.add(x.var.name)
                        changed = True
    table = {}
    for g in subformulas(f):
        for e in formula_exprs(g):
            for v in expr_vars(e):
                name = v.name
                table[name] = fixed.get(name, Sort.BOOL if name in bools else Sort.INT)
    table.update(fixed)
    return table


def _resort_expr(e: Expr, table, bound) -> Expr:
    t = type(e)
    if t in TEMPORAL_VARS:
        sort = bound.get(e.var.name) or table[e.var.name]
        return e if e.var.sort is sort else t(VarName(e.var.name, sort))
    if t is Apply:
        return Apply(e.op, tuple(_resort_expr(a, table, bound) for a in e.args))
    return e


def _resort(f: Formula, table, bound=None) -> Formula:
    bound = bound or {}
    if isinstance(f, Pred):
        return Pred(_resort_expr(f.expr, table, bound))
    if isinstance(f, ASSIGNMENTS):
        sort = bound.get(f.var.name) or table[f.var.name]
        return type(f)(VarName(f.var.name, sort), _resort_expr(f.expr, table, bound))
    if isinstance(f, Exists):
        inner = dict(bound)
        inner[f.var.name] = f.var.sort
        return Exists(f.var, _resort(f.body, table, inner))
    return map_formula(f, lambda c: _resort(c, table, bound))


# ---------------------------------------------------------------- entry points


def parse(text: str, declarations: dict | None = None, line: int = 1) -> Formula:
    """Parse a formula; ``declarations`` maps names to :class:`Sort`.

    Raises :class:`ParseError` (with line and column) on malformed input and
    :class:`SortError` when the formula is ill-sorted.
    """
    declared = {k: (Sort(v) if isinstance(v, str) else v) for k, v in (declarations or {}).items()}
    p = _Parser(tokenize(text, line), declared)
    if p.tok.kind == "eof":
        raise p.error("empty formula")
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    table = _infer(f, declared)
    f = _resort(f, table)
    try:
        check_sorts(f, declared)
    except UnsortedVariable as e:
        raise SortError(str(e)) from None
    return f


def parse_expr(text: str, declarations: dict | None = None) -> Expr:
    p = _Parser(tokenize(text), dict(declarations or {}))
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    return e


@dataclass
class SpecFile:
    declarations: dict
    formula: Formula
    text: str
    options: dict = field(default_factory=dict)

    def variables(self) -> tuple:
        return tuple(VarName(n, s) for n, s in self.declarations.items())


_OPTION_KEYS = {"int-domain", "max-len", "max-steps", "vars", "k", "default-int", "lookahead"}


def parse_spec(text: str) -> SpecFile:
    """Read a spec file: ``var A : int`` lines, ``option key = value`` lines and
    ``#`` comments, followed by the formula."""
    declarations, options = {}, {}
    lines = text.split("\n")
    body_start = len(lines)
    for n, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"var\s+([A-Za-z][A-Za-z0-9_]*)\s*:\s*(\w+)", line)
        if m:
            name, sort = m.groups()
            if sort not in ("int", "bool"):
                raise ParseError(f"unknown sort {sort!r}", n, raw.index(sort) + 1)
            if name in declarations:
                raise ParseError(f"{name} declared twice", n, raw.index(name) + 1)
            declarations[name] = Sort(sort)
            continue
        m = re.fullmatch(r"option\s+([a-z][a-z-]*)\s*=\s*(\S+)", line)
        if m:
            key, value = m.groups()
            if key not in _OPTION_KEYS:
                raise ParseError(f"unknown option {key!r}", n, raw.index(key) + 1)
            options[key] = value
            continue
        if line.startswith(("var ", "option ")):
            raise ParseError("malformed declaration", n, 1)
        body_start = n
        break
    body = "\n".join(lines[body_start - 1:])
    if not body.strip():
        raise ParseError("the spec file has no formula", len(lines), 1)
    f = parse(body, declarations, line=body_start)
    return SpecFile(declarations, f, body, options)


def parse_int_domain(text: str) -> tuple:
    """``a..b`` or a comma list, e.g. ``0..3`` or ``0,1,5``."""
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise ValueError(f"empty integer range {text!r}")
        return tuple(range(lo, hi + 1))
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad integer domain {text!r}") from None
