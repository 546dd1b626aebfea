"""Table evaluation of formulas over every interval of a bounded domain.

A :class:`Universe` numbers all intervals of a :class:`Domain` (the order of
:func:`~itlrev.intervals.enumerate_intervals`) and computes, for a formula, the
boolean vector of which intervals satisfy it.  Chop, chop-star and the
quantifier become index arithmetic on these vectors, so bounded validity and
the law suite run in numpy rather than one interval at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, ItlError, Overflow, UnknownVariable
from .intervals import Domain, Interval
from .semantics import EvalConfig, kernel
from .syntax import (
    OPERATORS, And, Apply, Chop, ChopStar, ConstBool, ConstInt, Exists, Expr, FinVar,
    Formula, NextVar, Not, Pred, PrevVar, Skip, Sort, TrueF, Var, _node,
)

MAX_INTERVALS = 3_000_000
_LIMIT = 1 << 62


@_node
class Hole(Formula):
    """Schema placeholder whose satisfaction vector is supplied by the caller."""

    name: str


@_node
class ExprHole(Expr):
    name: str
    sort: Sort


def _guard(bound: int, what: str):
    if bound >= _LIMIT:
        raise Overflow(f"{what} may exceed the 63-bit evaluation range")


def _maxabs(a) -> int:
    return int(np.abs(a).max()) if a.size else 0


def _arith(op, a, b):
    if op in ("+", "-"):
        _guard(_maxabs(a) + _maxabs(b), op)
        return a + b if op == "+" else a - b
    if op == "*":
        _guard(_maxabs(a) * _maxabs(b), op)
        return a * b
    if op in ("div", "mod"):
        if (b == 0).any():
            raise DivisionByZero(f"{op} by zero in a bounded check")
        return np.floor_divide(a, b) if op == "div" else np.mod(a, b)
    raise KeyError(op)


_VECTOR_OPS = {
    "<": np.less, "<=": np.less_equal, ">": np.greater, ">=": np.greater_equal,
    "=": np.equal, "and": np.logical_and, "or": np.logical_or,
}


class Universe:
    """All intervals of ``domain`` with precomputed prefix/suffix/reverse indices."""

    def __init__(self, domain: Domain, cfg: EvalConfig | None = None):
        self.domain = domain
        self.cfg = cfg or EvalConfig.for_domain(domain)
        n_intervals = domain.num_intervals()
        if n_intervals > MAX_INTERVALS:
            raise ItlError(f"{domain.describe()} has {n_intervals} intervals "
                           f"(limit {MAX_INTERVALS}); shrink the domain or the bound")
        self.states = domain.states()
        S = len(self.states)
        L = domain.max_len
        self.S, self.L, self.N = S, L, n_intervals
        self.base = [0]
        for n in range(L + 1):
            self.base.append(self.base[-1] + S ** (n + 1))

        self.lengths = np.empty(self.N, dtype=np.int64)
        self.pos = np.full((self.N, L + 1), -1, dtype=np.int64)
        self.prefix = np.full((self.N, L + 1), -1, dtype=np.int64)
        self.suffix = np.full((self.N, L + 1), -1, dtype=np.int64)
        self.rev = np.empty(self.N, dtype=np.int64)
        for n in range(L + 1):
            lo, hi = self.base[n], self.base[n + 1]
            codes = np.arange(hi - lo, dtype=np.int64)
            self.lengths[lo:hi] = n
            for t in range(n + 1):
                self.pos[lo:hi, t] = (codes // S ** (n - t)) % S
            for k in range(n + 1):
                self.prefix[lo:hi, k] = self.base[k] + codes // S ** (n - k)
                self.suffix[lo:hi, k] = self.base[n - k] + codes % S ** (n - k + 1)
            rcode = np.zeros(hi - lo, dtype=np.int64)
            for t in range(n + 1):
                rcode += self.pos[lo:hi, t] * S ** t
            self.rev[lo:hi] = lo + rcode
        rows = np.arange(self.N)
        self.first_state = self.pos[:, 0]
        self.last_state = self.pos[rows, self.lengths]
        self.second_state = np.where(self.lengths > 0, self.pos[:, min(1, L)], 0)
        self.penult_state = np.where(self.lengths > 0, self.pos[rows, np.maximum(self.lengths - 1, 0)], 0)
        self.nonempty = self.lengths > 0
        # per cut point k: the intervals long enough to be cut there
        self.cut_rows = [np.nonzero(self.lengths >= k)[0] for k in range(L + 1)]
        self.layers = [np.arange(self.base[n], self.base[n + 1]) for n in range(L + 1)]

        self._values = {}
        for i, v in enumerate(domain.variables):
            dtype = bool if v.sort is Sort.BOOL else np.int64
            self._values[v.name] = np.array([s.values[i] for s in self.states], dtype=dtype)
        self._groups = {}
        self._memo = {}

    # ------------------------------------------------------------ helpers

    def interval(self, idx: int) -> Interval:
        n = int(self.lengths[idx])
        return Interval(tuple(self.states[p] for p in self.pos[idx, :n + 1]))

    def first(self, mask) -> Interval | None:
        hits = np.flatnonzero(mask)
        return self.interval(int(hits[0])) if hits.size else None

    def index_of(self, sigma: Interval) -> int:
        lookup = {s: i for i, s in enumerate(self.states)}
        n = sigma.length
        code = 0
        for s in sigma.states:
            code = code * self.S + lookup[s.restrict(self.domain.variables)]
        return self.base[n] + code

    def _var_values(self, name):
        try:
            return self._values[name]
        except KeyError:
            raise UnknownVariable(f"{name} is not in {self.domain.describe()}") from None

    # ------------------------------------------------------------ expressions

    def values(self, e: Expr, env=None):
        """Value of ``e`` on every interval."""
        t = type(e)
        if t is ConstInt:
            return np.full(self.N, e.value, dtype=np.int64)
        if t is ConstBool:
            return np.full(self.N, e.value, dtype=bool)
        if t is ExprHole:
            return env[e.name]
        if t in (Var, FinVar, NextVar, PrevVar):
            vals = self._var_values(e.var.name)
            if t is Var:
                return vals[self.first_state]
            if t is FinVar:
                return vals[self.last_state]
            where = self.second_state if t is NextVar else self.penult_state
            return np.where(self.nonempty, vals[where], self.cfg.default_for(e.var))
        if t is Apply:
            args = [self.values(a, env) for a in e.args]
            if e.op in ("+", "-", "*", "div", "mod"):
                return _arith(e.op, *args)
            if e.op == "not":
                return np.logical_not(args[0])
            if e.op in _VECTOR_OPS:
                return _VECTOR_OPS[e.op](*args)
            fn = OPERATORS[e.op].fn
            out = [fn(*(a[i].item() for a in args)) for i in range(self.N)]
            return np.array(out, dtype=bool if OPERATORS[e.op].result is Sort.BOOL else np.int64)
        raise TypeError(f"not an expression: {e!r}")

    # ------------------------------------------------------------ formulas

    def sat(self, f: Formula, env=None):
        """Boolean vector: which intervals satisfy ``f``."""
        g = kernel(f)
        if env is None:
            if len(self._memo) > 50_000:
                self._memo.clear()
            return self._sat(g, self._memo, None)
        return self._sat(g, {}, env)

    def _sat(self, f, memo, env):
        hit = memo.get(f)
        if hit is not None:
            return hit
        t = type(f)
        if t is TrueF:
            out = np.ones(self.N, dtype=bool)
        elif t is Pred:
            out = np.asarray(self.values(f.expr, env), dtype=bool)
        elif t is Not:
            out = ~self._sat(f.arg, memo, env)
        elif t is And:
            out = self._sat(f.left, memo, env) & self._sat(f.right, memo, env)
        elif t is Skip:
            out = self.lengths == 1
        elif t is Chop:
            out = self.chop(self._sat(f.left, memo, env), self._sat(f.right, memo, env))
        elif t is ChopStar:
            out = self.star(self._sat(f.arg, memo, env))
        elif t is Exists:
            out = self.exists(f.var.name, self._sat(f.body, memo, env))
        elif t is Hole:
            out = env[f.name]
        else:
            raise TypeError(f"not a kernel formula: {t.__name__}")
        memo[f] = out
        return out

    def chop(self, a, b):
        out = np.zeros(self.N, dtype=bool)
        for k, rows in enumerate(self.cut_rows):
            out[rows] |= a[self.prefix[rows, k]] & b[self.suffix[rows, k]]
        return out

    def star(self, a):
        out = np.zeros(self.N, dtype=bool)
        out[self.layers[0]] = True
        for n in range(1, self.L + 1):
            rows = self.layers[n]
            acc = np.zeros(rows.size, dtype=bool)
            for k in range(1, n + 1):
                acc |= a[self.prefix[rows, k]] & out[self.suffix[rows, k]]
            out[rows] = acc
        return out

    def group_key(self, name: str):
        """Interval id with ``name`` erased in every state (the ~V classes)."""
        key = self._groups.get(name)
        if key is None:
            variables = self.domain.variables
            idx = [v.name for v in variables].index(name) if name in self._values else None
            if idx is None:
                raise UnknownVariable(f"{name} is not in {self.domain.describe()}")
            stride = 1
            for v in variables[idx + 1:]:
                stride *= len(self.domain.values_for(v))
            width = len(self.domain.values_for(variables[idx]))
            codes = np.arange(self.S)
            erased = codes - ((codes // stride) % width) * stride
            key = np.empty(self.N, dtype=np.int64)
            for n in range(self.L + 1):
                lo, hi = self.base[n], self.base[n + 1]
                acc = np.zeros(hi - lo, dtype=np.int64)
                for t in range(n + 1):
                    acc = acc * self.S + erased[self.pos[lo:hi, t]]
                key[lo:hi] = lo + acc
            self._groups[name] = key
        return key

    def exists(self, name: str, body):
        key = self.group_key(name)
        hit = np.zeros(self.N, dtype=bool)
        np.logical_or.at(hit, key, body)
        return hit[key]

    def reflected(self, mask):
        """Vector of the semantic reflection: interval i gets the value of rev(i)."""
        return mask[self.rev]


@lru_cache(maxsize=32)
def _universe(domain: Domain, cfg: EvalConfig) -> Universe:
    return Universe(domain, cfg)


def universe(domain: Domain, cfg: EvalConfig | None = None) -> Universe:
    """Shared :class:`Universe` for ``domain`` (cached)."""
    if cfg is None or cfg.domain != domain:
        base = cfg or EvalConfig.for_domain(domain)
        cfg = EvalConfig(domain, base.default_int if base.default_int in domain.int_values
                         else EvalConfig.for_domain(domain).default_int, base.default_bool)
    return _universe(domain, cfg)


@dataclass(frozen=True)
class SatSummary:
    count: int
    total: int
