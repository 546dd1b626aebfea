"""Stepwise execution of formulas, first state first or last state first.

The engine works by exact progression.  For a formula ``g`` and the state ``s``
at the near end of the interval, ``step(g, s)`` is a formula that holds on the
interval minus that state exactly when ``g`` held on the whole interval (given
that the interval has at least two states).  Whether ``g`` may stop at ``s``
is decided by evaluating ``g`` on the one-state interval ``[s]``.  Forward runs
take the near end to be the first state; backward runs take it to be the last
state, and every rule is mirrored (``fin.V`` plays the role of ``V``, ``prev.V``
of ``V'``, and chop consults its right operand first).

Each step the engine enumerates the candidate states for the near end: values
from the configured domain plus values suggested by equations in the residual
formula, pruned by a three-valued check of what the residual says about that
one state and by a short lookahead.  The run stops at the first state where the
residual allows the interval to end.  If candidates that survive pruning
disagree on a tracked variable the run reports ``Nondeterministic``; if none
survive it reports ``Deadlock``.  Every completed trace is re-checked against
the input formula with :func:`~itlrev.semantics.eval_formula`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .errors import AuditFailure, Contradiction, EvaluationError, NotExecutable
from .intervals import Domain, Interval, State
from .reflection import reflect_formula
from .semantics import EvalConfig, eval_formula
from .syntax import (
    EMPTY, FALSE, OPERATORS, SKIP, TRUE, And, Apply, Chop, ChopStar, ConstBool, ConstInt,
    Empty, Exists, Expr, FinVar, Formula, Iff, Implies, Init, Len, More, NextVar, Not, Or,
    Pred, PrevVar, Skip, Sort, TrueF, Var, VarName, conj, free_vars, subexprs, unfold,
)

DEFAULT_ENGINE_INTS = tuple(range(-4, 17))
MAX_RESIDUAL_NODES = 50_000
MAX_BRANCHES = 512


class Termination(enum.Enum):
    COMPLETED = "Completed"
    LENGTH_BOUND = "LengthBound"
    DEADLOCK = "Deadlock"
    NONDETERMINISTIC = "Nondeterministic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Direction:
    name: str
    head: type      # the near-end state
    far: type       # the far-end state
    near2: type     # the state next to the near end
    far2: type      # the state next to the far end

    @property
    def forward(self):
        return self.name == "forward"

    def split(self, g: Chop):
        return (g.left, g.right) if self.forward else (g.right, g.left)

    def chop(self, near, far):
        return mk_chop(near, far) if self.forward else mk_chop(far, near)


FORWARD = Direction("forward", Var, FinVar, NextVar, PrevVar)
BACKWARD = Direction("backward", FinVar, Var, PrevVar, NextVar)


# ---------------------------------------------------------------- construction

def _is_false(g):
    return type(g) is Pred and type(g.expr) is ConstBool and not g.expr.value


def mk_not(g):
    if g is TRUE or type(g) is TrueF:
        return FALSE
    if _is_false(g):
        return TRUE
    if type(g) is Not:
        return g.arg
    return Not(g)


def _collect(kind, items):
    out = {}
    for g in items:
        if type(g) is kind:
            for x in _collect(kind, (g.left, g.right)):
                out.setdefault(x, None)
        else:
            out.setdefault(g, None)
    return list(out)


def _fold(kind, items):
    out = items[0]
    for g in items[1:]:
        out = kind(out, g)
    return out


def mk_and(*items):
    parts = [g for g in _collect(And, items) if type(g) is not TrueF]
    if any(_is_false(g) for g in parts):
        return FALSE
    present = set(parts)
    if any(type(g) is Not and g.arg in present for g in parts):
        return FALSE
    if EMPTY in present and SKIP in present:
        return FALSE
    return _fold(And, parts) if parts else TRUE


def mk_or(*items):
    parts = [g for g in _collect(Or, items) if not _is_false(g)]
    if any(type(g) is TrueF for g in parts):
        return TRUE
    present = set(parts)
    if any(type(g) is Not and g.arg in present for g in parts):
        return TRUE
    # share a common continuation: (a;X) or (b;X) == (a or b);X, and mirror
    merged, by_right, by_left = [], {}, {}
    for g in parts:
        if type(g) is Chop:
            if g.right in by_right:
                i = by_right[g.right]
                merged[i] = Chop(mk_or(merged[i].left, g.left), g.right)
                continue
            if g.left in by_left:
                i = by_left[g.left]
                merged[i] = Chop(g.left, mk_or(merged[i].right, g.right))
                continue
            by_right[g.right] = by_left[g.left] = len(merged)
        merged.append(g)
    return _fold(Or, merged) if merged else FALSE


def mk_chop(left, right):
    if _is_false(left) or _is_false(right):
        return FALSE
    if type(left) is Empty:
        return right
    if type(right) is Empty:
        return left
    if type(left) is TrueF and type(right) is TrueF:
        return TRUE
    return Chop(left, right)


def mk_star(g):
    if _is_false(g) or type(g) is Empty:
        return EMPTY
    return ChopStar(g)


def mk_pred(e: Expr) -> Formula:
    if not any(type(x) in (Var, NextVar, FinVar, PrevVar) for x in subexprs(e)):
        return TRUE if _const_eval(e) else FALSE
    return Pred(e)


def _const_eval(e):
    t = type(e)
    if t is ConstInt or t is ConstBool:
        return e.value
    return OPERATORS[e.op].fn(*(_const_eval(a) for a in e.args))


# ---------------------------------------------------------------- lowering


def lower(f: Formula, memo=None) -> Formula:
    """Rewrite into the engine's constructs: true, predicates, not, and, or,
    skip, empty, chop, chop-star and exists."""
    memo = {} if memo is None else memo
    hit = memo.get(f)
    if hit is not None:
        return hit
    t = type(f)
    if t in (TrueF, Skip, Empty, Pred):
        out = f
    elif t is More:
        out = Not(EMPTY)
    elif t is Not:
        out = mk_not(lower(f.arg, memo))
    elif t is ChopStar:
        out = mk_star(lower(f.arg, memo))
    elif t is And:
        out = mk_and(lower(f.left, memo), lower(f.right, memo))
    elif t is Or:
        out = mk_or(lower(f.left, memo), lower(f.right, memo))
    elif t is Chop:
        out = mk_chop(lower(f.left, memo), lower(f.right, memo))
    elif t is Exists:
        body = lower(f.body, memo)
        # a quantifier over a variable the body never reads changes nothing
        vacuous = all(v.name != f.var.name for v in free_vars(body))
        out = body if vacuous else Exists(f.var, body)
    elif t is Implies:
        out = mk_or(mk_not(lower(f.left, memo)), lower(f.right, memo))
    elif t is Iff:
        a, b = lower(f.left, memo), lower(f.right, memo)
        out = mk_or(mk_and(a, b), mk_and(mk_not(a), mk_not(b)))
    elif t is Len:
        out = EMPTY
        for _ in range(f.n):
            out = Chop(SKIP, out)
    else:
        out = lower(unfold(f), memo)
    memo[f] = out
    return out


def _rename_expr(e, old, new):
    t = type(e)
    if t in (Var, NextVar, FinVar, PrevVar):
        return t(new) if e.var.name == old.name else e
    if t is Apply:
        return Apply(e.op, tuple(_rename_expr(a, old, new) for a in e.args))
    return e


def _rename(f, old: VarName, new: VarName):
    t = type(f)
    if t is Pred:
        return Pred(_rename_expr(f.expr, old, new))
    if t is Exists:
        return f if f.var.name == old.name else Exists(f.var, _rename(f.body, old, new))
    if t in (Not, ChopStar):
        return t(_rename(f.arg, old, new))
    if t in (And, Or, Chop):
        return t(_rename(f.left, old, new), _rename(f.right, old, new))
    return f


def _has_exists(f):
    t = type(f)
    if t is Exists:
        return True
    if t in (Not, ChopStar):
        return _has_exists(f.arg)
    if t in (And, Or, Chop):
        return _has_exists(f.left) or _has_exists(f.right)
    return False


def hoist_exists(f: Formula, taken=()):
    """Pull every quantifier out through and/or/chop, renaming its variable to a
    fresh hidden ``V#n``.  Returns the quantifier-free body and the hidden variables."""
    used = {v.name for v in taken}
    hidden = []

    def fresh(var):
        for n in itertools.count(1):
            name = f"{var.name.split('#')[0]}#{n}"
            if name not in used:
                used.add(name)
                v = VarName(name, var.sort)
                hidden.append(v)
                return v

    def walk(g):
        t = type(g)
        if t is Exists:
            return walk(_rename(g.body, g.var, fresh(g.var)))
        if t in (And, Or, Chop):
            left, right = walk(g.left), walk(g.right)
            return {And: mk_and, Or: mk_or, Chop: mk_chop}[t](left, right)
        if _has_exists(g):
            raise NotExecutable("a local variable under negation or chop-star cannot be executed")
        return g

    return walk(f), tuple(hidden)


# ---------------------------------------------------------------- three-valued reads

_UNKNOWN = object()


def _read(e, s, d: Direction, cfg, one_state: bool):
    """Value of ``e`` given near-end state ``s`` (a dict, maybe partial).

    With ``one_state`` the interval is ``[s]``; otherwise only near-end reads are
    known.  Returns ``_UNKNOWN`` when the value cannot be determined.
    """
    t = type(e)
    if t is ConstInt or t is ConstBool:
        return e.value
    if t is Apply:
        args = []
        for a in e.args:
            v = _read(a, s, d, cfg, one_state)
            if v is _UNKNOWN:
                return _UNKNOWN
            args.append(v)
        return OPERATORS[e.op].fn(*args)
    if t is d.head or (one_state and t is d.far):
        return s.get(e.var.name, _UNKNOWN)
    if one_state:
        return cfg.default_for(e.var)
    return _UNKNOWN


def _k_not(x):
    return None if x is None else not x


def empty_ok(g, s, d: Direction, cfg):
    """Truth of ``g`` on the one-state interval ``[s]``; None if ``s`` is too partial."""
    t = type(g)
    if t is TrueF or t is Empty or t is ChopStar:
        return True
    if t is Skip:
        return False
    if t is Pred:
        v = _read(g.expr, s, d, cfg, True)
        return None if v is _UNKNOWN else bool(v)
    if t is Not:
        return _k_not(empty_ok(g.arg, s, d, cfg))
    if t is And or t is Chop:
        a = empty_ok(g.left, s, d, cfg)
        if a is False:
            return False
        b = empty_ok(g.right, s, d, cfg)
        if b is False:
            return False
        return True if a and b else None
    if t is Or:
        a = empty_ok(g.left, s, d, cfg)
        if a is True:
            return True
        b = empty_ok(g.right, s, d, cfg)
        if b is True:
            return True
        return False if a is False and b is False else None
    raise NotExecutable(f"unexpected construct {t.__name__}")


def head(g, s, d: Direction, cfg):
    """True if every interval whose near end is ``s`` satisfies ``g``, False if none
    does, None if it depends on more than that state."""
    t = type(g)
    if t is TrueF:
        return True
    if t is Skip or t is Empty:
        return None
    if t is Pred:
        v = _read(g.expr, s, d, cfg, False)
        return None if v is _UNKNOWN else bool(v)
    if t is Not:
        return _k_not(head(g.arg, s, d, cfg))
    if t is And:
        a = head(g.left, s, d, cfg)
        if a is False:
            return False
        b = head(g.right, s, d, cfg)
        if b is False:
            return False
        return True if a and b else None
    if t is Or:
        a = head(g.left, s, d, cfg)
        if a is True:
            return True
        b = head(g.right, s, d, cfg)
        if b is True:
            return True
        return False if a is False and b is False else None
    if t is Chop:
        near, far = d.split(g)
        if head(near, s, d, cfg) is False:
            return False
        if empty_ok(near, s, d, cfg) is True and head(far, s, d, cfg) is True:
            return True
        return None
    if t is ChopStar:
        return True if head(g.arg, s, d, cfg) is True else None
    raise NotExecutable(f"unexpected construct {t.__name__}")


# ---------------------------------------------------------------- progression


def _subst(e, s, d: Direction, last_step: bool):
    t = type(e)
    if t is d.head:
        v = s[e.var.name]
        return ConstBool(v) if e.var.sort is Sort.BOOL else ConstInt(v)
    if t is d.near2:
        return d.head(e.var)
    if last_step and t is d.far2:
        v = s[e.var.name]
        return ConstBool(v) if e.var.sort is Sort.BOOL else ConstInt(v)
    if t is Apply:
        return Apply(e.op, tuple(_subst(a, s, d, last_step) for a in e.args))
    return e


def step(g, s, d: Direction, cfg, memo=None):
    """Residual of ``g`` after consuming near-end state ``s`` (a full dict)."""
    memo = {} if memo is None else memo
    hit = memo.get(g)
    if hit is not None:
        return hit
    t = type(g)
    if t is TrueF:
        out = TRUE
    elif t is Skip:
        out = EMPTY
    elif t is Empty:
        out = FALSE
    elif t is Pred:
        more = mk_pred(_subst(g.expr, s, d, False))
        if any(type(x) is d.far2 for x in subexprs(g.expr)):
            # with one state left, the state next to the far end is the one consumed
            last = mk_pred(_subst(g.expr, s, d, True))
            out = mk_or(mk_and(EMPTY, last), mk_and(mk_not(EMPTY), more))
        else:
            out = more
    elif t is Not:
        out = mk_not(step(g.arg, s, d, cfg, memo))
    elif t is And:
        out = mk_and(step(g.left, s, d, cfg, memo), step(g.right, s, d, cfg, memo))
    elif t is Or:
        out = mk_or(step(g.left, s, d, cfg, memo), step(g.right, s, d, cfg, memo))
    elif t is Chop:
        near, far = d.split(g)
        out = d.chop(step(near, s, d, cfg, memo), far)
        if empty_ok(near, s, d, cfg):
            out = mk_or(out, step(far, s, d, cfg, memo))
    elif t is ChopStar:
        out = d.chop(step(g.arg, s, d, cfg, memo), g)
    else:
        raise NotExecutable(f"unexpected construct {t.__name__}")
    memo[g] = out
    return out


def size(g) -> int:
    seen = set()
    stack = [g]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        t = type(x)
        if t in (Not, ChopStar):
            stack.append(x.arg)
        elif t in (And, Or, Chop):
            stack += [x.left, x.right]
    return len(seen)


# ---------------------------------------------------------------- candidate states


def _hints(g, var: VarName, s, d: Direction, cfg):
    """Values for ``var`` suggested by equations ``var = e`` in ``g`` whose other
    side can be read from ``s`` (near end, or the whole of a one-state interval)."""
    out = []
    seen = set()
    stack = [g]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        t = type(x)
        if t in (Not, ChopStar):
            stack.append(x.arg)
        elif t in (And, Or, Chop):
            stack += [x.left, x.right]
        elif t is Pred and type(x.expr) is Apply and x.expr.op == "=":
            l, r = x.expr.args
            for lhs, rhs in ((l, r), (r, l)):
                if type(lhs) in (d.head, d.far) and lhs.var.name == var.name:
                    try:
                        v = _read(rhs, s, d, cfg, True)
                    except EvaluationError:
                        continue
                    if v is not _UNKNOWN and type(v) is type(cfg.default_for(var)) \
                            and v not in out:
                        out.append(v)
    return out


class _Search:
    def __init__(self, variables, domain: Domain, d: Direction, cfg, lookahead: int):
        self.variables = variables
        self.domain = domain
        self.d = d
        self.cfg = cfg
        self.lookahead = lookahead
        self.steps = {}

    def values(self, var):
        return self.domain.values_for(var)

    def candidates(self, g):
        """Full states ``s`` (dicts) with ``head(g, s)`` not False."""
        d, cfg = self.d, self.cfg

        def rec(s, todo):
            if not todo:
                yield dict(s)
                return
            pick, hinted = todo[0], []
            for v in todo:
                hinted = _hints(g, v, s, d, cfg)
                if hinted:
                    pick = v
                    break
            rest = [v for v in todo if v is not pick]
            vals = list(self.values(pick)) + [h for h in hinted if h not in self.values(pick)]
            for x in vals:
                s[pick.name] = x
                try:
                    ok = head(g, s, d, cfg)
                except EvaluationError:
                    ok = None
                if ok is not False:
                    yield from rec(s, rest)
                del s[pick.name]

        yield from rec({}, list(self.variables))

    def step(self, g, s):
        key = (g, tuple(sorted(s.items())))
        hit = self.steps.get(key)
        if hit is None:
            hit = self.steps[key] = step(g, s, self.d, self.cfg)
            if size(hit) > MAX_RESIDUAL_NODES:
                raise NotExecutable("the residual formula grows without bound")
        return hit

    def viable(self, g, s, depth):
        if empty_ok(g, s, self.d, self.cfg):
            return True
        r = self.step(g, s)
        if _is_false(r):
            return False
        if depth <= 0:
            return True
        return any(self.viable(r, s2, depth - 1) for s2 in self.candidates(r))


# ---------------------------------------------------------------- reduction API


@dataclass(frozen=True)
class ReductionState:
    """One normal-form step: what the current state must be, whether the interval
    may end here, and the formula left for the rest of the interval."""

    now_constraints: tuple
    residual: Formula | None
    done_allowed: bool
    more_required: bool
    state: State | None = None


def _prepare(f: Formula, d: Domain | None, cfg: EvalConfig | None):
    body, hidden = hoist_exists(lower(f), taken=free_vars(f))
    tracked = tuple(sorted(free_vars(f), key=lambda v: v.name))
    variables = tracked + hidden
    if d is None:
        d = Domain(variables, DEFAULT_ENGINE_INTS, 0)
    else:
        d = d.with_vars(variables)
    if cfg is None or cfg.default_int not in d.int_values:
        cfg = EvalConfig.for_domain(d) if cfg is None else EvalConfig(
            d, d.int_values[0], cfg.default_bool)
    return body, tracked, hidden, d, cfg


def reduce_step(f: Formula, s=None, d: Domain | None = None, cfg: EvalConfig | None = None,
                direction: Direction = FORWARD) -> ReductionState:
    """Split ``f`` into constraints on the near-end state and a residual.

    With ``s`` omitted the near-end state is searched for and must be unique;
    otherwise ``s`` (a mapping of variable names) is used as given.
    """
    body, tracked, hidden, d, cfg = _prepare(f, d, cfg)
    variables = tracked + hidden
    search = _Search(variables, d, direction, cfg, 1)
    if s is None:
        states = [c for c in search.candidates(body) if search.viable(body, c, 1)]
        if not states:
            raise Contradiction("no state satisfies the constraints on the current state")
        if len(states) > 1:
            raise NotExecutable("the current state is not determined by the formula")
        s = states[0]
    else:
        s = {getattr(k, "name", k): v for k, v in dict(s).items()}
        if head(body, s, direction, cfg) is False:
            raise Contradiction("the given state violates the formula")
    pinned = tuple((v, s[v.name]) for v in variables if v.name in s)
    ok = bool(empty_ok(body, s, direction, cfg))
    r = search.step(body, s)
    residual = None if _is_false(r) else r
    state = State(variables, [s[v.name] for v in variables]) \
        if all(v.name in s for v in variables) else None
    return ReductionState(pinned, residual, ok, (not ok) and residual is not None, state)


# ---------------------------------------------------------------- runs


@dataclass(frozen=True)
class RunResult:
    trace: Interval | None
    steps: int
    terminated: Termination
    full_trace: Interval | None = None
    message: str = ""
    audited: bool = False

    @property
    def completed(self):
        return self.terminated is Termination.COMPLETED


@dataclass
class _Alt:
    g: Formula
    state: dict | None
    parent: "_Alt | None"


def _path(alt):
    out = []
    while alt is not None and alt.state is not None:
        out.append(alt.state)
        alt = alt.parent
    return out[::-1]


def _run(f: Formula, direction: Direction, d, cfg, max_steps: int, lookahead: int,
         audit: bool) -> RunResult:
    body, tracked, hidden, d, cfg = _prepare(f, d, cfg)
    variables = tracked + hidden
    search = _Search(variables, d, direction, cfg, lookahead)

    def build(states):
        if not states:
            return None, None
        if not direction.forward:
            states = states[::-1]
        full = Interval(tuple(State(variables, [s[v.name] for v in variables]) for s in states))
        if not tracked:
            return full, full
        short = Interval(tuple(st.restrict(tracked) for st in full.states))
        return short, full

    frontier = [_Alt(body, None, None)]
    for i in itertools.count():
        options = []
        for alt in frontier:
            for s in search.candidates(alt.g):
                if search.viable(alt.g, s, lookahead):
                    options.append((alt, s))
        if not options:
            trace, full = build(_path(frontier[0]))
            return RunResult(trace, max(i - 1, 0), Termination.DEADLOCK, full,
                             f"no state satisfies the formula at position {i}")
        projections = {}
        for alt, s in options:
            projections.setdefault(tuple(s[v.name] for v in tracked), s)
        if len(projections) > 1:
            a, b = list(projections.values())[:2]
            diff = [v.name for v in tracked if a[v.name] != b[v.name]]
            trace, full = build(_path(frontier[0]))
            return RunResult(trace, max(i - 1, 0), Termination.NONDETERMINISTIC, full,
                             f"at position {i} {', '.join(diff)} may take several values, "
                             f"e.g. {a[diff[0]]} or {b[diff[0]]}")
        stop = next(((alt, s) for alt, s in options
                     if empty_ok(alt.g, s, direction, cfg)), None)
        if stop is not None:
            trace, full = build(_path(_Alt(None, stop[1], stop[0])))
            if audit:
                # the hidden variables get the same fresh names as in _prepare
                g = hoist_exists(lower(f), taken=free_vars(f))[0] if hidden else f
                acfg = EvalConfig(d.with_vars(variables), cfg.default_int, cfg.default_bool)
                if not eval_formula(g, full, acfg):
                    raise AuditFailure(f"completed trace {full!r} does not satisfy the formula")
            return RunResult(trace, i, Termination.COMPLETED, full, "", audit)
        if i >= max_steps:
            trace, full = build(_path(_Alt(None, options[0][1], options[0][0])))
            return RunResult(trace, i, Termination.LENGTH_BOUND, full,
                             f"stopped after {max_steps} steps")
        nxt, seen = [], set()
        for alt, s in options:
            r = search.step(alt.g, s)
            key = (r, tuple(sorted(s.items())))
            if _is_false(r) or key in seen:
                continue
            seen.add(key)
            nxt.append(_Alt(r, s, alt))
        if len(nxt) > MAX_BRANCHES:
            raise NotExecutable("too many local-variable branches to follow")
        frontier = nxt
    raise AssertionError("unreachable")


def run_forward(f: Formula, d: Domain | None = None, cfg: EvalConfig | None = None,
                max_steps: int = 10_000, lookahead: int = 1, audit: bool = True) -> RunResult:
    """Generate a satisfying interval first state first."""
    return _run(f, FORWARD, d, cfg, max_steps, lookahead, audit)


def run_backward(f: Formula, d: Domain | None = None, cfg: EvalConfig | None = None,
                 max_steps: int = 10_000, lookahead: int = 1, audit: bool = True) -> RunResult:
    """Generate a satisfying interval last state first; the trace is returned in
    forward order."""
    return _run(f, BACKWARD, d, cfg, max_steps, lookahead, audit)


# ---------------------------------------------------------------- undo


def undo_compose(spec: Formula, k: int) -> Formula:
    """``(spec and len k) ; (spec^r and len k)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return Chop(And(spec, Len(k)), And(reflect_formula(spec), Len(k)))


@dataclass(frozen=True)
class UndoResult:
    run: RunResult
    cut: int | None
    restored: bool
    anchored_spec: Formula | None = None
    premises: tuple = field(default=())


def anchor(spec: Formula, state: State, variables) -> Formula:
    """``init(V1 = c1 and ...) and spec``: ``spec`` started from ``state``."""
    eqs = [Pred(Apply("=", (Var(v), ConstBool(state[v]) if v.sort is Sort.BOOL
                            else ConstInt(state[v])))) for v in variables]
    return And(Init(conj(*eqs)), spec)


def run_undo(good: Formula, bad: Formula, k: int, d: Domain | None = None,
             cfg: EvalConfig | None = None, max_steps: int = 10_000,
             check_premises: bool = True) -> UndoResult:
    """Run ``good ; (bad and len k) ; (bad^r and len k)`` forward and report whether
    the state reached by ``good`` is restored at the end.

    The premises (satisfiable, common prefix, common suffix) are checked on
    ``bad and len k`` started from the state where ``good`` ends, over a bounded
    domain covering the values the run visits.
    """
    from .errors import PremiseFailed
    from .executability import common_prefix, common_suffix
    from .semantics import satisfiable_bounded

    tracked = tuple(sorted(free_vars(good) | free_vars(bad), key=lambda v: v.name))
    # mention every tracked variable so the good run's states carry them all
    mention = conj(*(Pred(Apply("=", (Var(v), Var(v)))) for v in tracked))
    good_run = run_forward(And(good, mention), d, cfg, max_steps)
    if not good_run.completed:
        raise PremiseFailed("good", f"the good part did not complete: {good_run.terminated} "
                                    f"{good_run.message}")
    cut_state = good_run.trace.states[-1]
    spec = anchor(And(bad, Len(k)), cut_state, tracked)
    premises = []
    if check_premises:
        probe = run_forward(spec, d, cfg, max_steps)
        values = {x for st in ((probe.trace.states if probe.trace else ()) + (cut_state,))
                  for v, x in zip(st.variables, st.values) if v.sort is Sort.INT}
        base = tuple(d.int_values) if d is not None else (0, 1, 2)
        pd = Domain(tracked, tuple(sorted(values | set(base))), k)
        if satisfiable_bounded(spec, pd, cfg if cfg and cfg.domain == pd else None) is None:
            raise PremiseFailed("sat", f"bad and len({k}) cannot run from the cut state "
                                       f"within {pd.describe()}")
        premises.append(("sat", True))
        if not common_prefix(spec, tracked, pd):
            raise PremiseFailed("prefix", "bad has no common prefix value trace from the cut state")
        premises.append(("prefix", True))
        if not common_suffix(spec, tracked, pd):
            raise PremiseFailed("suffix", "bad has no common suffix value trace from the cut state")
        premises.append(("suffix", True))
    run = run_forward(Chop(good, undo_compose(bad, k)), d, cfg, max_steps)
    if not run.completed:
        return UndoResult(run, None, False, spec, tuple(premises))
    cut = good_run.trace.length
    states = run.trace.states
    restored = states[cut].restrict(tracked) == states[-1].restrict(tracked) \
        and states[cut].restrict(tracked) == cut_state.restrict(tracked)
    return UndoResult(run, cut, restored, spec, tuple(premises))
