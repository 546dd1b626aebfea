"""Reflection-law catalog, formula pools, and the bounded law-suite runner.

Each law is a schema over formula holes ``F0, F1, ...`` and expression holes
``E0, ...``.  A law is certified semantically, independently of
:func:`~itlrev.reflection.reflect_formula`: the left side ``(template)^r`` is
the template's satisfaction vector read through interval reversal, and on the
right side a reflected hole ``Fi^r`` is bound to the hole's vector read through
reversal.  The syntactic transformer is certified separately by comparing
``sat(reflect f)`` with ``sat(f)`` read through reversal.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .bounded import ExprHole, Hole, universe
from .intervals import Domain
from .reflection import fixed_length_var_laws, reflect_formula
from .semantics import EvalConfig
from .syntax import (
    EMPTY, SKIP, TRUE, And, Apply, Assign, Box, BoxA, BoxI, Chop, ChopStar, ConstInt,
    Diamond, DiamondA, DiamondI, Exists, Fin, FinVar, Gets, Halt, If, Implies, Init,
    InitOnly, Keep, Len, More, Next, NextVar, Not, PastAssign, Pred, Prev, PrevVar,
    TempAssign, UnitAssign, Var, While, WNext, WPrev, apply, bool_var, int_var,
)

A = int_var("A")
Q = bool_var("Q")
REFERENCE_DOMAIN = Domain((A, Q), (0, 1, 2), 3)

F = [Hole(f"F{i}") for i in range(3)]
Fr = [Hole(f"F{i}r") for i in range(3)]
E = [ExprHole(f"E{i}", A.sort) for i in range(2)]
Er = [ExprHole(f"E{i}r", A.sort) for i in range(2)]


@dataclass(frozen=True)
class Law:
    """``(template)^r`` is equivalent to ``rhs``; holes ending in ``r`` are reflected."""

    id: str
    group: str
    template: object
    rhs: object
    formula_holes: int = 0
    expr_holes: int = 0
    is_expr: bool = False


def _law(id, group, template, rhs, nf=0, ne=0, is_expr=False):
    return Law(id, group, template, rhs, nf, ne, is_expr)


# ---------------------------------------------------------------- catalog

KERNEL_LAWS = (
    _law("R0", "kernel", TRUE, TRUE),
    _law("R1", "kernel", Not(F[0]), Not(Fr[0]), 1),
    _law("R2", "kernel", And(F[0], F[1]), And(Fr[0], Fr[1]), 2),
    _law("R3", "kernel", SKIP, SKIP),
    _law("R4", "kernel", Chop(F[0], F[1]), Chop(Fr[1], Fr[0]), 2),
    _law("R5", "kernel", ChopStar(F[0]), ChopStar(Fr[0]), 1),
    _law("R6", "kernel", Pred(Apply("=", (E[0], E[1]))), Pred(Apply("=", (Er[0], Er[1]))), 0, 2),
    _law("R7", "kernel", Exists(A, F[0]), Exists(A, Fr[0]), 1),
)

EXPR_LAWS = (
    _law("ER0", "expression", ConstInt(1), ConstInt(1), is_expr=True),
    _law("ER1", "expression", Var(A), FinVar(A), is_expr=True),
    _law("ER2", "expression", FinVar(A), Var(A), is_expr=True),
    _law("ER3", "expression", Apply("+", (E[0], E[1])), Apply("+", (Er[0], Er[1])), 0, 2, True),
    _law("ER4", "expression", NextVar(A), PrevVar(A), is_expr=True),
    _law("ER5", "expression", PrevVar(A), NextVar(A), is_expr=True),
)

DERIVED_LAWS = (
    _law("empty", "derived", EMPTY, EMPTY),
    _law("more", "derived", More(), More()),
    _law("next", "derived", Next(F[0]), Prev(Fr[0]), 1),
    _law("prev", "derived", Prev(F[0]), Next(Fr[0]), 1),
    _law("wnext", "derived", WNext(F[0]), WPrev(Fr[0]), 1),
    _law("wprev", "derived", WPrev(F[0]), WNext(Fr[0]), 1),
    _law("diamond", "derived", Diamond(F[0]), DiamondI(Fr[0]), 1),
    _law("diamondi", "derived", DiamondI(F[0]), Diamond(Fr[0]), 1),
    _law("box", "derived", Box(F[0]), BoxI(Fr[0]), 1),
    _law("boxi", "derived", BoxI(F[0]), Box(Fr[0]), 1),
    _law("diamonda", "derived", DiamondA(F[0]), DiamondA(Fr[0]), 1),
    _law("boxa", "derived", BoxA(F[0]), BoxA(Fr[0]), 1),
)

CONSTRUCT_LAWS = (
    _law("assign", "construct", Assign(A, E[0]), TempAssign(A, Er[0]), 0, 1),
    _law("temp-assign", "construct", TempAssign(A, E[0]), Assign(A, Er[0]), 0, 1),
    _law("unit-assign", "construct", UnitAssign(A, E[0]), PastAssign(A, Er[0]), 0, 1),
    _law("past-assign", "construct", PastAssign(A, E[0]), UnitAssign(A, Er[0]), 0, 1),
    _law("gets", "construct", Gets(A, E[0]), BoxA(Implies(SKIP, Assign(A, Er[0]))), 0, 1),
    _law("if", "construct", If(F[0], F[1], F[2]), If(Fr[0], Fr[1], Fr[2]), 3),
    *(_law(f"len({n})", "construct", Len(n), Len(n)) for n in range(4)),
    _law("init", "construct", Init(F[0]), Fin(F[0]), 1),
    _law("fin", "construct", Fin(F[0]), Init(F[0]), 1),
    _law("halt", "construct", Halt(F[0]), InitOnly(Fr[0]), 1),
    _law("initonly", "construct", InitOnly(F[0]), Halt(Fr[0]), 1),
    _law("keep", "construct", Keep(F[0]), Keep(Fr[0]), 1),
    _law("init-while", "construct", And(Init(F[2]), While(F[0], F[1])),
         And(Fin(F[2]), And(ChopStar(And(Fr[0], Fr[1])), Init(Not(F[0])))), 3),
)

ALL_LAWS = KERNEL_LAWS + EXPR_LAWS + DERIVED_LAWS + CONSTRUCT_LAWS


# ---------------------------------------------------------------- pools


def _eq(a, b):
    return Pred(apply("=", a, b))


ATOMS = (_eq(Var(A), 0), Pred(apply("<", Var(A), 2)), Pred(Var(Q)), SKIP, EMPTY)


def kernel_pool(depth: int = 3, samples: int = 400, seed: int = 7, atoms=ATOMS) -> list:
    """Kernel formulas over ``atoms``: every formula up to depth 1, then seeded
    samples at each deeper level so every constructor appears at depth ``depth``."""
    rng = random.Random(seed)
    levels = [list(atoms) + [TRUE]]

    def build(kind, pick):
        if kind == "not":
            return Not(pick())
        if kind == "and":
            return And(pick(), pick())
        if kind == "chop":
            return Chop(pick(), pick())
        if kind == "star":
            return ChopStar(pick())
        return Exists(A, pick())

    kinds = ("not", "and", "chop", "star", "exists")
    base = levels[0]
    lvl1 = []
    for x in base:
        lvl1 += [Not(x), ChopStar(x), Exists(A, x)]
        lvl1 += [And(x, y) for y in base] + [Chop(x, y) for y in base]
    levels.append(lvl1)
    for d in range(2, depth + 1):
        below = levels[d - 1]
        lower = [g for lv in levels[:d] for g in lv]
        out = []
        for i in range(samples):
            kind = kinds[i % len(kinds)]
            # at least one argument from the level just below keeps the depth exact
            picks = iter([rng.choice(below)] + [rng.choice(lower) for _ in range(2)])
            g = build(kind, lambda: next(picks))
            if kind in ("and", "chop") and rng.random() < 0.5:
                g = type(g)(g.right, g.left)
            out.append(g)
        levels.append(out)
    seen = {}
    for lv in levels:
        for g in lv:
            seen.setdefault(g, None)
    return list(seen)


def derived_pool(seed: int = 11, size: int = 150) -> list:
    """Formulas built from derived constructs and programming constructs."""
    rng = random.Random(seed)
    base = kernel_pool(depth=1)
    exprs = expr_pool()
    unary = (Next, WNext, Prev, WPrev, Diamond, Box, DiamondI, BoxI, DiamondA, BoxA,
             Fin, Init, Halt, Keep, InitOnly)
    assigns = (Assign, UnitAssign, TempAssign, PastAssign, Gets)
    out = []
    for i in range(size):
        r = i % 4
        if r == 0:
            out.append(rng.choice(unary)(rng.choice(base)))
        elif r == 1:
            out.append(rng.choice(assigns)(A, rng.choice(exprs)))
        elif r == 2:
            out.append(If(rng.choice(base), rng.choice(base), rng.choice(base)))
        else:
            out.append(And(Init(rng.choice(ATOMS[:3])), While(rng.choice(ATOMS[:3]), And(SKIP, rng.choice(base)))))
    out += [Len(n) for n in range(4)] + [EMPTY, More()]
    return list(dict.fromkeys(out))


def expr_pool() -> list:
    a, n, f, p = Var(A), NextVar(A), FinVar(A), PrevVar(A)
    return [ConstInt(0), ConstInt(2), a, n, f, p, apply("+", a, 1), apply("-", f, n),
            apply("*", p, 2), apply("+", a, n), apply("mod", f, 2), apply("-", 2, p)]


def exec_pool() -> list:
    """Specifications in programming style over ``A`` and ``Q``: an initial
    state, a behaviour for ``A`` and one for ``Q``.  Most are deterministic once
    the length is fixed, which makes them useful for the engine checks."""
    a, q = Var(A), Var(Q)
    inits = [_eq(a, 0), _eq(a, 1), And(_eq(a, 2), Pred(q)),
             And(_eq(a, 0), Pred(apply("not", q)))]
    a_parts = [
        Gets(A, apply("+", a, 1)),
        Gets(A, a),
        Gets(A, apply("-", 2, a)),
        While(Pred(apply("<", a, 2)), And(SKIP, UnitAssign(A, apply("+", a, 1)))),
        If(Pred(q), Gets(A, a), Gets(A, apply("mod", apply("+", a, 1), 3))),
        Chop(UnitAssign(A, apply("+", a, 1)), Box(_eq(a, apply("+", PrevVar(A), 0)))),
        Keep(_eq(NextVar(A), apply("mod", apply("*", a, 2), 3))),
        Exists(int_var("B"), And(_eq(Var(int_var("B")), a),
                                 Gets(int_var("B"), apply("+", Var(int_var("B")), 1)))),
        Box(Pred(apply("<=", a, 2))),
        Halt(_eq(a, 2)),
    ]
    q_parts = [Gets(Q, q), Gets(Q, apply("not", q)), Box(_eq(q, apply("<", a, 2))),
               TempAssign(Q, apply("=", FinVar(A), a)), TRUE]
    out = []
    for i in inits:
        for pa in a_parts:
            for pq in q_parts:
                out.append(And(i, And(pa, pq)))
    return out


# ---------------------------------------------------------------- running


@dataclass
class LawResult:
    law: Law
    instances: int
    passed: bool
    counterexample: object = None
    instance: object = None
    bound: str = ""


def _instances(law: Law, formulas, exprs, rng, max_instances):
    f_sets = [()]
    if law.formula_holes:
        all_f = itertools.product(formulas, repeat=law.formula_holes)
        total = len(formulas) ** law.formula_holes
        if total <= max_instances:
            f_sets = list(all_f)
        else:
            f_sets = [tuple(rng.choice(formulas) for _ in range(law.formula_holes))
                      for _ in range(max_instances)]
    e_sets = [()]
    if law.expr_holes:
        e_sets = list(itertools.product(exprs, repeat=law.expr_holes))
    for fs in f_sets:
        for es in e_sets:
            yield fs, es


def check_law(law: Law, u, formulas, exprs, seed=0, max_instances=2000) -> LawResult:
    """Certify one law schema on universe ``u`` over pool instantiations."""
    rng = random.Random(seed)
    count = 0
    sat_cache = {}
    val_cache = {}

    def sat(f):
        v = sat_cache.get(f)
        if v is None:
            v = sat_cache[f] = u.sat(f)
        return v

    def val(e):
        v = val_cache.get(e)
        if v is None:
            v = val_cache[e] = u.values(e)
        return v

    for fs, es in _instances(law, formulas, exprs, rng, max_instances):
        env = {}
        for i, f in enumerate(fs):
            env[f"F{i}"] = sat(f)
            env[f"F{i}r"] = sat(f)[u.rev]
        for i, e in enumerate(es):
            env[f"E{i}"] = val(e)
            env[f"E{i}r"] = val(e)[u.rev]
        if law.is_expr:
            lhs = u.values(law.template, env)[u.rev]
            rhs = u.values(law.rhs, env)
        else:
            lhs = u.sat(law.template, env)[u.rev]
            rhs = u.sat(law.rhs, env)
        count += 1
        diff = lhs != rhs
        if diff.any():
            idx = int(np.flatnonzero(diff)[0])
            return LawResult(law, count, False, u.interval(idx), (fs, es), u.domain.describe())
    return LawResult(law, count, True, None, None, u.domain.describe())


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)
    transformer_checked: int = 0
    transformer_failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.results) and not self.transformer_failures

    def rows(self):
        """One row per law: id, group, bound, instances, PASS/FAIL, counterexample."""
        out = []
        for r in self.results:
            cex = "" if r.counterexample is None else repr(r.counterexample)
            out.append((r.law.id, r.law.group, r.bound, str(r.instances),
                        "PASS" if r.passed else "FAIL", cex))
        return out


def run_law_suite(domain: Domain = REFERENCE_DOMAIN, cfg: EvalConfig | None = None,
                  depth: int = 3, samples: int = 400, seed: int = 7,
                  max_instances: int = 2000) -> SuiteReport:
    """Check every law plus the transformer itself over the formula pool."""
    start = time.perf_counter()
    domain = domain.with_vars((A, Q))
    u = universe(domain, cfg)
    formulas = kernel_pool(depth, samples, seed)
    exprs = expr_pool()
    report = SuiteReport()
    for law in ALL_LAWS:
        report.results.append(check_law(law, u, formulas, exprs, seed, max_instances))
    for name, law in fixed_length_var_laws(A):
        ok = bool(u.sat(law).all())
        bad = None if ok else u.first(~u.sat(law))
        report.results.append(LawResult(Law(name, "fixed-length", law, law), 1, ok, bad,
                                        None, domain.describe()))
    for f in formulas + derived_pool():
        report.transformer_checked += 1
        if not np.array_equal(u.sat(reflect_formula(f)), u.sat(f)[u.rev]):
            report.transformer_failures.append(f)
    report.seconds = time.perf_counter() - start
    return report
