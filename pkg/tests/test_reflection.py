from hypothesis import given, settings

from itlrev.bounded import universe
from itlrev.intervals import Domain, interval
from itlrev.laws import A, Q, derived_pool
from itlrev.reflection import (
    check_fixed_length_var_laws, check_reflection_law, fixed_length_var_laws, reflect,
    reflect_expr, reflect_formula, reflected_on,
)
from itlrev.semantics import EvalConfig, eval_formula
from itlrev.syntax import (
    SKIP, TRUE, And, Apply, Assign, Box, BoxA, BoxI, Chop, ChopStar, ConstInt, Diamond,
    DiamondI, Fin, FinVar, Gets, Halt, Implies, Init, InitOnly, Not, NextVar, PastAssign, Pred,
    PrevVar, UnitAssign, Var, While, apply, desugar, is_kernel, well_sorted,
)

from strategies import DOMAIN, formulas

A0 = Pred(apply("=", Var(A), 0))


def test_expression_laws():
    assert reflect_expr(ConstInt(3)) == ConstInt(3)
    assert reflect_expr(Var(A)) == FinVar(A)
    assert reflect_expr(FinVar(A)) == Var(A)
    assert reflect_expr(NextVar(A)) == PrevVar(A)
    assert reflect_expr(PrevVar(A)) == NextVar(A)
    assert (reflect_expr(Apply("+", (Var(A), NextVar(A))))
            == Apply("+", (FinVar(A), PrevVar(A))))


def test_chop_swaps_and_reflects_operands():
    got = reflect_formula(Chop(SKIP, A0))
    assert got == Chop(Pred(apply("=", FinVar(A), 0)), SKIP)


def test_construct_duals():
    g = Pred(Var(Q))
    assert reflect_formula(Halt(g)) == InitOnly(reflect_formula(g))
    e = apply("+", Var(A), 1)
    assert reflect_formula(UnitAssign(A, e)) == PastAssign(A, reflect_expr(e))
    assert reflect_formula(Gets(A, e)) == BoxA(Implies(SKIP, Assign(A, reflect_expr(e))))


def test_init_while_reflection():
    g, f0, f1 = A0, Pred(Var(Q)), SKIP
    got = reflect_formula(And(Init(g), While(f0, f1)))
    r = reflect_formula
    # init/fin arguments are read on a single state, where reflection changes nothing
    want = And(Fin(g), And(ChopStar(And(r(f0), r(f1))), Init(Not(f0))))
    assert got == want
    assert check_reflection_law(And(Init(g), While(f0, f1)), DOMAIN).holds


def test_box_duality_is_structural():
    assert reflect_formula(Box(A0)) == BoxI(reflect_formula(A0))
    assert reflect_formula(BoxI(A0)) == Box(reflect_formula(A0))
    assert reflect_formula(Diamond(A0)) == DiamondI(reflect_formula(A0))


def test_report_lists_laws_in_order():
    rep = reflect(Chop(SKIP, A0))
    assert rep.input == Chop(SKIP, A0)
    assert rep.output == reflect_formula(rep.input)
    assert rep.laws_applied[0] == "R4"
    assert {"R3", "R6", "ER1", "ER0"} <= set(rep.laws_applied)


def test_semantic_oracle_examples():
    assert check_reflection_law(SKIP, DOMAIN).holds
    f = Chop(A0, Pred(apply("=", Var(A), 1)))
    assert check_reflection_law(f, DOMAIN).holds
    s = interval({A: 1}, {A: 0})
    assert eval_formula(reflect_formula(f), s) == eval_formula(f, interval({A: 0}, {A: 1}))
    assert reflected_on(f, s) == eval_formula(reflect_formula(f), s)


def test_wrong_reflection_would_be_caught():
    # a chop that is not swapped changes meaning; the oracle must notice
    f = Chop(A0, SKIP)
    u = universe(DOMAIN)
    assert (u.sat(Chop(reflect_formula(A0), SKIP)) != u.reflected(u.sat(f))).any()


def test_fixed_length_laws():
    assert check_fixed_length_var_laws(DOMAIN)
    assert len(fixed_length_var_laws(A)) == 3
    cfg = EvalConfig.for_domain(Domain((A,), (3, 8), 1))
    one = interval({A: 3})
    two = interval({A: 3}, {A: 8})
    (_, empty_law), (_, skip_next), (_, skip_prev) = fixed_length_var_laws(A)
    for s in (one, two):
        assert eval_formula(empty_law, s, cfg)
        assert eval_formula(skip_next, s, cfg)
        assert eval_formula(skip_prev, s, cfg)


def test_derived_route_matches_kernel_route():
    u = universe(DOMAIN)
    for f in derived_pool():
        assert (u.sat(reflect_formula(f)) == u.sat(reflect_formula(desugar(f)))).all(), f


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_closure_and_involution(f):
    g = reflect_formula(f)
    assert well_sorted(g)
    if is_kernel(f):
        assert is_kernel(g)
    u = universe(DOMAIN)
    assert (u.sat(reflect_formula(g)) == u.sat(f)).all()
    assert (u.sat(g) == u.reflected(u.sat(f))).all()


def test_true_is_fixed():
    assert reflect_formula(TRUE) == TRUE
