import pytest
from hypothesis import given, settings

from itlrev.bounded import universe
from itlrev.errors import SortError, UnsortedVariable
from itlrev.laws import A, Q, derived_pool
from itlrev.syntax import (
    EMPTY, SKIP, TRUE, And, Apply, BoxA, Chop, ChopStar, ConstInt, Diamond, Exists, Fin, Gets,
    Implies, Len, Not, Pred, TempAssign, Var, VarName, While, apply, bool_var, check_sorts,
    desugar, free_vars, int_var, is_kernel, register_operator, unfold, well_sorted, Sort,
)

from strategies import DOMAIN, formulas

A0 = Pred(apply("=", Var(A), 0))
B = int_var("B")


def test_varname_rejects_bad_identifier():
    with pytest.raises(ValueError):
        VarName("1A", Sort.INT)


# one-level expansions of the derived constructs


def test_unfold_diamond():
    assert unfold(Diamond(A0)) == Chop(TRUE, A0)


def test_unfold_empty():
    assert unfold(EMPTY) == Not(Chop(SKIP, TRUE))


def test_unfold_len():
    assert unfold(Len(0)) == EMPTY
    assert unfold(Len(2)) == Chop(SKIP, Chop(SKIP, EMPTY))


def test_unfold_while():
    f0, f1 = A0, SKIP
    assert unfold(While(f0, f1)) == And(ChopStar(And(f0, f1)), Fin(Not(f0)))


def test_unfold_gets():
    e = apply("+", Var(A), 1)
    assert unfold(Gets(A, e)) == BoxA(Implies(SKIP, TempAssign(A, e)))


def test_desugar_reaches_kernel():
    for f in derived_pool():
        assert is_kernel(desugar(f)), f


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_desugar_idempotent_and_kernel(f):
    g = desugar(f)
    assert is_kernel(g)
    assert desugar(g) == g


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_desugar_keeps_free_vars(f):
    assert free_vars(desugar(f)) == free_vars(f)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_desugar_preserves_meaning(f):
    u = universe(DOMAIN)
    assert (u.sat(f) == u.sat(desugar(f))).all()


def test_sugar_and_kernel_agree_on_derived_pool():
    u = universe(DOMAIN)
    for f in derived_pool():
        assert (u.sat(f) == u.sat(desugar(f))).all(), f


def test_free_vars_examples():
    f = And(A0, Exists(B, Pred(apply("=", Var(B), Var(A)))))
    assert free_vars(f) == {A}
    assert free_vars(Gets(A, apply("+", Var(A), 1))) == {A}
    assert free_vars(TRUE) == frozenset()


def test_well_sorted_examples():
    assert well_sorted(Pred(apply("<", Var(A), 3)))
    assert not well_sorted(Pred(apply("=", apply("+", Var(Q), 1), 2)))
    assert well_sorted(Exists(A, A0))


def test_inconsistent_sorts_rejected():
    clash = And(Pred(apply("=", Var(A), 0)), Pred(Var(bool_var("A"))))
    with pytest.raises(UnsortedVariable):
        check_sorts(clash)


def test_predicate_must_be_boolean():
    with pytest.raises(SortError):
        check_sorts(Pred(apply("+", Var(A), 1)))


def test_apply_arity_checked():
    assert not well_sorted(Pred(Apply("<", (ConstInt(1),))))


def test_register_operator():
    register_operator("max", (Sort.INT, Sort.INT), Sort.INT, max)
    f = Pred(apply("=", Apply("max", (Var(A), ConstInt(1))), 2))
    assert well_sorted(f)
    u = universe(DOMAIN)
    hits = u.sat(f)
    first = u.interval(int(hits.nonzero()[0][0]))
    assert first.states[0][A] == 2
