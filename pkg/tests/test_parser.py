import pytest
from hypothesis import given, settings

from itlrev.bounded import universe
from itlrev.errors import ParseError, SortError
from itlrev.laws import A, Q, derived_pool, kernel_pool
from itlrev.parser import parse, parse_expr, parse_int_domain, parse_spec
from itlrev.printer import print_formula
from itlrev.syntax import (
    SKIP, And, Chop, ChopStar, ConstInt, Exists, FinVar, Gets, Implies, NextVar, Not,
    Or, Pred, Sort, Var, VarName, While, apply, bool_var, int_var,
)

from conftest import SPECS
from strategies import DOMAIN, formulas

A0 = Pred(apply("=", Var(A), 0))


def test_basic_formulas():
    assert parse("A = 0 and skip") == And(A0, SKIP)
    assert parse("A gets A + 1") == Gets(A, apply("+", Var(A), 1))
    assert parse("skip*") == ChopStar(SKIP)
    assert parse("fin.A = A'") == Pred(apply("=", FinVar(A), NextVar(A)))


def test_precedence():
    # chop binds loosest, then implication, or, and
    assert parse("A = 0 ; skip and Q") == Chop(A0, And(SKIP, Pred(Var(Q))))
    assert parse("A = 0 or skip and Q") == Or(A0, And(SKIP, Pred(Var(Q))))
    assert parse("not A = 0 and skip") == And(Not(A0), SKIP)
    assert parse("skip implies A = 0 ; skip") == Chop(Implies(SKIP, A0), SKIP)
    assert parse("skip ; skip ; A = 0") == Chop(SKIP, Chop(SKIP, A0))


def test_expression_precedence():
    assert parse_expr("A + 2 * A") == apply("+", Var(A), apply("*", 2, Var(A)))
    assert parse_expr("A - 1 - 1") == apply("-", apply("-", Var(A), 1), 1)
    assert parse_expr("-3") == ConstInt(-3)


def test_parenthesised_expression_versus_formula():
    assert parse("(A + 1) = 2") == Pred(apply("=", apply("+", Var(A), 1), 2))
    assert parse("(A = 0) and skip") == And(A0, SKIP)


def test_sort_inference():
    f = parse("Q and A = 1")
    assert bool_var("Q") in {v for v in _vars(f)}
    assert int_var("A") in {v for v in _vars(f)}
    g = parse("X = Y and Y")
    assert {v.sort for v in _vars(g)} == {Sort.BOOL}


def _vars(f):
    from itlrev.syntax import free_vars
    return free_vars(f)


def test_declarations_override_default():
    f = parse("X = Y", {"X": Sort.BOOL})
    assert all(v.sort is Sort.BOOL for v in _vars(f))


def test_exists_with_and_without_sort():
    assert parse("exists B : int . B = A") == parse("exists B . B = A")
    f = parse("exists P : bool . P")
    assert isinstance(f, Exists) and f.var == VarName("P", Sort.BOOL)


def test_while_and_if():
    f = parse("while A < 3 do (skip and A := A + 1)")
    assert isinstance(f, While)


@pytest.mark.parametrize("text, where", [
    ("A = 0 and", "1:10"),
    ("(A=0 and A':=?)", "1:14"),
    ("A = 0 )", "1:7"),
])
def test_errors_carry_position(text, where):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert str(err.value).startswith(where)


def test_sort_clash_is_reported():
    with pytest.raises((SortError, ParseError)):
        parse("Q and Q + 1 = 2", {"Q": Sort.BOOL})


def test_spec_files():
    spec = parse_spec("# c\nvar A : int\nvar Q : bool\noption max-len = 3\nA = 0 and Q\n")
    assert spec.declarations == {"A": Sort.INT, "Q": Sort.BOOL}
    assert spec.options["max-len"] == "3"
    assert [v.name for v in spec.variables()] == ["A", "Q"]
    with pytest.raises(ParseError):
        parse_spec("option colour = red\nskip")


def test_int_domains():
    assert parse_int_domain("0..3") == (0, 1, 2, 3)
    assert parse_int_domain("1,2,5") == (1, 2, 5)
    with pytest.raises(ValueError):
        parse_int_domain("3..1")


def test_every_spec_file_parses():
    files = sorted(SPECS.glob("*.itl"))
    assert len(files) >= 10
    for path in files:
        parse_spec(path.read_text())


def test_printer_round_trip_on_pools():
    u = universe(DOMAIN)
    for f in kernel_pool(depth=2, samples=80) + derived_pool():
        text = print_formula(f)
        g = parse(text)
        assert print_formula(g) == text
        assert (u.sat(g) == u.sat(f)).all(), text


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_printer_round_trip(f):
    text = print_formula(f)
    g = parse(text, {"A": Sort.INT, "Q": Sort.BOOL})
    assert print_formula(g) == text
    u = universe(DOMAIN)
    assert (u.sat(g) == u.sat(f)).all()
