"""Hypothesis strategies for formulas and intervals over A:int and Q:bool."""

from hypothesis import strategies as st

from itlrev.intervals import Domain, Interval, State
from itlrev.laws import A, Q
from itlrev.syntax import (
    EMPTY, MORE, SKIP, TRUE, And, Apply, Assign, Box, BoxA, BoxI, Chop, ChopStar, ConstInt,
    Diamond, DiamondA, DiamondI, Exists, Fin, FinVar, Gets, Halt, If, Iff, Implies, Init,
    InitOnly, Keep, Len, Next, NextVar, Not, Or, PastAssign, Pred, Prev, PrevVar, TempAssign,
    UnitAssign, Var, While, WNext, WPrev,
)

DOMAIN = Domain((A, Q), (0, 1, 2), 3)

int_leaf = st.one_of(
    st.integers(0, 2).map(ConstInt),
    st.sampled_from([Var(A), NextVar(A), FinVar(A), PrevVar(A)]),
)
int_expr = st.recursive(
    int_leaf,
    lambda sub: st.builds(lambda op, a, b: Apply(op, (a, b)),
                          st.sampled_from(["+", "-", "*", "mod"]), sub, sub).filter(
        lambda e: not (e.op == "mod" and not isinstance(e.args[1], ConstInt))
        and not (e.op == "mod" and e.args[1].value == 0)),
    max_leaves=3,
)
bool_leaf = st.sampled_from([Var(Q), NextVar(Q), FinVar(Q), PrevVar(Q)])
relation = st.builds(lambda op, a, b: Apply(op, (a, b)),
                     st.sampled_from(["=", "<", "<=", ">", ">="]), int_expr, int_expr)
bool_expr = st.one_of(bool_leaf, relation,
                      st.builds(lambda a: Apply("not", (a,)), bool_leaf))

atoms = st.one_of(
    st.just(TRUE), st.just(SKIP), st.just(EMPTY), st.just(MORE),
    bool_expr.map(Pred), st.integers(0, 2).map(Len),
    st.builds(lambda cls, e: cls(A, e),
              st.sampled_from([Assign, UnitAssign, TempAssign, PastAssign, Gets]), int_expr),
)

UNARY = [Not, ChopStar, Next, WNext, Prev, WPrev, Diamond, Box, DiamondI, BoxI, DiamondA,
         BoxA, Fin, Init, Halt, Keep, InitOnly]
BINARY = [And, Or, Implies, Iff, Chop, While]


def _extend(sub):
    return st.one_of(
        st.builds(lambda cls, f: cls(f), st.sampled_from(UNARY), sub),
        st.builds(lambda cls, f, g: cls(f, g), st.sampled_from(BINARY), sub, sub),
        st.builds(If, sub, sub, sub),
        st.builds(lambda f: Exists(A, f), sub),
    )


formulas = st.recursive(atoms, _extend, max_leaves=5)


def _state(a, q):
    return State((A, Q), (a, q))


states = st.builds(_state, st.integers(0, 2), st.booleans())
intervals = st.lists(states, min_size=1, max_size=4).map(lambda ss: Interval(tuple(ss)))
