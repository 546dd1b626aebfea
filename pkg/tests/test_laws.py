import pytest

from itlrev.bounded import universe
from itlrev.intervals import Domain
from itlrev.laws import (
    ALL_LAWS, ATOMS, CONSTRUCT_LAWS, DERIVED_LAWS, EXPR_LAWS, F, Fr, KERNEL_LAWS, A, Q, Law,
    check_law, derived_pool, exec_pool, expr_pool, kernel_pool, run_law_suite,
)
from itlrev.syntax import (
    And, Chop, ChopStar, Exists, Next, Not, Pred, Skip, TrueF, Var, apply, desugar, is_kernel,
    well_sorted,
)

SMALL = Domain((A, Q), (0, 1), 2)


def test_catalog_sizes():
    assert [law.id for law in KERNEL_LAWS] == [f"R{i}" for i in range(8)]
    assert [law.id for law in EXPR_LAWS] == [f"ER{i}" for i in range(6)]
    assert len(DERIVED_LAWS) == 12
    assert len({law.id for law in ALL_LAWS}) == len(ALL_LAWS)
    assert {"gets", "if", "init-while", "halt", "keep"} <= {law.id for law in CONSTRUCT_LAWS}


def test_kernel_pool_covers_every_constructor():
    pool = kernel_pool()
    kinds = {type(f) for f in pool}
    assert {Not, And, Chop, ChopStar, Exists} <= kinds
    assert set(ATOMS) <= set(pool)
    # "empty" is one of the atoms, so the pool is kernel only after desugaring
    assert all(is_kernel(desugar(f)) and well_sorted(f) for f in pool)
    assert len(pool) == len(set(pool))


def test_pools_are_deterministic():
    assert kernel_pool() == kernel_pool()
    assert derived_pool() == derived_pool()
    assert len(exec_pool()) == 200
    assert expr_pool()


def test_small_suite_passes():
    report = run_law_suite(SMALL, depth=2, samples=60, max_instances=200)
    assert report.passed
    assert all(r.instances > 0 for r in report.results)
    assert report.transformer_checked > 0
    rows = report.rows()
    assert len(rows) == len(ALL_LAWS) + 3
    assert all(row[4] == "PASS" and row[5] == "" for row in rows)


@pytest.mark.parametrize("law", [
    Law("bad-next", "test", Next(F[0]), Next(Fr[0]), 1),
    Law("bad-chop", "test", Chop(F[0], F[1]), Chop(Fr[0], Fr[1]), 2),
])
def test_wrong_law_is_refuted(law):
    u = universe(SMALL)
    res = check_law(law, u, kernel_pool(depth=2, samples=60), expr_pool())
    assert not res.passed
    assert res.counterexample is not None and res.instance is not None


def test_true_law_is_certified():
    law = Law("R0", "kernel", TrueF(), TrueF())
    assert check_law(law, universe(SMALL), [], []).passed


def test_counterexample_really_refutes():
    # re-derive the failure directly from the returned instance
    law = Law("bad-next", "test", Next(F[0]), Next(Fr[0]), 1)
    u = universe(SMALL)
    res = check_law(law, u, kernel_pool(depth=2, samples=60), expr_pool())
    (f,), _ = res.instance
    from itlrev.intervals import reverse
    from itlrev.reflection import reflect_formula
    from itlrev.semantics import eval_formula
    s = res.counterexample
    assert eval_formula(Next(f), reverse(s), u.cfg) != eval_formula(Next(reflect_formula(f)), s, u.cfg)


def test_atoms_match_reference_set():
    a0 = Pred(apply("=", Var(A), 0))
    assert ATOMS[0] == a0 and isinstance(ATOMS[3], Skip)
    assert Pred(Var(Q)) in ATOMS
