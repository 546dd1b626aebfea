"""The nine acceptance criteria, each printing one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the summary appears at the end of
the session) or ``python tests/test_acceptance.py``.
"""

import functools

import pytest

from itlrev import (
    Domain, EvalConfig, eval_formula, parse, reflect_formula, reverse, run_backward,
    run_forward, run_undo, undo_compose,
)
from itlrev.executability import (
    backward_executable, check_step_composition, check_strengthening, common_prefix,
    common_suffix, determinism_count, forward_executable,
)
from itlrev.intervals import enumerate_intervals, interval, project_trace
from itlrev.laws import A, Q, REFERENCE_DOMAIN, derived_pool, exec_pool, kernel_pool, run_law_suite
from itlrev.syntax import (
    TRUE, SKIP, And, Chop, Diamond, Halt, Init, Len, Pred, Var, all_vars, apply, conj, free_vars,
)

REF_CFG = EvalConfig.for_domain(REFERENCE_DOMAIN)


def _in_reference(f):
    return {v.name for v in all_vars(f)} <= {"A", "Q"}


@functools.cache
def pool():
    return kernel_pool() + derived_pool()


@functools.cache
def exec_specs():
    return [f for f in exec_pool() if _in_reference(f)]


# ---------------------------------------------------------------- 1


def test_criterion_1_law_suite(acceptance):
    report = run_law_suite(REFERENCE_DOMAIN, depth=3, samples=400)
    failed = [r.law.id for r in report.results if not r.passed]
    ok = report.passed and report.seconds < 300
    acceptance(1, ok, f"{len(report.results)} laws, {len(failed)} failed, transformer "
                      f"{report.transformer_checked} formulas, {report.seconds:.1f}s")
    assert not failed, failed
    assert not report.transformer_failures
    assert report.seconds < 300
    ids = {r.law.id for r in report.results}
    for required in ("R0", "R7", "ER0", "ER5", "gets", "init-while", "empty-fin", "skip-prev"):
        assert required in ids


# ---------------------------------------------------------------- 2


def test_criterion_2_reflection_matches_reversal(acceptance):
    intervals = list(enumerate_intervals(REFERENCE_DOMAIN))
    reversed_ = [reverse(s) for s in intervals]
    mismatches, checked = [], 0
    for f in pool():
        g = reflect_formula(f)
        for s, r in zip(intervals, reversed_):
            checked += 1
            if eval_formula(g, s, REF_CFG) != eval_formula(f, r, REF_CFG):
                mismatches.append((f, s))
                break
    acceptance(2, not mismatches, f"{len(pool())} formulas x {len(intervals)} intervals, "
                                  f"{checked} comparisons, {len(mismatches)} mismatches")
    assert not mismatches, mismatches[:3]


# ---------------------------------------------------------------- 3


@functools.cache
def doubled_counter_run():
    return run_forward(parse("A=0 and A gets A+1 and box(B=A*2) and len(4)"))


def test_criterion_3_doubled_counter(acceptance):
    run = doubled_counter_run()
    got = [tuple(s.values) for s in run.trace.states] if run.trace else None
    want = [(0, 0), (1, 2), (2, 4), (3, 6), (4, 8)]
    ok = run.completed and got == want
    acceptance(3, ok, f"{run.terminated}, trace {got}")
    assert ok


# ---------------------------------------------------------------- 4

# (formula, property, expected verdict, a conflicting pair of traces quoted for failures)
EXAMPLE_VERDICTS = [
    ("A = 0 and empty", "prefix", True, None),
    ("A = 0 and (A gets A + 1)", "prefix", True, None),
    ("(A = 0 or A = 1) and empty", "prefix", False, ([0], [1])),
    ("A = 0 and skip", "prefix", False, ([0, 0], [0, 1])),
    ("skip", "prefix", False, ([0, 0], [1, 0])),
    ("fin.A = 0 and empty", "suffix", True, None),
    ("box(A = 0)", "suffix", True, None),
    ("(A = 0 or A = 1) and empty", "suffix", False, ([0], [1])),
    ("fin.A = 0 and skip", "suffix", False, ([0, 0], [1, 0])),
    ("skip", "suffix", False, ([0, 0], [0, 1])),
]


def _conflict(t1, t2, suffix):
    """Same length and different, or the shorter is not aligned inside the longer."""
    if len(t1) == len(t2):
        return t1 != t2
    short, long = sorted((t1, t2), key=len)
    part = long[len(long) - len(short):] if suffix else long[:len(short)]
    return short != part


def _a_trace(values):
    return interval(*({A: v} for v in values))


def test_criterion_4_examples(acceptance):
    d = Domain((A,), (0, 1), 4)
    cfg = EvalConfig.for_domain(d)
    wrong = []
    for text, prop, expected, quoted in EXAMPLE_VERDICTS:
        f = parse(text, {"A": "int"})
        suffix = prop == "suffix"
        verdict = (common_suffix if suffix else common_prefix)(f, [A], d)
        if verdict.holds != expected:
            wrong.append((text, prop, "verdict"))
            continue
        if expected:
            continue
        # the reported witness pair must be a genuine conflict between models
        s1, s2 = verdict.witness_pair
        traces = [[x[0] for x in t.rows] for t in verdict.traces()]
        if not (eval_formula(f, s1, cfg) and eval_formula(f, s2, cfg)
                and _conflict(traces[0], traces[1], suffix)):
            wrong.append((text, prop, "witness"))
        # and so must the pair quoted for the example
        q1, q2 = (_a_trace(t) for t in quoted)
        if not (eval_formula(f, q1, cfg) and eval_formula(f, q2, cfg)
                and _conflict(quoted[0], quoted[1], suffix)):
            wrong.append((text, prop, "quoted pair"))
    acceptance(4, not wrong, f"{len(EXAMPLE_VERDICTS)} verdicts over Int {{0,1}}, max_len 4, "
                             f"{len(wrong)} mismatches")
    assert not wrong, wrong


def test_criterion_4_increment_wider_domain():
    d = Domain((A,), range(5), 4)
    f = parse("A = 0 and (A gets A + 1)")
    assert common_prefix(f, [A], d).holds
    assert determinism_count(f, [A], d, k=4) == 1


# ---------------------------------------------------------------- 5


def _trace_counts(f, variables, intervals, cfg):
    """Distinct projected traces per length, by direct evaluation."""
    seen = {}
    for s in intervals:
        if eval_formula(f, s, cfg):
            seen.setdefault(s.length, set()).add(project_trace(s, variables).rows)
    return {k: len(v) for k, v in seen.items()}


def test_criterion_5_determinism(acceptance):
    intervals = list(enumerate_intervals(REFERENCE_DOMAIN))
    d = REFERENCE_DOMAIN
    checked, bad = 0, []
    for variables in ((A,), (A, Q)):
        for f in kernel_pool() + exec_specs():
            fwd = forward_executable(f, variables, d).holds
            bwd = backward_executable(f, variables, d).holds
            if not (fwd or bwd):
                continue
            checked += 1
            counts = _trace_counts(f, variables, intervals, REF_CFG)
            library = [determinism_count(f, variables, d, k=k) for k in range(d.max_len + 1)]
            if any(c > 1 for c in counts.values()) or any(c > 1 for c in library):
                bad.append(f)
    skip_count = determinism_count(SKIP, [A], d, k=1)
    ok = not bad and checked > 0 and skip_count >= 2
    acceptance(5, ok, f"{checked} executable (formula, vars) pairs with count <= 1; "
                      f"skip has {skip_count} traces of length 1")
    assert not bad, bad[:3]
    assert skip_count >= 2


# ---------------------------------------------------------------- 6

STATE_FORMULAS = [
    parse("A = 0"), parse("A = 1"), parse("A = 2 and Q"), parse("A = 0 and !Q"),
    parse("Q"), TRUE, SKIP,
]


def _composition_pool():
    return [f for f in kernel_pool()[:300] if _in_reference(f)] + exec_specs()


def test_criterion_6_composition_rules(acceptance):
    d = REFERENCE_DOMAIN
    counts = {}
    violations = []
    for name, backward in (("step-forward", False), ("step-backward", True)):
        n = 0
        for variables in ((A,), (A, Q)):
            for w in STATE_FORMULAS:
                for f in _composition_pool():
                    r = check_step_composition(w, f, variables, d, backward=backward)
                    n += r.premises
                    if not r.holds:
                        violations.append((name, w, f))
        counts[name] = n
    n = 0
    strengtheners = [Len(k) for k in range(4)] + \
        [Diamond(Init(w)) for w in STATE_FORMULAS[:5]] + [Halt(w) for w in STATE_FORMULAS[:5]]
    for f0 in _composition_pool():
        for f1 in strengtheners:
            r = check_strengthening(f0, f1, (A,), d)
            n += r.premises
            if not r.holds:
                violations.append(("strengthen", f0, f1))
    counts["strengthen"] = n
    ok = not violations and all(c >= 20 for c in counts.values())
    acceptance(6, ok, f"non-vacuous instances {counts}, {len(violations)} violations")
    assert not violations, violations[:3]
    assert all(c >= 20 for c in counts.values()), counts


# ---------------------------------------------------------------- 7

UNDO_CASES = [
    ("A = 0 and (A gets A + 1) and len(3)", "A gets A + 1", 2),
    ("A = 0 and (A gets A + 1) and len(3)", "while A < 5 do (skip and A := A + 1)", 2),
    ("A = 1 and len(1) and (A gets A + 1)", "A gets A", 3),
    ("A = 1 and skip and A' = 3", "A gets 2 * A", 2),
    ("A = 0 and Q and empty", "(Q gets !Q) and (A gets A + 1)", 2),
    ("A = 2 and len(2) and (A gets A)", "keep(A' = A + 2)", 2),
    ("A = 0 and empty", "exists B : int . (B = A + 1 and (B gets B + 1) and (A gets B))", 1),
]


@functools.cache
def undo_results():
    out = []
    for good, bad, k in UNDO_CASES:
        g, b = parse(good), parse(bad)
        out.append((g, b, k, run_undo(g, b, k)))
    return out


def test_criterion_7_undo(acceptance):
    failures = []
    for g, b, k, res in undo_results():
        if not (res.run.completed and res.restored):
            failures.append((g, b, "not restored"))
            continue
        tracked = tuple(sorted(free_vars(g) | free_vars(b), key=lambda v: v.name))
        states = res.run.trace.states
        if states[res.cut].restrict(tracked) != states[-1].restrict(tracked):
            failures.append((g, b, "cut state differs from final state"))
        ints = {x for s in states for v, x in zip(s.variables, s.values) if v.sort.value == "int"}
        d = Domain(tracked, tuple(ints | {0, 1, 2}), 2 * k)
        spec = res.anchored_spec
        forward_form = undo_compose(spec, k)
        backward_form = Chop(And(reflect_formula(spec), Len(k)), And(spec, Len(k)))
        if not forward_executable(forward_form, tracked, d):
            failures.append((g, b, "composite not forward executable"))
        if not backward_executable(backward_form, tracked, d):
            failures.append((g, b, "mirrored composite not backward executable"))
    ok = not failures and len(UNDO_CASES) >= 5
    acceptance(7, ok, f"{len(UNDO_CASES)} undo specs restored with executable composites, "
                      f"{len(failures)} failures")
    assert not failures, failures


# ---------------------------------------------------------------- 8

ROUND_TRIP_DOMAIN = Domain((A, Q), (0, 1, 2, 3), 3)
_MENTION = conj(Pred(apply("=", Var(A), Var(A))), Pred(apply("=", Var(Q), Var(Q))))


@functools.cache
def round_trip_runs():
    """(spec, forward run, backward run) for every executable pool spec with k <= 3."""
    engine_d = ROUND_TRIP_DOMAIN.with_max_len(0)
    cfg = EvalConfig.for_domain(engine_d)
    out = []
    for f in kernel_pool() + exec_pool():
        for k in range(4):
            spec = And(f, Len(k))
            if not (forward_executable(spec, (A, Q), ROUND_TRIP_DOMAIN)
                    and backward_executable(spec, (A, Q), ROUND_TRIP_DOMAIN)):
                continue
            fw = run_forward(And(spec, _MENTION), engine_d, cfg)
            bw = run_backward(And(reflect_formula(spec), _MENTION), engine_d, cfg)
            out.append((spec, fw, bw))
    return out


def test_criterion_8_round_trip(acceptance):
    runs = round_trip_runs()
    bad = []
    for spec, fw, bw in runs:
        if not (fw.completed and bw.completed):
            bad.append((spec, fw.terminated, bw.terminated))
        elif project_trace(reverse(fw.trace), (A, Q)) != project_trace(bw.trace, (A, Q)):
            bad.append((spec, "traces differ"))
    ok = not bad and len(runs) >= 20
    acceptance(8, ok, f"{len(runs)} executable specs (k <= 3) round-tripped, {len(bad)} failures")
    assert not bad, bad[:3]
    assert len(runs) >= 20


# ---------------------------------------------------------------- 9


def _audit(f, trace):
    ints = [x for s in trace.states for v, x in zip(s.variables, s.values)
            if v.sort.value == "int"] or [0]
    # quantified variables range over a window around the values the run produced
    d = Domain((), range(min(ints + [0]) - 2, max(ints) + 4), 0)
    return eval_formula(f, trace, EvalConfig.for_domain(d))


def test_criterion_9_self_audit(acceptance):
    completed = []
    completed.append((parse("A=0 and A gets A+1 and box(B=A*2) and len(4)"), doubled_counter_run()))
    for g, b, k, res in undo_results():
        completed.append((Chop(g, undo_compose(b, k)), res.run))
    for spec, fw, bw in round_trip_runs():
        completed.append((And(spec, _MENTION), fw))
        completed.append((And(reflect_formula(spec), _MENTION), bw))
    from conftest import SPECS
    from itlrev.parser import parse_spec

    for path in sorted(SPECS.glob("*.itl")):
        f = parse_spec(path.read_text()).formula
        for runner in (run_forward, run_backward):
            completed.append((f, runner(f)))
    completed = [(f, r) for f, r in completed if r.completed]
    failed = [f for f, r in completed if not (r.audited and _audit(f, r.trace))]
    ok = not failed and len(completed) > 0
    acceptance(9, ok, f"{len(completed)} completed runs re-evaluated, {len(failed)} failed")
    assert not failed, failed[:3]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
