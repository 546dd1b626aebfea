"""``itl-rev``: command-line front end.

Each subcommand takes a formula either inline or as a path to a spec file.
Tables go to stdout as tab-separated rows.  Exit status: 0 when the property
holds or the run completes, 1 when it fails, 2 on usage or execution errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .engine import run_backward, run_forward, run_undo
from .errors import ItlError, PremiseFailed
from .executability import CHECKS, Property, distinct_traces
from .intervals import Domain, format_trace, parse_trace
from .laws import run_law_suite
from .parser import SpecFile, parse_int_domain, parse_spec
from .printer import print_formula
from .reflection import reflect
from .semantics import EvalConfig, eval_formula, satisfiable_bounded, valid_bounded
from .syntax import Formula, Pred, apply, conj, desugar, free_vars, int_var, sort_table, unfold

ENV_INT_DOMAIN = "ITL_REV_INT_DOMAIN"
ENV_MAX_LEN = "ITL_REV_MAX_LEN"

DEFAULT_INTS = (0, 1, 2)
DEFAULT_MAX_LEN = 3

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- input and bounds


def load(source: str) -> SpecFile:
    """A spec file when ``source`` names an existing file, otherwise formula text."""
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    return parse_spec(source)


def _setting(flag, spec_options, key, env_name):
    if flag is not None:
        return flag
    for opts in spec_options:
        if key in opts:
            return opts[key]
    return os.environ.get(env_name)


def int_domain(args, *specs, default=DEFAULT_INTS):
    text = _setting(args.int_domain, [s.options for s in specs], "int-domain", ENV_INT_DOMAIN)
    if text is None:
        return default
    try:
        return parse_int_domain(str(text))
    except ValueError as e:
        raise UsageError(str(e)) from None


def max_len(args, *specs, default=DEFAULT_MAX_LEN) -> int:
    value = _setting(args.max_len, [s.options for s in specs], "max-len", ENV_MAX_LEN)
    try:
        n = default if value is None else int(value)
    except ValueError:
        raise UsageError(f"max-len must be an integer, got {value!r}") from None
    if n < 0:
        raise UsageError("max-len must be >= 0")
    return n


def max_steps(args, *specs) -> int:
    value = _setting(args.max_steps, [s.options for s in specs], "max-steps", "")
    return 10_000 if value is None else int(value)


def bounded_domain(args, spec: SpecFile, f: Formula | None = None) -> Domain:
    return Domain.for_formula(f if f is not None else spec.formula, int_domain(args, spec),
                              max_len(args, spec), extra=spec.variables())


def engine_domain(args, *specs):
    """The engine's candidate values; ``None`` keeps the engine default."""
    ints = int_domain(args, *specs, default=None)
    if ints is None:
        return None
    variables = {}
    for s in specs:
        for v in s.variables():
            variables.setdefault(v.name, v)
    return Domain(tuple(variables.values()), ints, 0)


def _cfg(d: Domain | None):
    return None if d is None else EvalConfig.for_domain(d)


def _trace_vars(sigma, f: Formula):
    names = {v.name for v in free_vars(f)}
    return tuple(v for v in sigma.variables if v.name in names) or sigma.variables


def _emit(out, *cells):
    print("\t".join(str(c) for c in cells), file=out)


# ---------------------------------------------------------------- subcommands


def _ast_json(node):
    if dataclasses.is_dataclass(node):
        out = {"node": type(node).__name__}
        for fl in dataclasses.fields(node):
            out[fl.name] = _ast_json(getattr(node, fl.name))
        return out
    if isinstance(node, tuple):
        return [_ast_json(x) for x in node]
    if hasattr(node, "value") and not isinstance(node, (int, bool, str)):
        return node.value
    return node


def cmd_parse(args, out):
    spec = load(args.input)
    if args.format == "structured":
        print(json.dumps(_ast_json(spec.formula)), file=out)
    else:
        print(repr(spec.formula), file=out)
        print(print_formula(spec.formula), file=out)
    return EXIT_OK


def cmd_desugar(args, out):
    f = load(args.input).formula
    print(print_formula(unfold(f) if args.one_level else desugar(f)), file=out)
    return EXIT_OK


def cmd_reflect(args, out):
    report = reflect(load(args.input).formula)
    print(print_formula(report.output), file=out)
    if args.show_laws:
        print("# laws: " + " ".join(report.laws_applied), file=out)
    return EXIT_OK


def cmd_eval(args, out):
    spec = load(args.input)
    with open(args.trace, encoding="utf-8") as fh:
        sigma = parse_trace(fh.read(), sort_table(spec.formula, spec.declarations))
    d = Domain(sigma.variables, int_domain(args, spec), 0)
    holds = eval_formula(spec.formula, sigma, EvalConfig.for_domain(d))
    print("true" if holds else "false", file=out)
    return EXIT_OK if holds else EXIT_FAIL


def cmd_sat(args, out):
    spec = load(args.input)
    d = bounded_domain(args, spec)
    sigma = satisfiable_bounded(spec.formula, d, EvalConfig.for_domain(d))
    _emit(out, "verdict", "bound")
    _emit(out, "SATISFIABLE" if sigma else "UNSATISFIABLE", d.describe())
    if sigma is not None:
        print("# witness", file=out)
        print(format_trace(sigma, fmt=args.format), file=out)
    return EXIT_OK if sigma is not None else EXIT_FAIL


def cmd_valid(args, out):
    spec = load(args.input)
    d = bounded_domain(args, spec)
    res = valid_bounded(spec.formula, d, EvalConfig.for_domain(d))
    _emit(out, "verdict", "bound")
    _emit(out, "VALID" if res.holds else "INVALID", res.bound.describe())
    if not res.holds:
        print("# counterexample", file=out)
        print(format_trace(res.counterexample, fmt=args.format), file=out)
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_check_exec(args, out):
    spec = load(args.input)
    d = bounded_domain(args, spec)
    if args.vars:
        names = [n.strip() for n in args.vars.split(",") if n.strip()]
    else:
        names = sorted(v.name for v in free_vars(spec.formula)) \
            or [v.name for v in spec.variables()]
    if not names:
        raise UsageError("no variables to project on; pass --vars")
    # a projection variable the formula never mentions is an unconstrained integer
    known = {v.name for v in d.variables}
    d = d.with_vars(int_var(n) for n in names if n not in known)
    variables = [d.var(n) for n in names]
    verdict = CHECKS[Property(args.prop)](spec.formula, variables, d, EvalConfig.for_domain(d))
    _emit(out, "property", "vars", "bound", "verdict")
    _emit(out, args.prop, ",".join(names), verdict.bound.describe(),
          "HOLDS" if verdict.holds else "FAILS")
    if verdict.reason:
        print(f"# {verdict.reason}", file=out)
    for i, sigma in enumerate(verdict.witness_pair or (), start=1):
        print(f"# witness {i}", file=out)
        print(format_trace(sigma, variables, fmt=args.format), file=out)
    if verdict.holds and args.show_traces:
        for k in range(d.max_len + 1):
            for trace in distinct_traces(spec.formula, variables, d, None, k):
                print(f"# length {k}: {trace}", file=out)
    return EXIT_OK if verdict.holds else EXIT_FAIL


def _report_run(result, f, out, fmt, err):
    if result.trace is not None:
        print(format_trace(result.trace, _trace_vars(result.trace, f), fmt=fmt), file=out)
    note = f"# {result.terminated} after {result.steps} steps"
    if result.completed:
        note += "; audited" if result.audited else ""
    elif result.message:
        note += f": {result.message}"
    print(note, file=err)
    return EXIT_OK if result.completed else EXIT_FAIL


def cmd_run(args, out, err, backward=False):
    spec = load(args.input)
    d = engine_domain(args, spec)
    runner = run_backward if backward else run_forward
    f = _mention_declared(spec)
    result = runner(f, d, _cfg(d), max_steps=max_steps(args, spec))
    return _report_run(result, f, out, args.format, err)


def _mention_declared(spec: SpecFile) -> Formula:
    """Conjoin ``V = V`` for declared variables the formula leaves out, so the
    engine tracks (and reports) them too."""
    free = {v.name for v in free_vars(spec.formula)}
    extra = [Pred(apply("=", v, v)) for v in spec.variables() if v.name not in free]
    return conj(spec.formula, *extra) if extra else spec.formula


def cmd_undo(args, out, err):
    good, bad = load(args.good), load(args.bad)
    d = engine_domain(args, good, bad)
    try:
        res = run_undo(good.formula, bad.formula, args.k, d, _cfg(d),
                       max_steps=max_steps(args, good, bad))
    except PremiseFailed as e:
        print(f"premise failed ({e.premise}): {e}", file=err)
        return EXIT_FAIL
    code = _report_run(res.run, good.formula, out, args.format, err)
    if res.cut is not None:
        print(f"# cut at state {res.cut}; restored: {'yes' if res.restored else 'no'}",
              file=err)
    return code if res.restored else EXIT_FAIL


def cmd_laws(args, out, err):
    ints = int_domain(args)
    n = max_len(args)
    from .laws import A, Q

    d = Domain((A, Q), ints, n)
    report = run_law_suite(d, depth=args.depth, samples=args.samples, seed=args.seed)
    _emit(out, "law", "group", "bound", "instances", "verdict", "counterexample")
    for row in report.rows():
        _emit(out, *row)
    _emit(out, "transformer", "reflect", d.describe(), report.transformer_checked,
          "PASS" if not report.transformer_failures else "FAIL",
          "" if not report.transformer_failures else print_formula(report.transformer_failures[0]))
    failed = sum(1 for r in report.results if not r.passed) + bool(report.transformer_failures)
    print(f"# {len(report.results) + 1} rows, {failed} failed, {report.seconds:.1f}s", file=err)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="itl-rev", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def bounds(p):
        p.add_argument("--int-domain", help="integer values, a..b or a comma list")
        p.add_argument("--max-len", type=int, help="longest interval enumerated")

    def fmt(p):
        p.add_argument("--format", choices=("text", "structured"), default="text")

    def formula_cmd(name, help, with_bounds=False):
        p = sub.add_parser(name, help=help)
        p.add_argument("input", help="spec file path or inline formula")
        if with_bounds:
            bounds(p)
        fmt(p)
        return p

    formula_cmd("parse", "print the syntax tree")
    p = formula_cmd("desugar", "rewrite into kernel constructs")
    p.add_argument("--one-level", action="store_true", help="expand only the outermost construct")
    p = formula_cmd("reflect", "print the reflected formula")
    p.add_argument("--show-laws", action="store_true")
    p = formula_cmd("eval", "evaluate on a trace file", with_bounds=True)
    p.add_argument("--trace", required=True)
    formula_cmd("sat", "bounded satisfiability", with_bounds=True)
    formula_cmd("valid", "bounded validity", with_bounds=True)
    p = formula_cmd("check-exec", "common prefix/suffix and executability", with_bounds=True)
    p.add_argument("--vars", help="comma-separated projection variables")
    p.add_argument("--prop", choices=[x.value for x in Property], required=True)
    p.add_argument("--show-traces", action="store_true")
    for name, help in (("run", "execute forward"), ("run-rev", "execute backward")):
        p = formula_cmd(name, help, with_bounds=True)
        p.add_argument("--max-steps", type=int)

    p = sub.add_parser("undo", help="run good ; (bad and len k) ; (bad^r and len k)")
    p.add_argument("--good", required=True)
    p.add_argument("--bad", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-steps", type=int)
    bounds(p)
    fmt(p)

    p = sub.add_parser("laws", help="check every reflection law")
    bounds(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--seed", type=int, default=7)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    for name in ("int_domain", "max_len", "max_steps"):
        if not hasattr(args, name):
            setattr(args, name, None)
    handlers = {
        "parse": cmd_parse, "desugar": cmd_desugar, "reflect": cmd_reflect,
        "eval": cmd_eval, "sat": cmd_sat, "valid": cmd_valid, "check-exec": cmd_check_exec,
    }
    try:
        if args.command in handlers:
            return handlers[args.command](args, out)
        if args.command == "run":
            return cmd_run(args, out, err)
        if args.command == "run-rev":
            return cmd_run(args, out, err, backward=True)
        if args.command == "undo":
            return cmd_undo(args, out, err)
        return cmd_laws(args, out, err)
    except (ItlError, UsageError, OSError, ValueError) as e:
        print(f"itl-rev {args.command}: {type(e).__name__}: {e}", file=err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
