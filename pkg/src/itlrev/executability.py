"""Bounded common-prefix / common-suffix checks and forward / backward executability.

All verdicts quantify over the intervals of a finite :class:`Domain` only.
Satisfying intervals are grouped by length; within one length every projected
value trace must coincide, and the representatives of consecutive lengths are
compared left-aligned (prefix) or right-aligned (suffix).  By transitivity this
covers every pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bounded import universe
from .intervals import Domain, Interval, project_trace
from .reflection import reflect_formula
from .semantics import EvalConfig, _checked_domain
from .syntax import Formula


class Property(enum.Enum):
    COMMON_PREFIX = "prefix"
    COMMON_SUFFIX = "suffix"
    FORWARD_EXEC = "fwd"
    BACKWARD_EXEC = "bwd"


@dataclass(frozen=True)
class ExecVerdict:
    property: Property
    holds: bool
    bound: Domain
    vars: tuple
    witness_pair: tuple | None = None
    sat_witness: Interval | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds

    def traces(self) -> tuple:
        """Projected value traces of the witness pair, if any."""
        if self.witness_pair is None:
            return ()
        return tuple(project_trace(s, self.vars) for s in self.witness_pair)


def _resolve_vars(vars, d: Domain) -> tuple:
    if not vars:
        raise ValueError("the variable list must be non-empty")
    out = []
    for v in vars:
        out.append(d.var(v) if isinstance(v, str) else d.var(v.name))
    return tuple(out)


class _Traces:
    """Satisfying intervals of ``f`` with their projected traces, grouped by length."""

    def __init__(self, f: Formula, vars, d: Domain, cfg):
        d = _checked_domain(f, d)
        self.vars = _resolve_vars(vars, d)
        self.d = d
        self.u = u = universe(d, cfg)
        self.mask = u.sat(f)
        # projected id of each state: equal ids iff equal values on vars
        cols = [d.variables.index(v) for v in self.vars]
        keys = [tuple(s.values[c] for c in cols) for s in u.states]
        ids = {}
        self.proj = np.array([ids.setdefault(k, len(ids)) for k in keys], dtype=np.int64)
        self.by_len = {}
        for n in range(d.max_len + 1):
            rows = u.layers[n][self.mask[u.layers[n]]]
            if rows.size:
                self.by_len[n] = (rows, self.proj[u.pos[rows, :n + 1]])

    def satisfiable(self):
        return self.u.first(self.mask)

    def uniform(self):
        """First same-length pair with different traces, or None."""
        for n, (rows, traces) in self.by_len.items():
            diff = np.any(traces != traces[0], axis=1)
            if diff.any():
                j = int(np.flatnonzero(diff)[0])
                return self.u.interval(int(rows[0])), self.u.interval(int(rows[j]))
        return None

    def aligned(self, suffix: bool):
        lengths = sorted(self.by_len)
        for n, m in zip(lengths, lengths[1:]):
            short = self.by_len[n][1][0]
            long = self.by_len[m][1][0]
            part = long[m - n:] if suffix else long[:n + 1]
            if not np.array_equal(short, part):
                return (self.u.interval(int(self.by_len[n][0][0])),
                        self.u.interval(int(self.by_len[m][0][0])))
        return None

    def count(self, k: int) -> int:
        if k not in self.by_len:
            return 0
        return len(np.unique(self.by_len[k][1], axis=0))


def _trace_verdict(prop, f, vars, d, cfg, suffix: bool) -> ExecVerdict:
    t = _Traces(f, vars, d, cfg)
    pair = t.uniform() or t.aligned(suffix)
    side = "suffix" if suffix else "prefix"
    reason = "" if pair is None else f"value traces share no common {side}"
    return ExecVerdict(prop, pair is None, t.d, t.vars, pair, t.satisfiable(), reason)


def common_prefix(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None) -> ExecVerdict:
    """All satisfying intervals agree on left-aligned value traces over ``vars``."""
    return _trace_verdict(Property.COMMON_PREFIX, f, vars, d, cfg, suffix=False)


def common_suffix(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None) -> ExecVerdict:
    """All satisfying intervals agree on right-aligned value traces over ``vars``."""
    return _trace_verdict(Property.COMMON_SUFFIX, f, vars, d, cfg, suffix=True)


def _exec_verdict(prop, base: ExecVerdict) -> ExecVerdict:
    if base.sat_witness is None:
        return ExecVerdict(prop, False, base.bound, base.vars, None, None,
                           "not satisfiable within the bound")
    return ExecVerdict(prop, base.holds, base.bound, base.vars, base.witness_pair,
                       base.sat_witness, base.reason)


def forward_executable(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None) -> ExecVerdict:
    """Satisfiable and common prefix."""
    return _exec_verdict(Property.FORWARD_EXEC, common_prefix(f, vars, d, cfg))


def backward_executable(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None) -> ExecVerdict:
    """Satisfiable and common suffix."""
    return _exec_verdict(Property.BACKWARD_EXEC, common_suffix(f, vars, d, cfg))


CHECKS = {
    Property.COMMON_PREFIX: common_prefix,
    Property.COMMON_SUFFIX: common_suffix,
    Property.FORWARD_EXEC: forward_executable,
    Property.BACKWARD_EXEC: backward_executable,
}


def determinism_count(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None,
                      k: int = 0) -> int:
    """Number of distinct value traces among satisfying intervals of length ``k``."""
    if not 0 <= k <= d.max_len:
        raise ValueError(f"k={k} is outside 0..{d.max_len}")
    return _Traces(f, vars, d, cfg).count(k)


def distinct_traces(f: Formula, vars, d: Domain, cfg=None, k: int = 0) -> list:
    """The distinct value traces of length ``k`` (for reporting)."""
    t = _Traces(f, vars, d, cfg)
    if k not in t.by_len:
        return []
    rows, traces = t.by_len[k]
    _, first = np.unique(traces, axis=0, return_index=True)
    return [project_trace(t.u.interval(int(rows[i])), t.vars) for i in sorted(first)]


@dataclass(frozen=True)
class DualityReport:
    prefix_of_reflection: bool
    suffix_of_original: bool
    suffix_of_reflection: bool
    prefix_of_original: bool
    sat_reflection: bool
    sat_original: bool

    @property
    def holds(self):
        return (self.prefix_of_reflection == self.suffix_of_original
                and self.suffix_of_reflection == self.prefix_of_original
                and self.sat_reflection == self.sat_original)

    def __bool__(self):
        return self.holds


def check_duality(f: Formula, vars, d: Domain, cfg: EvalConfig | None = None) -> DualityReport:
    """Prefix/suffix and satisfiability agreement between ``f`` and its reflection."""
    g = reflect_formula(f)
    d = d.with_vars(_checked_domain(f, d).variables).with_vars(_checked_domain(g, d).variables)
    tf, tg = _Traces(f, vars, d, cfg), _Traces(g, vars, d, cfg)
    return DualityReport(
        prefix_of_reflection=tg.uniform() is None and tg.aligned(False) is None,
        suffix_of_original=tf.uniform() is None and tf.aligned(True) is None,
        suffix_of_reflection=tg.uniform() is None and tg.aligned(True) is None,
        prefix_of_original=tf.uniform() is None and tf.aligned(False) is None,
        sat_reflection=tg.satisfiable() is not None,
        sat_original=tf.satisfiable() is not None,
    )



# ---------------------------------------------------------------- composition rules


@dataclass(frozen=True)
class Implication:
    """A bounded premise/conclusion pair; ``holds`` unless the premises hold and
    the conclusion does not."""

    premises: bool
    conclusion: bool

    @property
    def holds(self):
        return self.conclusion or not self.premises

    def __bool__(self):
        return self.holds


def check_step_composition(w: Formula, f: Formula, vars, d: Domain, cfg=None,
                           backward: bool = False) -> Implication:
    """One execution step in front of ``f``.

    Forward: ``init w and empty`` and ``f`` forward executable imply
    ``init w and wnext f`` forward executable.  Backward uses ``fin``, ``wprev``
    and backward executability instead.
    """
    from .syntax import EMPTY, And, Fin, Init, WNext, WPrev

    if backward:
        edge, step, check = Fin(w), WPrev(f), backward_executable
    else:
        edge, step, check = Init(w), WNext(f), forward_executable
    d = _domain_for(d, And(edge, step))
    premises = bool(check(And(edge, EMPTY), vars, d, cfg)) and bool(check(f, vars, d, cfg))
    return Implication(premises, bool(check(And(edge, step), vars, d, cfg)))


def check_strengthening(f0: Formula, f1: Formula, vars, d: Domain, cfg=None,
                        backward: bool = False) -> Implication:
    """``f0 and f1`` satisfiable and ``f0`` with a common prefix (suffix when
    ``backward``) imply ``f0 and f1`` forward (backward) executable."""
    from .semantics import satisfiable_bounded
    from .syntax import And

    both = And(f0, f1)
    d = _domain_for(d, both)
    common = common_suffix if backward else common_prefix
    check = backward_executable if backward else forward_executable
    premises = satisfiable_bounded(both, d, cfg) is not None and bool(common(f0, vars, d, cfg))
    return Implication(premises, bool(check(both, vars, d, cfg)))


def _domain_for(d: Domain, f: Formula) -> Domain:
    from .syntax import all_vars

    return d.with_vars(all_vars(f))
