"""States, finite intervals, value traces and bounded interval enumeration."""

from __future__ import annotations

import itertools
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import FusionMismatch, IndexOutOfRange, SortError, UnknownVariable
from .syntax import Formula, Sort, VarName, all_vars

Value = Union[int, bool]


def check_value(var: VarName, value) -> None:
    if var.sort is Sort.BOOL:
        ok = type(value) is bool
    else:
        ok = isinstance(value, int) and type(value) is not bool
    if not ok:
        raise SortError(f"{var.name} is {var.sort}, got {value!r}")


def format_value(v: Value) -> str:
    if type(v) is bool:
        return "true" if v else "false"
    return str(v)


class State(Mapping):
    """Total, immutable binding of a declared variable list to values.

    Keys may be given either as :class:`VarName` or as plain names.
    """

    __slots__ = ("variables", "values", "_index", "_hash")

    def __init__(self, variables: Sequence[VarName], values: Sequence[Value]):
        variables = tuple(variables)
        values = tuple(values)
        if len(variables) != len(values):
            raise ValueError("variables and values differ in length")
        for v, x in zip(variables, values):
            check_value(v, x)
        self.variables = variables
        self.values = values
        self._index = {v.name: i for i, v in enumerate(variables)}
        if len(self._index) != len(variables):
            raise ValueError("duplicate variable in state")
        self._hash = None

    @classmethod
    def of(cls, bindings: Mapping[VarName, Value]) -> "State":
        return cls(tuple(bindings), tuple(bindings.values()))

    def __getitem__(self, key):
        name = key.name if isinstance(key, VarName) else key
        try:
            return self.values[self._index[name]]
        except KeyError:
            raise UnknownVariable(f"{name} is not declared in this state") from None

    def __iter__(self):
        return iter(self.variables)

    def __len__(self):
        return len(self.variables)

    def __contains__(self, key):
        name = key.name if isinstance(key, VarName) else key
        return name in self._index

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.variables == other.variables and self.values == other.values

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.values))
        return self._hash

    def replace(self, **changes) -> "State":
        values = list(self.values)
        for name, x in changes.items():
            values[self._index[name]] = x
        return State(self.variables, values)

    def restrict(self, variables: Sequence[VarName]) -> "State":
        return State(variables, tuple(self[v] for v in variables))

    def __repr__(self):
        inner = " ".join(f"{v.name}={format_value(x)}" for v, x in zip(self.variables, self.values))
        return f"State({inner})"


@dataclass(frozen=True)
class Interval:
    """Non-empty finite sequence of states over one variable set."""

    states: tuple

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise ValueError("an interval has at least one state")
        first = states[0].variables
        if any(s.variables != first for s in states):
            raise ValueError("all states of an interval share one variable set")

    @property
    def length(self) -> int:
        return len(self.states) - 1

    @property
    def variables(self) -> tuple:
        return self.states[0].variables

    def __getitem__(self, i):
        return self.states[i]

    def __iter__(self):
        return iter(self.states)

    def __repr__(self):
        return "Interval[" + ", ".join(repr(s)[6:-1] for s in self.states) + "]"


def interval(*rows: Mapping[VarName, Value]) -> Interval:
    """Build an interval from per-state binding dicts (all with the same keys)."""
    return Interval(tuple(State.of(r) for r in rows))


def length(sigma: Interval) -> int:
    return sigma.length


def subinterval(sigma: Interval, k: int, l: int) -> Interval:
    if not 0 <= k <= l <= sigma.length:
        raise IndexOutOfRange(f"subinterval({k}, {l}) of an interval of length {sigma.length}")
    return Interval(sigma.states[k:l + 1])


def prefix(sigma: Interval, k: int) -> Interval:
    if not 0 <= k <= sigma.length:
        raise IndexOutOfRange(f"prefix({k}) of an interval of length {sigma.length}")
    return Interval(sigma.states[:k + 1])


def suffix(sigma: Interval, k: int) -> Interval:
    if not 0 <= k <= sigma.length:
        raise IndexOutOfRange(f"suffix({k}) of an interval of length {sigma.length}")
    return Interval(sigma.states[k:])


def fuse(left: Interval, right: Interval) -> Interval:
    if left.states[-1] != right.states[0]:
        raise FusionMismatch("last state of the left interval differs from first of the right")
    return Interval(left.states + right.states[1:])


def reverse(sigma: Interval) -> Interval:
    return Interval(sigma.states[::-1])


@dataclass(frozen=True)
class ValueTrace:
    variables: tuple
    rows: tuple

    def __post_init__(self):
        n = len(self.variables)
        if any(len(r) != n for r in self.rows):
            raise ValueError("value trace rows differ in arity")

    def reversed(self) -> "ValueTrace":
        return ValueTrace(self.variables, self.rows[::-1])

    def __str__(self):
        def cell(r):
            vals = ",".join(format_value(x) for x in r)
            return f"({vals})" if len(r) > 1 else vals
        return " ".join(cell(r) for r in self.rows)


def project_trace(sigma: Interval, variables: Sequence[VarName]) -> ValueTrace:
    variables = tuple(variables)
    if not variables:
        raise ValueError("project_trace needs a non-empty variable list")
    for v in variables:
        if v not in sigma.states[0]:
            raise UnknownVariable(f"{v.name} is not a variable of this interval")
    return ValueTrace(variables, tuple(tuple(s[v] for v in variables) for s in sigma.states))


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class Domain:
    """Finite carrier for bounded checking: variables, integer values, max length."""

    variables: tuple
    int_values: tuple = (0, 1, 2)
    max_len: int = 3
    _states: list = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "int_values", tuple(sorted(set(self.int_values))))
        if not self.int_values:
            raise ValueError("int_values must be non-empty")
        if self.max_len < 0:
            raise ValueError("max_len must be >= 0")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable in domain")

    @classmethod
    def for_formula(cls, f: Formula, int_values=(0, 1, 2), max_len=3, extra=()) -> "Domain":
        """Domain over ``extra`` followed by every variable of ``f`` (free and bound)."""
        seen = {v.name: v for v in extra}
        for v in all_vars(f):
            seen.setdefault(v.name, v)
        return cls(tuple(seen.values()), tuple(int_values), max_len)

    def with_vars(self, extra: Iterable[VarName]) -> "Domain":
        seen = {v.name: v for v in self.variables}
        for v in extra:
            if v.name in seen and seen[v.name].sort is not v.sort:
                raise SortError(f"{v.name} declared as {seen[v.name].sort}, used as {v.sort}")
            seen.setdefault(v.name, v)
        if len(seen) == len(self.variables):
            return self
        return Domain(tuple(seen.values()), self.int_values, self.max_len)

    def with_max_len(self, max_len: int) -> "Domain":
        return Domain(self.variables, self.int_values, max_len)

    def values_for(self, var: VarName) -> tuple:
        return (False, True) if var.sort is Sort.BOOL else self.int_values

    def states(self) -> list:
        """All states, in lexicographic order of the declared variables."""
        if self._states is None:
            combos = itertools.product(*(self.values_for(v) for v in self.variables))
            object.__setattr__(self, "_states", [State(self.variables, c) for c in combos])
        return self._states

    @property
    def num_states(self) -> int:
        n = 1
        for v in self.variables:
            n *= len(self.values_for(v))
        return n

    def num_intervals(self) -> int:
        s = self.num_states
        return sum(s ** (n + 1) for n in range(self.max_len + 1))

    def var(self, name: str) -> VarName:
        for v in self.variables:
            if v.name == name:
                return v
        raise UnknownVariable(name)

    def describe(self) -> str:
        vals = self.int_values
        if vals == tuple(range(vals[0], vals[-1] + 1)):
            ints = f"{vals[0]}..{vals[-1]}"
        else:
            ints = ",".join(map(str, vals))
        names = ",".join(f"{v.name}:{v.sort}" for v in self.variables)
        return f"bounded[vars={names} int={ints} max_len={self.max_len}]"


def enumerate_intervals(d: Domain) -> Iterator[Interval]:
    """Every interval of length ``0..d.max_len``, shortest first, each exactly once."""
    states = d.states()
    for n in range(d.max_len + 1):
        for combo in itertools.product(states, repeat=n + 1):
            yield Interval(combo)


# ---------------------------------------------------------------- serialization


def format_trace(sigma: Interval, variables: Sequence[VarName] | None = None,
                 fmt: str = "text") -> str:
    """Render one state per line, either ``text`` or ``structured`` (JSON lines)."""
    variables = tuple(variables or sigma.variables)
    lines = []
    for i, s in enumerate(sigma.states):
        if fmt == "structured":
            lines.append(json.dumps({v.name: s[v] for v in variables}))
        elif fmt == "text":
            cells = " ".join(f"{v.name}={format_value(s[v])}" for v in variables)
            lines.append(f"{i}: {cells}")
        else:
            raise ValueError(f"unknown trace format {fmt!r}")
    return "\n".join(lines)


def _parse_value(text: str) -> Value:
    if text == "true":
        return True
    if text == "false":
        return False
    return int(text)


def parse_trace(text: str, sorts: Mapping[str, Sort] | None = None) -> Interval:
    """Read a trace in either format written by :func:`format_trace`.

    Variable sorts come from ``sorts`` when given, else from the values.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("{"):
            rows.append(dict(json.loads(line)))
        else:
            _, _, body = line.partition(":") if ":" in line.split("=")[0] else ("", "", line)
            row = {}
            for cell in body.split():
                name, _, val = cell.partition("=")
                row[name] = _parse_value(val)
            rows.append(row)
    if not rows:
        raise ValueError("trace has no states")
    names = list(rows[0])
    variables = []
    for name in names:
        if sorts and name in sorts:
            sort = sorts[name]
        else:
            sort = Sort.BOOL if type(rows[0][name]) is bool else Sort.INT
        variables.append(VarName(name, sort))
    states = []
    for row in rows:
        if set(row) != set(names):
            raise ValueError("every state of a trace must bind the same variables")
        states.append(State(variables, [row[n] for n in names]))
    return Interval(tuple(states))
