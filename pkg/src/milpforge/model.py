"""Symbolic MILP representation: variables, linear expressions, constraints.

A problem is a plain immutable value: a sense, a list of bounded (possibly
integral) decision variables, a linear objective, and a list of linear
constraints over those variables. Evaluation is exact up to float arithmetic
and reports every violated condition with its magnitude.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

INF = math.inf

# Absolute tolerance on constraint residuals and integrality when deciding
# feasibility of a point.
FEAS_TOL = 1e-6

_NAME_OK = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ModelError(ValueError):
    """Invalid model construction or use."""


class DimensionMismatch(ModelError):
    """Point length does not match the problem's variable count."""


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class DecisionVariable:
    name: str
    lower: float = -INF
    upper: float = INF
    integral: bool = False

    def __post_init__(self) -> None:
        if not self.name or not _NAME_OK.match(self.name):
            raise ModelError(f"bad variable name: {self.name!r}")
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise ModelError(f"NaN bound on {self.name}")
        if self.lower > self.upper:
            raise ModelError(
                f"empty bound interval on {self.name}: [{self.lower}, {self.upper}]"
            )


def binary(name: str) -> DecisionVariable:
    """A 0/1 variable: integral with bounds [0, 1]."""
    return DecisionVariable(name, 0.0, 1.0, integral=True)


def integer(name: str, lower: float = 0.0, upper: float = INF) -> DecisionVariable:
    return DecisionVariable(name, lower, upper, integral=True)


def continuous(name: str, lower: float = 0.0, upper: float = INF) -> DecisionVariable:
    return DecisionVariable(name, lower, upper, integral=False)


@dataclass(frozen=True)
class LinearExpr:
    """Sum of coefficient*variable terms plus a constant.

    Terms are stored canonically: strictly increasing variable index, merged
    duplicates, no zero coefficients. The constructor canonicalizes whatever
    it is given.
    """

    terms: tuple[tuple[float, int], ...] = ()
    constant: float = 0.0

    def __post_init__(self) -> None:
        merged: dict[int, float] = {}
        for coef, idx in self.terms:
            if idx < 0 or idx != int(idx):
                raise ModelError(f"bad variable index {idx!r}")
            merged[int(idx)] = merged.get(int(idx), 0.0) + float(coef)
        canon = tuple(
            (c, i) for i, c in sorted(merged.items()) if c != 0.0
        )
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "constant", float(self.constant))

    @classmethod
    def from_map(cls, coefs: dict[int, float], constant: float = 0.0) -> "LinearExpr":
        return cls(tuple((c, i) for i, c in coefs.items()), constant)

    def value(self, point: Sequence[float]) -> float:
        return sum(c * point[i] for c, i in self.terms) + self.constant

    def max_index(self) -> int:
        return self.terms[-1][1] if self.terms else -1

    def coefficient(self, idx: int) -> float:
        for c, i in self.terms:
            if i == idx:
                return c
        return 0.0


@dataclass(frozen=True)
class Constraint:
    lhs: LinearExpr
    relation: Relation
    rhs: float
    label: str | None = None

    def residual(self, point: Sequence[float]) -> float:
        """Violation magnitude at `point` (0 when satisfied)."""
        gap = self.lhs.value(point) - self.rhs
        if self.relation is Relation.LE:
            return max(0.0, gap)
        if self.relation is Relation.GE:
            return max(0.0, -gap)
        return abs(gap)


@dataclass(frozen=True)
class Assignment:
    """A candidate point: one value per decision variable."""

    values: tuple[float, ...]

    @classmethod
    def of(cls, values: Iterable[float]) -> "Assignment":
        return cls(tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]


@dataclass(frozen=True)
class Problem:
    sense: Sense
    variables: tuple[DecisionVariable, ...]
    objective: LinearExpr
    constraints: tuple[Constraint, ...] = ()
    class_tag: str = ""
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(self.variables)
        if n < 1:
            raise ModelError("a problem needs at least one variable")
        names = [v.name for v in self.variables]
        if len(set(names)) != n:
            raise ModelError("duplicate variable names")
        if self.objective.max_index() >= n:
            raise ModelError("objective references an unknown variable index")
        for k, con in enumerate(self.constraints):
            if con.lhs.max_index() >= n:
                raise ModelError(f"constraint {k} references an unknown variable index")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.constraints)

    def variable_index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise ModelError(f"no variable named {name!r}")

    def constraint_label(self, k: int) -> str:
        lab = self.constraints[k].label
        return lab if lab else f"c{k + 1}"


@dataclass(frozen=True)
class EvalReport:
    objective: float
    feasible: bool
    violations: tuple[tuple[str, float], ...]


def _point_values(problem: Problem, point) -> Sequence[float]:
    values = point.values if isinstance(point, Assignment) else point
    if len(values) != problem.n:
        raise DimensionMismatch(
            f"point has {len(values)} values, problem has {problem.n} variables"
        )
    return values


def evaluate(problem: Problem, point, tol: float = FEAS_TOL) -> EvalReport:
    """Objective value, feasibility, and per-condition violations at `point`.

    Feasible iff every constraint, variable bound, and integrality condition
    holds within `tol` (absolute). Violations carry the constraint label (or
    c<k>), a bound tag, or an integrality tag, with nonnegative magnitudes.
    """
    values = _point_values(problem, point)
    violations: list[tuple[str, float]] = []
    for k, con in enumerate(problem.constraints):
        r = con.residual(values)
        if r > tol:
            violations.append((problem.constraint_label(k), r))
    for i, var in enumerate(problem.variables):
        x = values[i]
        if x < var.lower - tol:
            violations.append((f"{var.name} lower bound", var.lower - x))
        if x > var.upper + tol:
            violations.append((f"{var.name} upper bound", x - var.upper))
        if var.integral:
            gap = abs(x - round(x))
            if gap > tol:
                violations.append((f"{var.name} integrality", gap))
    return EvalReport(
        objective=problem.objective.value(values),
        feasible=not violations,
        violations=tuple(violations),
    )


def canonicalize(problem: Problem) -> Problem:
    """Fold constraint constants into the rhs; term lists are already canonical.

    evaluate() is unchanged on every point; applying this twice equals
    applying it once.
    """
    cons = tuple(
        Constraint(
            lhs=LinearExpr(c.lhs.terms, 0.0),
            relation=c.relation,
            rhs=c.rhs - c.lhs.constant,
            label=c.label,
        )
        for c in problem.constraints
    )
    return Problem(
        sense=problem.sense,
        variables=problem.variables,
        objective=problem.objective,
        constraints=cons,
        class_tag=problem.class_tag,
        metadata=dict(problem.metadata),
    )
