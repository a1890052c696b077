"""Structural and coefficient sampling for random linear instances.

The pipeline draws a problem skeleton (variable/constraint counts, sense,
sparsity, bounds, integrality, application domain), names one parameter per
active coefficient slot, draws values for those parameters from per-parameter
ranges, and keeps only instances the solve engine certifies Optimal.
Everything is a pure function of (seed, config).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .domains import SEED_DOMAINS
from .model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    ModelError,
    Problem,
    Relation,
    Sense,
    canonicalize,
)
from .solver import LimitError, SolverConfig, Status, solve_milp

log = logging.getLogger(__name__)

INF = float("inf")


class MissingParameterError(KeyError):
    def __init__(self, names: set[str]):
        super().__init__(f"no range defined for: {', '.join(sorted(names))}")
        self.names = frozenset(names)


@dataclass(frozen=True)
class SamplerConfig:
    n_range: tuple[int, int] = (2, 8)
    m_range: tuple[int, int] = (2, 8)
    keep_prob: float = 0.7        # per-slot chance a coefficient is active
    bound_prob: float = 0.3       # per-variable chance of an explicit l_j / u_j
    integer_prob: float = 0.3
    relation_weights: tuple[float, float, float] = (0.45, 0.45, 0.10)  # LE, GE, EQ
    domains: tuple[str, ...] = SEED_DOMAINS
    retry_budget: int = 25        # coefficient resamples before abandoning a skeleton

    def __post_init__(self) -> None:
        if not self.domains:
            raise ValueError("domain list must be nonempty")
        if self.n_range[0] < 1 or self.m_range[0] < 1:
            raise ValueError("n and m ranges must start at 1 or more")
        if self.retry_budget < 1:
            raise ValueError("retry budget must be at least 1")


@dataclass(frozen=True)
class StructureSpec:
    n: int
    m: int
    sense: Sense
    has_lower: tuple[bool, ...]
    has_upper: tuple[bool, ...]
    integrality: tuple[bool, ...]
    obj_mask: tuple[bool, ...]
    cons_masks: tuple[tuple[bool, ...], ...]
    relations: tuple[Relation, ...]
    domain: str

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be at least 1")
        if not any(self.obj_mask):
            raise ValueError("objective mask has no active slot")
        for i, mask in enumerate(self.cons_masks):
            if not any(mask):
                raise ValueError(f"constraint {i} mask has no active slot")


@dataclass(frozen=True)
class SymbolicProblem:
    """A structure plus one named parameter per active coefficient slot."""

    spec: StructureSpec
    parameters: tuple[str, ...]

    def parameter_set(self) -> frozenset[str]:
        return frozenset(self.parameters)


@dataclass(frozen=True)
class ParameterRanges:
    ranges: dict[str, tuple[float, float, bool]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, (lo, hi, _) in self.ranges.items():
            if lo > hi:
                raise ValueError(f"range for {name} has min > max")

    def missing_for(self, sym: SymbolicProblem) -> set[str]:
        return set(sym.parameters) - set(self.ranges)


def _child_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng([seed, *path])


def _mask(rng: np.random.Generator, n: int, keep: float) -> tuple[bool, ...]:
    mask = [bool(rng.random() < keep) for _ in range(n)]
    if not any(mask):
        mask[int(rng.integers(0, n))] = True
    return tuple(mask)


def sample_structure(seed: int, config: SamplerConfig | None = None) -> StructureSpec:
    """Draw a problem skeleton; deterministic in (seed, config)."""
    config = config or SamplerConfig()
    rng = _child_rng(seed, 0)
    n = int(rng.integers(config.n_range[0], config.n_range[1] + 1))
    m = int(rng.integers(config.m_range[0], config.m_range[1] + 1))
    sense = Sense.MAX if rng.random() < 0.5 else Sense.MIN
    has_lower = tuple(bool(rng.random() < config.bound_prob) for _ in range(n))
    has_upper = tuple(bool(rng.random() < config.bound_prob) for _ in range(n))
    integrality = tuple(bool(rng.random() < config.integer_prob) for _ in range(n))
    obj_mask = _mask(rng, n, config.keep_prob)
    cons_masks = tuple(_mask(rng, n, config.keep_prob) for _ in range(m))
    w = np.asarray(config.relation_weights, dtype=float)
    rel_choices = (Relation.LE, Relation.GE, Relation.EQ)
    relations = tuple(
        rel_choices[int(rng.choice(3, p=w / w.sum()))] for _ in range(m)
    )
    domain = config.domains[int(rng.integers(0, len(config.domains)))]
    return StructureSpec(
        n=n, m=m, sense=sense,
        has_lower=has_lower, has_upper=has_upper, integrality=integrality,
        obj_mask=obj_mask, cons_masks=cons_masks, relations=relations,
        domain=domain,
    )


def build_symbolic(spec: StructureSpec) -> SymbolicProblem:
    """Name every active slot: c_j, a_i_j, b_i, l_j, u_j (1-based)."""
    names: list[str] = []
    for j in range(spec.n):
        if spec.obj_mask[j]:
            names.append(f"c_{j + 1}")
    for i in range(spec.m):
        for j in range(spec.n):
            if spec.cons_masks[i][j]:
                names.append(f"a_{i + 1}_{j + 1}")
    for i in range(spec.m):
        names.append(f"b_{i + 1}")
    for j in range(spec.n):
        if spec.has_lower[j]:
            names.append(f"l_{j + 1}")
    for j in range(spec.n):
        if spec.has_upper[j]:
            names.append(f"u_{j + 1}")
    return SymbolicProblem(spec=spec, parameters=tuple(names))


def draw_parameters(
    sym: SymbolicProblem, ranges: ParameterRanges, seed: int
) -> dict[str, float]:
    """One uniform draw per parameter, in canonical parameter order."""
    missing = ranges.missing_for(sym)
    if missing:
        raise MissingParameterError(missing)
    rng = _child_rng(seed, 1)
    values: dict[str, float] = {}
    for name in sym.parameters:
        lo, hi, is_int = ranges.ranges[name]
        if is_int:
            values[name] = float(rng.integers(int(lo), int(hi) + 1))
        else:
            values[name] = round(float(rng.uniform(lo, hi)), 2)
    return values


def realize(sym: SymbolicProblem, values: dict[str, float]) -> Problem:
    """Assemble the concrete Problem from drawn parameter values."""
    spec = sym.spec
    variables = []
    for j in range(spec.n):
        lower = values[f"l_{j + 1}"] if spec.has_lower[j] else 0.0
        upper = values[f"u_{j + 1}"] if spec.has_upper[j] else INF
        variables.append(
            DecisionVariable(f"x{j + 1}", lower, upper, integral=spec.integrality[j])
        )
    obj_terms = tuple(
        (values[f"c_{j + 1}"], j) for j in range(spec.n) if spec.obj_mask[j]
    )
    constraints = []
    for i in range(spec.m):
        terms = tuple(
            (values[f"a_{i + 1}_{j + 1}"], j)
            for j in range(spec.n)
            if spec.cons_masks[i][j]
        )
        constraints.append(
            Constraint(LinearExpr(terms), spec.relations[i], values[f"b_{i + 1}"])
        )
    return canonicalize(
        Problem(
            sense=spec.sense,
            variables=tuple(variables),
            objective=LinearExpr(obj_terms),
            constraints=tuple(constraints),
            class_tag="linear",
            metadata={"domain": spec.domain},
        )
    )


def sample_coefficients(
    sym: SymbolicProblem, ranges: ParameterRanges, seed: int
) -> Problem:
    """Draw all parameters and build the canonical Problem."""
    return realize(sym, draw_parameters(sym, ranges, seed))


def filter_feasible(
    candidates: list[Problem], cfg: SolverConfig | None = None
) -> list[tuple[Problem, float]]:
    """Keep exactly the candidates the solve engine certifies Optimal."""
    cfg = cfg or SolverConfig()
    kept: list[tuple[Problem, float]] = []
    for k, problem in enumerate(candidates):
        try:
            outcome = solve_milp(problem, cfg)
        except LimitError as exc:
            log.info("candidate %d discarded: solver limit (%s)", k, exc)
            continue
        if outcome.status is Status.OPTIMAL:
            kept.append((problem, outcome.value))
        else:
            log.info("candidate %d discarded: %s", k, outcome.status.value)
    return kept


def default_ranges(sym: SymbolicProblem) -> ParameterRanges:
    """Bundled offline ranges: positive, feasibility-friendly, readable."""
    ranges: dict[str, tuple[float, float, bool]] = {}
    for name in sym.parameters:
        kind = name.split("_", 1)[0]
        if kind == "c":
            ranges[name] = (1.0, 15.0, True)
        elif kind == "a":
            ranges[name] = (1.0, 9.0, True)
        elif kind == "b":
            ranges[name] = (20.0, 120.0, True)
        elif kind == "l":
            ranges[name] = (0.0, 5.0, True)
        elif kind == "u":
            ranges[name] = (10.0, 60.0, True)
        else:
            raise ValueError(f"unrecognized parameter {name!r}")
    return ParameterRanges(ranges)
