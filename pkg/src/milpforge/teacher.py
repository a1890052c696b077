"""Deterministic offline description teacher.

A live chat backend normally writes the symbolic problem descriptions; this
module stands in for it so the whole generation pipeline runs, and is
testable, with no model behind it. Fixed-size flow classes instantiate the
bundled template files (one file per class/variant, front-matter lists the
referenced parameters); every other class synthesizes its description
programmatically because its parameter set depends on the sampled structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classes.base import ClassId, ClassInstance
from .classes.covering import BinPackingData, SetCoverData
from .classes.flows import FlowData, TransportationData
from .classes.knapsack import KnapsackData
from .classes.scheduling import SchedulingData
from .classes.tsp import TspData
from .model import Relation, Sense
from .nltext import SymbolicDescription, TableSpec, extract_placeholders
from .sampler import SymbolicProblem

TEMPLATE_DIR = Path(__file__).parent / "templates"


@dataclass(frozen=True)
class DescriptionTemplate:
    class_tag: str
    variant: str
    parameters: tuple[str, ...]
    body: str


class TemplateError(ValueError):
    pass


def load_template(path: Path) -> DescriptionTemplate:
    text = path.read_text(encoding="utf-8")
    if not text.startswith("---\n"):
        raise TemplateError(f"{path.name}: missing front matter")
    _, front, body = text.split("---\n", 2)
    fields: dict[str, str] = {}
    for line in front.strip().splitlines():
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    body = body.strip("\n")
    params = tuple(fields.get("parameters", "").split())
    found = extract_placeholders(body)
    if found != set(params):
        raise TemplateError(
            f"{path.name}: front matter parameters do not match placeholders "
            f"(missing {set(params) - found}, extra {found - set(params)})"
        )
    return DescriptionTemplate(
        class_tag=fields.get("class", ""),
        variant=fields.get("variant", ""),
        parameters=params,
        body=body,
    )


def load_template_library(directory: Path = TEMPLATE_DIR) -> dict[tuple[str, str], DescriptionTemplate]:
    library = {}
    for path in sorted(directory.glob("*.tmpl")):
        tmpl = load_template(path)
        library[(tmpl.class_tag, tmpl.variant)] = tmpl
    return library


def template_variants(library: dict, class_tag: str) -> list[DescriptionTemplate]:
    return [t for (tag, _), t in sorted(library.items()) if tag == class_tag]


def _join(names: list[str]) -> str:
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def describe_linear(
    sym: SymbolicProblem, entities: tuple[str, ...], seed: int, tabular: bool = False
) -> SymbolicDescription:
    """Synthesize a placeholder-carrying description covering every parameter."""
    spec = sym.spec
    rng = np.random.default_rng([seed, 7])
    names = list(entities)
    goal = "maximize its total payoff" if spec.sense is Sense.MAX else "minimize its total cost"
    unit_word = "dollars" if rng.random() < 0.6 else "credits"

    sentences = [
        f"A team working in {spec.domain} must choose activity levels for "
        f"{_join(names)}."
    ]
    gains = [
        f"\\parameter{{c_{j + 1}}} {unit_word} per unit of {names[j]}"
        for j in range(spec.n)
        if spec.obj_mask[j]
    ]
    verb = "brings in" if spec.sense is Sense.MAX else "incurs"
    sentences.append(
        f"The plan {verb} {_join(gains)}, and the team wants to {goal}."
    )

    table_rows = []
    for i in range(spec.m):
        used = [j for j in range(spec.n) if spec.cons_masks[i][j]]
        rel = spec.relations[i]
        if rel is Relation.LE:
            tail = f"at most \\parameter{{b_{i + 1}}} units of resource {i + 1} are available"
        elif rel is Relation.GE:
            tail = f"at least \\parameter{{b_{i + 1}}} units of requirement {i + 1} must be met"
        else:
            tail = f"exactly \\parameter{{b_{i + 1}}} units of quota {i + 1} must be hit"
        if tabular:
            table_rows.append(i)
            sentences.append(f"Per the table below, {tail}.")
        else:
            uses = [
                f"\\parameter{{a_{i + 1}_{j + 1}}} units per {names[j]}"
                for j in used
            ]
            sentences.append(f"It draws {_join(uses)}, and {tail}.")

    for j in range(spec.n):
        if spec.has_lower[j]:
            sentences.append(
                f"A minimum of \\parameter{{l_{j + 1}}} units of {names[j]} is required."
            )
        if spec.has_upper[j]:
            sentences.append(
                f"No more than \\parameter{{u_{j + 1}}} units of {names[j]} can be handled."
            )

    table = None
    if tabular and table_rows:
        # the table binds every a_i_j slot; unmasked slots are structural zeros
        cells = tuple(
            tuple(
                f"a_{i + 1}_{j + 1}" if spec.cons_masks[i][j] else "zero"
                for j in range(spec.n)
            )
            for i in table_rows
        )
        table = TableSpec(
            row_labels=tuple(f"resource {i + 1}" for i in table_rows),
            col_labels=tuple(names),
            cells=cells,
            caption="Per-unit requirements:",
        )
    return SymbolicDescription(text=" ".join(sentences), table=table)


def describe_class_instance(
    inst: ClassInstance, seed: int
) -> tuple[SymbolicDescription, dict[str, float]]:
    """Description plus the parameter values it references, per class."""
    labels = inst.proxy.entity_labels
    data = inst.data
    if isinstance(data, KnapsackData):
        n = len(data.values)
        dims = len(data.capacities)
        values: dict[str, float] = {}
        parts = []
        for i in range(n):
            if dims == 1:
                parts.append(
                    f"{labels[i]} weighs \\parameter{{w_1_{i + 1}}} kilograms and is worth "
                    f"\\parameter{{v_{i + 1}}} dollars"
                )
            else:
                loads = _join(
                    [f"\\parameter{{w_{d + 1}_{i + 1}}}" for d in range(dims)]
                )
                parts.append(
                    f"{labels[i]} uses {loads} units of the {dims} budgets and is worth "
                    f"\\parameter{{v_{i + 1}}} dollars"
                )
            values[f"v_{i + 1}"] = data.values[i]
            for d in range(dims):
                values[f"w_{d + 1}_{i + 1}"] = data.weights[d][i]
        if dims == 1:
            caps = "The van holds at most \\parameter{cap_1} kilograms."
        else:
            caps = (
                "The budgets allow at most "
                + _join([f"\\parameter{{cap_{d + 1}}}" for d in range(dims)])
                + " units respectively."
            )
        for d in range(dims):
            values[f"cap_{d + 1}"] = data.capacities[d]
        text = (
            "A mover must pick which goods to take: "
            + "; ".join(parts)
            + ". "
            + caps
            + " Choose the load with the greatest total value."
        )
        return SymbolicDescription(text), values

    if isinstance(data, SetCoverData):
        values = {}
        parts = []
        for k, mem in enumerate(data.members):
            cover = _join([f"requirement {e + 1}" for e in sorted(mem)])
            parts.append(
                f"hiring the {labels[k]} costs \\parameter{{cost_{k + 1}}} dollars and covers {cover}"
            )
            values[f"cost_{k + 1}"] = data.costs[k]
        text = (
            f"A site manager must staff {data.universe} requirements: "
            + "; ".join(parts)
            + ". Every requirement needs at least one hired crew. Which crews "
            "should be hired to minimize the total cost?"
        )
        return SymbolicDescription(text), values

    if isinstance(data, BinPackingData):
        values = {"cap": data.capacity}
        parts = []
        for i, size in enumerate(data.sizes):
            parts.append(f"the {labels[i]} fills \\parameter{{s_{i + 1}}} liters")
            values[f"s_{i + 1}"] = size
        text = (
            "A shipping clerk packs goods into identical crates of "
            "\\parameter{cap} liters: "
            + "; ".join(parts)
            + ". Goods cannot be split across crates. How few crates suffice?"
        )
        return SymbolicDescription(text), values

    if isinstance(data, TspData):
        n = data.n
        values = {
            f"d_{i + 1}_{j + 1}": data.dists[i][j] for i in range(n) for j in range(n)
        }
        cells = tuple(
            tuple(f"d_{i + 1}_{j + 1}" for j in range(n)) for i in range(n)
        )
        table = TableSpec(
            row_labels=labels,
            col_labels=labels,
            cells=cells,
            caption="Travel times in minutes:",
        )
        text = (
            f"A courier leaves from {labels[0]}, must visit "
            f"{_join(list(labels[1:]))} exactly once each, and returns to "
            f"{labels[0]}. The table lists travel times between every pair of "
            "stops. Find the route order with the smallest total travel time."
        )
        return SymbolicDescription(text, table=table), values

    if isinstance(data, SchedulingData):
        values = {}
        parts = []
        for k, cover in enumerate(data.covers):
            periods = _join([f"period {t + 1}" for t in range(len(cover)) if cover[t]])
            parts.append(
                f"each worker on the {labels[k]} costs \\parameter{{cost_{k + 1}}} dollars "
                f"and works {periods}"
            )
            values[f"cost_{k + 1}"] = data.costs[k]
        needs = _join(
            [
                f"\\parameter{{dem_{t + 1}}} staff in period {t + 1}"
                for t in range(len(data.demands))
            ]
        )
        for t, d in enumerate(data.demands):
            values[f"dem_{t + 1}"] = float(d)
        text = (
            "A clinic plans staffing: "
            + "; ".join(parts)
            + f". The clinic needs {needs}. How many workers should be hired on "
            "each shift to cover demand at minimum cost?"
        )
        return SymbolicDescription(text), values

    if isinstance(data, TransportationData):
        s, d = len(data.supplies), len(data.demands)
        values = {}
        for i in range(s):
            values[f"s_{i + 1}"] = float(data.supplies[i])
        for j in range(d):
            values[f"d_{j + 1}"] = float(data.demands[j])
        for i in range(s):
            for j in range(d):
                values[f"c_{i + 1}_{j + 1}"] = float(data.costs[i][j])
        origins = labels[:s]
        dests = labels[s:]
        sup = _join([f"{origins[i]} holds \\parameter{{s_{i + 1}}} pallets" for i in range(s)])
        dem = _join([f"{dests[j]} ordered \\parameter{{d_{j + 1}}} pallets" for j in range(d)])
        cost_rows = []
        for i in range(s):
            row = _join([f"\\parameter{{c_{i + 1}_{j + 1}}}" for j in range(d)])
            cost_rows.append(f"shipping one pallet from {origins[i]} costs {row} dollars to the destinations in order")
        text = (
            f"{sup}. {dem}. "
            + "; ".join(cost_rows)
            + ". All stock must ship and all orders must be met exactly. "
            "Minimize the total shipping cost."
        )
        return SymbolicDescription(text), values

    if isinstance(data, FlowData):
        values = {}
        parts = []
        for e in data.edges:
            values[f"cap_{e.tail + 1}_{e.head + 1}"] = float(e.cap)
            leg = f"the link from {labels[e.tail]} to {labels[e.head]} carries at most \\parameter{{cap_{e.tail + 1}_{e.head + 1}}} units"
            if data.required:
                values[f"cost_{e.tail + 1}_{e.head + 1}"] = float(e.cost)
                leg += f" at \\parameter{{cost_{e.tail + 1}_{e.head + 1}}} dollars each"
            parts.append(leg)
        if data.required:
            values["req"] = float(data.required)
            head = (
                f"An operator must move \\parameter{{req}} units from {labels[0]} "
                f"to {labels[-1]}: "
            )
            tail = ". Nothing can accumulate at intermediate nodes. Deliver the full amount at minimum total cost."
        else:
            head = f"An operator pushes as much as possible from {labels[0]} to {labels[-1]}: "
            tail = ". Intermediate nodes forward everything they receive. What is the maximum throughput?"
        return SymbolicDescription(head + "; ".join(parts) + tail), values

    from .classes.linear import LinearData

    if isinstance(data, LinearData):
        return _describe_realized_linear(data.problem, labels)

    raise TypeError(f"no description synthesizer for {type(data).__name__}")


def _describe_realized_linear(problem, labels) -> tuple[SymbolicDescription, dict[str, float]]:
    """Description for an already-instantiated linear problem: parameter names
    are rebuilt from the coefficient layout and valued from the problem."""
    values: dict[str, float] = {}
    goal = "maximize the total payoff" if problem.sense is Sense.MAX else "minimize the total cost"
    gains = []
    for coef, j in problem.objective.terms:
        values[f"c_{j + 1}"] = coef
        gains.append(f"\\parameter{{c_{j + 1}}} dollars per unit of {labels[j]}")
    sentences = [
        f"A planner sets levels for {_join(list(labels))} to {goal}, at "
        f"{_join(gains)}."
    ]
    for i, con in enumerate(problem.constraints):
        uses = []
        for coef, j in con.lhs.terms:
            values[f"a_{i + 1}_{j + 1}"] = coef
            uses.append(f"\\parameter{{a_{i + 1}_{j + 1}}} units per {labels[j]}")
        values[f"b_{i + 1}"] = con.rhs
        word = {
            Relation.LE: "at most",
            Relation.GE: "at least",
            Relation.EQ: "exactly",
        }[con.relation]
        sentences.append(
            f"Line {i + 1} consumes {_join(uses)} against a budget of "
            f"{word} \\parameter{{b_{i + 1}}} units."
        )
    for j, var in enumerate(problem.variables):
        if var.lower > 0:
            values[f"l_{j + 1}"] = var.lower
            sentences.append(
                f"At least \\parameter{{l_{j + 1}}} units of {labels[j]} are required."
            )
        if var.upper != float("inf"):
            values[f"u_{j + 1}"] = var.upper
            sentences.append(
                f"At most \\parameter{{u_{j + 1}}} units of {labels[j]} can be made."
            )
    return SymbolicDescription(" ".join(sentences)), values
