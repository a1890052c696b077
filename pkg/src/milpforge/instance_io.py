"""Canonical instance file format.

UTF-8 text, one declaration per line:

    var <name> <lower> <upper> <int|cont>
    min|max <coef>*<name> [+ <coef>*<name> ...] [+ <const>]
    st [<label>:] <coef>*<name> [+ ...] <=|=|>= <rhs>
    tag <class_tag>
    meta <key> <value...>

Blank lines and lines starting with `#` are ignored. Variables must be
declared before the objective or constraints that use them. Infinite bounds
are written `inf` / `-inf`. The full grammar is documented in
docs/instance-format.md.
"""

from __future__ import annotations

import math
import re

from .model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
    canonicalize,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_TERM = re.compile(r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+|inf)(?:[eE][+-]?\d+)?)\*(?P<name>[A-Za-z_][A-Za-z0-9_]*)$")
_NUM = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+|inf)(?:[eE][+-]?\d+)?$")


def _fmt(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def _expr_text(expr: LinearExpr, names: list[str]) -> str:
    parts = [f"{_fmt(c)}*{names[i]}" for c, i in expr.terms]
    if expr.constant != 0.0 or not parts:
        parts.append(_fmt(expr.constant))
    return " + ".join(parts)


def to_text(problem: Problem) -> str:
    """Serialize in canonical form; from_text(to_text(p)) == canonicalize(p)."""
    p = canonicalize(problem)
    names = [v.name for v in p.variables]
    lines: list[str] = []
    if p.class_tag:
        lines.append(f"tag {p.class_tag}")
    for key in sorted(p.metadata):
        value = p.metadata[key]
        if "\n" in key or "\n" in value or " " in key:
            raise ValueError(f"metadata entry {key!r} is not serializable")
        lines.append(f"meta {key} {value}")
    for v in p.variables:
        kind = "int" if v.integral else "cont"
        lines.append(f"var {v.name} {_fmt(v.lower)} {_fmt(v.upper)} {kind}")
    lines.append(f"{p.sense.value} {_expr_text(p.objective, names)}")
    for k, con in enumerate(p.constraints):
        label = f"{con.label}: " if con.label else ""
        if con.label and "\n" in con.label:
            raise ValueError(f"constraint label {con.label!r} is not serializable")
        lines.append(f"st {label}{_expr_text(con.lhs, names)} {con.relation.value} {_fmt(con.rhs)}")
    return "\n".join(lines) + "\n"


def _parse_number(tok: str, lineno: int, col: int) -> float:
    if not _NUM.match(tok):
        raise ParseError(f"expected a number, got {tok!r}", lineno, col)
    if tok.endswith("inf"):
        return -math.inf if tok.startswith("-") else math.inf
    return float(tok)


def _parse_expr(text: str, index: dict[str, int], lineno: int, base_col: int) -> LinearExpr:
    terms: list[tuple[float, int]] = []
    constant = 0.0
    col = base_col
    for piece in text.split(" + "):
        piece = piece.strip()
        if not piece:
            raise ParseError("empty term", lineno, col)
        m = _TERM.match(piece)
        if m:
            name = m.group("name")
            if name not in index:
                raise ParseError(f"undeclared variable {name!r}", lineno, col)
            terms.append((_parse_number(m.group("coef"), lineno, col), index[name]))
        elif _NUM.match(piece):
            constant += _parse_number(piece, lineno, col)
        else:
            raise ParseError(f"bad term {piece!r}", lineno, col)
        col += len(piece) + 3
    return LinearExpr(tuple(terms), constant)


def from_text(text: str) -> Problem:
    variables: list[DecisionVariable] = []
    index: dict[str, int] = {}
    sense: Sense | None = None
    objective: LinearExpr | None = None
    constraints: list[Constraint] = []
    class_tag = ""
    metadata: dict[str, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "var":
            toks = rest.split()
            if len(toks) != 4:
                raise ParseError("expected: var <name> <lower> <upper> <int|cont>", lineno)
            name, lo, hi, kind = toks
            if name in index:
                raise ParseError(f"duplicate variable {name!r}", lineno)
            if kind not in ("int", "cont"):
                raise ParseError(f"variable kind must be int or cont, got {kind!r}", lineno)
            variables.append(
                DecisionVariable(
                    name,
                    _parse_number(lo, lineno, len("var ") + len(name) + 2),
                    _parse_number(hi, lineno, 1),
                    integral=(kind == "int"),
                )
            )
            index[name] = len(variables) - 1
        elif head in ("min", "max"):
            if objective is not None:
                raise ParseError("duplicate objective line", lineno)
            sense = Sense.MIN if head == "min" else Sense.MAX
            objective = _parse_expr(rest, index, lineno, len(head) + 2)
        elif head == "st":
            label: str | None = None
            body = rest
            if ":" in rest:
                maybe_label, _, tail = rest.partition(":")
                label = maybe_label.strip()
                body = tail.strip()
                if not label:
                    raise ParseError("empty constraint label", lineno)
            rel = None
            for token, relation in ((" <= ", Relation.LE), (" >= ", Relation.GE), (" = ", Relation.EQ)):
                if token in body:
                    rel = relation
                    lhs_text, _, rhs_text = body.partition(token)
                    break
            if rel is None:
                raise ParseError("missing or malformed relation (expected <=, =, or >=)", lineno, len(line) // 2 + 1)
            lhs = _parse_expr(lhs_text.strip(), index, lineno, len("st ") + 1)
            rhs = _parse_number(rhs_text.strip(), lineno, len(line) - len(rhs_text.strip()) + 1)
            constraints.append(Constraint(lhs, rel, rhs, label=label))
        elif head == "tag":
            class_tag = rest
        elif head == "meta":
            key, _, value = rest.partition(" ")
            if not key:
                raise ParseError("expected: meta <key> <value>", lineno)
            metadata[key] = value
        else:
            raise ParseError(f"unknown declaration {head!r}", lineno)

    if not variables:
        raise ParseError("no variables declared", max(1, text.count('\n') + 1))
    if objective is None or sense is None:
        raise ParseError("no objective line", max(1, text.count('\n') + 1))
    return canonicalize(
        Problem(
            sense=sense,
            variables=tuple(variables),
            objective=objective,
            constraints=tuple(constraints),
            class_tag=class_tag,
            metadata=metadata,
        )
    )
