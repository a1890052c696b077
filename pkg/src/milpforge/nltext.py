"""Symbolic natural-language machinery.

Descriptions carry ``\\parameter{name}`` placeholders that are instantiated
programmatically once coefficients are drawn; coefficient grids can also be
rendered as plain-text tables whose row/column order is shuffled per seed
without ever breaking the label-to-value association.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

PLACEHOLDER = re.compile(r"\\parameter\{([A-Za-z][A-Za-z0-9_]*)\}")
_OPENER = re.compile(r"\\parameter\{")


class PlaceholderError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class MissingValuesError(KeyError):
    def __init__(self, names: set[str]):
        super().__init__(f"no value for: {', '.join(sorted(names))}")
        self.names = frozenset(names)


def extract_placeholders(text: str) -> set[str]:
    """The exact set of placeholder names appearing in `text`."""
    for m in _OPENER.finditer(text):
        end = text.find("}", m.end())
        if end < 0:
            raise PlaceholderError("unterminated placeholder", m.start())
        name = text[m.end():end]
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
            raise PlaceholderError(f"bad placeholder name {name!r}", m.start())
    return set(PLACEHOLDER.findall(text))


@dataclass(frozen=True)
class TableSpec:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]   # parameter name per (row, col)
    caption: str = ""

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.row_labels):
            raise ValueError("cell matrix row count mismatch")
        for row in self.cells:
            if len(row) != len(self.col_labels):
                raise ValueError("cell matrix column count mismatch")

    def parameter_set(self) -> set[str]:
        return {name for row in self.cells for name in row}


@dataclass(frozen=True)
class SymbolicDescription:
    text: str
    table: TableSpec | None = None
    referenced: frozenset[str] = field(default=frozenset())

    def __post_init__(self) -> None:
        object.__setattr__(self, "referenced", frozenset(extract_placeholders(self.text)))

    def all_parameters(self) -> set[str]:
        names = set(self.referenced)
        if self.table is not None:
            names |= self.table.parameter_set()
        return names


@dataclass(frozen=True)
class FormatRules:
    max_decimals: int = 2


def format_number(value: float, rules: FormatRules = FormatRules()) -> str:
    """Integers render bare; decimals are trimmed to max_decimals, no trailing zeros."""
    if value == round(value):
        return str(int(round(value)))
    text = f"{value:.{rules.max_decimals}f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-") else "0"


def instantiate(
    desc: SymbolicDescription | str,
    values: dict[str, float],
    rules: FormatRules = FormatRules(),
) -> str:
    """Replace every placeholder with its formatted value."""
    text = desc if isinstance(desc, str) else desc.text
    needed = extract_placeholders(text)
    missing = needed - set(values)
    if missing:
        raise MissingValuesError(missing)
    return PLACEHOLDER.sub(lambda m: format_number(values[m.group(1)], rules), text)


def coverage_check(desc: SymbolicDescription, parameters) -> set[str]:
    """Parameters of the symbolic problem absent from text and table."""
    wanted = set(parameters.parameters) if hasattr(parameters, "parameters") else set(parameters)
    return wanted - desc.all_parameters()


def render_table(
    spec: TableSpec,
    values: dict[str, float],
    seed: int,
    rules: FormatRules = FormatRules(),
) -> str:
    """Aligned plain-text table with seed-shuffled row and column order."""
    missing = spec.parameter_set() - set(values)
    if missing:
        raise MissingValuesError(missing)
    rng = np.random.default_rng([seed, 101])
    row_order = [int(i) for i in rng.permutation(len(spec.row_labels))]
    col_order = [int(j) for j in rng.permutation(len(spec.col_labels))]

    header = [""] + [spec.col_labels[j] for j in col_order]
    body = []
    for i in row_order:
        body.append(
            [spec.row_labels[i]]
            + [format_number(values[spec.cells[i][j]], rules) for j in col_order]
        )
    widths = [max(len(row[k]) for row in [header] + body) for k in range(len(header))]
    lines = []
    if spec.caption:
        lines.append(spec.caption)
    for row in [header] + body:
        lines.append("  ".join(cell.ljust(widths[k]) for k, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def parse_table(text: str, has_caption: bool = True) -> dict[tuple[str, str], float]:
    """Reconstruct the (row label, column label) -> value relation.

    Labels must not contain runs of two or more spaces (the column separator).
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if has_caption:
        lines = lines[1:]
    split = re.compile(r"\s{2,}")
    cols = split.split(lines[0].strip())
    out: dict[tuple[str, str], float] = {}
    for line in lines[1:]:
        parts = split.split(line.strip())
        row_label = parts[0]
        for col_label, cell in zip(cols, parts[1:]):
            out[(row_label, col_label)] = float(cell)
    return out
