"""Bundled datasets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..instance_io import from_text
from ..model import Problem

MINI_SUITE_DIR = Path(__file__).parent / "mini_suite"


@dataclass(frozen=True)
class SuiteItem:
    instance_id: str
    class_tag: str
    description: str
    problem: Problem
    label: float


def mini_suite() -> list[SuiteItem]:
    """The bundled 10-problem offline suite with certified labels."""
    items = []
    with open(MINI_SUITE_DIR / "manifest.jsonl", encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            problem = from_text((MINI_SUITE_DIR / row["path"]).read_text(encoding="utf-8"))
            description = (MINI_SUITE_DIR / f"{row['id']}.desc.txt").read_text(encoding="utf-8")
            items.append(
                SuiteItem(row["id"], row["class"], description, problem, row["label"])
            )
    return items
