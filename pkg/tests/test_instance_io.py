import math

import numpy as np
import pytest

from milpforge.instance_io import ParseError, from_text, to_text
from milpforge.model import (
    Constraint,
    DecisionVariable,
    LinearExpr,
    Problem,
    Relation,
    Sense,
    canonicalize,
    continuous,
    integer,
)

from util import random_bounded_milp


def sample_problem() -> Problem:
    return Problem(
        sense=Sense.MAX,
        variables=(
            continuous("x"),
            integer("y", 0, 10),
            DecisionVariable("z", -math.inf, math.inf),
        ),
        objective=LinearExpr(((3.0, 0), (2.5, 1), (-1.0, 2)), 4.0),
        constraints=(
            Constraint(LinearExpr(((1.0, 0), (1.0, 1))), Relation.LE, 4.0, label="cap"),
            Constraint(LinearExpr(((2.0, 1), (1.0, 2)), 1.0), Relation.GE, -3.0),
            Constraint(LinearExpr(((1.0, 2),)), Relation.EQ, 0.5),
        ),
        class_tag="linear",
        metadata={"seed": "17"},
    )


def test_round_trip_is_canonical_identity():
    p = sample_problem()
    assert from_text(to_text(p)) == canonicalize(p)


def test_round_trip_random_problems():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = random_bounded_milp(rng)
        assert from_text(to_text(p)) == canonicalize(p)


def test_infinite_bounds_round_trip():
    text = to_text(sample_problem())
    assert "-inf" in text and "inf" in text
    p = from_text(text)
    z = p.variables[2]
    assert z.lower == -math.inf and z.upper == math.inf


def test_malformed_relation_is_parse_error():
    text = "var x 0.0 inf cont\nmin 1.0*x\nst 1.0*x < 4\n"
    with pytest.raises(ParseError) as e:
        from_text(text)
    assert e.value.line == 3


def test_undeclared_variable_is_parse_error():
    with pytest.raises(ParseError, match="undeclared"):
        from_text("var x 0.0 inf cont\nmin 1.0*y\n")


def test_bad_number_reports_line():
    with pytest.raises(ParseError) as e:
        from_text("var x zero inf cont\nmin 1.0*x\n")
    assert e.value.line == 1


def test_missing_objective_rejected():
    with pytest.raises(ParseError, match="objective"):
        from_text("var x 0.0 inf cont\n")


def test_labels_survive():
    p = from_text(to_text(sample_problem()))
    assert p.constraints[0].label == "cap"
    assert p.constraints[1].label is None


def test_metadata_and_tag_survive():
    p = from_text(to_text(sample_problem()))
    assert p.class_tag == "linear"
    assert p.metadata == {"seed": "17"}


def test_comments_and_blank_lines_ignored():
    text = "# header\n\nvar x 0.0 2.0 int\n# mid\nmax 1.0*x\n"
    p = from_text(text)
    assert p.variables[0].integral
    assert p.sense is Sense.MAX


def test_structured_class_formulations_round_trip():
    from milpforge.classes import ClassId, generate_class_instance

    for class_id in ClassId:
        problem = generate_class_instance(class_id, seed=6).problem
        assert from_text(to_text(problem)) == canonicalize(problem)

