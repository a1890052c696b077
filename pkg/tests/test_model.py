import numpy as np
import pytest

from milpforge.model import (
    Assignment,
    Constraint,
    DecisionVariable,
    DimensionMismatch,
    LinearExpr,
    ModelError,
    Problem,
    Relation,
    Sense,
    binary,
    canonicalize,
    continuous,
    evaluate,
    integer,
)

from util import lp_vertex_enumerate


def two_var_max() -> Problem:
    # max 3x + 2y  s.t.  x + y <= 4,  x <= 2,  x,y >= 0
    return Problem(
        sense=Sense.MAX,
        variables=(continuous("x"), continuous("y")),
        objective=LinearExpr(((3.0, 0), (2.0, 1))),
        constraints=(
            Constraint(LinearExpr(((1.0, 0), (1.0, 1))), Relation.LE, 4.0),
            Constraint(LinearExpr(((1.0, 0),)), Relation.LE, 2.0, label="x<=2"),
        ),
    )


class TestEvaluate:
    def test_feasible_vertex(self):
        p = two_var_max()
        # independent oracle: enumerate the polytope's vertices
        assert lp_vertex_enumerate(p) == pytest.approx(10.0, abs=1e-12)
        rep = evaluate(p, (2.0, 2.0))
        assert rep.objective == 10.0
        assert rep.feasible
        assert rep.violations == ()

    def test_single_bound_violated(self):
        rep = evaluate(two_var_max(), (3.0, 0.0))
        assert rep.objective == 9.0
        assert not rep.feasible
        assert rep.violations == (("x<=2", 1.0),)

    def test_integrality_violation(self):
        p = Problem(
            sense=Sense.MAX,
            variables=(integer("x", 0, 10),),
            objective=LinearExpr(((1.0, 0),)),
        )
        rep = evaluate(p, (1.5,))
        assert not rep.feasible
        assert rep.violations == (("x integrality", 0.5),)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            evaluate(two_var_max(), (1.0,))

    def test_magnitudes_nonnegative(self):
        rng = np.random.default_rng(7)
        p = two_var_max()
        for _ in range(200):
            pt = tuple(rng.uniform(-5, 8, size=2))
            rep = evaluate(p, pt)
            assert all(mag >= 0 for _, mag in rep.violations)
            assert rep.feasible == (len(rep.violations) == 0)

    def test_accepts_assignment(self):
        rep = evaluate(two_var_max(), Assignment.of([2, 2]))
        assert rep.feasible


class TestCanonicalize:
    def test_merges_duplicate_terms(self):
        e = LinearExpr(((2.0, 0), (3.0, 0)))
        assert e.terms == ((5.0, 0),)

    def test_drops_zero_coefficients(self):
        e = LinearExpr(((0.0, 0), (1.0, 1), (-1.0, 1)))
        assert e.terms == ()

    def test_folds_constraint_constant(self):
        p = Problem(
            sense=Sense.MIN,
            variables=(continuous("x"),),
            objective=LinearExpr(((1.0, 0),)),
            constraints=(Constraint(LinearExpr(((1.0, 0),), 1.0), Relation.LE, 4.0),),
        )
        q = canonicalize(p)
        assert q.constraints[0].lhs.constant == 0.0
        assert q.constraints[0].rhs == 3.0

    def test_idempotent(self):
        p = two_var_max()
        assert canonicalize(canonicalize(p)) == canonicalize(p)

    def test_evaluate_unchanged(self):
        rng = np.random.default_rng(11)
        p = Problem(
            sense=Sense.MAX,
            variables=(continuous("x"), continuous("y", -3, 3)),
            objective=LinearExpr(((1.0, 0), (2.0, 1)), 5.0),
            constraints=(
                Constraint(LinearExpr(((1.0, 0), (1.0, 1)), 2.5), Relation.GE, 1.0),
                Constraint(LinearExpr(((2.0, 0),), -1.0), Relation.EQ, 3.0),
            ),
        )
        q = canonicalize(p)
        for _ in range(100):
            pt = tuple(rng.uniform(-4, 4, size=2))
            a, b = evaluate(p, pt), evaluate(q, pt)
            assert a.objective == b.objective
            assert a.feasible == b.feasible


class TestTypes:
    def test_binary_is_integral_unit_box(self):
        v = binary("b")
        assert v.integral and v.lower == 0.0 and v.upper == 1.0

    def test_bad_bounds_rejected(self):
        with pytest.raises(ModelError):
            DecisionVariable("x", 2.0, 1.0)

    def test_bad_name_rejected(self):
        with pytest.raises(ModelError):
            DecisionVariable("2x", 0.0, 1.0)

    def test_duplicate_names_rejected(self):
        with pytest.raises(ModelError):
            Problem(
                sense=Sense.MIN,
                variables=(continuous("x"), continuous("x")),
                objective=LinearExpr(((1.0, 0),)),
            )

    def test_out_of_range_index_rejected(self):
        with pytest.raises(ModelError):
            Problem(
                sense=Sense.MIN,
                variables=(continuous("x"),),
                objective=LinearExpr(((1.0, 5),)),
            )

    def test_terms_sorted_strictly_increasing(self):
        e = LinearExpr(((1.0, 3), (2.0, 0), (4.0, 1)))
        assert [i for _, i in e.terms] == [0, 1, 3]
