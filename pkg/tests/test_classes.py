from itertools import permutations

import numpy as np
import pytest

from milpforge.classes import (
    ClassId,
    DEFAULT_SIZES,
    SizeError,
    class_oracle,
    generate_class_instance,
)
from milpforge.classes.covering import (
    BinPackingData,
    SetCoverData,
    bin_packing_oracle,
    bin_packing_problem,
    set_cover_oracle,
    set_cover_problem,
)
from milpforge.classes.flows import (
    FlowData,
    FlowEdge,
    max_flow_oracle,
    max_flow_problem,
)
from milpforge.classes.knapsack import KnapsackData, oracle as knapsack_oracle
from milpforge.classes.tsp import TspData, decode_tour, oracle as tsp_oracle, tsp_problem
from milpforge.model import Constraint, LinearExpr, Problem, Relation, Sense, evaluate
from milpforge.solver import Status, solve_lp, solve_milp


FOUR_CITIES = TspData(
    (
        (0.0, 10.0, 15.0, 20.0),
        (10.0, 0.0, 35.0, 25.0),
        (15.0, 35.0, 0.0, 30.0),
        (20.0, 25.0, 30.0, 0.0),
    )
)


class TestSpecExamples:
    def test_four_city_tour(self):
        # hand check: 10 + 25 + 30 + 15 = 80
        assert tsp_oracle(FOUR_CITIES) == 80.0
        out = solve_milp(tsp_problem(FOUR_CITIES))
        assert out.status is Status.OPTIMAL
        assert out.value == 80.0

    def test_set_cover_three_sets(self):
        data = SetCoverData(
            3, (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 1, 2})), (1.0, 1.0, 3.0)
        )
        # oracle enumerates all 7 nonempty combinations
        assert set_cover_oracle(data) == 2.0
        assert solve_milp(set_cover_problem(data)).value == 2.0

    def test_knapsack_ninety(self):
        data = KnapsackData((10.0,), ((5.0, 4.0, 6.0, 3.0),), (10.0, 40.0, 30.0, 50.0))
        assert knapsack_oracle(data) == 90.0

    def test_max_flow_five(self):
        # augmenting paths by hand: s-a-t (2), s-b-t (2), s-a-b-t (1)
        data = FlowData(
            4,
            (
                FlowEdge(0, 1, 3),
                FlowEdge(0, 2, 2),
                FlowEdge(1, 3, 2),
                FlowEdge(2, 3, 3),
                FlowEdge(1, 2, 1),
            ),
        )
        assert max_flow_oracle(data) == 5.0
        assert solve_milp(max_flow_problem(data)).value == 5.0

    def test_bin_packing_cannot_share(self):
        data = BinPackingData(6.0, (6.0, 6.0))
        assert bin_packing_oracle(data) == 2.0
        assert solve_milp(bin_packing_problem(data)).value == 2.0


class TestGenerators:
    @pytest.mark.parametrize("class_id", list(ClassId))
    def test_milp_equals_oracle(self, class_id):
        for seed in range(8):
            inst = generate_class_instance(class_id, seed=seed)
            assert class_oracle(class_id, inst.data) == inst.value

    @pytest.mark.parametrize("class_id", list(ClassId))
    def test_always_optimal_by_construction(self, class_id):
        for seed in range(5):
            inst = generate_class_instance(class_id, seed=seed)
            out = solve_milp(inst.problem)
            assert out.status is Status.OPTIMAL

    @pytest.mark.parametrize("class_id", list(ClassId))
    def test_proxy_labels_unique_and_sized(self, class_id):
        inst = generate_class_instance(class_id, seed=3)
        assert len(set(inst.proxy.entity_labels)) == len(inst.proxy.entity_labels)
        assert len(inst.proxy.entity_labels) >= 2

    def test_deterministic(self):
        a = generate_class_instance(ClassId.KNAPSACK, seed=11)
        b = generate_class_instance(ClassId.KNAPSACK, seed=11)
        assert a.problem == b.problem and a.value == b.value

    def test_size_out_of_range(self):
        with pytest.raises(SizeError):
            generate_class_instance(ClassId.TSP, seed=0, sizes={"n_cities": 12})
        with pytest.raises(SizeError):
            generate_class_instance(ClassId.KNAPSACK, seed=0, sizes={"n_items": 40})

    def test_default_sizes_cover_all_classes(self):
        assert set(DEFAULT_SIZES) == set(ClassId)


class TestTspFormulation:
    def test_no_subtour_assignment_is_feasible(self):
        """Every degree-feasible arc selection that is NOT one Hamiltonian
        cycle must be cut off by the ordering constraints."""
        n = 4
        problem = tsp_problem(FOUR_CITIES)
        arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for perm in permutations(range(n)):
            if any(perm[i] == i for i in range(n)):
                continue   # must leave every city
            chosen = {(i, perm[i]) for i in range(n)}
            # fix arc variables, ask the LP whether any u assignment works
            fixed_vars = []
            for k, var in enumerate(problem.variables):
                if k < len(arcs):
                    val = 1.0 if arcs[k] in chosen else 0.0
                    fixed_vars.append(type(var)(var.name, val, val, var.integral))
                else:
                    fixed_vars.append(var)
            fixed = Problem(
                sense=problem.sense,
                variables=tuple(fixed_vars),
                objective=problem.objective,
                constraints=problem.constraints,
            )
            lp = solve_lp(fixed)
            # count cycles of the permutation
            seen, cycles = set(), 0
            for start in range(n):
                if start not in seen:
                    cycles += 1
                    cur = start
                    while cur not in seen:
                        seen.add(cur)
                        cur = perm[cur]
            if cycles == 1:
                assert lp.status is Status.OPTIMAL
            else:
                assert lp.status is Status.INFEASIBLE

    def test_optimal_point_decodes_to_single_cycle(self):
        for seed in range(6):
            inst = generate_class_instance(ClassId.TSP, seed=seed)
            tour = decode_tour(inst.data, inst.problem and solve_milp(inst.problem).point)
            assert tour[0] == 0 and tour[-1] == 0
            assert len(set(tour[:-1])) == inst.data.n


class TestOracleLimits:
    def test_knapsack_oracle_cap(self):
        data = KnapsackData((5.0,), (tuple(1.0 for _ in range(20)),), tuple(1.0 for _ in range(20)))
        with pytest.raises(SizeError):
            knapsack_oracle(data)

    def test_feasible_points_pass_evaluate(self):
        for class_id in (ClassId.KNAPSACK, ClassId.TSP, ClassId.TRANSPORTATION):
            inst = generate_class_instance(class_id, seed=2)
            out = solve_milp(inst.problem)
            assert evaluate(inst.problem, out.point).feasible
