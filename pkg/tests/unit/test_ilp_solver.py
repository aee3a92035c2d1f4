"""Unit tests for problem construction and the 0/1 solvers."""

from decimal import Decimal
from fractions import Fraction
from itertools import product
import random

import pytest

from src.core.exceptions import (
    InvalidProblemException, NoObjectiveException, ProblemTooLargeException, TaskNotFoundException
)
from src.domain.models.constraints import ConstraintRule, Objective
from src.domain.models.ilp import ConstraintRow, IlpProblem, ObjectiveRow
from src.domain.services.ilp_solver import (
    branch_and_bound, brute_force, build_problem, evaluate, relaxation_bound, solve_problem_document
)
from tests.fixtures.generators import random_problem


def _problem(direction, costs, rows=(), fixed_contribution=0):
    n = len(costs)
    return IlpProblem(
        variables=tuple(f"x{i}" for i in range(n)),
        objective=ObjectiveRow(
            direction=direction,
            coefficients=tuple(Decimal(c) for c in costs),
            fixed_contribution=Decimal(fixed_contribution),
        ),
        rows=tuple(
            ConstraintRow(coefficients=tuple(Decimal(a) for a in coefficients), relation=relation, bound=Decimal(bound))
            for coefficients, relation, bound in rows
        ),
    )


def _best_completion(problem, partial):
    """Exact optimum over the completions of ``partial`` by enumeration."""
    free = [name for name in problem.variables if name not in partial]
    values = []
    for bits in product((0, 1), repeat=len(free)):
        assignment = {**partial, **dict(zip(free, bits))}
        result = evaluate(problem, assignment)
        if result.feasible:
            values.append(Fraction(result.objective_value))
    if not values:
        return None
    return max(values) if problem.objective.direction == 'max' else min(values)


class TestBuildProblem:
    """Tests for translating a model into a program."""

    def test_four_task_program(self, four_task_model, four_task_objective, four_task_time_limit):
        """Test one variable per task and the time row."""
        problem = build_problem(four_task_model, four_task_objective, four_task_time_limit)
        assert problem.variables == ("A", "B", "C", "D")
        assert problem.objective.coefficients == tuple(Decimal(v) for v in (10, 7, 6, 4))
        assert problem.objective.fixed_contribution == 0
        assert problem.objective.label == "importance"
        row = problem.rows[0]
        assert row.coefficients == tuple(Decimal(v) for v in (5, 4, 3, 1))
        assert row.relation == "<="
        assert row.bound == 9
        assert row.label == "time"
        assert problem.fixed == {}

    def test_reserved_task_folded(self, four_task_model, four_task_objective, four_task_time_limit):
        """Test a reserved task leaves the variables and reduces the bounds."""
        problem = build_problem(four_task_model, four_task_objective, four_task_time_limit, reserved={"A"})
        assert problem.variables == ("B", "C", "D")
        assert problem.objective.fixed_contribution == 10
        assert problem.rows[0].coefficients == tuple(Decimal(v) for v in (4, 3, 1))
        assert problem.rows[0].bound == 4
        assert problem.fixed == {"A": 1}

    def test_greater_rule(self, four_task_model, four_task_objective):
        """Test lower bounds become >= rows."""
        rule = ConstraintRule(property="time", relation="greater", value=Decimal(6))
        problem = build_problem(four_task_model, four_task_objective, [rule])
        assert problem.rows[0].relation == ">="

    def test_no_constraints(self, four_task_model, four_task_objective):
        """Test no rules gives no rows."""
        assert build_problem(four_task_model, four_task_objective, []).rows == ()

    def test_missing_objective(self, four_task_model, four_task_time_limit):
        """Test constraints without an objective."""
        with pytest.raises(NoObjectiveException):
            build_problem(four_task_model, None, four_task_time_limit)

    def test_unknown_reserved_task(self, four_task_model, four_task_objective):
        """Test reserved names must be in the model."""
        with pytest.raises(TaskNotFoundException):
            build_problem(four_task_model, four_task_objective, [], reserved={"Z"})

    def test_trivially_infeasible(self, four_task_model, four_task_objective):
        """Test fixed tasks alone exceeding an upper bound."""
        rule = ConstraintRule(property="time", relation="less", value=Decimal(4))
        problem = build_problem(four_task_model, four_task_objective, [rule], reserved={"A"})
        assert problem.trivially_infeasible
        solution = branch_and_bound(problem)
        assert solution.status == "infeasible"
        assert solution.stats.nodes_explored == 0


class TestRelaxationBound:
    """Tests for the relaxation bound."""

    def test_complete_assignment_is_exact(self, four_task_problem):
        """Test every variable assigned gives the objective value."""
        assert relaxation_bound(four_task_problem, {"A": 1, "B": 0, "C": 1, "D": 1}) == 20

    def test_no_rows(self):
        """Test bound is the constant plus every positive coefficient."""
        problem = _problem("max", [3, 0, 5], fixed_contribution=2)
        assert relaxation_bound(problem, {}) == 10

    def test_root_bound(self, four_task_problem):
        """Test the root bound dominates the optimum."""
        assert relaxation_bound(four_task_problem, {}) >= 20

    def test_infeasible_partial(self, four_task_problem):
        """Test an over-budget partial assignment is pruned."""
        assert relaxation_bound(four_task_problem, {"A": 1, "B": 1, "C": 1}) is None

    def test_unknown_variable(self, four_task_problem):
        """Test names must be variables."""
        with pytest.raises(InvalidProblemException):
            relaxation_bound(four_task_problem, {"Z": 1})

    def test_admissible(self):
        """Test the bound never cuts off the best completion."""
        rng = random.Random(5)
        for _ in range(40):
            problem = random_problem(rng, max_variables=6)
            partial = {name: rng.randint(0, 1) for name in problem.variables if rng.random() < 0.4}
            best = _best_completion(problem, partial)
            bound = relaxation_bound(problem, partial)
            if best is None:
                continue
            assert bound is not None
            if problem.objective.direction == 'max':
                assert bound >= best
            else:
                assert bound <= best


class TestBranchAndBound:
    """Tests for the exact search."""

    def test_four_task_optimum(self, four_task_problem):
        """Test the knapsack keeps A, C and D."""
        solution = branch_and_bound(four_task_problem)
        assert solution.status == "optimal"
        assert solution.assignment == {"A": 1, "B": 0, "C": 1, "D": 1}
        assert solution.objective_value == 20
        assert solution.stats.best_bound == solution.objective_value
        assert solution.stats.root_bound == 20

    def test_reserved_optimum(self, four_task_model, four_task_objective, four_task_time_limit):
        """Test fixed tasks are reported after the variables."""
        problem = build_problem(four_task_model, four_task_objective, four_task_time_limit, reserved={"A"})
        solution = branch_and_bound(problem)
        assert solution.objective_value == 20
        assert list(solution.assignment) == ["B", "C", "D", "A"]
        assert solution.selected() == ["C", "D", "A"]

    def test_infeasible(self):
        """Test rows with no 0/1 solution."""
        problem = _problem("max", [1, 1], [((1, 1), ">=", 3)])
        solution = branch_and_bound(problem)
        assert solution.status == "infeasible"
        assert solution.assignment == {}
        assert solution.objective_value is None

    def test_no_rows_keeps_everything(self):
        """Test unconstrained maximization with zero coefficients."""
        solution = branch_and_bound(_problem("max", [3, 0, 5]))
        assert solution.assignment == {"x0": 1, "x1": 1, "x2": 1}

    def test_ties_prefer_earlier_variables(self):
        """Test equal optima resolve to the lexicographically greatest assignment."""
        solution = branch_and_bound(_problem("max", [1, 1], [((1, 1), "<=", 1)]))
        assert solution.assignment == {"x0": 1, "x1": 0}

    def test_minimization(self):
        """Test min 3x + 2y subject to x + y >= 1."""
        solution = branch_and_bound(_problem("min", [3, 2], [((1, 1), ">=", 1)]))
        assert solution.assignment == {"x0": 0, "x1": 1}
        assert solution.objective_value == 2

    def test_fractional_coefficients(self):
        """Test decimal coefficients solved exactly."""
        problem = _problem("max", ["0.1", "0.2", "0.3"], [(("0.5", "0.5", "0.5"), "<=", "1.0")])
        solution = branch_and_bound(problem)
        assert solution.assignment == {"x0": 0, "x1": 1, "x2": 1}
        assert solution.objective_value == Decimal("0.5")

    def test_empty_problem(self):
        """Test zero variables reports the constant."""
        solution = branch_and_bound(_problem("max", [], fixed_contribution=7))
        assert solution.status == "optimal"
        assert solution.objective_value == 7

    def test_deterministic(self):
        """Test repeated runs give identical documents."""
        problem = random_problem(random.Random(21), max_variables=15)
        assert branch_and_bound(problem).model_dump_json() == branch_and_bound(problem).model_dump_json()

    def test_min_max_duality(self):
        """Test min c.x equals -max (-c).x with the same assignment."""
        rng = random.Random(8)
        for _ in range(20):
            problem = random_problem(rng, max_variables=10)
            negated = problem.model_copy(update={"objective": ObjectiveRow(
                direction="max" if problem.objective.direction == "min" else "min",
                coefficients=tuple(-c for c in problem.objective.coefficients),
                fixed_contribution=-problem.objective.fixed_contribution,
            )})
            original, flipped = branch_and_bound(problem), branch_and_bound(negated)
            assert original.status == flipped.status
            if original.status == "optimal":
                assert original.objective_value == -flipped.objective_value
                assert original.assignment == flipped.assignment

    def test_matches_brute_force(self):
        """Test agreement with enumeration on small random problems."""
        rng = random.Random(13)
        for _ in range(40):
            problem = random_problem(rng, max_variables=10)
            exact, oracle = branch_and_bound(problem), brute_force(problem)
            assert exact.status == oracle.status
            assert exact.assignment == oracle.assignment
            assert exact.objective_value == oracle.objective_value

    def test_root_bound_above_optimum(self):
        """Test max 3x + 2y subject to 2x + 2y <= 3 proves 3 from a root bound of 4."""
        solution = branch_and_bound(_problem("max", [3, 2], [((2, 2), "<=", 3)]))
        assert solution.assignment == {"x0": 1, "x1": 0}
        assert solution.stats.root_bound == 4
        assert solution.stats.best_bound == solution.objective_value == 3

    def test_root_bound_below_minimum(self):
        """Test a minimization root bound sits under the optimum."""
        solution = branch_and_bound(_problem("min", [3, 2], [((2, 2), ">=", 3)]))
        assert solution.objective_value == 5
        assert solution.stats.root_bound == 4
        assert solution.stats.best_bound == 5

    def test_proven_bound_on_random_problems(self):
        """Test the closed-subtree bound never exceeds the incumbent."""
        rng = random.Random(17)
        for _ in range(40):
            problem = random_problem(rng, max_variables=12)
            solution = branch_and_bound(problem)
            if solution.status != "optimal":
                assert solution.stats.best_bound is None
                continue
            assert solution.stats.best_bound == solution.objective_value
            if problem.objective.direction == "max":
                assert solution.stats.root_bound >= solution.objective_value
            else:
                assert solution.stats.root_bound <= solution.objective_value


class TestBruteForce:
    """Tests for the enumeration oracle."""

    def test_four_task_optimum(self, four_task_problem):
        """Test the oracle on the knapsack."""
        solution = brute_force(four_task_problem)
        assert solution.assignment == {"A": 1, "B": 0, "C": 1, "D": 1}
        assert solution.stats.nodes_explored == 16

    def test_no_variables(self):
        """Test the empty assignment is visited once."""
        solution = brute_force(_problem("min", [], fixed_contribution=3))
        assert solution.objective_value == 3
        assert solution.stats.nodes_explored == 1

    def test_too_large(self, four_task_problem):
        """Test the enumeration limit."""
        with pytest.raises(ProblemTooLargeException):
            brute_force(four_task_problem, max_variables=3)

    def test_matches_lexicographic_enumeration(self):
        """Test the result is the first optimum in 1-before-0 order."""
        rng = random.Random(29)
        for _ in range(60):
            problem = random_problem(rng, max_variables=8)
            expected_value, expected = None, None
            for bits in product((1, 0), repeat=problem.size):
                result = evaluate(problem, dict(zip(problem.variables, bits)))
                if not result.feasible:
                    continue
                value = result.objective_value if problem.objective.direction == "max" else -result.objective_value
                if expected_value is None or value > expected_value:
                    expected_value, expected = value, bits
            solution = brute_force(problem)
            if expected is None:
                assert solution.status == "infeasible"
            else:
                assert tuple(solution.assignment[name] for name in problem.variables) == expected
            assert solution.stats.nodes_explored == 2 ** problem.size

    def test_ties_prefer_earlier_variables(self):
        """Test equal optima resolve like the search does."""
        solution = brute_force(_problem("max", [1, 1, 1], [((1, 1, 1), "<=", 2)]))
        assert solution.assignment == {"x0": 1, "x1": 1, "x2": 0}


class TestEvaluate:
    """Tests for assignment evaluation."""

    def test_feasible_assignment(self, four_task_problem):
        """Test objective and row totals."""
        result = evaluate(four_task_problem, {"A": 1, "B": 0, "C": 1, "D": 1})
        assert result.objective_value == 20
        assert result.row_totals == (Decimal(9),)
        assert result.feasible

    def test_infeasible_assignment(self, four_task_problem):
        """Test over-budget assignment."""
        assert not evaluate(four_task_problem, {"A": 1, "B": 1, "C": 1, "D": 0}).feasible

    def test_missing_variable(self, four_task_problem):
        """Test incomplete assignment."""
        with pytest.raises(InvalidProblemException) as exc_info:
            evaluate(four_task_problem, {"A": 1})
        assert exc_info.value.details["missing"] == ["B", "C", "D"]

    def test_non_binary_value(self, four_task_problem):
        """Test values outside 0/1."""
        with pytest.raises(InvalidProblemException):
            evaluate(four_task_problem, {"A": 2, "B": 0, "C": 0, "D": 0})


class TestSolveProblemDocument:
    """Tests for standalone problem documents."""

    def test_solve_document(self):
        """Test word relations are accepted."""
        solution = solve_problem_document({
            "direction": "max",
            "variables": ["A", "B", "C", "D"],
            "objective_coefficients": [10, 7, 6, 4],
            "rows": [{"coefficients": [5, 4, 3, 1], "relation": "less", "bound": 9}],
        })
        assert solution.selected() == ["A", "C", "D"]

    def test_shape_mismatch(self):
        """Test coefficient count must match the variables."""
        with pytest.raises(InvalidProblemException) as exc_info:
            solve_problem_document({"direction": "max", "variables": ["A"], "objective_coefficients": [1, 2]})
        assert exc_info.value.details["errors"]

    def test_unknown_field(self):
        """Test extra keys are rejected."""
        with pytest.raises(InvalidProblemException):
            solve_problem_document({"direction": "max", "objective": []})
