"""0/1 task selection by exact branch-and-bound.

The program keeps one binary variable per optimizable task. Reserved and added
tasks are fixed to 1 and folded into the objective constant and the row bounds.

Search is best-first on the LP relaxation bound, solved exactly with rationals.
Among optimal assignments the solver returns the one that is lexicographically
greatest in variable order (earlier tasks kept first), which is also the first
optimum met by the brute-force enumeration.
"""

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union
import heapq
import logging
import math

from pydantic import ValidationError

from .lp_relaxation import LpRow, solve_rational_relaxation
from .restructure_service import ReservationMark
from ..models.common import fraction_to_decimal
from ..models.constraints import ConstraintRule, Objective
from ..models.ilp import (
    ConstraintRow, Evaluation, IlpProblem, ObjectiveRow, ProblemDocument, Solution, SolverStats
)
from ..models.process import ProcessModel
from ...core.config import settings
from ...core.exceptions import (
    InvalidProblemException, NoObjectiveException, ProblemTooLargeException
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
_RELATIONS = {'less': '<=', 'greater': '>='}


def build_problem(
    model: ProcessModel,
    tfc: Optional[Objective],
    cc: Sequence[ConstraintRule],
    reserved: Iterable[str] = (),
    forced: Iterable[str] = ()
) -> IlpProblem:
    """Translate the restructured model into a 0/1 program.

    Args:
        model: Restructured model
        tfc: Objective property and direction
        cc: Property rules bounding sums over the output model (inclusive)
        reserved: Tasks kept by retained-task rules
        forced: Tasks added by augmented-task rules

    Raises:
        NoObjectiveException: If tfc is missing
        TaskNotFoundException: If a reserved or forced task is not in the model
    """
    if tfc is None:
        raise NoObjectiveException()

    mark = ReservationMark(reserved=frozenset(reserved), forced=frozenset(forced)).check_against(model)
    fixed_names = mark.fixed
    variables = [task for task in model.all_tasks() if task.name not in fixed_names]
    fixed_tasks = [task for task in model.all_tasks() if task.name in fixed_names]

    def fixed_sum(prop: str) -> Decimal:
        return sum((task.value_of(prop) for task in fixed_tasks), Decimal(0))

    objective = ObjectiveRow(
        direction=tfc.direction,
        coefficients=tuple(task.value_of(tfc.property) for task in variables),
        fixed_contribution=fixed_sum(tfc.property),
        label=tfc.property,
    )
    rows = tuple(
        ConstraintRow(
            coefficients=tuple(task.value_of(rule.property) for task in variables),
            relation=_RELATIONS[rule.relation],
            bound=rule.value - fixed_sum(rule.property),
            label=rule.property,
        )
        for rule in cc
    )
    trivially_infeasible = any(row.relation == '<=' and row.bound < 0 for row in rows)
    if trivially_infeasible:
        logger.info("Fixed tasks alone exceed an upper bound; problem is infeasible")

    problem = IlpProblem(
        variables=tuple(task.name for task in variables),
        objective=objective,
        rows=rows,
        fixed={task.name: 1 for task in fixed_tasks},
        trivially_infeasible=trivially_infeasible,
    )
    logger.info(
        f"Built problem: {problem.size} variables, {len(rows)} rows, {len(fixed_tasks)} fixed tasks"
    )
    return problem


@dataclass(frozen=True)
class _MaxForm:
    """Problem restated as maximization with ``<=`` rows, in rationals."""
    sign: int
    costs: tuple[Fraction, ...]
    constant: Fraction
    rows: tuple[LpRow, ...]
    integral: bool

    @classmethod
    def of(cls, problem: IlpProblem) -> '_MaxForm':
        sign = 1 if problem.objective.direction == 'max' else -1
        costs = tuple(sign * Fraction(c) for c in problem.objective.coefficients)
        rows = []
        for row in problem.rows:
            coefficients = tuple(Fraction(a) for a in row.coefficients)
            bound = Fraction(row.bound)
            if row.relation == '>=':
                coefficients, bound = tuple(-a for a in coefficients), -bound
            rows.append((coefficients, bound))
        return cls(
            sign=sign,
            costs=costs,
            constant=sign * Fraction(problem.objective.fixed_contribution),
            rows=tuple(rows),
            integral=all(c.denominator == 1 for c in costs),
        )

    def value(self, assignment: Sequence[int]) -> Fraction:
        return self.constant + sum((c for c, x in zip(self.costs, assignment) if x), Fraction(0))

    def feasible(self, assignment: Sequence[int]) -> bool:
        for coefficients, bound in self.rows:
            if sum((a for a, x in zip(coefficients, assignment) if x), Fraction(0)) > bound:
                return False
        return True

    def scaled(self) -> tuple[tuple[int, ...], tuple[tuple[tuple[int, ...], int], ...]]:
        """Costs and rows multiplied by one common denominator, as integers."""
        numbers = [*self.costs, *(b for _, b in self.rows), *(a for c, _ in self.rows for a in c)]
        scale = math.lcm(*(q.denominator for q in numbers)) if numbers else 1
        return (
            tuple(int(c * scale) for c in self.costs),
            tuple((tuple(int(a * scale) for a in c), int(b * scale)) for c, b in self.rows),
        )

    def relax(self, partial: Mapping[int, int]) -> Optional[tuple[Fraction, dict[int, Fraction]]]:
        """LP optimum with ``partial`` substituted; None when the relaxation is infeasible."""
        if partial:
            free = [j for j in range(len(self.costs)) if j not in partial]
            taken = [j for j, x in partial.items() if x]
            settled = self.constant + sum(self.costs[j] for j in taken)
            rows = [
                (tuple(coefficients[j] for j in free), bound - sum(coefficients[j] for j in taken))
                for coefficients, bound in self.rows
            ]
            costs = [self.costs[j] for j in free]
        else:
            free, settled, rows, costs = range(len(self.costs)), self.constant, self.rows, self.costs
        result = solve_rational_relaxation(costs, rows)
        if not result.feasible:
            return None
        return settled + result.value, dict(zip(free, result.x))


def _indices(problem: IlpProblem, partial: Mapping[str, int]) -> dict[int, int]:
    position = {name: index for index, name in enumerate(problem.variables)}
    indexed = {}
    for name, value in partial.items():
        if name not in position:
            raise InvalidProblemException(f"Unknown variable '{name}'", details={'variable': name})
        if value not in (0, 1):
            raise InvalidProblemException(f"Variable '{name}' must be 0 or 1", details={'variable': name})
        indexed[position[name]] = int(value)
    return indexed


def relaxation_bound(problem: IlpProblem, partial: Mapping[str, int]) -> Optional[Fraction]:
    """Bound on the best completion of a partial assignment.

    Optimum of the linear relaxation with unassigned variables in [0, 1]: an upper
    bound for maximization, a lower bound for minimization.

    Returns:
        The exact bound, or None when the relaxation is infeasible (prune)
    """
    form = _MaxForm.of(problem)
    relaxed = form.relax(_indices(problem, partial))
    if relaxed is None:
        return None
    return form.sign * relaxed[0]


class _BranchAndBound:
    """Best-first search; the incumbent is the best (value, assignment) pair seen."""

    def __init__(self, form: _MaxForm):
        self.form = form
        self.n = len(form.costs)
        self.best_value: Optional[Fraction] = None
        self.best_assignment: Optional[tuple[int, ...]] = None
        self.root_bound: Optional[Fraction] = None
        self.closed_bound: Optional[Fraction] = None
        self.nodes_explored = 0
        self.lp_solves = 0

    def offer(self, assignment: tuple[int, ...]) -> None:
        value = self.form.value(assignment)
        if self.best_value is None or value > self.best_value or (
            value == self.best_value and assignment > self.best_assignment
        ):
            logger.debug(f"New incumbent {value} at node {self.nodes_explored}")
            self.best_value, self.best_assignment = value, assignment

    def can_improve(self, bound: Fraction, partial: Mapping[int, int]) -> bool:
        """Whether the subtree under ``partial`` may hold a better incumbent."""
        if self.best_value is None or bound > self.best_value:
            return True
        if bound < self.best_value:
            return False
        completion = tuple(partial.get(j, 1) for j in range(self.n))
        return completion > self.best_assignment

    def close(self, bound: Fraction) -> None:
        """Record the bound of a subtree discarded without exploring it."""
        if self.closed_bound is None or bound > self.closed_bound:
            self.closed_bound = bound

    @property
    def proven_bound(self) -> Optional[Fraction]:
        """No assignment beats this value; None when nothing feasible was found."""
        if self.best_value is None:
            return None
        if self.closed_bound is None:
            return self.best_value
        return max(self.best_value, self.closed_bound)

    def tighten(self, bound: Fraction) -> Fraction:
        # Integral costs reach only integral offsets from the constant
        if self.form.integral:
            return self.form.constant + math.floor(bound - self.form.constant)
        return bound

    def relax(self, partial: dict[int, int]) -> Optional[tuple[Fraction, dict[int, Fraction]]]:
        self.lp_solves += 1
        relaxed = self.form.relax(partial)
        if relaxed is None:
            return None
        bound, x = relaxed
        return self.tighten(bound), x

    def run(self) -> None:
        root = self.relax({})
        if root is None:
            return
        self.root_bound = root[0]
        sequence = 0
        heap = [(-root[0], sequence, {}, root[1])]

        while heap:
            negative_bound, _, partial, x = heapq.heappop(heap)
            bound = -negative_bound
            if not self.can_improve(bound, partial):
                self.close(bound)
                continue
            self.nodes_explored += 1

            free = [j for j in range(self.n) if j not in partial]
            fractional = [j for j in free if x[j] != 0 and x[j] != 1]
            if not fractional:
                self.offer(tuple(partial.get(j, int(x.get(j, 0))) for j in range(self.n)))
                if not free or not self.can_improve(bound, partial):
                    self.close(bound)
                    continue
                branch = free[0]
            else:
                rounded = tuple(
                    partial[j] if j in partial else (int(x[j]) if x[j] == 1 else 0)
                    for j in range(self.n)
                )
                if self.form.feasible(rounded):
                    self.offer(rounded)
                branch = min(fractional, key=lambda j: (abs(x[j] - HALF), j))

            for value in (1, 0):
                child = {**partial, branch: value}
                relaxed = self.relax(child)
                if relaxed is None:
                    continue
                if not self.can_improve(relaxed[0], child):
                    self.close(relaxed[0])
                    continue
                sequence += 1
                heapq.heappush(heap, (-relaxed[0], sequence, child, relaxed[1]))


def _solution(problem: IlpProblem, form: _MaxForm, assignment: Optional[tuple[int, ...]],
              nodes_explored: int, lp_solves: int, proven_bound: Optional[Fraction] = None,
              root_bound: Optional[Fraction] = None) -> Solution:
    if assignment is None:
        return Solution(
            status='infeasible',
            stats=SolverStats(nodes_explored=nodes_explored, lp_solves=lp_solves),
        )
    value = fraction_to_decimal(form.sign * form.value(assignment))
    chosen = dict(zip(problem.variables, assignment))
    chosen.update(problem.fixed)
    return Solution(
        status='optimal',
        assignment=chosen,
        objective_value=value,
        stats=SolverStats(
            nodes_explored=nodes_explored,
            # Enumeration visits every point, so its bound is the optimum itself
            best_bound=value if proven_bound is None else fraction_to_decimal(form.sign * proven_bound),
            root_bound=None if root_bound is None else fraction_to_decimal(form.sign * root_bound),
            lp_solves=lp_solves,
        ),
    )


def branch_and_bound(problem: IlpProblem) -> Solution:
    """Solve the program exactly.

    Deterministic: identical problems give identical assignments and statistics.
    """
    form = _MaxForm.of(problem)
    if problem.trivially_infeasible:
        logger.info("Skipping search for trivially infeasible problem")
        return _solution(problem, form, None, 0, 0)

    search = _BranchAndBound(form)
    search.run()
    solution = _solution(
        problem, form, search.best_assignment, search.nodes_explored, search.lp_solves,
        proven_bound=search.proven_bound, root_bound=search.root_bound,
    )
    if solution.status == 'optimal' and solution.stats.best_bound != solution.objective_value:
        logger.warning(
            f"Proven bound {solution.stats.best_bound} differs from objective {solution.objective_value}"
        )
    logger.info(
        f"Branch-and-bound finished: status={solution.status} objective={solution.objective_value} "
        f"nodes={search.nodes_explored} lp_solves={search.lp_solves}"
    )
    return solution


def brute_force(problem: IlpProblem, max_variables: Optional[int] = None) -> Solution:
    """Enumerate every assignment and keep the lexicographically greatest optimum.

    Assignments are walked in Gray-code order from all ones, so each step flips one
    variable and updates the running totals in place. The result matches the first
    optimum met in lexicographic order preferring 1 before 0.

    Raises:
        ProblemTooLargeException: If the problem has more variables than the limit
    """
    limit = settings.brute_force_max_variables if max_variables is None else max_variables
    if problem.size > limit:
        raise ProblemTooLargeException(problem.size, limit)

    form = _MaxForm.of(problem)
    costs, rows = form.scaled()
    n = problem.size
    bounds = [bound for _, bound in rows]
    columns = [tuple(coefficients[j] for coefficients, _ in rows) for j in range(n)]

    current = [1] * n
    value = sum(costs)
    totals = [sum(coefficients) for coefficients, _ in rows]
    best_value: Optional[int] = None
    best: Optional[tuple[int, ...]] = None

    for step in range(1 << n):
        if step:
            j = (step & -step).bit_length() - 1
            if current[j]:
                current[j] = 0
                value -= costs[j]
                totals = [t - a for t, a in zip(totals, columns[j])]
            else:
                current[j] = 1
                value += costs[j]
                totals = [t + a for t, a in zip(totals, columns[j])]
        if best_value is not None and value < best_value:
            continue
        if not all(t <= b for t, b in zip(totals, bounds)):
            continue
        assignment = tuple(current)
        if best_value is None or value > best_value or assignment > best:
            best_value, best = value, assignment
    return _solution(problem, form, best, 1 << n, 0)


def evaluate(problem: IlpProblem, assignment: Mapping[str, int]) -> Evaluation:
    """Objective value and row totals of a complete assignment.

    Entries for fixed tasks are accepted and ignored.

    Raises:
        InvalidProblemException: If a variable is missing or not 0/1
    """
    variables = {name: value for name, value in assignment.items() if name not in problem.fixed}
    indexed = _indices(problem, variables)
    missing = [name for index, name in enumerate(problem.variables) if index not in indexed]
    if missing:
        raise InvalidProblemException(
            f"Assignment is missing {len(missing)} variable(s)", details={'missing': missing}
        )
    x = [indexed[j] for j in range(problem.size)]

    objective = Fraction(problem.objective.fixed_contribution) + sum(
        (Fraction(c) for c, v in zip(problem.objective.coefficients, x) if v), Fraction(0)
    )
    totals = []
    feasible = True
    for row in problem.rows:
        total = sum((Fraction(a) for a, v in zip(row.coefficients, x) if v), Fraction(0))
        bound = Fraction(row.bound)
        if (row.relation == '<=' and total > bound) or (row.relation == '>=' and total < bound):
            feasible = False
        totals.append(fraction_to_decimal(total))
    return Evaluation(
        objective_value=fraction_to_decimal(objective),
        row_totals=tuple(totals),
        feasible=feasible,
    )


def solve_problem_document(document: Union[ProblemDocument, Mapping]) -> Solution:
    """Validate a standalone problem document and solve it.

    Raises:
        InvalidProblemException: If the document is malformed
    """
    try:
        if not isinstance(document, ProblemDocument):
            document = ProblemDocument.model_validate(document)
        problem = document.to_problem()
    except ValidationError as e:
        raise InvalidProblemException(
            "Problem document is invalid",
            details={'errors': [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()]},
        )
    return branch_and_bound(problem)
