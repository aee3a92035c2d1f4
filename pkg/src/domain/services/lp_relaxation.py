"""Exact linear relaxation over the unit box.

Solves ``max c.x`` subject to ``A x <= b`` and ``0 <= x <= 1`` with a dense
bounded-variable primal simplex in rational arithmetic. Structural variables move
between their bounds without pivoting (bound flips); only slack and artificial
columns enter the basis otherwise.

The starting point puts every variable with a positive cost at its upper bound.
Rows that this point violates receive an artificial column and are repaired by a
phase-one pass before the real objective is optimized.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence
import logging

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

# (coefficients, bound) meaning coefficients . x <= bound
LpRow = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class LpResult:
    """Outcome of one relaxation solve."""
    feasible: bool
    value: Optional[Fraction] = None
    x: tuple[Fraction, ...] = ()
    iterations: int = 0


def presolve_rows(rows: Sequence[LpRow]) -> Optional[list[LpRow]]:
    """Drop rows every point of the box satisfies.

    Returns None when some row cannot be satisfied by any point of the box.
    """
    kept = []
    for coefficients, bound in rows:
        lowest = sum((a for a in coefficients if a < 0), ZERO)
        highest = sum((a for a in coefficients if a > 0), ZERO)
        if lowest > bound:
            return None
        if highest <= bound:
            continue
        kept.append((tuple(coefficients), bound))
    return kept


class _BoundedSimplex:
    """Dense tableau over structurals, one slack per row and the artificials."""

    def __init__(self, costs: Sequence[Fraction], rows: Sequence[LpRow]):
        n, m = len(costs), len(rows)
        start = [ONE if c > 0 else ZERO for c in costs]
        residuals = [
            bound - sum((a for a, x in zip(coefficients, start) if x), ZERO)
            for coefficients, bound in rows
        ]
        violated = sum(1 for r in residuals if r < 0)
        width = n + m + violated

        self.n = n
        self.costs = list(costs)
        self.upper: list[Optional[Fraction]] = [ONE] * n + [None] * (m + violated)
        self.at_upper = [x == ONE for x in start] + [False] * (m + violated)
        self.artificials = range(n + m, width)
        self.tableau: list[list[Fraction]] = []
        self.basis: list[int] = []
        self.beta: list[Fraction] = []
        self.row_of = [-1] * width
        self.reduced: list[Fraction] = []

        artificial = n + m
        for i, (coefficients, _) in enumerate(rows):
            row = list(coefficients) + [ZERO] * (width - n)
            row[n + i] = ONE
            if residuals[i] < 0:
                row = [-v for v in row]
                row[artificial] = ONE
                column, value = artificial, -residuals[i]
                artificial += 1
            else:
                column, value = n + i, residuals[i]
            self.tableau.append(row)
            self.basis.append(column)
            self.beta.append(value)
            self.row_of[column] = i

    def _price(self, costs: Sequence[Fraction]) -> None:
        reduced = list(costs)
        for i, column in enumerate(self.basis):
            weight = costs[column]
            if weight:
                row = self.tableau[i]
                reduced = [d - weight * a for d, a in zip(reduced, row)]
        self.reduced = reduced

    def _nonbasic_value(self, column: int) -> Fraction:
        return self.upper[column] if self.at_upper[column] else ZERO

    def _choose_entering(self, bland: bool) -> Optional[tuple[int, int]]:
        """(column, direction); Dantzig's rule with lowest-index ties, Bland's rule once degenerate."""
        best = None
        best_score = ZERO
        for column, d in enumerate(self.reduced):
            if self.row_of[column] >= 0 or self.upper[column] == ZERO:
                continue
            if not self.at_upper[column] and d > 0:
                direction = 1
            elif self.at_upper[column] and d < 0:
                direction = -1
            else:
                continue
            if bland:
                return column, direction
            if abs(d) > best_score:
                best, best_score = (column, direction), abs(d)
        return best

    def _ratio_test(self, column: int, direction: int) -> tuple[Fraction, Optional[int]]:
        """Step length and leaving row; a None row means the entering variable flips bounds."""
        step = self.upper[column]
        leaving = None
        for i, row in enumerate(self.tableau):
            alpha = row[column] * direction
            if alpha > 0:
                limit = self.beta[i] / alpha
            elif alpha < 0:
                ceiling = self.upper[self.basis[i]]
                if ceiling is None:
                    continue
                limit = (ceiling - self.beta[i]) / -alpha
            else:
                continue
            if step is None or limit < step or (
                limit == step and leaving is not None and self.basis[i] < self.basis[leaving]
            ):
                step, leaving = limit, i
        if step is None:
            raise ArithmeticError("Relaxation over the unit box cannot be unbounded")
        return step, leaving

    def _move(self, column: int, direction: int, step: Fraction, leaving: Optional[int]) -> None:
        if step:
            shift = direction * step
            self.beta = [b - row[column] * shift for b, row in zip(self.beta, self.tableau)]
        if leaving is None:
            self.at_upper[column] = not self.at_upper[column]
            return

        entering_value = self._nonbasic_value(column) + direction * step
        old = self.basis[leaving]
        self.at_upper[old] = self.tableau[leaving][column] * direction < 0
        self.at_upper[column] = False
        self.row_of[old] = -1
        self.row_of[column] = leaving
        self.basis[leaving] = column
        self.beta[leaving] = entering_value

        pivot_row = self.tableau[leaving]
        pivot = pivot_row[column]
        pivot_row = [a / pivot for a in pivot_row]
        self.tableau[leaving] = pivot_row
        for i, row in enumerate(self.tableau):
            factor = row[column]
            if i != leaving and factor:
                self.tableau[i] = [a - factor * p for a, p in zip(row, pivot_row)]
        factor = self.reduced[column]
        self.reduced = [d - factor * p for d, p in zip(self.reduced, pivot_row)]

    def optimize(self, costs: Sequence[Fraction]) -> int:
        self._price(costs)
        bland = False
        iterations = 0
        while True:
            entering = self._choose_entering(bland)
            if entering is None:
                return iterations
            column, direction = entering
            step, leaving = self._ratio_test(column, direction)
            if step == 0:
                bland = True
            self._move(column, direction, step, leaving)
            iterations += 1

    def value_of(self, column: int) -> Fraction:
        row = self.row_of[column]
        return self.beta[row] if row >= 0 else self._nonbasic_value(column)

    def solve(self) -> LpResult:
        width = len(self.upper)
        iterations = 0
        if self.artificials:
            phase_one = [ZERO] * width
            for column in self.artificials:
                phase_one[column] = -ONE
            iterations += self.optimize(phase_one)
            infeasibility = sum((self.value_of(column) for column in self.artificials), ZERO)
            if infeasibility > 0:
                return LpResult(feasible=False, iterations=iterations)
            for column in self.artificials:
                self.upper[column] = ZERO

        iterations += self.optimize(self.costs + [ZERO] * (width - self.n))
        x = tuple(self.value_of(j) for j in range(self.n))
        value = sum((c * v for c, v in zip(self.costs, x)), ZERO)
        return LpResult(feasible=True, value=value, x=x, iterations=iterations)


def solve_box_relaxation(costs: Sequence[Fraction], rows: Sequence[LpRow]) -> LpResult:
    """Maximize ``costs . x`` over ``rows`` with every variable in [0, 1].

    Args:
        costs: Objective coefficient per variable
        rows: ``(coefficients, bound)`` pairs meaning ``coefficients . x <= bound``

    Returns:
        LpResult with the optimal value and point, or ``feasible=False``
    """
    costs = [Fraction(c) for c in costs]
    rows = [(tuple(Fraction(a) for a in coefficients), Fraction(bound)) for coefficients, bound in rows]
    return solve_rational_relaxation(costs, rows)


def solve_rational_relaxation(costs: Sequence[Fraction], rows: Sequence[LpRow]) -> LpResult:
    """Same as solve_box_relaxation for inputs already held as Fractions."""
    active = presolve_rows(rows)
    if active is None:
        return LpResult(feasible=False)
    if not active:
        x = tuple(ONE if c > 0 else ZERO for c in costs)
        return LpResult(feasible=True, value=sum((c for c in costs if c > 0), ZERO), x=x)

    result = _BoundedSimplex(costs, active).solve()
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            f"Relaxation with {len(costs)} variables and {len(active)} active rows: "
            f"feasible={result.feasible} value={result.value} iterations={result.iterations}"
        )
    return result
