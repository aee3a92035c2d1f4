"""Pydantic models for the 0/1 task-selection program and its solutions."""

from decimal import Decimal
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .common import JsonDecimal


RowRelation = Literal['<=', '>=']
SolutionStatus = Literal['optimal', 'infeasible']


def _check_finite(values: tuple[Decimal, ...]) -> tuple[Decimal, ...]:
    for value in values:
        if not value.is_finite():
            raise ValueError(f"Coefficient must be finite, got {value}")
    return values


class ObjectiveRow(BaseModel):
    """Linear objective over the binary variables plus the contribution of fixed tasks."""
    model_config = ConfigDict(frozen=True)

    direction: Literal['max', 'min']
    coefficients: tuple[JsonDecimal, ...] = ()
    fixed_contribution: JsonDecimal = Decimal(0)
    label: Optional[str] = None

    @field_validator('coefficients')
    @classmethod
    def check_coefficients(cls, v: tuple[Decimal, ...]) -> tuple[Decimal, ...]:
        return _check_finite(v)


class ConstraintRow(BaseModel):
    """Linear row ``coefficients . x (<=|>=) bound``; bound already reduced by fixed tasks."""
    model_config = ConfigDict(frozen=True)

    coefficients: tuple[JsonDecimal, ...] = ()
    relation: RowRelation
    bound: JsonDecimal
    label: Optional[str] = None

    @field_validator('coefficients')
    @classmethod
    def check_coefficients(cls, v: tuple[Decimal, ...]) -> tuple[Decimal, ...]:
        return _check_finite(v)


class IlpProblem(BaseModel):
    """Binary program: one variable per optimizable task.

    Tasks excluded from the search appear in ``fixed``; their property values are
    already folded into ``objective.fixed_contribution`` and the row bounds.
    """
    model_config = ConfigDict(frozen=True)

    variables: tuple[str, ...] = ()
    objective: ObjectiveRow
    rows: tuple[ConstraintRow, ...] = ()
    fixed: dict[str, Literal[0, 1]] = {}
    trivially_infeasible: bool = False

    @model_validator(mode='after')
    def check_shape(self) -> 'IlpProblem':
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise ValueError("Variable names must be unique")
        if len(self.objective.coefficients) != n:
            raise ValueError(
                f"Objective has {len(self.objective.coefficients)} coefficients for {n} variables"
            )
        for index, row in enumerate(self.rows):
            if len(row.coefficients) != n:
                raise ValueError(f"Row {index} has {len(row.coefficients)} coefficients for {n} variables")
        overlap = set(self.variables) & set(self.fixed)
        if overlap:
            raise ValueError(f"Variables cannot also be fixed: {sorted(overlap)}")
        return self

    @property
    def size(self) -> int:
        return len(self.variables)


class SolverStats(BaseModel):
    """Search statistics.

    ``best_bound`` is the proven bound at termination: the best of the incumbent and
    every subtree the search closed without exploring. It equals the objective value
    when the search is correct. ``root_bound`` is the relaxation bound at the root.
    """
    model_config = ConfigDict(frozen=True)

    nodes_explored: int = 0
    best_bound: Optional[JsonDecimal] = None
    root_bound: Optional[JsonDecimal] = None
    lp_solves: int = 0


class Solution(BaseModel):
    """Solver result: assignment per variable followed by the fixed tasks."""
    model_config = ConfigDict(frozen=True)

    status: SolutionStatus
    assignment: dict[str, Literal[0, 1]] = {}
    objective_value: Optional[JsonDecimal] = None
    stats: SolverStats = Field(default_factory=SolverStats)

    def selected(self) -> list[str]:
        return [name for name, value in self.assignment.items() if value == 1]


class Evaluation(BaseModel):
    """Objective value and row activity of one assignment."""
    model_config = ConfigDict(frozen=True)

    objective_value: JsonDecimal
    row_totals: tuple[JsonDecimal, ...] = ()
    feasible: bool


class ProblemRowDocument(BaseModel):
    """One row of a standalone problem file."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    coefficients: tuple[JsonDecimal, ...] = ()
    relation: RowRelation
    bound: JsonDecimal

    @field_validator('relation', mode='before')
    @classmethod
    def normalize_relation(cls, v):
        """Accept the requirement words as aliases of the row operators."""
        return {'less': '<=', 'greater': '>='}.get(v, v)


class ProblemDocument(BaseModel):
    """Standalone problem file read by the ``solve`` command."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    direction: Literal['max', 'min']
    variables: tuple[str, ...] = ()
    objective_coefficients: tuple[JsonDecimal, ...] = ()
    fixed_contribution: JsonDecimal = Decimal(0)
    rows: tuple[ProblemRowDocument, ...] = ()

    def to_problem(self) -> IlpProblem:
        """Build the IlpProblem; shape errors surface as pydantic ValidationError."""
        return IlpProblem(
            variables=self.variables,
            objective=ObjectiveRow(
                direction=self.direction,
                coefficients=self.objective_coefficients,
                fixed_contribution=self.fixed_contribution,
            ),
            rows=tuple(
                ConstraintRow(coefficients=row.coefficients, relation=row.relation, bound=row.bound)
                for row in self.rows
            ),
        )
