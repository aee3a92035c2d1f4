"""Pydantic models for the reconstruction report."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from .common import JsonDecimal
from .diagnostics import RestructureDiagnostic


class ObjectiveSummary(BaseModel):
    """Objective property, direction and achieved value."""
    model_config = ConfigDict(frozen=True)

    property: str
    direction: Literal['max', 'min']
    value: Optional[JsonDecimal] = None


class ConstraintRowSummary(BaseModel):
    """A constraint row with the total achieved by the output model."""
    model_config = ConfigDict(frozen=True)

    property: str
    relation: Literal['<=', '>=']
    bound: JsonDecimal
    achieved_total: Optional[JsonDecimal] = None


class ReportSolverStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: Literal['optimal', 'infeasible', 'skipped']
    nodes_explored: int = 0
    best_bound: Optional[JsonDecimal] = None
    root_bound: Optional[JsonDecimal] = None
    lp_solves: int = 0


class ReconstructionReport(BaseModel):
    """Outcome of one reconstruction run.

    ``kept`` and ``dropped`` partition the optimizable tasks; ``reserved`` and
    ``added`` tasks are always part of the output model.
    """
    model_config = ConfigDict(frozen=True)

    kept: tuple[str, ...] = ()
    dropped: tuple[str, ...] = ()
    added: tuple[str, ...] = ()
    reserved: tuple[str, ...] = ()
    objective: Optional[ObjectiveSummary] = None
    constraint_rows: tuple[ConstraintRowSummary, ...] = ()
    solver_stats: ReportSolverStats
    property_totals_before: dict[str, JsonDecimal] = {}
    property_totals_after: dict[str, JsonDecimal] = {}
    diagnostics: tuple[RestructureDiagnostic, ...] = ()
    timings: dict[str, float] = {}
