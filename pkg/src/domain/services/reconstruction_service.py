"""End-to-end reconstruction pipeline."""

from contextlib import contextmanager
from decimal import Decimal
from typing import Callable, Iterator, Mapping, Optional
import logging
import time

from .extraction_service import extract
from .ilp_solver import build_problem, branch_and_bound
from .process_graph import property_totals, remove_task_with_splice
from .restructure_service import add_tasks, in_model_order, reserve_tasks, select_entities
from ..models.constraints import ConstraintSet, Dictionary
from ..models.ilp import IlpProblem, Solution
from ..models.process import ProcessModel
from ..models.report import (
    ConstraintRowSummary, ObjectiveSummary, ReconstructionReport, ReportSolverStats
)
from ...core.exceptions import NoObjectiveException, PipelineStageException, ReconstructionError
from ...infrastructure.act_dsl import parse_model, serialize_model

logger = logging.getLogger(__name__)

_ROW_RELATIONS = {'less': '<=', 'greater': '>='}


class ReconstructionService:
    """Runs parse, extract, restructure, solve, rebuild and serialize in order."""

    def __init__(
        self,
        dictionary: Optional[Dictionary] = None,
        added_properties: Optional[Mapping[str, Mapping[str, Decimal]]] = None,
        solver: Callable[[IlpProblem], Solution] = branch_and_bound
    ):
        """
        Initialize the pipeline.

        Args:
            dictionary: User dictionary for extraction, default dictionary when None
            added_properties: Property values for added tasks, keyed by task name
            solver: Solver for the selection program
        """
        self.dictionary = dictionary
        self.added_properties = added_properties or {}
        self.solver = solver
        self.timings: dict[str, float] = {}

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        """Time a stage and tag its errors with the stage name."""
        start = time.perf_counter()
        try:
            yield
        except PipelineStageException:
            raise
        except ReconstructionError as e:
            logger.error(f"Stage '{name}' failed: {e.error_code}: {e.message}")
            raise PipelineStageException(name, e) from e
        finally:
            self.timings[name] = round((time.perf_counter() - start) * 1000, 3)

    def reconstruct(self, model_text: str, requirements_text: str) -> tuple[Optional[str], ReconstructionReport]:
        """Reconstruct a model against a requirements text.

        Returns:
            (output model text, report); the text is None when the program is infeasible

        Raises:
            PipelineStageException: If any stage fails
        """
        self.timings = {}

        with self._stage('parse'):
            model = parse_model(model_text)
        with self._stage('extract'):
            constraints = extract(requirements_text, self.dictionary)
        with self._stage('select_entities'):
            restructured = select_entities(model, constraints.esc)
        with self._stage('add_tasks'):
            restructured, forced = add_tasks(restructured, constraints.aac, self.added_properties)
        with self._stage('reserve_tasks'):
            reservation = reserve_tasks(restructured, constraints.arc)
        reserved = reservation.reserved

        if constraints.tfc is None:
            with self._stage('build_problem'):
                if constraints.cc or constraints.arc:
                    raise NoObjectiveException(
                        "No objective: constraint and retained-task requirements need an objective requirement"
                    )
            logger.info("No objective or constraints given; keeping every task")
            with self._stage('serialize'):
                text = serialize_model(restructured)
            optimizable = [name for name in restructured.task_names() if name not in forced]
            report = self._report(
                constraints, restructured, restructured,
                kept=optimizable, dropped=[], forced=forced, reserved=reserved,
                stats=ReportSolverStats(status='skipped'), diagnostics=reservation.diagnostics,
            )
            return text, report

        with self._stage('build_problem'):
            problem = build_problem(restructured, constraints.tfc, constraints.cc, reserved, forced)
        with self._stage('solve'):
            solution = self.solver(problem)

        stats = ReportSolverStats(
            status=solution.status,
            nodes_explored=solution.stats.nodes_explored,
            best_bound=solution.stats.best_bound,
            root_bound=solution.stats.root_bound,
            lp_solves=solution.stats.lp_solves,
        )
        if solution.status == 'infeasible':
            logger.warning("Selection program is infeasible; no model written")
            report = self._report(
                constraints, restructured, None,
                kept=[], dropped=[], forced=forced, reserved=reserved,
                stats=stats, diagnostics=reservation.diagnostics,
            )
            return None, report

        kept = [name for name in problem.variables if solution.assignment[name] == 1]
        dropped = [name for name in problem.variables if solution.assignment[name] == 0]
        with self._stage('rebuild'):
            output = restructured
            for name in dropped:
                output = remove_task_with_splice(output, name)
        with self._stage('serialize'):
            text = serialize_model(output)

        logger.info(f"Reconstruction kept {len(kept)} and dropped {len(dropped)} optimizable task(s)")
        report = self._report(
            constraints, restructured, output,
            kept=kept, dropped=dropped, forced=forced, reserved=reserved,
            stats=stats, diagnostics=reservation.diagnostics,
            objective_value=solution.objective_value,
        )
        return text, report

    def _report(
        self,
        constraints: ConstraintSet,
        restructured: ProcessModel,
        output: Optional[ProcessModel],
        kept: list[str],
        dropped: list[str],
        forced: frozenset[str],
        reserved: frozenset[str],
        stats: ReportSolverStats,
        diagnostics: tuple,
        objective_value: Optional[Decimal] = None
    ) -> ReconstructionReport:
        totals_after = property_totals(output) if output is not None else {}
        objective = None
        if constraints.tfc is not None:
            objective = ObjectiveSummary(
                property=constraints.tfc.property,
                direction=constraints.tfc.direction,
                value=objective_value,
            )
        rows = tuple(
            ConstraintRowSummary(
                property=rule.property,
                relation=_ROW_RELATIONS[rule.relation],
                bound=rule.value,
                achieved_total=totals_after.get(rule.property, Decimal(0)) if output is not None else None,
            )
            for rule in constraints.cc
        )
        return ReconstructionReport(
            kept=tuple(kept),
            dropped=tuple(dropped),
            added=in_model_order(restructured, forced),
            reserved=in_model_order(restructured, reserved),
            objective=objective,
            constraint_rows=rows,
            solver_stats=stats,
            property_totals_before=property_totals(restructured),
            property_totals_after=totals_after,
            diagnostics=diagnostics,
            timings=dict(self.timings),
        )


def reconstruct(
    model_text: str,
    requirements_text: str,
    dictionary: Optional[Dictionary] = None,
    added_properties: Optional[Mapping[str, Mapping[str, Decimal]]] = None
) -> tuple[Optional[str], ReconstructionReport]:
    """Run the pipeline once with the default solver."""
    service = ReconstructionService(dictionary=dictionary, added_properties=added_properties)
    return service.reconstruct(model_text, requirements_text)
