"""Structural reorganization of a process model.

Applied in order: entity selection (ESC), task addition (AAC), then reservation
of tasks matching retained-task rules (ARC). Reserved and added tasks are fixed to 1
in the subsequent optimization.
"""

from decimal import Decimal
from typing import Iterable, Mapping, Optional, Sequence
import logging

from pydantic import BaseModel, ConfigDict

from .process_graph import remove_task_with_splice, property_universe
from ..models.constraints import AugmentedTask, PropertyRule
from ..models.diagnostics import RestructureDiagnostic
from ..models.process import ProcessModel, Entity, Task
from ...core.exceptions import UnknownEntityException, DuplicateTaskException, TaskNotFoundException

logger = logging.getLogger(__name__)


class ReservationMark(BaseModel):
    """Tasks fixed to 1 before optimization: reserved by ARC rules, forced by AAC."""
    model_config = ConfigDict(frozen=True)

    reserved: frozenset[str] = frozenset()
    forced: frozenset[str] = frozenset()

    @property
    def fixed(self) -> frozenset[str]:
        return self.reserved | self.forced

    def check_against(self, model: ProcessModel) -> 'ReservationMark':
        """Raise TaskNotFoundException unless every marked task exists in the model."""
        names = set(model.task_names())
        for name in sorted(self.fixed):
            if name not in names:
                raise TaskNotFoundException(name)
        return self


class ReservedTasks(BaseModel):
    """Result of reserve_tasks: matching task names plus warnings."""
    model_config = ConfigDict(frozen=True)

    reserved: frozenset[str] = frozenset()
    diagnostics: tuple[RestructureDiagnostic, ...] = ()


def resolve_entity(model: ProcessModel, name: str) -> Entity:
    """Find an entity by name: exact match first, then case-insensitive.

    Raises:
        UnknownEntityException: If no entity matches
    """
    wanted = name.strip()
    for entity in model.entities:
        if entity.name == wanted:
            return entity
    folded = wanted.casefold()
    for entity in model.entities:
        if entity.name.casefold() == folded:
            return entity
    raise UnknownEntityException(wanted, known=[entity.name for entity in model.entities])


def select_entities(model: ProcessModel, esc: Optional[Iterable[str]]) -> ProcessModel:
    """Keep only the selected entities; tasks of dropped entities are spliced out.

    Args:
        model: Input model
        esc: Entity names to keep, or None to keep the model unchanged

    Raises:
        UnknownEntityException: If a selected name matches no entity
    """
    if esc is None:
        return model

    selected = {resolve_entity(model, name).name for name in esc}
    dropped = [entity for entity in model.entities if entity.name not in selected]

    result = model
    for entity in dropped:
        for task in entity.tasks:
            result = remove_task_with_splice(result, task.name)
    result = result.model_copy(update={
        'entities': tuple(entity for entity in result.entities if entity.name in selected)
    })

    logger.info(
        f"Selected {len(selected)} entit{'y' if len(selected) == 1 else 'ies'}, "
        f"dropped {[entity.name for entity in dropped]}"
    )
    return result


def add_tasks(
    model: ProcessModel,
    aac: Sequence[AugmentedTask],
    added_properties: Optional[Mapping[str, Mapping[str, Decimal]]] = None
) -> tuple[ProcessModel, frozenset[str]]:
    """Append new tasks to their entities.

    Every property of the model's property universe is set to 0 on the new task,
    then overridden by ``added_properties[task]`` when given. No flows are added.

    Returns:
        (new model, names of the added tasks)

    Raises:
        UnknownEntityException: If an entity does not exist
        DuplicateTaskException: If a task name is already taken
    """
    if not aac:
        return model, frozenset()

    added_properties = added_properties or {}
    universe = property_universe(model)
    taken = set(model.task_names())
    additions: dict[str, list[Task]] = {}

    for row in aac:
        entity = resolve_entity(model, row.entity)
        name = row.task.strip()
        if name in taken:
            raise DuplicateTaskException(name)
        taken.add(name)
        properties = {prop: Decimal(0) for prop in universe}
        properties.update(added_properties.get(name, {}))
        additions.setdefault(entity.name, []).append(Task(name=name, properties=properties))
        logger.info(f"Adding task '{name}' to entity '{entity.name}'")

    entities = tuple(
        entity.model_copy(update={'tasks': entity.tasks + tuple(additions.get(entity.name, ()))})
        for entity in model.entities
    )
    forced = frozenset(task.name for tasks in additions.values() for task in tasks)
    return model.model_copy(update={'entities': entities}), forced


def _satisfies(value: Decimal, rule: PropertyRule) -> bool:
    """Strict comparison: greater means value > threshold, less means value < threshold."""
    if rule.relation == 'greater':
        return value > rule.value
    return value < rule.value


def reserve_tasks(model: ProcessModel, arc: Sequence[PropertyRule]) -> ReservedTasks:
    """Tasks matching any retained-task rule.

    Tasks without the rule's property never match. A rule whose property no task
    carries contributes nothing and produces a warning diagnostic.
    """
    reserved: set[str] = set()
    diagnostics: list[RestructureDiagnostic] = []
    universe = set(property_universe(model))

    for rule in arc:
        if rule.property not in universe:
            message = f"Property '{rule.property}' is not present on any task; rule reserves nothing"
            logger.warning(message)
            diagnostics.append(RestructureDiagnostic(property=rule.property, message=message))
            continue
        matches = [
            task.name for task in model.all_tasks()
            if rule.property in task.properties and _satisfies(task.properties[rule.property], rule)
        ]
        logger.info(
            f"Rule {rule.property} {rule.relation} {rule.value} reserves {len(matches)} task(s)"
        )
        reserved.update(matches)

    return ReservedTasks(reserved=frozenset(reserved), diagnostics=tuple(diagnostics))


def in_model_order(model: ProcessModel, names: Iterable[str]) -> tuple[str, ...]:
    """Names sorted by their position in the model."""
    wanted = set(names)
    return tuple(name for name in model.task_names() if name in wanted)
