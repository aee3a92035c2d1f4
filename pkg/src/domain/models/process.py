"""Pydantic models for ACT development-process models.

A ProcessModel is a named graph of entity swimlanes. Each entity owns an ordered
list of tasks; control flows link tasks by name. All models are frozen: operations
in the process graph service return new instances.
"""

import re
from decimal import Decimal
from typing import Optional, Iterator

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .common import FrozenDict, JsonDecimal


PROPERTY_NAME_PATTERN = re.compile(r'^[a-z][a-z0-9_]*$')


class Task(BaseModel):
    """A process step with numeric properties (time, cost, importance, ...)."""
    model_config = ConfigDict(frozen=True)

    name: str
    properties: dict[str, JsonDecimal] = Field(default_factory=FrozenDict)

    @field_validator('name')
    @classmethod
    def strip_name(cls, v: str) -> str:
        return v.strip()

    @field_validator('properties')
    @classmethod
    def validate_properties(cls, v: dict[str, Decimal]) -> dict[str, Decimal]:
        """Property names are lowercase identifiers; values are finite and non-negative.

        The result is read-only like the rest of the model.
        """
        cleaned = {}
        for name, value in v.items():
            if not PROPERTY_NAME_PATTERN.match(name):
                raise ValueError(f"Invalid property name: {name!r}")
            if not value.is_finite() or value < 0:
                raise ValueError(f"Property {name!r} must be a finite non-negative number, got {value}")
            # Normalize negative zero
            cleaned[name] = value.copy_abs() if value.is_zero() else value
        return FrozenDict(cleaned)

    def value_of(self, prop: str) -> Decimal:
        """Property value, 0 when the task does not carry the property."""
        return self.properties.get(prop, Decimal(0))


class Entity(BaseModel):
    """A swimlane: participant, role or department owning tasks."""
    model_config = ConfigDict(frozen=True)

    name: str
    tasks: tuple[Task, ...] = ()

    @field_validator('name')
    @classmethod
    def strip_name(cls, v: str) -> str:
        return v.strip()


class ControlFlow(BaseModel):
    """Directed control flow between two tasks, identified by name."""
    model_config = ConfigDict(frozen=True)

    source: str
    target: str

    @field_validator('source', 'target')
    @classmethod
    def strip_endpoint(cls, v: str) -> str:
        return v.strip()


class ProcessModel(BaseModel):
    """An ACT diagram: entities with their tasks plus control flows.

    Structural invariants (unique names, resolvable endpoints, no self-loops or
    duplicate flows) are not enforced on construction; see
    ``process_graph.validate``.
    """
    model_config = ConfigDict(frozen=True)

    name: str
    entities: tuple[Entity, ...] = ()
    flows: tuple[ControlFlow, ...] = ()

    def all_tasks(self) -> Iterator[Task]:
        """Tasks in model order (entity order, then task order)."""
        for entity in self.entities:
            yield from entity.tasks

    def task_names(self) -> list[str]:
        return [task.name for task in self.all_tasks()]

    def entity_of(self, task_name: str) -> Optional[Entity]:
        for entity in self.entities:
            if any(task.name == task_name for task in entity.tasks):
                return entity
        return None
