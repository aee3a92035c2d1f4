"""Graph operations on ACT process models.

Operations never mutate their input; they return new ProcessModel instances.
Task names are the global identity of tasks and are matched exactly after
trimming surrounding whitespace.
"""

from collections import Counter
from decimal import Decimal
from typing import Optional
import logging

import networkx as nx

from ..models.process import ProcessModel, Entity, Task, ControlFlow
from ...core.exceptions import TaskNotFoundException

logger = logging.getLogger(__name__)


def validate(model: ProcessModel) -> list[str]:
    """Check the structural invariants of a process model.

    Args:
        model: Model to check

    Returns:
        One description per violated invariant, naming the offending element.
        Empty when the model is valid.
    """
    violations: list[str] = []

    entity_counts = Counter(entity.name for entity in model.entities)
    for name, count in entity_counts.items():
        if count > 1:
            violations.append(f"duplicate entity name '{name}' ({count} occurrences)")

    task_counts = Counter(model.task_names())
    for name, count in task_counts.items():
        if count > 1:
            violations.append(f"duplicate task name '{name}' ({count} occurrences)")

    flow_counts: Counter = Counter()
    for flow in model.flows:
        label = f"flow '{flow.source}' -> '{flow.target}'"
        missing = [name for name in (flow.source, flow.target) if name not in task_counts]
        if missing:
            names = ', '.join(f"'{name}'" for name in dict.fromkeys(missing))
            violations.append(f"{label} references undefined task {names}")
        if flow.source == flow.target:
            violations.append(f"{label} is a self-loop")
        flow_counts[(flow.source, flow.target)] += 1

    for (source, target), count in flow_counts.items():
        if count > 1:
            violations.append(f"duplicate flow '{source}' -> '{target}' ({count} occurrences)")

    return violations


def lookup_task(model: ProcessModel, task: str) -> Optional[tuple[Entity, Task]]:
    """Find a task and its owning entity.

    Returns:
        (entity, task) or None when no task has that name
    """
    name = task.strip()
    for entity in model.entities:
        for candidate in entity.tasks:
            if candidate.name == name:
                return entity, candidate
    return None


def remove_task_with_splice(model: ProcessModel, task: str) -> ProcessModel:
    """Remove a task and reconnect every predecessor to every successor.

    Flows incident to the task are dropped. For each predecessor p and successor s
    a flow p -> s is added unless it would be a self-loop or already exists. The
    spliced flows take the position of the first flow incident to the removed task.

    Raises:
        TaskNotFoundException: If no task has that name
    """
    name = task.strip()
    if lookup_task(model, name) is None:
        raise TaskNotFoundException(name)

    predecessors = list(dict.fromkeys(
        flow.source for flow in model.flows if flow.target == name and flow.source != name
    ))
    successors = list(dict.fromkeys(
        flow.target for flow in model.flows if flow.source == name and flow.target != name
    ))

    kept_pairs = {
        (flow.source, flow.target) for flow in model.flows
        if name not in (flow.source, flow.target)
    }
    spliced = []
    for source in predecessors:
        for target in successors:
            pair = (source, target)
            if source == target or pair in kept_pairs:
                continue
            kept_pairs.add(pair)
            spliced.append(ControlFlow(source=source, target=target))

    flows: list[ControlFlow] = []
    inserted = False
    for flow in model.flows:
        if name in (flow.source, flow.target):
            if not inserted:
                flows.extend(spliced)
                inserted = True
            continue
        flows.append(flow)

    entities = tuple(
        entity.model_copy(update={'tasks': tuple(t for t in entity.tasks if t.name != name)})
        for entity in model.entities
    )

    logger.debug(f"Removed task '{name}', spliced {len(spliced)} flow(s)")
    return model.model_copy(update={'entities': entities, 'flows': tuple(flows)})


def to_digraph(model: ProcessModel) -> nx.DiGraph:
    """Directed graph of task names, nodes in model order and edges in flow order."""
    graph = nx.DiGraph(name=model.name)
    for entity in model.entities:
        for task in entity.tasks:
            graph.add_node(task.name, entity=entity.name)
    graph.add_edges_from((flow.source, flow.target) for flow in model.flows)
    return graph


def property_universe(model: ProcessModel) -> list[str]:
    """Property names carried by any task, in first-seen order."""
    names: dict[str, None] = {}
    for task in model.all_tasks():
        names.update(dict.fromkeys(task.properties))
    return list(names)


def property_totals(model: ProcessModel) -> dict[str, Decimal]:
    """Sum of every property over all tasks."""
    totals = {name: Decimal(0) for name in property_universe(model)}
    for task in model.all_tasks():
        for name, value in task.properties.items():
            totals[name] += value
    return totals
