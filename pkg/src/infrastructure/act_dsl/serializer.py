"""Canonical serializer for the ACT process-model DSL."""

from ...core.exceptions import InvalidModelException
from ...domain.models.common import format_decimal
from ...domain.models.process import ProcessModel
from ...domain.services.process_graph import validate

INDENT = '  '


def quote(name: str) -> str:
    """Double-quote a name, escaping backslashes and quotes."""
    return '"' + name.replace('\\', '\\\\').replace('"', '\\"') + '"'


def serialize_model(model: ProcessModel) -> str:
    """Render a model in canonical form.

    Two-space indentation, one declaration per line, properties in model order and
    a trailing newline. Equal models produce identical text.

    Raises:
        InvalidModelException: If the model violates its invariants
    """
    violations = validate(model)
    if violations:
        raise InvalidModelException(violations, message="Cannot serialize invalid model")

    lines = [f"graph {quote(model.name)} {{"]
    for entity in model.entities:
        lines.append(f"{INDENT}entity {quote(entity.name)} {{")
        for task in entity.tasks:
            lines.append(f"{INDENT * 2}task {quote(task.name)} {{")
            for prop, value in task.properties.items():
                lines.append(f"{INDENT * 3}{prop} = {format_decimal(value)};")
            lines.append(f"{INDENT * 2}}}")
        lines.append(f"{INDENT}}}")
    for flow in model.flows:
        lines.append(f"{INDENT}flow {quote(flow.source)} -> {quote(flow.target)};")
    lines.append("}")
    return '\n'.join(lines) + '\n'
