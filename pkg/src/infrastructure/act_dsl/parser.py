"""Recursive-descent parser for the ACT process-model DSL.

Grammar::

    model  := "graph" STRING "{" entity* flow* "}"
    entity := "entity" STRING "{" task* "}"
    task   := "task" STRING "{" prop* "}"
    prop   := IDENT "=" NUMBER ";"
    flow   := "flow" STRING "->" STRING ";"

Besides syntax, the parser rejects duplicate entity/task/property names, dangling
flow endpoints, self-loops and duplicate flows, each with the position of the
offending token.
"""

from decimal import Decimal
from typing import Iterator

from .lexer import Lexeme, tokenize, STRING, IDENT, NUMBER, PUNCT, EOF
from ...core.exceptions import ModelParseException
from ...domain.models.diagnostics import ParseDiagnostic
from ...domain.models.process import ProcessModel, Entity, Task, ControlFlow


def _describe(lexeme: Lexeme) -> str:
    if lexeme.kind == EOF:
        return 'end of input'
    if lexeme.kind == STRING:
        return f'string "{lexeme.value}"'
    return f"'{lexeme.value}'"


class _Parser:
    def __init__(self, lexemes: Iterator[Lexeme]):
        self._lexemes = lexemes
        self._current = next(lexemes)
        self._task_names: set[str] = set()
        self._entity_names: set[str] = set()

    def _error(self, message: str, at: Lexeme) -> ModelParseException:
        return ModelParseException(ParseDiagnostic(line=at.line, column=at.column, message=message))

    def _advance(self) -> Lexeme:
        lexeme = self._current
        if lexeme.kind != EOF:
            self._current = next(self._lexemes)
        return lexeme

    def _at_keyword(self, word: str) -> bool:
        return self._current.kind == IDENT and self._current.value == word

    def _expect_keyword(self, word: str) -> Lexeme:
        if not self._at_keyword(word):
            raise self._error(f"expected '{word}', found {_describe(self._current)}", self._current)
        return self._advance()

    def _expect_punct(self, symbol: str) -> Lexeme:
        if self._current.kind != PUNCT or self._current.value != symbol:
            raise self._error(f"expected '{symbol}', found {_describe(self._current)}", self._current)
        return self._advance()

    def _expect(self, kind: str, what: str) -> Lexeme:
        if self._current.kind != kind:
            raise self._error(f"expected {what}, found {_describe(self._current)}", self._current)
        return self._advance()

    def _at_punct(self, symbol: str) -> bool:
        return self._current.kind == PUNCT and self._current.value == symbol

    def parse_model(self) -> ProcessModel:
        self._expect_keyword('graph')
        name = self._expect(STRING, 'graph name string')
        self._expect_punct('{')

        entities = []
        while self._at_keyword('entity'):
            entities.append(self._parse_entity())

        flows = []
        seen_flows: set[tuple[str, str]] = set()
        while self._at_keyword('flow'):
            flows.append(self._parse_flow(seen_flows))

        if not self._at_punct('}'):
            expected = "'flow' or '}'" if flows else "'entity', 'flow' or '}'"
            raise self._error(f"expected {expected}, found {_describe(self._current)}", self._current)
        self._advance()
        self._expect(EOF, 'end of input')
        return ProcessModel(name=name.value, entities=tuple(entities), flows=tuple(flows))

    def _parse_entity(self) -> Entity:
        self._expect_keyword('entity')
        name = self._expect(STRING, 'entity name string')
        entity_name = name.value.strip()
        if entity_name in self._entity_names:
            raise self._error(f"duplicate entity name '{entity_name}'", name)
        self._entity_names.add(entity_name)
        self._expect_punct('{')

        tasks = []
        while self._at_keyword('task'):
            tasks.append(self._parse_task())
        if not self._at_punct('}'):
            raise self._error(f"expected 'task' or '}}', found {_describe(self._current)}", self._current)
        self._advance()
        return Entity(name=entity_name, tasks=tuple(tasks))

    def _parse_task(self) -> Task:
        self._expect_keyword('task')
        name = self._expect(STRING, 'task name string')
        task_name = name.value.strip()
        if task_name in self._task_names:
            raise self._error(f"duplicate task name '{task_name}'", name)
        self._task_names.add(task_name)
        self._expect_punct('{')

        properties: dict[str, Decimal] = {}
        while self._current.kind == IDENT:
            prop = self._advance()
            if prop.value in properties:
                raise self._error(f"duplicate property '{prop.value}' in task '{task_name}'", prop)
            self._expect_punct('=')
            number = self._expect(NUMBER, 'number')
            self._expect_punct(';')
            properties[prop.value] = Decimal(number.value)
        if not self._at_punct('}'):
            raise self._error(f"expected property or '}}', found {_describe(self._current)}", self._current)
        self._advance()
        return Task(name=task_name, properties=properties)

    def _parse_flow(self, seen_flows: set[tuple[str, str]]) -> ControlFlow:
        self._expect_keyword('flow')
        source = self._expect(STRING, 'source task string')
        self._expect_punct('->')
        target = self._expect(STRING, 'target task string')
        self._expect_punct(';')

        source_name, target_name = source.value.strip(), target.value.strip()
        for endpoint, lexeme in ((source_name, source), (target_name, target)):
            if endpoint not in self._task_names:
                raise self._error(
                    f"flow '{source_name}' -> '{target_name}' references undefined task '{endpoint}'",
                    lexeme,
                )
        if source_name == target_name:
            raise self._error(f"flow '{source_name}' -> '{target_name}' is a self-loop", source)
        if (source_name, target_name) in seen_flows:
            raise self._error(f"duplicate flow '{source_name}' -> '{target_name}'", source)
        seen_flows.add((source_name, target_name))
        return ControlFlow(source=source_name, target=target_name)


def parse_model(text: str) -> ProcessModel:
    """Parse ACT DSL text into a valid ProcessModel.

    Args:
        text: Model source

    Returns:
        ProcessModel with entities, tasks and flows in source order

    Raises:
        ModelParseException: With the line/column of the first error
    """
    return _Parser(tokenize(text)).parse_model()
