"""Lexer for the ACT process-model DSL.

Tokens: double-quoted strings (``\\"`` and ``\\\\`` escapes), lowercase identifiers,
unsigned decimal numbers, the punctuation ``{ } = ; ->``, ``#`` comments to end of
line, and insignificant whitespace.
"""

import re
from dataclasses import dataclass
from typing import Iterator

from ...core.exceptions import ModelParseException
from ...domain.models.diagnostics import ParseDiagnostic


STRING = 'STRING'
IDENT = 'IDENT'
NUMBER = 'NUMBER'
PUNCT = 'PUNCT'
EOF = 'EOF'


@dataclass(frozen=True)
class Lexeme:
    kind: str
    value: str
    line: int
    column: int


_TOKEN_PATTERN = re.compile(
    r'''
    (?P<ws>[ \t\r\n\f\v]+)
    |(?P<comment>\#[^\n]*)
    |(?P<string>")
    |(?P<number>[0-9]+(?:\.[0-9]+)?)
    |(?P<ident>[a-z][a-z0-9_]*)
    |(?P<punct>->|[{}=;])
    ''',
    re.VERBOSE,
)


class _Cursor:
    """Tracks 1-based line/column while scanning."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def advance_to(self, end: int) -> None:
        chunk = self.text[self.pos:end]
        newlines = chunk.count('\n')
        if newlines:
            self.line += newlines
            self.column = len(chunk) - chunk.rfind('\n')
        else:
            self.column += len(chunk)
        self.pos = end

    def error(self, message: str, line: int | None = None, column: int | None = None) -> ModelParseException:
        return ModelParseException(ParseDiagnostic(
            line=line or self.line,
            column=column or self.column,
            message=message,
        ))


def _scan_string(cursor: _Cursor) -> Lexeme:
    """Scan a double-quoted string starting at the opening quote."""
    text = cursor.text
    line, column = cursor.line, cursor.column
    i = cursor.pos + 1
    chars: list[str] = []
    while i < len(text):
        ch = text[i]
        if ch == '"':
            cursor.advance_to(i + 1)
            return Lexeme(STRING, ''.join(chars), line, column)
        if ch == '\\':
            nxt = text[i + 1] if i + 1 < len(text) else ''
            if nxt not in ('"', '\\'):
                cursor.advance_to(i)
                raise cursor.error(f"invalid escape sequence '\\{nxt}' in string")
            chars.append(nxt)
            i += 2
            continue
        chars.append(ch)
        i += 1
    raise cursor.error("unterminated string", line, column)


def tokenize(text: str) -> Iterator[Lexeme]:
    """Yield lexemes of an ACT model text, ending with an EOF lexeme.

    Raises:
        ModelParseException: On an unexpected character, bad escape or unterminated string
    """
    cursor = _Cursor(text)
    while cursor.pos < len(text):
        match = _TOKEN_PATTERN.match(text, cursor.pos)
        if match is None:
            raise cursor.error(f"unexpected character {text[cursor.pos]!r}")
        kind = match.lastgroup
        if kind == 'string':
            yield _scan_string(cursor)
            continue
        line, column = cursor.line, cursor.column
        cursor.advance_to(match.end())
        if kind == 'number':
            yield Lexeme(NUMBER, match.group(), line, column)
        elif kind == 'ident':
            yield Lexeme(IDENT, match.group(), line, column)
        elif kind == 'punct':
            yield Lexeme(PUNCT, match.group(), line, column)
    yield Lexeme(EOF, '', cursor.line, cursor.column)
