"""Tab-separated sidecar files.

Both formats share the same conventions: UTF-8, one row per line, blank lines
and lines starting with '#' ignored, exactly three tab-separated columns.
"""

from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterator, Union
import csv
import io
import logging

from pydantic import ValidationError

from .documents import read_text
from ...core.exceptions import InputFileException
from ...domain.models.constraints import Dictionary, DictionaryEntry
from ...domain.models.process import PROPERTY_NAME_PATTERN
from ...domain.services.extraction_service import default_dictionary

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _rows(path: PathLike) -> Iterator[tuple[int, list[str]]]:
    """(line number, three stripped cells) per data line."""
    reader = csv.reader(io.StringIO(read_text(path)), delimiter='\t', quoting=csv.QUOTE_NONE)
    for cells in reader:
        line = reader.line_num
        if not cells or not ''.join(cells).strip() or cells[0].lstrip().startswith('#'):
            continue
        if len(cells) != 3:
            raise InputFileException(str(path), f"line {line}: expected 3 tab-separated columns, got {len(cells)}")
        yield line, [cell.strip() for cell in cells]


def load_dictionary_overrides(path: PathLike) -> Dictionary:
    """Read ``surface TAB canonical TAB tag`` rows and merge them over the default dictionary.

    Later rows replace earlier rows with the same surface.
    """
    entries: dict[str, DictionaryEntry] = {}
    for line, (surface, canonical, tag) in _rows(path):
        try:
            entry = DictionaryEntry(surface=surface, canonical=canonical, tag=tag)
        except ValidationError as e:
            reason = '; '.join(err['msg'] for err in e.errors())
            raise InputFileException(str(path), f"line {line}: {reason}")
        entries[entry.surface.lower()] = entry

    overrides = Dictionary(entries=tuple(entries.values()))
    logger.info(f"Loaded {len(overrides.entries)} dictionary override(s) from {path}")
    return default_dictionary().merged(overrides)


def load_added_properties(path: PathLike) -> dict[str, dict[str, Decimal]]:
    """Read ``task TAB property TAB value`` rows.

    Returns:
        Property values keyed by task name, in file order
    """
    values: dict[str, dict[str, Decimal]] = {}
    for line, (task, prop, raw) in _rows(path):
        if not PROPERTY_NAME_PATTERN.match(prop):
            raise InputFileException(str(path), f"line {line}: invalid property name '{prop}'")
        try:
            value = Decimal(raw)
        except InvalidOperation:
            raise InputFileException(str(path), f"line {line}: invalid number '{raw}'")
        if not value.is_finite() or value < 0:
            raise InputFileException(str(path), f"line {line}: value must be a finite non-negative number")
        values.setdefault(task, {})[prop] = value

    logger.info(f"Loaded property values for {len(values)} added task(s) from {path}")
    return values
