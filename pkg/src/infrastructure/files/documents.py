"""Text and JSON document IO.

Every read failure becomes an InputFileException naming the path, so the CLI can
report it on the diagnostic stream.
"""

from pathlib import Path
from typing import Any, Union
import json
import logging

from pydantic import BaseModel

from ...core.config import settings
from ...core.exceptions import InputFileException

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_text(path: PathLike) -> str:
    """Read a UTF-8 text file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except FileNotFoundError:
        raise InputFileException(str(path), "file not found")
    except UnicodeDecodeError as e:
        raise InputFileException(str(path), f"not valid UTF-8 ({e.reason} at byte {e.start})")
    except OSError as e:
        raise InputFileException(str(path), e.strerror or str(e))


def read_json(path: PathLike) -> Any:
    """Read and decode a JSON document."""
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFileException(str(path), f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


def dump_json(document: BaseModel) -> str:
    """Pretty JSON for a pydantic document, keys in declaration order, trailing newline."""
    return document.model_dump_json(indent=settings.report_indent) + '\n'


def write_text(path: PathLike, text: str) -> None:
    """Write a UTF-8 text file, creating parent directories."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.debug(f"Wrote {len(text)} characters to {target}")


def write_json(path: PathLike, document: BaseModel) -> None:
    write_text(path, dump_json(document))
