"""File loaders and writers for the command surface."""

from .documents import read_json, read_text, write_json, write_text
from .tsv_loaders import load_added_properties, load_dictionary_overrides

__all__ = [
    'read_json',
    'read_text',
    'write_json',
    'write_text',
    'load_added_properties',
    'load_dictionary_overrides',
]
