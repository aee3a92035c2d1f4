"""ACT process-model DSL: parsing and canonical serialization."""

from .parser import parse_model
from .serializer import serialize_model

__all__ = ['parse_model', 'serialize_model']
