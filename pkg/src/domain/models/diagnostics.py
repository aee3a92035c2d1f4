"""Diagnostic records reported by parsers and services."""

from pydantic import BaseModel, ConfigDict, Field


class ParseDiagnostic(BaseModel):
    """Position-annotated message for a rejected ACT model text."""
    model_config = ConfigDict(frozen=True)

    line: int = Field(..., ge=1)
    column: int = Field(..., ge=1)
    message: str

    def render(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class RestructureDiagnostic(BaseModel):
    """Non-fatal warning raised while restructuring a model."""
    model_config = ConfigDict(frozen=True)

    property: str
    message: str
