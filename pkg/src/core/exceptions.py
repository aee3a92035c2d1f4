"""Custom exceptions for the application."""

from typing import Optional, Dict, Any, TYPE_CHECKING

if TYPE_CHECKING:
    from ..domain.models.diagnostics import ParseDiagnostic


EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


class ReconstructionError(Exception):
    """Base exception for all toolkit errors."""

    exit_code: int = EXIT_DOMAIN_ERROR

    def __init__(
        self,
        error_code: str,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ):
        self.error_code = error_code
        self.message = message
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        """Error payload for diagnostics output."""
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details
        }


# Model Exceptions
class ModelParseException(ReconstructionError):
    """Raised when ACT model text cannot be parsed."""

    def __init__(self, diagnostic: 'ParseDiagnostic'):
        self.diagnostic = diagnostic
        super().__init__(
            error_code="PARSE_ERROR",
            message=diagnostic.render(),
            details={
                'line': diagnostic.line,
                'column': diagnostic.column
            }
        )


class InvalidModelException(ReconstructionError):
    """Raised when a process model violates its invariants."""

    def __init__(self, violations: list[str], message: str = "Invalid process model"):
        self.violations = list(violations)
        super().__init__(
            error_code="INVALID_MODEL",
            message=f"{message}: {'; '.join(self.violations)}",
            details={'violations': self.violations}
        )


class TaskNotFoundException(ReconstructionError):
    """Raised when a task name does not resolve."""

    def __init__(self, task: str):
        super().__init__(
            error_code="TASK_NOT_FOUND",
            message=f"Task '{task}' not found in model",
            details={'task': task}
        )


# Extraction Exceptions
class ExtractionException(ReconstructionError):
    """Raised when a requirement sentence cannot be tokenized."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="EXTRACTION_ERROR",
            message=message,
            details=details
        )


class UnrecognizedRequirementException(ReconstructionError):
    """Raised when no template matches a requirement sentence."""

    def __init__(self, sentence: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="UNRECOGNIZED_REQUIREMENT",
            message=f"Unrecognized requirement: {sentence}",
            details={'sentence': sentence, **(details or {})}
        )


class AmbiguousRequirementException(ReconstructionError):
    """Raised when a template slot receives more than one candidate."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="AMBIGUOUS_REQUIREMENT",
            message=message,
            details=details
        )


class ConstraintConflictException(ReconstructionError):
    """Raised when requirements state a second selection or objective."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="CONSTRAINT_CONFLICT",
            message=message,
            details=details
        )


# Restructure Exceptions
class UnknownEntityException(ReconstructionError):
    """Raised when an entity name does not resolve."""

    def __init__(self, entity: str, known: Optional[list[str]] = None):
        super().__init__(
            error_code="UNKNOWN_ENTITY",
            message=f"Entity '{entity}' not found in model",
            details={'entity': entity, 'known_entities': known or []}
        )


class DuplicateTaskException(ReconstructionError):
    """Raised when an added task name already exists."""

    def __init__(self, task: str):
        super().__init__(
            error_code="DUPLICATE_TASK",
            message=f"Task '{task}' already exists in model",
            details={'task': task}
        )


# Solver Exceptions
class NoObjectiveException(ReconstructionError):
    """Raised when an optimization is requested without an objective."""

    def __init__(self, message: str = "No objective"):
        super().__init__(
            error_code="NO_OBJECTIVE",
            message=message
        )


class ProblemTooLargeException(ReconstructionError):
    """Raised when exhaustive enumeration is requested for too many variables."""

    def __init__(self, variables: int, limit: int):
        super().__init__(
            error_code="PROBLEM_TOO_LARGE",
            message=f"Brute force supports at most {limit} variables, got {variables}",
            details={'variables': variables, 'limit': limit}
        )


class InvalidProblemException(ReconstructionError):
    """Raised when a problem document is malformed."""

    def __init__(self, message: str = "Invalid problem", details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="INVALID_PROBLEM",
            message=message,
            details=details
        )


# Pipeline Exceptions
class PipelineStageException(ReconstructionError):
    """Raised when a reconstruction stage fails; wraps the stage error."""

    def __init__(self, stage: str, cause: ReconstructionError):
        self.stage = stage
        self.cause = cause
        super().__init__(
            error_code="STAGE_ERROR",
            message=f"{stage}: {cause.error_code}: {cause.message}",
            details={'stage': stage, 'cause': cause.error_code, **cause.details}
        )


class InputFileException(ReconstructionError):
    """Raised when an input file cannot be read or decoded."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            error_code="INPUT_FILE_ERROR",
            message=f"Cannot read {path}: {reason}",
            details={'path': path}
        )


class UsageException(ReconstructionError):
    """Raised for command-line usage errors."""

    exit_code = EXIT_USAGE_ERROR

    def __init__(self, message: str = "Invalid usage", details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="USAGE_ERROR",
            message=message,
            details=details
        )
