"""
Error models and exception handling using Pydantic v2
"""
import traceback
from typing import Optional, Dict, Any
import logging

from pydantic import BaseModel, Field, ConfigDict

logger = logging.getLogger(__name__)


class ErrorResponse(BaseModel):
    """Standard error diagnostic"""
    model_config = ConfigDict(populate_by_name=True)

    error_code: str = Field(..., min_length=1)
    message: str = Field(..., min_length=1)
    user_message: str = Field(..., min_length=1)
    run_id: Optional[str] = None
    details: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON output"""
        return self.model_dump(exclude_none=True)


class SimulationError(Exception):
    """Base error for every failure raised by the simulator"""
    def __init__(
        self,
        error_code: str = "SIMULATION_ERROR",
        message: str = "Simulation error occurred",
        user_message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        self.error_code = error_code
        self.message = message
        self.user_message = user_message or message
        self.details = details
        super().__init__(self.message)

    def to_response(self, run_id: Optional[str] = None) -> ErrorResponse:
        """Convert to error response"""
        return ErrorResponse(
            error_code=self.error_code,
            message=self.message,
            user_message=self.user_message,
            run_id=run_id,
            details=self.details
        )

    def log_error(self, run_id: Optional[str] = None):
        """Log the error"""
        logger.error(
            f"SimulationError [{self.error_code}]: {self.message}",
            extra={
                'error_code': self.error_code,
                'run_id': run_id,
                'details': self.details
            }
        )


class ScenarioValidationError(SimulationError):
    """Invalid scenario file or parameter"""
    def __init__(self, message: str, field: Optional[str] = None, value: Any = None):
        self.field = field
        self.value = value

        details: Dict[str, Any] = {}
        if field:
            details['field'] = field
        if value is not None:
            details['value'] = str(value)

        super().__init__(
            error_code="VALIDATION_ERROR",
            message=message,
            user_message=f"Invalid input: {message}",
            details=details or None
        )


class DegenerateGeometryError(SimulationError):
    """Zero-length or collinear geometry"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="DEGENERATE_GEOMETRY",
            message=message,
            user_message=f"Degenerate geometry: {message}",
            details=details
        )


class AmbiguousOrientationError(DegenerateGeometryError):
    """Normal parallel to the yaw axis; the roll/yaw pair is not unique"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.error_code = "AMBIGUOUS_ORIENTATION"


class InvalidOrientationError(SimulationError):
    """Mirror normal pointing out of the room"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="INVALID_ORIENTATION",
            message=message,
            user_message=f"Invalid mirror orientation: {message}",
            details=details
        )


class PlacementError(SimulationError):
    """Blocker placement failed within the retry budget"""
    def __init__(self, requested: int, placed: int, attempts: int):
        super().__init__(
            error_code="PLACEMENT_FAILED",
            message=f"Placed {placed} of {requested} blockers after {attempts} proposals",
            user_message="Blocker placement failed: room too crowded for the hardcore distance",
            details={'requested': requested, 'placed': placed, 'attempts': attempts}
        )


class ContractViolationError(SimulationError):
    """Operation called outside its precondition"""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            error_code="CONTRACT_VIOLATION",
            message=message,
            details=details
        )


class NoiselessLinkError(SimulationError):
    """SINR undefined: zero interference and zero noise"""
    def __init__(self, user: int):
        super().__init__(
            error_code="NOISELESS_LINK",
            message=f"User {user} has zero interference and zero noise variance",
            user_message="Noise model must be non-zero: SINR is undefined without noise or interference",
            details={'user': user}
        )


class OracleBudgetError(SimulationError):
    """Exhaustive search refused: instance too large"""
    def __init__(self, candidates: int, budget: int, shape: Dict[str, int]):
        super().__init__(
            error_code="ORACLE_BUDGET_EXCEEDED",
            message=f"Exhaustive search needs {candidates} allocations, budget is {budget}",
            user_message="Instance too large for the exhaustive oracle; use two_stage or raise --oracle-budget",
            details={'candidates': candidates, 'budget': budget, **shape}
        )


class TrainingDivergedError(SimulationError):
    """Non-finite reward or Q-value during training"""
    def __init__(self, episode: int, step: int, value: float, what: str = "reward"):
        super().__init__(
            error_code="TRAINING_DIVERGED",
            message=f"Non-finite {what} {value!r} at episode {episode}, step {step}",
            user_message="Training aborted: non-finite value encountered",
            details={'episode': episode, 'step': step, 'what': what}
        )


class OutputExistsError(SimulationError):
    """Refusing to overwrite an existing output file"""
    def __init__(self, path: str):
        super().__init__(
            error_code="OUTPUT_EXISTS",
            message=f"Output file already exists: {path}",
            user_message=f"{path} exists; pass --overwrite to replace it",
            details={'path': path}
        )


def handle_unexpected_error(
    error: Exception,
    run_id: Optional[str] = None,
    context: Optional[Dict[str, Any]] = None
) -> ErrorResponse:
    """Handle unexpected errors"""
    # Log the full traceback
    logger.exception(
        "Unexpected error occurred",
        extra={
            'run_id': run_id,
            'context': context
        }
    )

    return ErrorResponse(
        error_code="INTERNAL_ERROR",
        message=str(error) or type(error).__name__,
        user_message="An unexpected error occurred.",
        run_id=run_id,
        details={
            'type': type(error).__name__,
            'traceback': traceback.format_exc() if logger.isEnabledFor(logging.DEBUG) else None
        }
    )
