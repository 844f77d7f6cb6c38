"""
데이터 모델 및 에러 정의
"""
from .scene import (
    WALL_NORMALS,
    Room,
    MirrorOrientation,
    ReceiverBranch,
    AccessPoint,
    MirrorElement,
    UserTerminal,
    NoiseModel,
    Blocker,
    Scene,
)
from .errors import (
    ErrorResponse,
    SimulationError,
    ScenarioValidationError,
    DegenerateGeometryError,
    AmbiguousOrientationError,
    InvalidOrientationError,
    PlacementError,
    ContractViolationError,
    NoiselessLinkError,
    OracleBudgetError,
    TrainingDivergedError,
    OutputExistsError,
    handle_unexpected_error
)
from .training import TrainConfig
from .results import CSV_COLUMNS, ExperimentResult, ResultRow

__all__ = [
    # Scene
    'WALL_NORMALS',
    'Room',
    'MirrorOrientation',
    'ReceiverBranch',
    'AccessPoint',
    'MirrorElement',
    'UserTerminal',
    'NoiseModel',
    'Blocker',
    'Scene',

    # Errors
    'ErrorResponse',
    'SimulationError',
    'ScenarioValidationError',
    'DegenerateGeometryError',
    'AmbiguousOrientationError',
    'InvalidOrientationError',
    'PlacementError',
    'ContractViolationError',
    'NoiselessLinkError',
    'OracleBudgetError',
    'TrainingDivergedError',
    'OutputExistsError',
    'handle_unexpected_error',

    # Training
    'TrainConfig',

    # Results
    'CSV_COLUMNS',
    'ExperimentResult',
    'ResultRow',
]
