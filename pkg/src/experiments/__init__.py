"""
실험 모듈 (사용자별 전송률, 전력 스윕, 차단 스윕)
"""
from .export import export_csv, output_paths, write_history
from .runner import (
    PER_USER_SCHEMES,
    SWEEP_SCHEMES,
    ExperimentRunner,
    blockage_job,
    default_seeds,
    history_frame,
    per_user_job,
    power_sweep_job,
)

__all__ = [
    'ExperimentRunner',
    'PER_USER_SCHEMES',
    'SWEEP_SCHEMES',
    'blockage_job',
    'default_seeds',
    'export_csv',
    'history_frame',
    'output_paths',
    'per_user_job',
    'power_sweep_job',
    'write_history',
]
