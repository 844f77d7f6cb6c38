# src/utils/__init__.py
"""
유틸리티 모듈
"""
from .logging import (
    setup_logging,
    get_logger,
    get_experiment_logger,
    PerformanceLogger,
    ExperimentLogger,
    set_run_context,
    clear_run_context
)

__all__ = [
    # Logging
    'setup_logging',
    'get_logger',
    'get_experiment_logger',
    'PerformanceLogger',
    'ExperimentLogger',
    'set_run_context',
    'clear_run_context',
]
