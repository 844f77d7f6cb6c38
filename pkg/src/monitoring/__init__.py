"""
모니터링 및 메트릭 모듈
"""
from .metrics import (
    SIM_REGISTRY,
    MetricsCollector,
    export_metrics
)

__all__ = [
    'SIM_REGISTRY',
    'MetricsCollector',
    'export_metrics',
]
