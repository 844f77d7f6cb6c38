# src/monitoring/metrics.py
"""
메트릭 수집 및 Prometheus 텍스트 파일 내보내기
"""
from typing import Optional
import logging
import platform

from prometheus_client import (
    Counter, Histogram, Gauge, Info,
    CollectorRegistry, write_to_textfile
)

from ..config import get_settings

logger = logging.getLogger(__name__)

# 시뮬레이터 전용 레지스트리 (프로세스 기본 수집기와 분리)
SIM_REGISTRY = CollectorRegistry()


class MetricsCollector:
    """메트릭 수집기"""

    # 학습 메트릭
    episodes_total = Counter(
        'owc_training_episodes_total',
        'Total number of training episodes run',
        ['algo'],
        registry=SIM_REGISTRY
    )

    training_duration_seconds = Histogram(
        'owc_training_duration_seconds',
        'Wall time of one training run in seconds',
        ['algo'],
        buckets=(0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0),
        registry=SIM_REGISTRY
    )

    # 할당 메트릭
    allocations_total = Counter(
        'owc_allocations_total',
        'Total number of allocations decided',
        ['scheme', 'feasible'],
        registry=SIM_REGISTRY
    )

    allocation_duration_seconds = Histogram(
        'owc_allocation_duration_seconds',
        'Allocation decision time in seconds',
        ['scheme'],
        buckets=(0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0),
        registry=SIM_REGISTRY
    )

    oracle_candidates_total = Counter(
        'owc_oracle_candidates_total',
        'Total number of AP tuples enumerated by exhaustive search',
        ['scheme'],
        registry=SIM_REGISTRY
    )

    # 채널 테이블 메트릭
    table_builds_total = Counter(
        'owc_table_builds_total',
        'Total number of channel tables computed',
        registry=SIM_REGISTRY
    )

    cache_hits_total = Counter(
        'owc_table_cache_hits_total',
        'Total number of channel table cache hits',
        registry=SIM_REGISTRY
    )

    cache_misses_total = Counter(
        'owc_table_cache_misses_total',
        'Total number of channel table cache misses',
        registry=SIM_REGISTRY
    )

    cache_size = Gauge(
        'owc_table_cache_size',
        'Current number of cached channel tables',
        registry=SIM_REGISTRY
    )

    # 에러 메트릭
    errors_total = Counter(
        'owc_errors_total',
        'Total number of errors',
        ['error_type', 'source'],
        registry=SIM_REGISTRY
    )

    # 시스템 정보
    system_info = Info(
        'owc_system',
        'System information',
        registry=SIM_REGISTRY
    )

    @classmethod
    def init_metrics(cls):
        """메트릭 초기화"""
        settings = get_settings()

        cls.system_info.info({
            'version': '1.0.0',
            'environment': settings.environment,
            'python_version': platform.python_version()
        })

    @classmethod
    def record_training(cls, algo: str, episodes: int, duration: float):
        """학습 메트릭 기록"""
        cls.episodes_total.labels(algo=algo).inc(episodes)
        cls.training_duration_seconds.labels(algo=algo).observe(duration)

    @classmethod
    def record_allocation(cls, scheme: str, feasible: bool, duration: float):
        """할당 메트릭 기록"""
        cls.allocations_total.labels(
            scheme=scheme,
            feasible='yes' if feasible else 'no'
        ).inc()
        cls.allocation_duration_seconds.labels(scheme=scheme).observe(duration)

    @classmethod
    def record_oracle_candidates(cls, scheme: str, count: int):
        """열거된 AP 조합 수 기록"""
        cls.oracle_candidates_total.labels(scheme=scheme).inc(count)

    @classmethod
    def record_table_build(cls):
        """채널 테이블 계산 기록"""
        cls.table_builds_total.inc()

    @classmethod
    def record_cache_hit(cls):
        """캐시 히트 기록"""
        cls.cache_hits_total.inc()

    @classmethod
    def record_cache_miss(cls):
        """캐시 미스 기록"""
        cls.cache_misses_total.inc()

    @classmethod
    def update_cache_size(cls, size: int):
        """캐시 크기 업데이트"""
        cls.cache_size.set(size)

    @classmethod
    def record_error(cls, error_type: str, source: str):
        """에러 메트릭 기록"""
        cls.errors_total.labels(
            error_type=error_type,
            source=source
        ).inc()


def export_metrics(path: Optional[str] = None) -> Optional[str]:
    """
    메트릭을 Prometheus 텍스트 파일로 기록

    경로가 없으면 설정값(OWC_METRICS_FILE)을 사용하고, 둘 다 비어 있으면 건너뜀
    """
    settings = get_settings()
    target = path or settings.metrics_file
    if not settings.metrics_enabled or not target:
        return None

    try:
        MetricsCollector.init_metrics()
        write_to_textfile(target, SIM_REGISTRY)
        logger.info(f"메트릭 파일 기록됨: {target}")
        return target
    except OSError as e:
        logger.error(f"메트릭 파일 기록 실패: {e}")
        return None
