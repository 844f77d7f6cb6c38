# src/utils/logging.py
"""
로깅 유틸리티
구조화된 로깅 및 실험 이벤트 로깅
"""
import logging
import logging.config
import time
from typing import Dict, Any, Optional
from contextvars import ContextVar

from ..config import get_settings

# 실험 컨텍스트
run_id_var: ContextVar[Optional[str]] = ContextVar('run_id', default=None)
seed_var: ContextVar[Optional[int]] = ContextVar('seed', default=None)
scheme_var: ContextVar[Optional[str]] = ContextVar('scheme', default=None)


class ContextFilter(logging.Filter):
    """실험 컨텍스트 정보를 로그에 추가하는 필터"""

    def filter(self, record):
        record.run_id = run_id_var.get() or 'no-run-id'
        seed = seed_var.get()
        record.seed = -1 if seed is None else seed
        record.scheme = scheme_var.get() or '-'
        return True


class ExperimentLogger:
    """실험 이벤트 로깅 (학습, 할당, 스윕 지점)"""

    def __init__(self, name: str = "experiment"):
        self.logger = logging.getLogger(f"{name}.events")

    def log_training(
        self,
        algo: str,
        episodes: int,
        final_epsilon: float,
        converged: bool,
        duration: float,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """학습 종료 로그"""
        self.logger.info(
            "training_finished",
            extra={
                'event_type': 'training',
                'algo': algo,
                'episodes': episodes,
                'final_epsilon': final_epsilon,
                'converged': converged,
                'duration': duration,
                'metadata': metadata or {}
            }
        )

    def log_allocation(
        self,
        scheme: str,
        utility: float,
        sum_rate: float,
        feasible: bool,
        duration: float,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """할당 결과 로그"""
        self.logger.info(
            "allocation_evaluated",
            extra={
                'event_type': 'allocation',
                'scheme_name': scheme,
                'utility': utility,
                'sum_rate': sum_rate,
                'feasible': feasible,
                'duration': duration,
                'metadata': metadata or {}
            }
        )

    def log_sweep_point(
        self,
        sweep: str,
        value: float,
        rows: int,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """스윕 지점 완료 로그"""
        self.logger.info(
            "sweep_point_finished",
            extra={
                'event_type': 'sweep',
                'sweep': sweep,
                'value': value,
                'rows': rows,
                'metadata': metadata or {}
            }
        )

    def log_error(
        self,
        error_type: str,
        error_message: str,
        source: str,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """에러 로그"""
        self.logger.error(
            "error_occurred",
            extra={
                'event_type': 'error',
                'error_type': error_type,
                'error_message': error_message,
                'source': source,
                'metadata': metadata or {}
            }
        )


class PerformanceLogger:
    """성능 로깅을 위한 컨텍스트 매니저"""

    def __init__(self, operation: str, logger: logging.Logger):
        self.operation = operation
        self.logger = logger
        self.start_time: Optional[float] = None
        self.duration: float = 0.0
        self.context: Dict[str, Any] = {}

    def add_context(self, **kwargs):
        """컨텍스트 추가"""
        self.context.update(kwargs)
        return self

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.debug(f"{self.operation} 시작", extra=self.context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = time.perf_counter() - (self.start_time or 0.0)

        if exc_type:
            self.logger.error(
                f"{self.operation} 실패",
                extra={
                    **self.context,
                    'duration': self.duration,
                    'error': str(exc_val)
                }
            )
        else:
            self.logger.info(
                f"{self.operation} 완료",
                extra={
                    **self.context,
                    'duration': self.duration
                }
            )
        return False


def setup_logging():
    """로깅 설정"""
    settings = get_settings()
    log_config = settings.get_log_config()

    # 컨텍스트 필터 추가
    for handler in log_config.get('handlers', {}).values():
        handler.setdefault('filters', []).append('context_filter')

    log_config.setdefault('filters', {})['context_filter'] = {
        '()': ContextFilter
    }

    logging.config.dictConfig(log_config)

    # 외부 라이브러리 로깅 레벨 조정
    logging.getLogger('joblib').setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """로거 가져오기"""
    return logging.getLogger(name)


def set_run_context(
    run_id: Optional[str] = None,
    seed: Optional[int] = None,
    scheme: Optional[str] = None
):
    """실험 컨텍스트 설정"""
    if run_id:
        run_id_var.set(run_id)
    if seed is not None:
        seed_var.set(seed)
    if scheme:
        scheme_var.set(scheme)


def clear_run_context():
    """실험 컨텍스트 클리어"""
    run_id_var.set(None)
    seed_var.set(None)
    scheme_var.set(None)


# 싱글톤 실험 로거
_experiment_logger: Optional[ExperimentLogger] = None


def get_experiment_logger() -> ExperimentLogger:
    """실험 로거 가져오기"""
    global _experiment_logger
    if _experiment_logger is None:
        _experiment_logger = ExperimentLogger()
    return _experiment_logger
