# src/allocators/base.py
"""
할당기 베이스 클래스
공통 평가 및 기록 인터페이스 정의
"""
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..channel.rates import Allocation, link_metrics, utility_batch
from ..channel.tables import ChannelTables, build_channel_tables
from ..config import get_settings
from ..models.errors import SimulationError
from ..models.scene import Scene
from ..monitoring import MetricsCollector
from ..utils import get_logger, PerformanceLogger, get_experiment_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class AllocationOutcome:
    """An allocation and how it scores on a scene"""
    scheme: str
    allocation: Allocation
    rates: np.ndarray
    utility: float
    qos: np.ndarray
    duration: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.rates))

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.qos))

    @property
    def infeasible_users(self) -> np.ndarray:
        return np.flatnonzero(~self.qos)


def evaluate_allocation(
    scene: Scene,
    alloc: Allocation,
    scheme: str = "custom",
    tables: Optional[ChannelTables] = None,
    duration: float = 0.0,
    details: Optional[Dict[str, Any]] = None,
) -> AllocationOutcome:
    """Rates, utility and QoS of a complete allocation"""
    tables = tables if tables is not None else build_channel_tables(scene)
    alloc.validate(tables.num_aps, tables.num_mirrors)
    ap, mirror = alloc.as_arrays()
    rates = link_metrics(scene, tables, ap, mirror).rate[0]
    min_rates = np.array([u.min_rate for u in scene.users])
    return AllocationOutcome(
        scheme=scheme,
        allocation=alloc,
        rates=rates,
        utility=float(utility_batch(rates[None, :])[0]),
        qos=rates >= min_rates,
        duration=duration,
        details=details or {},
    )


class BaseAllocator(ABC):
    """할당기 베이스 클래스"""

    name: str = "base"

    def __init__(self, oracle_budget: Optional[int] = None):
        self.settings = get_settings()
        self.oracle_budget = oracle_budget or self.settings.oracle_budget
        self.experiment_logger = get_experiment_logger()
        self.details: Dict[str, Any] = {}

    @abstractmethod
    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        """할당 결정"""
        pass

    def run(self, scene: Scene, tables: Optional[ChannelTables] = None) -> AllocationOutcome:
        """할당 결정 후 평가, 메트릭 및 이벤트 기록"""
        tables = tables if tables is not None else build_channel_tables(scene)
        self.details = {}

        started = time.perf_counter()
        try:
            with PerformanceLogger(f"{self.name} allocation", logger).add_context(
                users=scene.num_users, aps=scene.num_aps, mirrors=scene.num_mirrors
            ):
                alloc = self.allocate(scene, tables)
        except SimulationError as e:
            MetricsCollector.record_error(e.error_code, self.name)
            raise
        duration = time.perf_counter() - started

        outcome = evaluate_allocation(scene, alloc, self.name, tables, duration, dict(self.details))
        MetricsCollector.record_allocation(self.name, outcome.feasible, duration)
        self.experiment_logger.log_allocation(
            scheme=self.name,
            utility=outcome.utility,
            sum_rate=outcome.sum_rate,
            feasible=outcome.feasible,
            duration=duration,
        )
        return outcome

    def evaluate(self, scene: Scene, alloc: Allocation, tables: Optional[ChannelTables] = None) -> AllocationOutcome:
        """고정된 할당을 다른 장면(예: 다른 송신 전력)에서 평가"""
        return evaluate_allocation(scene, alloc, self.name, tables)
