"""
할당기 모듈 (최적 탐색, 휴리스틱, 학습 기반)
"""
from typing import Optional

from ..models.errors import ScenarioValidationError
from ..models.training import TrainConfig
from ..rl.qtable import QTable
from .base import (
    AllocationOutcome,
    BaseAllocator,
    evaluate_allocation,
)
from .exhaustive import (
    ExhaustiveAllocator,
    TwoStageAllocator,
    ap_tuples,
    best_mirrors,
    check_budget,
    search_ap_tuples,
    stage_one,
)
from .heuristics import (
    DistanceBasedAllocator,
    NoIRSAllocator,
    nearest_mirror,
)
from .learned import LearnedAllocator

RL_SCHEMES = {'qlearning': 'qlearning', 'sarsa': 'sarsa', 'rl_joint': 'qlearning'}
FIXED_SCHEMES = {
    ExhaustiveAllocator.name: ExhaustiveAllocator,
    TwoStageAllocator.name: TwoStageAllocator,
    DistanceBasedAllocator.name: DistanceBasedAllocator,
    NoIRSAllocator.name: NoIRSAllocator,
}
SCHEMES = tuple(RL_SCHEMES) + tuple(FIXED_SCHEMES)


def make_allocator(
    scheme: str,
    seed: int = 0,
    config: Optional[TrainConfig] = None,
    qtable: Optional[QTable] = None,
    oracle_budget: Optional[int] = None,
) -> BaseAllocator:
    """Allocator for a scheme name"""
    if scheme in RL_SCHEMES:
        return LearnedAllocator(
            RL_SCHEMES[scheme],
            config or TrainConfig.from_settings(),
            seed,
            qtable=qtable,
            name=scheme,
            oracle_budget=oracle_budget,
        )
    if scheme in FIXED_SCHEMES:
        return FIXED_SCHEMES[scheme](oracle_budget=oracle_budget)
    raise ScenarioValidationError(
        f"unknown scheme '{scheme}'; choose from {', '.join(SCHEMES)}", field='scheme', value=scheme
    )


__all__ = [
    'AllocationOutcome',
    'BaseAllocator',
    'evaluate_allocation',
    'ExhaustiveAllocator',
    'TwoStageAllocator',
    'DistanceBasedAllocator',
    'NoIRSAllocator',
    'LearnedAllocator',
    'ap_tuples',
    'best_mirrors',
    'check_budget',
    'search_ap_tuples',
    'stage_one',
    'nearest_mirror',
    'RL_SCHEMES',
    'FIXED_SCHEMES',
    'SCHEMES',
    'make_allocator',
]
