"""
강화학습 모듈 (Q-learning, SARSA)
"""
from .environment import (
    EnvState,
    AllocationEnv,
    encode_state,
    state_count,
)
from .qtable import (
    QTable,
    save_qtable,
    load_qtable,
)
from .agents import (
    AGENTS,
    ALGO_INDEX,
    TabularAgent,
    QLearningAgent,
    SarsaAgent,
    TrainingHistory,
    select_action,
    q_learning_update,
    sarsa_update,
    make_agent,
    train,
    greedy_actions,
    greedy_allocation,
    refine_mirrors,
)

__all__ = [
    # Environment
    'EnvState',
    'AllocationEnv',
    'encode_state',
    'state_count',

    # Q-table
    'QTable',
    'save_qtable',
    'load_qtable',

    # Agents
    'AGENTS',
    'ALGO_INDEX',
    'TabularAgent',
    'QLearningAgent',
    'SarsaAgent',
    'TrainingHistory',
    'select_action',
    'q_learning_update',
    'sarsa_update',
    'make_agent',
    'train',
    'greedy_actions',
    'greedy_allocation',
    'refine_mirrors',
]
