# src/allocators/learned.py
"""
Allocators driven by a tabular agent's greedy policy
"""
from typing import Optional

from ..channel.rates import Allocation
from ..channel.tables import ChannelTables
from ..models.scene import Scene
from ..models.training import TrainConfig
from ..rl.agents import ALGO_INDEX, TrainingHistory, greedy_allocation, make_agent, refine_mirrors
from ..rl.environment import AllocationEnv
from ..rl.qtable import QTable
from ..scene.layout import training_rng
from .base import BaseAllocator


class LearnedAllocator(BaseAllocator):
    """
    Trains Q-learning or SARSA on the scene, rolls out the greedy policy and
    hands each user the best mirror from the AP the policy picked.

    With a pre-trained `qtable` no training happens. The training stream is
    default_rng([seed, 2, algo index]) so each (seed, algorithm) pair is
    reproducible on its own.
    """

    def __init__(
        self,
        algo: str,
        config: TrainConfig,
        seed: int,
        qtable: Optional[QTable] = None,
        name: Optional[str] = None,
        oracle_budget: Optional[int] = None,
    ):
        super().__init__(oracle_budget)
        self.agent = make_agent(algo, config)
        self.algo = algo
        self.config = config
        self.seed = seed
        self.qtable = qtable
        self.history: Optional[TrainingHistory] = None
        self.trained: Optional[QTable] = None
        self.name = name or algo

    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        env = AllocationEnv(scene, tables)
        if self.qtable is None:
            q, self.history = self.agent.train(env, training_rng(self.seed, ALGO_INDEX[self.algo]))
            self.details = {
                'episodes': self.config.episodes,
                'convergence': self.history.convergence,
                'final_epsilon': self.history.final_epsilon,
            }
        else:
            q = self.qtable
            self.details = {'episodes': 0}
        self.trained = q
        return refine_mirrors(greedy_allocation(q, env), env)
