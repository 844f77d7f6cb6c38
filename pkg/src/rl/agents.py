# src/rl/agents.py
"""
Tabular Q-learning and SARSA with epsilon-greedy exploration
"""
import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Type
import logging

import numpy as np

from ..channel.rates import Allocation
from ..models.errors import ContractViolationError, ScenarioValidationError, TrainingDivergedError
from ..models.training import TrainConfig
from ..monitoring import MetricsCollector
from ..utils.logging import PerformanceLogger, get_experiment_logger
from .environment import AllocationEnv
from .qtable import QTable

logger = logging.getLogger(__name__)

CONVERGENCE_TOLERANCE = 1e-2


def select_action(
    q: QTable,
    s: int,
    valid: Sequence[int],
    epsilon: float,
    rng: Optional[np.random.Generator] = None,
) -> int:
    """
    Epsilon-greedy choice among valid actions.

    A uniform V is drawn only when epsilon > 0; V < epsilon explores
    uniformly, otherwise the greedy action wins with ties to the lowest id.
    """
    valid = np.asarray(valid, dtype=np.int64)
    if valid.size == 0:
        raise ContractViolationError("no valid action to select", {'state': s})
    if epsilon > 0.0:
        if rng is None:
            raise ContractViolationError("exploration needs a random generator")
        if rng.random() < epsilon:
            return int(valid[rng.integers(valid.size)])
    return int(valid[int(np.argmax(q.values[s, valid]))])


def q_learning_update(
    q: QTable,
    s: int,
    a: int,
    r: float,
    s_next: Optional[int],
    valid_next: Optional[Sequence[int]],
    alpha: float,
    gamma: float,
) -> float:
    """Q(s,a) += alpha [r + gamma max_a' Q(s',a') - Q(s,a)]; terminal s' bootstraps 0"""
    if s_next is None or valid_next is None or len(valid_next) == 0:
        bootstrap = 0.0
    else:
        bootstrap = float(np.max(q.values[s_next, np.asarray(valid_next, dtype=np.int64)]))
    old = q.values[s, a]
    new = old + alpha * (r + gamma * bootstrap - old)
    q.values[s, a] = new
    return float(new)


def sarsa_update(
    q: QTable,
    s: int,
    a: int,
    r: float,
    s_next: Optional[int],
    a_next: Optional[int],
    alpha: float,
    gamma: float,
) -> float:
    """Q(s,a) += alpha [r + gamma Q(s',a') - Q(s,a)]; terminal s' bootstraps 0"""
    bootstrap = 0.0 if s_next is None or a_next is None else float(q.values[s_next, a_next])
    old = q.values[s, a]
    new = old + alpha * (r + gamma * bootstrap - old)
    q.values[s, a] = new
    return float(new)


@dataclass
class TrainingHistory:
    """Per-episode return, exploration rate and largest |dQ|"""
    returns: np.ndarray
    epsilons: np.ndarray
    max_delta: np.ndarray
    window: int = 100

    def __len__(self) -> int:
        return len(self.returns)

    @property
    def convergence(self) -> float:
        """Largest |dQ| over the last `window` episodes (0 for no episodes)"""
        if len(self.max_delta) == 0:
            return 0.0
        return float(np.max(self.max_delta[-self.window:]))

    def converged(self, tolerance: float = CONVERGENCE_TOLERANCE) -> bool:
        return self.convergence < tolerance

    @property
    def final_epsilon(self) -> float:
        return float(self.epsilons[-1]) if len(self.epsilons) else math.nan


def _check_finite(value: float, episode: int, step: int, what: str):
    if not math.isfinite(value):
        raise TrainingDivergedError(episode, step, value, what)


class TabularAgent(ABC):
    """Episode loop shared by both algorithms"""

    name: str = "tabular"

    def __init__(self, config: TrainConfig):
        self.config = config

    @abstractmethod
    def run_episode(
        self,
        env: AllocationEnv,
        q: QTable,
        epsilon: float,
        rng: np.random.Generator,
        episode: int,
    ) -> Tuple[float, float]:
        """One episode; returns (return, max |dQ|)"""
        pass

    def _guard(self, step: int, episode: int):
        if step > self.config.max_steps_guard:
            raise ContractViolationError(
                "episode exceeded the step guard",
                {'episode': episode, 'guard': self.config.max_steps_guard}
            )

    def train(
        self,
        env: AllocationEnv,
        rng: np.random.Generator,
        q: Optional[QTable] = None,
    ) -> Tuple[QTable, TrainingHistory]:
        cfg = self.config
        q = q if q is not None else QTable.for_env(env)
        q.check_env(env)

        returns = np.zeros(cfg.episodes)
        epsilons = np.zeros(cfg.episodes)
        deltas = np.zeros(cfg.episodes)
        epsilon = cfg.epsilon_start

        started = time.perf_counter()
        with PerformanceLogger(f"{self.name} training", logger).add_context(
            episodes=cfg.episodes, states=env.num_states, actions=env.num_actions
        ):
            for episode in range(cfg.episodes):
                epsilons[episode] = epsilon
                returns[episode], deltas[episode] = self.run_episode(env, q, epsilon, rng, episode)
                epsilon = max(cfg.epsilon_min, epsilon * cfg.epsilon_decay)
        duration = time.perf_counter() - started

        history = TrainingHistory(returns, epsilons, deltas, window=cfg.convergence_window)
        MetricsCollector.record_training(self.name, cfg.episodes, duration)
        get_experiment_logger().log_training(
            algo=self.name,
            episodes=cfg.episodes,
            final_epsilon=history.final_epsilon if cfg.episodes else cfg.epsilon_start,
            converged=history.converged(),
            duration=duration,
            metadata={'convergence': history.convergence},
        )
        return q, history


class QLearningAgent(TabularAgent):
    """Off-policy: bootstraps on the best next action"""

    name = "qlearning"

    def run_episode(self, env, q, epsilon, rng, episode):
        cfg = self.config
        s = env.reset()
        total, max_delta, step, done = 0.0, 0.0, 0, False
        while not done:
            sid = env.encode_state(s)
            a = select_action(q, sid, env.valid_actions(s), epsilon, rng)
            s_next, r, done = env.step(s, a)
            _check_finite(r, episode, step, "reward")

            old = float(q.values[sid, a])
            if done:
                new = q_learning_update(q, sid, a, r, None, None, cfg.learning_rate, cfg.discount)
            else:
                new = q_learning_update(
                    q, sid, a, r, env.encode_state(s_next), env.valid_actions(s_next),
                    cfg.learning_rate, cfg.discount
                )
            _check_finite(new, episode, step, "q-value")

            max_delta = max(max_delta, abs(new - old))
            total += r
            s = s_next
            step += 1
            self._guard(step, episode)
        return total, max_delta


class SarsaAgent(TabularAgent):
    """On-policy: bootstraps on the action actually taken next"""

    name = "sarsa"

    def run_episode(self, env, q, epsilon, rng, episode):
        cfg = self.config
        s = env.reset()
        sid = env.encode_state(s)
        a = select_action(q, sid, env.valid_actions(s), epsilon, rng)
        total, max_delta, step = 0.0, 0.0, 0
        while True:
            s_next, r, done = env.step(s, a)
            _check_finite(r, episode, step, "reward")
            old = float(q.values[sid, a])

            if done:
                new = sarsa_update(q, sid, a, r, None, None, cfg.learning_rate, cfg.discount)
                _check_finite(new, episode, step, "q-value")
                max_delta = max(max_delta, abs(new - old))
                total += r
                break

            sid_next = env.encode_state(s_next)
            a_next = select_action(q, sid_next, env.valid_actions(s_next), epsilon, rng)
            new = sarsa_update(q, sid, a, r, sid_next, a_next, cfg.learning_rate, cfg.discount)
            _check_finite(new, episode, step, "q-value")

            max_delta = max(max_delta, abs(new - old))
            total += r
            s, sid, a = s_next, sid_next, a_next
            step += 1
            self._guard(step, episode)
        return total, max_delta


AGENTS: Dict[str, Type[TabularAgent]] = {
    QLearningAgent.name: QLearningAgent,
    SarsaAgent.name: SarsaAgent,
}

ALGO_INDEX: Dict[str, int] = {name: i for i, name in enumerate(AGENTS)}


def make_agent(algo: str, config: TrainConfig) -> TabularAgent:
    try:
        return AGENTS[algo](config)
    except KeyError:
        raise ScenarioValidationError(
            f"unknown algorithm '{algo}'; choose from {', '.join(AGENTS)}", field='algo', value=algo
        )


def train(
    env: AllocationEnv,
    algo: str,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> Tuple[QTable, TrainingHistory]:
    """Train a fresh table with the named algorithm"""
    return make_agent(algo, cfg).train(env, rng)


def greedy_actions(q: QTable, env: AllocationEnv) -> List[int]:
    """Action sequence of the epsilon = 0 policy from reset"""
    q.check_env(env)
    s = env.reset()
    actions: List[int] = []
    while not env.is_terminal(s):
        a = select_action(q, env.encode_state(s), env.valid_actions(s), 0.0)
        actions.append(a)
        s, _, _ = env.step(s, a)
    return actions


def greedy_allocation(q: QTable, env: AllocationEnv) -> Allocation:
    """Complete allocation of the greedy rollout"""
    s, _ = env.rollout(greedy_actions(q, env))
    return env.allocation(s)


def refine_mirrors(alloc: Allocation, env: AllocationEnv) -> Allocation:
    """
    Keep the APs, give each user the lowest-index mirror of largest gain from its AP.

    Interference is LoS-only, so a user's mirror only moves its own rate and
    no rate can drop. Equal-gain mirrors collapse to the lowest index. With
    mirror exclusivity, mirrors held by other users are not candidates.
    """
    h_irs = env.tables.h_irs
    mirrors = list(alloc.mirror_of)
    for k, l in enumerate(alloc.ap_of):
        gains = np.array(h_irs[k, :env.num_mirrors, l], dtype=float)
        if env.mirror_exclusive:
            held = [m for j, m in enumerate(mirrors) if j != k and m < env.num_mirrors]
            gains[held] = -np.inf
        best = int(np.argmax(gains))
        if gains[best] >= h_irs[k, mirrors[k], l]:
            mirrors[k] = best
    return Allocation(ap_of=alloc.ap_of, mirror_of=tuple(mirrors))
