# src/rl/environment.py
"""
Sequential-assignment MDP over a scene

One episode assigns users 0..K-1 in index order, one (AP, mirror) pair per
step. The encoded state is (next_user, per-AP load); the partial allocation
travels with the state so that step() is a pure function of (state, action).

With mirror exclusivity the valid actions depend on which mirrors earlier
users took, and that set is not in the encoded state. Two histories with the
same loads share a Q row but can face different action masks, so the tabular
problem is no longer Markov in the encoded state. A taken-mirror bitmask
would restore that at 2^M times the table size.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple
import logging

import numpy as np
from cachetools import LRUCache

from ..channel.rates import UNASSIGNED, Allocation, allocation_utility, link_metrics, qos_satisfied
from ..channel.tables import ChannelTables, build_channel_tables
from ..models.errors import ContractViolationError, ScenarioValidationError
from ..models.scene import Scene

logger = logging.getLogger(__name__)

REWARD_CACHE_SIZE = 200_000


@dataclass(frozen=True)
class EnvState:
    next_user: int
    ap_load: Tuple[int, ...]
    ap_of: Tuple[int, ...] = field(default=(), compare=False)
    mirror_of: Tuple[int, ...] = field(default=(), compare=False)


def encode_state(s: EnvState, num_users: int, num_aps: int) -> int:
    """Mixed radix: next_user * (K+1)^L + sum_l load_l * (K+1)^l"""
    base = num_users + 1
    sid = s.next_user * base ** num_aps
    for l, load in enumerate(s.ap_load):
        sid += load * base ** l
    return sid


def state_count(num_users: int, num_aps: int) -> int:
    return (num_users + 1) * (num_users + 1) ** num_aps


class AllocationEnv:
    """Finite MDP for joint AP and mirror assignment"""

    def __init__(self, scene: Scene, tables: Optional[ChannelTables] = None):
        self._bind(scene, tables)

    def _bind(self, scene: Scene, tables: Optional[ChannelTables] = None):
        if scene.num_mirrors < 1:
            raise ScenarioValidationError("the allocation environment needs at least one mirror", field='mirrors')
        min_rates = np.array([u.min_rate for u in scene.users])
        if np.any(min_rates <= 0):
            raise ScenarioValidationError(
                "every user needs min_rate > 0 for the reward", field='min_rate'
            )
        self.scene = scene
        self.tables = tables if tables is not None else build_channel_tables(scene)
        self.min_rates = min_rates
        self.num_users = scene.num_users
        self.num_aps = scene.num_aps
        self.num_mirrors = scene.num_mirrors
        self.num_states = state_count(self.num_users, self.num_aps)
        self.num_actions = self.num_aps * self.num_mirrors
        self.mirror_exclusive = scene.mirror_exclusive
        self._fingerprint = scene.geometry_fingerprint()
        self._rewards: LRUCache = LRUCache(maxsize=REWARD_CACHE_SIZE)
        self._all_actions = np.arange(self.num_actions)

    def reset(self, scene: Optional[Scene] = None, rng: Optional[np.random.Generator] = None) -> EnvState:
        """Start state; rebinds the tables only if the scene changed"""
        if scene is not None and scene != self.scene:
            if scene.geometry_fingerprint() != self._fingerprint:
                self._bind(scene)
            else:
                self._bind(scene, self.tables)
        K = self.num_users
        return EnvState(
            next_user=0,
            ap_load=(0,) * self.num_aps,
            ap_of=(UNASSIGNED,) * K,
            mirror_of=(self.num_mirrors,) * K,
        )

    def encode_state(self, s: EnvState) -> int:
        return encode_state(s, self.num_users, self.num_aps)

    def is_terminal(self, s: EnvState) -> bool:
        return s.next_user >= self.num_users

    def valid_actions(self, s: EnvState) -> np.ndarray:
        """Sorted action ids l * M + m"""
        if self.is_terminal(s):
            return np.empty(0, dtype=np.int64)
        if not self.mirror_exclusive:
            return self._all_actions
        taken = {m for m in s.mirror_of[:s.next_user]}
        free = [m for m in range(self.num_mirrors) if m not in taken]
        if not free:
            raise ContractViolationError(
                "mirror exclusivity leaves no action", {'next_user': s.next_user}
            )
        return np.array(
            sorted(l * self.num_mirrors + m for l in range(self.num_aps) for m in free),
            dtype=np.int64,
        )

    def decode_action(self, a: int) -> Tuple[int, int]:
        return int(a) // self.num_mirrors, int(a) % self.num_mirrors

    def step(self, s: EnvState, a: int) -> Tuple[EnvState, float, bool]:
        """Assign action a to the next user; reward R_k / R_min,k on the partial allocation"""
        if self.is_terminal(s):
            raise ContractViolationError("step called on a terminal state", {'next_user': s.next_user})
        if not (0 <= a < self.num_actions):
            raise ContractViolationError(f"action {a} out of range", {'num_actions': self.num_actions})
        l, m = self.decode_action(a)
        k = s.next_user
        if self.mirror_exclusive and m in s.mirror_of[:k]:
            raise ContractViolationError(f"mirror {m} already taken", {'user': k})

        ap_of = s.ap_of[:k] + (l,) + s.ap_of[k + 1:]
        mirror_of = s.mirror_of[:k] + (m,) + s.mirror_of[k + 1:]
        loads = list(s.ap_load)
        loads[l] += 1
        s_next = EnvState(next_user=k + 1, ap_load=tuple(loads), ap_of=ap_of, mirror_of=mirror_of)

        reward = self._reward(k, ap_of, mirror_of)
        return s_next, reward, s_next.next_user == self.num_users

    def _reward(self, k: int, ap_of: Tuple[int, ...], mirror_of: Tuple[int, ...]) -> float:
        key = (ap_of[:k + 1], mirror_of[:k + 1])
        cached = self._rewards.get(key)
        if cached is not None:
            return cached
        metrics = link_metrics(
            self.scene, self.tables,
            np.asarray(ap_of)[None, :], np.asarray(mirror_of)[None, :]
        )
        reward = float(metrics.rate[0, k] / self.min_rates[k])
        self._rewards[key] = reward
        return reward

    def allocation(self, s: EnvState) -> Allocation:
        """Complete allocation of a terminal state"""
        if not self.is_terminal(s):
            raise ContractViolationError("allocation requested before the episode ended", {'next_user': s.next_user})
        return Allocation(ap_of=s.ap_of, mirror_of=s.mirror_of)

    def rollout(self, actions: Sequence[int]) -> Tuple[EnvState, float]:
        """Play a fixed action sequence from reset; returns (final state, total reward)"""
        s = self.reset()
        total = 0.0
        for a in actions:
            s, r, _ = self.step(s, int(a))
            total += r
        return s, total

    def final_utility(self, alloc: Allocation) -> float:
        return allocation_utility(alloc, self.scene, self.tables)

    def final_qos(self, alloc: Allocation) -> np.ndarray:
        return qos_satisfied(alloc, self.scene, self.tables)
