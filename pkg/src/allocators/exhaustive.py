# src/allocators/exhaustive.py
"""
Exhaustive search over AP tuples

Interference is LoS-only and K_in depends only on the AP tuple, so for a
fixed tuple each user's rate depends on its own mirror alone and grows with
its own gain. Picking every user's best mirror per tuple therefore gives the
optimum over all (L*M)^K joint allocations, and taking the lowest mirror
index among equals keeps the lexicographic tie-break of the full
enumeration.
"""
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..channel.rates import Allocation, feasible_mask, link_metrics, rates_batch, utility_batch
from ..channel.tables import ChannelTables
from ..models.errors import ContractViolationError, OracleBudgetError
from ..models.scene import Scene
from ..monitoring import MetricsCollector
from .base import BaseAllocator

CHUNK_ROWS = 65_536

MirrorPolicy = Callable[[Scene, ChannelTables, np.ndarray], np.ndarray]


def check_budget(num_users: int, num_aps: int, num_mirrors: int, budget: int) -> int:
    """(L*M)^K, or OracleBudgetError when it exceeds the budget"""
    candidates = (num_aps * max(num_mirrors, 1)) ** num_users
    if candidates > budget:
        raise OracleBudgetError(
            candidates, budget, {'users': num_users, 'aps': num_aps, 'mirrors': num_mirrors}
        )
    return candidates


def ap_tuples(num_users: int, num_aps: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Rows start..stop of the lexicographic enumeration of range(L)^K"""
    total = num_aps ** num_users
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, num_users), dtype=np.int64)
    for k in range(num_users - 1, -1, -1):
        out[:, k] = idx % num_aps
        idx = idx // num_aps
    return out


def null_mirrors(scene: Scene, tables: ChannelTables, aps: np.ndarray) -> np.ndarray:
    return np.full_like(aps, tables.null_mirror)


def best_mirrors(scene: Scene, tables: ChannelTables, aps: np.ndarray) -> np.ndarray:
    """Per user, the lowest-index mirror with the largest gain from its AP"""
    if tables.num_mirrors == 0:
        return null_mirrors(scene, tables, aps)
    users = np.arange(aps.shape[1])[None, :]
    # h_irs[k, :M, l] for every (row, k): shape (T, K, M)
    gains = np.transpose(tables.h_irs[:, :-1, :], (0, 2, 1))[users, aps]
    return np.argmax(gains, axis=2)


def assigned_mirrors(scene: Scene, tables: ChannelTables, aps: np.ndarray) -> np.ndarray:
    """Mirror per user with no mirror shared, maximising the summed log-rate per AP tuple"""
    K, M = aps.shape[1], tables.num_mirrors
    if M < K:
        raise ContractViolationError(
            "mirror exclusivity needs at least as many mirrors as users", {'users': K, 'mirrors': M}
        )
    out = np.empty_like(aps)
    for t, row in enumerate(aps):
        # rate of every user with every mirror: row m assigns mirror m to all users
        trial_ap = np.repeat(row[None, :], M, axis=0)
        trial_mirror = np.repeat(np.arange(M)[:, None], K, axis=1)
        rates = rates_batch(scene, tables, trial_ap, trial_mirror)
        with np.errstate(divide='ignore'):
            score = np.where(rates > 0, np.log(np.where(rates > 0, rates, 1.0)), -1e6)
        users, mirrors = linear_sum_assignment(-score.T)
        out[t, users] = mirrors
    return out


def served_counts(rates: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per row, the number of users with a positive rate and the summed log over those users"""
    served = rates > 0
    with np.errstate(divide='ignore'):
        logs = np.where(served, np.log(np.where(served, rates, 1.0)), 0.0)
    return served.sum(axis=1), logs.sum(axis=1)


def search_ap_tuples(
    scene: Scene,
    tables: ChannelTables,
    mirror_policy: MirrorPolicy,
    prefer_feasible: bool = True,
) -> Tuple[np.ndarray, np.ndarray, float, bool, int]:
    """
    Scan all AP tuples in lexicographic order.

    Returns (aps, mirrors, utility, feasible, tuples scanned) of the first
    maximiser of (QoS-feasible, utility, users served, summed log-rate of the
    served users). The last two only separate tuples that leave some user
    without any signal, where the utility is -inf.
    """
    K, L = tables.num_users, tables.num_aps
    total = L ** K

    best = None
    best_key: Tuple[bool, float, int, float] = (False, -np.inf, 0, -np.inf)
    for start in range(0, total, CHUNK_ROWS):
        aps = ap_tuples(K, L, start, start + CHUNK_ROWS)
        mirrors = mirror_policy(scene, tables, aps)
        rates = link_metrics(scene, tables, aps, mirrors).rate
        utilities = utility_batch(rates)
        feasible = feasible_mask(scene, rates) if prefer_feasible else np.zeros(len(aps), dtype=bool)
        served, partial = served_counts(rates)

        # lexsort ranks by its last key first; -row keeps the first maximiser on full ties
        order = np.lexsort((-np.arange(len(aps)), partial, served, utilities, feasible.astype(np.int8)))
        i = int(order[-1])
        key = (bool(feasible[i]), float(utilities[i]), int(served[i]), float(partial[i]))

        if best is None or key > best_key:
            best = (aps[i].copy(), mirrors[i].copy())
            best_key = key

    assert best is not None
    return best[0], best[1], best_key[1], best_key[0], total


class ExhaustiveAllocator(BaseAllocator):
    """Exact optimum of the log-utility problem on small instances"""

    name = "oracle"

    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        check_budget(scene.num_users, scene.num_aps, scene.num_mirrors, self.oracle_budget)
        policy = assigned_mirrors if scene.mirror_exclusive else best_mirrors
        aps, mirrors, utility, feasible, scanned = search_ap_tuples(scene, tables, policy)
        MetricsCollector.record_oracle_candidates(self.name, scanned)
        self.details = {'qos_feasible_found': feasible, 'tuples_scanned': scanned}
        return Allocation(ap_of=tuple(int(a) for a in aps), mirror_of=tuple(int(m) for m in mirrors))


def stage_one(scene: Scene, tables: ChannelTables, budget: int) -> np.ndarray:
    """AP tuple maximising the LoS-only objective"""
    tuples = tables.num_aps ** tables.num_users
    if tuples > budget:
        raise OracleBudgetError(
            tuples, budget, {'users': tables.num_users, 'aps': tables.num_aps, 'mirrors': 0}
        )
    aps, _, _, _, scanned = search_ap_tuples(scene, tables.without_irs(), null_mirrors)
    MetricsCollector.record_oracle_candidates("stage_one", scanned)
    return aps


class TwoStageAllocator(BaseAllocator):
    """APs from LoS gains first, then mirrors with the APs frozen"""

    name = "two_stage"

    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        aps = stage_one(scene, tables, self.oracle_budget)
        policy = assigned_mirrors if scene.mirror_exclusive else best_mirrors
        mirrors = policy(scene, tables, aps[None, :])[0]
        return Allocation(ap_of=tuple(int(a) for a in aps), mirror_of=tuple(int(m) for m in mirrors))
