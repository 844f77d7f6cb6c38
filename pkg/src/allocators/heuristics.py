# src/allocators/heuristics.py
"""
Reference schemes built on the LoS-optimal AP assignment
"""
import math

from ..channel.rates import Allocation
from ..channel.tables import ChannelTables
from ..models.errors import ContractViolationError
from ..models.scene import Scene
from .base import BaseAllocator
from .exhaustive import stage_one


def nearest_mirror(scene: Scene, k: int, exclude=frozenset()) -> int:
    """Closest mirror center to user k; lowest index on ties"""
    position = scene.users[k].position
    best, best_dist = -1, math.inf
    for m, mirror in enumerate(scene.mirrors):
        if m in exclude:
            continue
        d = math.dist(position, mirror.center)
        if d < best_dist:
            best, best_dist = m, d
    if best < 0:
        raise ContractViolationError("no mirror left to assign", {'user': k})
    return best


class DistanceBasedAllocator(BaseAllocator):
    """LoS-optimal APs, each user takes its nearest mirror"""

    name = "distance_based"

    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        aps = stage_one(scene, tables, self.oracle_budget)
        if scene.num_mirrors == 0:
            mirrors = [tables.null_mirror] * scene.num_users
        else:
            taken: set = set()
            mirrors = []
            for k in range(scene.num_users):
                m = nearest_mirror(scene, k, frozenset(taken) if scene.mirror_exclusive else frozenset())
                taken.add(m)
                mirrors.append(m)
        return Allocation(ap_of=tuple(int(a) for a in aps), mirror_of=tuple(mirrors))


class NoIRSAllocator(BaseAllocator):
    """LoS-optimal APs, no mirror for anyone"""

    name = "no_irs"

    def allocate(self, scene: Scene, tables: ChannelTables) -> Allocation:
        aps = stage_one(scene, tables, self.oracle_budget)
        return Allocation(
            ap_of=tuple(int(a) for a in aps),
            mirror_of=(tables.null_mirror,) * scene.num_users,
        )
