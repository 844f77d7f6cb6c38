# src/channel/tables.py
"""
Precomputed channel gain tables

h_los[k, l]     best-branch LoS gain from AP l to user k
h_irs[k, m, l]  best-branch mirror-path gain from AP l via mirror m to user k

h_irs carries one extra all-zero slab at m = M, the null mirror.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..cache import cached
from ..monitoring import MetricsCollector
from ..models.scene import Scene
from ..utils.logging import PerformanceLogger
from .geometry import normal_from_orientation
from .optics import irs_gain, los_gain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelTables:
    h_los: np.ndarray
    h_irs: np.ndarray

    @property
    def num_users(self) -> int:
        return self.h_los.shape[0]

    @property
    def num_aps(self) -> int:
        return self.h_los.shape[1]

    @property
    def num_mirrors(self) -> int:
        return self.h_irs.shape[1] - 1

    @property
    def null_mirror(self) -> int:
        return self.num_mirrors

    def without_irs(self) -> 'ChannelTables':
        return ChannelTables(self.h_los, np.zeros_like(self.h_irs))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def compute_channel_tables(scene: Scene) -> ChannelTables:
    """Evaluate every (k, l) and (k, m, l) path on the user's best branch"""
    K, L, M = scene.num_users, scene.num_aps, scene.num_mirrors
    blockers = scene.blockers
    tol = scene.alignment_tolerance

    h_los = np.zeros((K, L))
    h_irs = np.zeros((K, M + 1, L))
    normals = [normal_from_orientation(m.wall_normal, m.orientation) for m in scene.mirrors]

    with PerformanceLogger("channel table build", logger).add_context(users=K, aps=L, mirrors=M):
        for k, user in enumerate(scene.users):
            for l, ap in enumerate(scene.access_points):
                h_los[k, l] = max(
                    los_gain(ap, branch, user.position, blockers) for branch in user.branches
                )
                for m, mirror in enumerate(scene.mirrors):
                    h_irs[k, m, l] = max(
                        irs_gain(ap, mirror, branch, user.position, blockers, tol, normals[m])
                        for branch in user.branches
                    )

    MetricsCollector.record_table_build()
    return ChannelTables(_freeze(h_los), _freeze(h_irs))


@cached(key_builder=lambda scene: scene.geometry_fingerprint(), source='tables')
def build_channel_tables(scene: Scene) -> ChannelTables:
    """Channel tables for a scene, memoised on its geometry"""
    return compute_channel_tables(scene)
