# src/channel/blockage.py
"""
Static blockers: hardcore placement and segment occlusion
"""
import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..models.errors import DegenerateGeometryError, PlacementError, ScenarioValidationError
from ..models.scene import Blocker, Room

logger = logging.getLogger(__name__)

MAX_PROPOSALS = 10_000
PLACEMENTS = ("uniform", "near_users")


def _point_segment_distance_2d(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return float(np.linalg.norm(c - a))
    t = float(np.clip(np.dot(c - a, ab) / denom, 0.0, 1.0))
    return float(np.linalg.norm(c - (a + t * ab)))


def segment_blocked(p0: Sequence[float], p1: Sequence[float], b: Blocker) -> bool:
    """True iff the segment p0-p1 passes through the solid cylinder b"""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    d = p1 - p0
    if float(np.linalg.norm(d)) < 1e-12:
        raise DegenerateGeometryError("segment endpoints coincide", {'point': p0.tolist()})

    # Portion of the segment inside the slab 0 <= z <= height
    dz = d[2]
    if abs(dz) < 1e-15:
        if not (0.0 <= p0[2] <= b.height):
            return False
        lo, hi = 0.0, 1.0
    else:
        t_a = (0.0 - p0[2]) / dz
        t_b = (b.height - p0[2]) / dz
        lo = max(0.0, min(t_a, t_b))
        hi = min(1.0, max(t_a, t_b))
        if hi - lo <= 1e-12:
            return False

    a_xy = (p0 + lo * d)[:2]
    b_xy = (p0 + hi * d)[:2]
    center = np.asarray(b.center_xy, dtype=float)
    return _point_segment_distance_2d(center, a_xy, b_xy) <= b.radius


def path_clear(p0: Sequence[float], p1: Sequence[float], blockers: Iterable[Blocker]) -> bool:
    return not any(segment_blocked(p0, p1, b) for b in blockers)


def sample_blockers(
    count: int,
    hardcore_distance: float,
    room: Room,
    rng: np.random.Generator,
    radius: float = 0.15,
    height: float = 1.65,
    avoid_xy: Optional[Sequence[Sequence[float]]] = None,
    max_proposals: int = MAX_PROPOSALS,
    placement: str = "uniform",
    near_distance: float = 1.0,
) -> List[Blocker]:
    """
    Hardcore placement by sequential rejection sampling.

    With placement "uniform" each proposal is one uniform point in the
    wall-clear floor area. With "near_users" a proposal picks a point of
    `avoid_xy` uniformly, then a distance uniform in (radius, near_distance]
    and a uniform bearing around it; points outside the wall-clear area are
    rejected. Either way a proposal is kept if it is at least
    `hardcore_distance` from every kept blocker and farther than `radius`
    from every point in `avoid_xy` (user positions). The draw sequence is
    nested: more blockers with the same generator reproduce the first ones.
    """
    if count < 0:
        raise ScenarioValidationError("blocker count must be >= 0", field='count', value=count)
    if hardcore_distance < 2 * radius:
        raise ScenarioValidationError(
            "hardcore distance must be at least the blocker diameter",
            field='hardcore_distance', value=hardcore_distance
        )
    if height >= room.height:
        raise ScenarioValidationError("blocker height reaches the ceiling", field='height', value=height)
    if placement not in PLACEMENTS:
        raise ScenarioValidationError(
            f"unknown blocker placement '{placement}'", field='placement', value=placement
        )
    if placement == "near_users" and near_distance <= radius:
        raise ScenarioValidationError(
            "near-user distance must exceed the blocker radius", field='near_distance', value=near_distance
        )
    if count == 0:
        return []
    if room.width <= 2 * radius or room.depth <= 2 * radius:
        raise PlacementError(count, 0, 0)

    avoid = np.asarray(avoid_xy, dtype=float).reshape(-1, 2) if avoid_xy is not None else np.empty((0, 2))
    if placement == "near_users" and len(avoid) == 0:
        raise ScenarioValidationError("near-user placement needs user positions", field='placement')
    low = np.array([radius, radius])
    high = np.array([room.width - radius, room.depth - radius])

    placed: List[np.ndarray] = []
    attempts = 0
    while len(placed) < count and attempts < max_proposals:
        attempts += 1
        if placement == "near_users":
            anchor = avoid[rng.integers(len(avoid))]
            r = radius + (near_distance - radius) * (1.0 - rng.random())
            theta = rng.uniform(0.0, 2 * np.pi)
            candidate = anchor + r * np.array([np.cos(theta), np.sin(theta)])
            if np.any(candidate < low) or np.any(candidate > high):
                continue
        else:
            candidate = rng.uniform(low, high)

        if placed and np.min(np.linalg.norm(np.asarray(placed) - candidate, axis=1)) < hardcore_distance:
            continue
        if len(avoid) and np.min(np.linalg.norm(avoid - candidate, axis=1)) <= radius:
            continue
        placed.append(candidate)

    if not placed:
        raise PlacementError(count, 0, attempts)
    if len(placed) < count:
        logger.warning(
            f"Blocker placement saturated: {len(placed)} of {count} placed after {attempts} proposals"
        )

    return [
        Blocker(center_xy=(float(p[0]), float(p[1])), radius=radius, height=height)
        for p in placed
    ]
