# src/scene/layout.py
"""
Scene construction from a scenario

Random draws come from independent streams keyed by seed:
users [seed, 0], blockers [seed, 1], training [seed, 2, algo].
"""
import math
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np
from pydantic import ValidationError

from ..channel.blockage import sample_blockers
from ..channel.geometry import steer_mirror
from ..config.scenario import MirrorArraySection, ScenarioConfig
from ..models.errors import ScenarioValidationError
from ..models.scene import (
    AccessPoint,
    MirrorElement,
    MirrorOrientation,
    NoiseModel,
    ReceiverBranch,
    Room,
    Scene,
    UserTerminal,
)

logger = logging.getLogger(__name__)

USER_STREAM = 0
BLOCKER_STREAM = 1
TRAINING_STREAM = 2


def user_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, USER_STREAM])


def blocker_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, BLOCKER_STREAM])


def training_rng(seed: int, algo_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, TRAINING_STREAM, algo_index])


def _wall_point(wall: str, along: float, z: float, room: Room) -> Tuple[float, float, float]:
    if wall == "y_min":
        return (along, 0.0, z)
    if wall == "y_max":
        return (along, room.depth, z)
    if wall == "x_min":
        return (0.0, along, z)
    return (room.width, along, z)


def array_element_centers(arr: MirrorArraySection, room: Room) -> List[Tuple[float, float, float]]:
    """Element centers, row-major from the top row"""
    h0, z0 = arr.center
    pitch_h = arr.element_width + arr.gap
    pitch_v = arr.element_height + arr.gap
    centers = []
    for r in range(arr.rows):
        z = z0 + ((arr.rows - 1) / 2 - r) * pitch_v
        for c in range(arr.cols):
            along = h0 + (c - (arr.cols - 1) / 2) * pitch_h
            centers.append(_wall_point(arr.wall, along, z, room))
    return centers


def coverage_targets(rows: int, cols: int, room: Room, height: float) -> List[Tuple[float, float, float]]:
    """Centers of a rows x cols floor grid at receiver height, row-major"""
    return [
        ((c + 0.5) * room.width / cols, (r + 0.5) * room.depth / rows, height)
        for r in range(rows)
        for c in range(cols)
    ]


def nearest_ap(point: Sequence[float], aps: Sequence[AccessPoint]) -> AccessPoint:
    """Nearest AP by Euclidean distance; lowest index on ties"""
    dists = [math.dist(point, ap.position) for ap in aps]
    return aps[int(np.argmin(dists))]


def build_mirrors(
    cfg: ScenarioConfig,
    aps: Sequence[AccessPoint],
    room: Room,
    array_count: Optional[int] = None,
) -> Tuple[MirrorElement, ...]:
    """Mirror elements of the first `array_count` arrays, oriented per their steering mode"""
    arrays = cfg.mirror_arrays[:array_count] if array_count is not None else cfg.mirror_arrays
    mirrors: List[MirrorElement] = []
    for a, arr in enumerate(arrays):
        centers = array_element_centers(arr, room)
        targets = coverage_targets(arr.rows, arr.cols, room, cfg.users.height)
        wall_normal = MirrorElement(center=centers[0], wall_id=arr.wall).wall_normal
        for i, center in enumerate(centers):
            if arr.steering == "coverage":
                orientation = steer_mirror(center, nearest_ap(center, aps).position, targets[i], wall_normal)
            elif arr.steering == "explicit":
                roll, yaw = arr.angles_deg[i]  # type: ignore[index]
                orientation = MirrorOrientation(roll_y=math.radians(roll), yaw_z=math.radians(yaw))
            else:
                orientation = MirrorOrientation()
            mirrors.append(MirrorElement(
                center=center,
                width=arr.element_width,
                height=arr.element_height,
                reflectivity=arr.reflectivity,
                orientation=orientation,
                wall_id=arr.wall,
                array_index=a,
            ))
    return tuple(mirrors)


def build_access_points(cfg: ScenarioConfig, power: Optional[float] = None) -> Tuple[AccessPoint, ...]:
    d = cfg.ap_defaults
    return tuple(
        AccessPoint(
            position=ap.position,
            normal=ap.normal,
            half_power_semi_angle=math.radians(ap.half_power_semi_angle_deg or d.half_power_semi_angle_deg),
            optical_power=power if power is not None else (ap.optical_power_w or d.optical_power_w),
            bandwidth=ap.bandwidth_hz or d.bandwidth_hz,
        )
        for ap in cfg.access_points
    )


def drop_users(cfg: ScenarioConfig, rng: np.random.Generator) -> Tuple[UserTerminal, ...]:
    """Users at explicit positions or uniform random floor positions"""
    u = cfg.users
    room = cfg.room
    if u.positions is not None:
        xy = [tuple(p) for p in u.positions]
    else:
        low = np.array([u.placement_margin, u.placement_margin])
        high = np.array([room.width - u.placement_margin, room.depth - u.placement_margin])
        xy = [tuple(float(v) for v in rng.uniform(low, high)) for _ in range(u.count)]

    branches = tuple(
        ReceiverBranch(
            elevation=math.radians(b.elevation_deg),
            azimuth=math.radians(b.azimuth_deg),
            area=u.area_m2,
            fov_semi_angle=math.radians(u.fov_deg),
        )
        for b in u.branches
    )
    return tuple(
        UserTerminal(
            position=(x, y, u.height),
            branches=branches,
            responsivity=u.responsivity,
            min_rate=r_min,
        )
        for (x, y), r_min in zip(xy, u.min_rates())
    )


def build_scene(
    cfg: ScenarioConfig,
    seed: Optional[int] = None,
    blocker_count: Optional[int] = None,
    array_count: Optional[int] = None,
    power: Optional[float] = None,
) -> Scene:
    """
    Scene for one seed.

    blocker_count and array_count override the scenario values (sweeps);
    power overrides every AP's optical power.
    """
    seed = cfg.seed if seed is None else seed
    b = cfg.blockers
    count = b.count if blocker_count is None else blocker_count

    try:
        room = Room(**cfg.room.model_dump())
        aps = build_access_points(cfg, power)
        mirrors = build_mirrors(cfg, aps, room, array_count)
        users = drop_users(cfg, user_rng(seed))
        blockers = sample_blockers(
            count,
            b.hardcore_distance,
            room,
            blocker_rng(seed),
            radius=b.radius,
            height=b.height,
            avoid_xy=[u.position[:2] for u in users],
            max_proposals=b.max_proposals,
            placement=b.placement,
            near_distance=b.near_distance,
        )
        scene = Scene(
            room=room,
            access_points=aps,
            mirrors=mirrors,
            users=users,
            blockers=tuple(blockers),
            noise=NoiseModel(**cfg.noise.model_dump()),
            alignment_tolerance=math.radians(cfg.channel.alignment_tolerance_deg),
            mirror_exclusive=cfg.channel.mirror_exclusive,
        )
    except ValidationError as e:
        err = e.errors()[0]
        raise ScenarioValidationError(
            err.get('msg', str(e)),
            field=".".join(str(p) for p in err.get('loc', ())) or None,
        ) from e

    logger.debug(
        f"Scene built: seed={seed}, users={scene.num_users}, aps={scene.num_aps}, "
        f"mirrors={scene.num_mirrors}, blockers={len(scene.blockers)}"
    )
    return scene
