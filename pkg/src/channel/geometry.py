# src/channel/geometry.py
"""
Vector math, mirror orientations and specular reflection

Mirror angles are relative to the mounting wall. In the wall-local frame
u_x is the inward wall normal, u_z the room z-axis and u_y = u_z x u_x; a
mirror with roll eps and yaw theta has normal
    cos(eps)cos(theta) u_x + cos(eps)sin(theta) u_y - sin(eps) u_z
so positive roll tilts the face toward the floor.
"""
import math
from typing import Sequence, Tuple

import numpy as np

from ..models.errors import (
    AmbiguousOrientationError,
    DegenerateGeometryError,
    InvalidOrientationError,
    ScenarioValidationError,
)
from ..models.scene import MirrorOrientation

EPS = 1e-12
ROOM_Z = np.array([0.0, 0.0, 1.0])


def as_vec(v: Sequence[float]) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(3)


def norm(d: Sequence[float]) -> float:
    return float(np.linalg.norm(as_vec(d)))


def unit(d: Sequence[float]) -> np.ndarray:
    """Normalize a vector; zero length is degenerate"""
    d = as_vec(d)
    length = float(np.linalg.norm(d))
    if length < EPS:
        raise DegenerateGeometryError("zero-length vector", {'vector': d.tolist()})
    return d / length


def cos_angle(d: Sequence[float], n: Sequence[float]) -> float:
    """Cosine of the angle between d and the unit vector n"""
    d = as_vec(d)
    length = float(np.linalg.norm(d))
    if length < EPS:
        raise DegenerateGeometryError("zero-length direction", {'vector': d.tolist()})
    return float(np.clip(np.dot(d, as_vec(n)) / length, -1.0, 1.0))


def angle_between(a: Sequence[float], b: Sequence[float]) -> float:
    return math.acos(cos_angle(a, unit(b)))


def wall_frame(base_wall_normal: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u_x, u_y, u_z) for a vertical wall with the given inward normal"""
    u_x = unit(base_wall_normal)
    if abs(u_x[2]) > 1e-9:
        raise ScenarioValidationError(
            "mirror walls must be vertical", field='wall_normal', value=u_x.tolist()
        )
    u_z = ROOM_Z
    u_y = np.cross(u_z, u_x)
    return u_x, u_y, u_z


def normal_from_orientation(base_wall_normal: Sequence[float], o: MirrorOrientation) -> np.ndarray:
    """Mirror normal for a roll/yaw pair"""
    u_x, u_y, u_z = wall_frame(base_wall_normal)
    ce, se = math.cos(o.roll_y), math.sin(o.roll_y)
    ct, st = math.cos(o.yaw_z), math.sin(o.yaw_z)
    n = ce * ct * u_x + ce * st * u_y - se * u_z
    n = n / np.linalg.norm(n)

    if float(np.dot(n, u_x)) < -1e-12:
        raise InvalidOrientationError(
            "normal points out of the room",
            {'roll_y': o.roll_y, 'yaw_z': o.yaw_z}
        )
    return n


def orientation_from_normal(base_wall_normal: Sequence[float], n: Sequence[float]) -> MirrorOrientation:
    """Inverse of normal_from_orientation"""
    u_x, u_y, u_z = wall_frame(base_wall_normal)
    n = unit(n)

    if float(np.dot(n, u_x)) <= EPS:
        raise InvalidOrientationError("normal points out of the room or lies in the wall plane", {'normal': n.tolist()})

    nz = float(np.dot(n, u_z))
    if abs(nz) > 1.0 - EPS:
        raise AmbiguousOrientationError(
            "normal is parallel to the yaw axis", {'normal': n.tolist()}
        )

    roll = -math.asin(nz)
    yaw = math.atan2(float(np.dot(n, u_y)), max(float(np.dot(n, u_x)), 0.0))
    return MirrorOrientation(roll_y=roll, yaw_z=yaw)


def specular_reflect(incident: Sequence[float], n: Sequence[float]) -> np.ndarray:
    """r = d - 2(d.n)n"""
    d = as_vec(incident)
    n = as_vec(n)
    return d - 2.0 * float(np.dot(d, n)) * n


def steer_normal(
    mirror_center: Sequence[float],
    ap_pos: Sequence[float],
    target: Sequence[float],
) -> np.ndarray:
    """Bisector of mirror->ap and mirror->target"""
    c = as_vec(mirror_center)
    bisector = unit(as_vec(ap_pos) - c) + unit(as_vec(target) - c)
    length = float(np.linalg.norm(bisector))
    if length < 1e-9:
        raise DegenerateGeometryError(
            "access point, mirror and target are collinear through the mirror",
            {'mirror': c.tolist(), 'ap': list(ap_pos), 'target': list(target)}
        )
    return bisector / length


def steer_mirror(
    mirror_center: Sequence[float],
    ap_pos: Sequence[float],
    target: Sequence[float],
    base_wall_normal: Sequence[float],
) -> MirrorOrientation:
    """Orientation reflecting the AP's ray from the mirror center onto the target"""
    n = steer_normal(mirror_center, ap_pos, target)
    return orientation_from_normal(base_wall_normal, n)


def branch_normal(elevation: float, azimuth: float) -> np.ndarray:
    """Photodiode normal; elevation 0 faces the ceiling"""
    se = math.sin(elevation)
    return np.array([se * math.cos(azimuth), se * math.sin(azimuth), math.cos(elevation)])
