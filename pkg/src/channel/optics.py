# src/channel/optics.py
"""
Lambertian LoS and mirror-reflected channel gains, receiver noise
"""
import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..models.errors import DegenerateGeometryError, ScenarioValidationError
from ..models.scene import AccessPoint, Blocker, MirrorElement, NoiseModel, ReceiverBranch, UserTerminal
from .blockage import path_clear
from .geometry import (
    angle_between,
    as_vec,
    branch_normal,
    cos_angle,
    normal_from_orientation,
    specular_reflect,
    unit,
)

DEFAULT_ALIGNMENT_TOLERANCE = math.radians(10.0)
ANGLE_SLACK = 1e-12


def lambertian_order(half_power_semi_angle: float) -> float:
    """n = -ln 2 / ln cos(phi), rounded to 12 decimals"""
    if not (0.0 < half_power_semi_angle < math.pi / 2):
        raise ScenarioValidationError(
            "half-power semi-angle must lie in (0, pi/2)",
            field='half_power_semi_angle', value=half_power_semi_angle
        )
    return round(-math.log(2.0) / math.log(math.cos(half_power_semi_angle)), 12)


def _incidence_ok(cos_incidence: float, fov: float) -> bool:
    if cos_incidence <= 0.0:
        return False
    return math.acos(min(cos_incidence, 1.0)) <= fov + ANGLE_SLACK


def los_gain(
    ap: AccessPoint,
    branch: ReceiverBranch,
    position: Sequence[float],
    blockers: Iterable[Blocker] = (),
) -> float:
    """Direct-path DC gain from an AP to one receiver branch"""
    src = as_vec(ap.position)
    rx = as_vec(position)
    d = rx - src
    dist = float(np.linalg.norm(d))
    if dist < 1e-12:
        raise DegenerateGeometryError("access point and receiver coincide", {'position': rx.tolist()})

    cos_alpha = cos_angle(d, ap.normal)
    if cos_alpha <= 0.0:
        return 0.0
    cos_delta = cos_angle(src - rx, branch_normal(branch.elevation, branch.azimuth))
    if not _incidence_ok(cos_delta, branch.fov_semi_angle):
        return 0.0
    if not path_clear(src, rx, blockers):
        return 0.0

    order = lambertian_order(ap.half_power_semi_angle)
    return (order + 1) * branch.area * cos_alpha ** order * cos_delta / (2 * math.pi * dist ** 2)


def mirror_aligned(
    ap_position: Sequence[float],
    mirror: MirrorElement,
    position: Sequence[float],
    tolerance: float,
    mirror_normal: Optional[np.ndarray] = None,
) -> bool:
    """Reflected AP ray points at the receiver within tolerance, both in front of the face"""
    c = as_vec(mirror.center)
    src = as_vec(ap_position)
    rx = as_vec(position)
    n = mirror_normal if mirror_normal is not None else normal_from_orientation(
        mirror.wall_normal, mirror.orientation
    )
    if float(np.dot(src - c, n)) <= 0.0 or float(np.dot(rx - c, n)) <= 0.0:
        return False
    reflected = specular_reflect(unit(c - src), n)
    return angle_between(reflected, rx - c) <= tolerance + ANGLE_SLACK


def irs_gain(
    ap: AccessPoint,
    mirror: MirrorElement,
    branch: ReceiverBranch,
    position: Sequence[float],
    blockers: Iterable[Blocker] = (),
    alignment_tolerance: float = DEFAULT_ALIGNMENT_TOLERANCE,
    mirror_normal: Optional[np.ndarray] = None,
) -> float:
    """Specular mirror-path DC gain from an AP via one mirror to one receiver branch"""
    blockers = tuple(blockers)
    src = as_vec(ap.position)
    c = as_vec(mirror.center)
    rx = as_vec(position)
    d_ml = float(np.linalg.norm(c - src))
    d_km = float(np.linalg.norm(rx - c))
    if d_ml < 1e-12 or d_km < 1e-12:
        raise DegenerateGeometryError(
            "mirror coincides with the access point or the receiver",
            {'mirror': c.tolist()}
        )

    cos_alpha = cos_angle(c - src, ap.normal)
    if cos_alpha <= 0.0:
        return 0.0
    cos_beta = cos_angle(c - rx, branch_normal(branch.elevation, branch.azimuth))
    if not _incidence_ok(cos_beta, branch.fov_semi_angle):
        return 0.0
    if not mirror_aligned(src, mirror, rx, alignment_tolerance, mirror_normal):
        return 0.0
    if not (path_clear(src, c, blockers) and path_clear(c, rx, blockers)):
        return 0.0

    order = lambertian_order(ap.half_power_semi_angle)
    return (
        (order + 1) * mirror.reflectivity * branch.area * mirror.area
        * cos_alpha ** order * cos_beta
        / (2 * math.pi * (d_ml + d_km) ** 2)
    )


def branch_select(
    ap: AccessPoint,
    mirror: Optional[MirrorElement],
    user: UserTerminal,
    blockers: Iterable[Blocker] = (),
    alignment_tolerance: float = DEFAULT_ALIGNMENT_TOLERANCE,
    include_los: bool = True,
) -> Tuple[float, int]:
    """
    Select-best combining over the user's branches.

    Returns (gain, branch index) where gain is the LoS gain plus, if a mirror
    is given, the mirror-path gain on the same branch. Ties go to the lowest
    index.
    """
    blockers = tuple(blockers)
    mirror_normal = (
        normal_from_orientation(mirror.wall_normal, mirror.orientation) if mirror is not None else None
    )
    gains = []
    for branch in user.branches:
        g = los_gain(ap, branch, user.position, blockers) if include_los else 0.0
        if mirror is not None:
            g += irs_gain(ap, mirror, branch, user.position, blockers, alignment_tolerance, mirror_normal)
        gains.append(g)
    best = int(np.argmax(gains))
    return float(gains[best]), best


def noise_variance(
    model: NoiseModel,
    received_optical_power: float,
    responsivity: float,
    bandwidth: float,
) -> float:
    """Total receiver noise variance (A^2)"""
    q = model.electron_charge
    shot = 2 * q * responsivity * received_optical_power * bandwidth if model.include_signal_shot else 0.0
    background = 2 * q * model.background_current * bandwidth
    amplifier = model.amplifier_noise_density * bandwidth
    return shot + background + amplifier
