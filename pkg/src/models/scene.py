# src/models/scene.py
"""
Scene entities using Pydantic v2

All angles are radians, lengths meters, powers watts. Every model is frozen:
a Scene is the complete immutable world description.
"""
import math
from typing import Dict, List, Tuple, Any

from pydantic import BaseModel, Field, field_validator, model_validator, ConfigDict
from scipy import constants

Vec3 = Tuple[float, float, float]

# Inward normals of the four vertical walls
WALL_NORMALS: Dict[str, Vec3] = {
    "x_min": (1.0, 0.0, 0.0),
    "x_max": (-1.0, 0.0, 0.0),
    "y_min": (0.0, 1.0, 0.0),
    "y_max": (0.0, -1.0, 0.0),
}

UNIT_TOLERANCE = 1e-9
WALL_TOLERANCE = 1e-6


def _check_unit(v: Vec3) -> Vec3:
    norm = math.sqrt(sum(c * c for c in v))
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise ValueError(f"Vector {v} is not unit length (norm {norm})")
    return v


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class Room(_Frozen):
    """Axis-aligned room with a corner at the origin"""
    width: float = Field(default=5.0, gt=0)
    depth: float = Field(default=5.0, gt=0)
    height: float = Field(default=3.0, gt=0)

    def contains(self, p: Vec3, tol: float = 1e-9) -> bool:
        """Closed containment (walls and ceiling included)"""
        x, y, z = p
        return (
            -tol <= x <= self.width + tol
            and -tol <= y <= self.depth + tol
            and -tol <= z <= self.height + tol
        )

    def strictly_contains(self, p: Vec3) -> bool:
        x, y, z = p
        return 0 < x < self.width and 0 < y < self.depth and 0 < z < self.height

    def wall_coordinate(self, wall_id: str) -> Tuple[int, float]:
        """(axis index, coordinate) of a wall plane"""
        return {
            "x_min": (0, 0.0),
            "x_max": (0, self.width),
            "y_min": (1, 0.0),
            "y_max": (1, self.depth),
        }[wall_id]


class MirrorOrientation(_Frozen):
    """Roll and yaw of a mirror relative to its mounting wall"""
    roll_y: float = Field(default=0.0, gt=-math.pi / 2, lt=math.pi / 2)
    yaw_z: float = Field(default=0.0, gt=-math.pi / 2, lt=math.pi / 2)


class ReceiverBranch(_Frozen):
    """One photodiode of an angle diversity receiver"""
    elevation: float = 0.0
    azimuth: float = 0.0
    area: float = Field(default=20e-6, gt=0)
    fov_semi_angle: float = Field(default=math.radians(85.0), gt=0, le=math.pi / 2)


class AccessPoint(_Frozen):
    """Ceiling LED access point"""
    position: Vec3
    normal: Vec3 = (0.0, 0.0, -1.0)
    half_power_semi_angle: float = Field(default=math.radians(60.0), gt=0, lt=math.pi / 2)
    optical_power: float = Field(default=5.0, gt=0)
    bandwidth: float = Field(default=20e6, gt=0)

    @field_validator('normal')
    @classmethod
    def validate_normal(cls, v: Vec3) -> Vec3:
        return _check_unit(v)


class MirrorElement(_Frozen):
    """One wall-mounted mirror of an IRS array"""
    center: Vec3
    width: float = Field(default=0.25, gt=0)
    height: float = Field(default=0.10, gt=0)
    reflectivity: float = Field(default=0.95, gt=0, le=1)
    orientation: MirrorOrientation = Field(default_factory=MirrorOrientation)
    wall_id: str = "y_min"
    array_index: int = Field(default=0, ge=0)

    @field_validator('wall_id')
    @classmethod
    def validate_wall(cls, v: str) -> str:
        if v not in WALL_NORMALS:
            raise ValueError(f"wall_id must be one of: {', '.join(WALL_NORMALS)}")
        return v

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def wall_normal(self) -> Vec3:
        return WALL_NORMALS[self.wall_id]


class UserTerminal(_Frozen):
    """Receiver with one or more branches"""
    position: Vec3
    branches: Tuple[ReceiverBranch, ...] = (ReceiverBranch(),)
    responsivity: float = Field(default=0.4, gt=0)
    min_rate: float = Field(default=1e6, ge=0)

    @field_validator('branches')
    @classmethod
    def validate_branches(cls, v: Tuple[ReceiverBranch, ...]) -> Tuple[ReceiverBranch, ...]:
        if not v:
            raise ValueError("A user needs at least one receiver branch")
        return v


class NoiseModel(_Frozen):
    """Receiver noise: preamplifier, background shot and signal shot"""
    amplifier_noise_density: float = Field(default=4e-20, ge=0)
    background_current: float = Field(default=5e-3, ge=0)
    include_signal_shot: bool = True

    @property
    def electron_charge(self) -> float:
        return constants.e


class Blocker(_Frozen):
    """Static human blocker: a vertical solid cylinder standing on the floor"""
    center_xy: Tuple[float, float]
    radius: float = Field(default=0.15, gt=0)
    height: float = Field(default=1.65, gt=0)


class Scene(_Frozen):
    """Complete world description"""
    room: Room = Field(default_factory=Room)
    access_points: Tuple[AccessPoint, ...]
    mirrors: Tuple[MirrorElement, ...] = ()
    users: Tuple[UserTerminal, ...]
    blockers: Tuple[Blocker, ...] = ()
    noise: NoiseModel = Field(default_factory=NoiseModel)
    alignment_tolerance: float = Field(default=math.radians(10.0), ge=0, le=math.pi)
    # not part of the encoded RL state, see AllocationEnv
    mirror_exclusive: bool = False

    @model_validator(mode='after')
    def validate_entities(self) -> 'Scene':
        room = self.room
        if not self.access_points:
            raise ValueError("Scene needs at least one access point")
        if not self.users:
            raise ValueError("Scene needs at least one user")

        for i, ap in enumerate(self.access_points):
            if not room.contains(ap.position):
                raise ValueError(f"access_points[{i}] at {ap.position} is outside the room")
        for k, user in enumerate(self.users):
            if not room.strictly_contains(user.position):
                raise ValueError(f"users[{k}] at {user.position} is not inside the room")
        for m, mirror in enumerate(self.mirrors):
            axis, coord = room.wall_coordinate(mirror.wall_id)
            if not room.contains(mirror.center) or abs(mirror.center[axis] - coord) > WALL_TOLERANCE:
                raise ValueError(f"mirrors[{m}] at {mirror.center} is not on wall {mirror.wall_id}")
        for b, blocker in enumerate(self.blockers):
            x, y = blocker.center_xy
            if not (0 < x < room.width and 0 < y < room.depth):
                raise ValueError(f"blockers[{b}] at {blocker.center_xy} is outside the room")
            if blocker.height >= room.height:
                raise ValueError(f"blockers[{b}] height {blocker.height} reaches the ceiling")
        return self

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def num_aps(self) -> int:
        return len(self.access_points)

    @property
    def num_mirrors(self) -> int:
        return len(self.mirrors)

    def with_power(self, optical_power: float) -> 'Scene':
        """Same scene with every AP transmitting at the given optical power"""
        aps = tuple(ap.model_copy(update={'optical_power': optical_power}) for ap in self.access_points)
        return self.model_copy(update={'access_points': aps})

    def with_blockers(self, blockers: List[Blocker]) -> 'Scene':
        return Scene.model_validate({**self._fields(), 'blockers': tuple(blockers)})

    def _fields(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in type(self).model_fields}

    def geometry_fingerprint(self) -> Dict[str, Any]:
        """Inputs that determine channel gains (no powers, bandwidths, noise or QoS)"""
        return {
            'room': self.room.model_dump(),
            'aps': [
                [ap.position, ap.normal, ap.half_power_semi_angle]
                for ap in self.access_points
            ],
            'mirrors': [m.model_dump() for m in self.mirrors],
            'users': [
                [u.position, [b.model_dump() for b in u.branches]]
                for u in self.users
            ],
            'blockers': [b.model_dump() for b in self.blockers],
            'alignment_tolerance': self.alignment_tolerance,
        }
