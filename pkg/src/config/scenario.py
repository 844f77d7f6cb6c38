# src/config/scenario.py
"""
Scenario files (TOML) and their validated model

Angles in scenario files are degrees; the Scene models use radians.
"""
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union
import logging

from pydantic import BaseModel, Field, ConfigDict, ValidationError, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..models.errors import ScenarioValidationError
from ..models.scene import WALL_NORMALS

logger = logging.getLogger(__name__)

BUNDLED_SCENARIOS = ('default_fig3', 'default_fig4', 'default_fig5')


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class RoomSection(_Section):
    width: float = Field(default=5.0, gt=0)
    depth: float = Field(default=5.0, gt=0)
    height: float = Field(default=3.0, gt=0)


class APDefaults(_Section):
    half_power_semi_angle_deg: float = Field(default=60.0, gt=0, lt=90)
    optical_power_w: float = Field(default=5.0, gt=0)
    bandwidth_hz: float = Field(default=20e6, gt=0)


class APSection(_Section):
    position: Tuple[float, float, float]
    normal: Tuple[float, float, float] = (0.0, 0.0, -1.0)
    half_power_semi_angle_deg: Optional[float] = Field(default=None, gt=0, lt=90)
    optical_power_w: Optional[float] = Field(default=None, gt=0)
    bandwidth_hz: Optional[float] = Field(default=None, gt=0)


class MirrorArraySection(_Section):
    wall: str = "y_min"
    rows: int = Field(default=5, ge=1)
    cols: int = Field(default=5, ge=1)
    element_width: float = Field(default=0.25, gt=0)
    element_height: float = Field(default=0.10, gt=0)
    gap: float = Field(default=0.0, ge=0)
    reflectivity: float = Field(default=0.95, gt=0, le=1)
    # (horizontal coordinate along the wall, z) of the array center
    center: Tuple[float, float] = (2.5, 2.0)
    steering: Literal["coverage", "explicit", "flat"] = "coverage"
    angles_deg: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode='after')
    def validate_array(self) -> 'MirrorArraySection':
        if self.wall not in WALL_NORMALS:
            raise ValueError(f"wall must be one of: {', '.join(WALL_NORMALS)}")
        if self.steering == "explicit":
            if self.angles_deg is None or len(self.angles_deg) != self.rows * self.cols:
                raise ValueError("explicit steering needs one (roll, yaw) pair per element")
            if any(not (-90.0 < a < 90.0) for pair in self.angles_deg for a in pair):
                raise ValueError("explicit roll and yaw must lie strictly inside (-90, 90) degrees")
        elif self.angles_deg is not None:
            raise ValueError("angles_deg is only allowed with steering = 'explicit'")
        return self


class BranchSection(_Section):
    elevation_deg: float = 0.0
    azimuth_deg: float = 0.0


class UsersSection(_Section):
    count: int = Field(default=5, ge=1)
    positions: Optional[List[Tuple[float, float]]] = None
    height: float = Field(default=0.85, gt=0)
    placement_margin: float = Field(default=0.25, ge=0)
    min_rate_bps: Union[float, List[float]] = 1e6
    responsivity: float = Field(default=0.4, gt=0)
    area_m2: float = Field(default=20e-6, gt=0)
    fov_deg: float = Field(default=85.0, gt=0, le=90)
    branches: List[BranchSection] = Field(default_factory=lambda: [BranchSection()])

    @model_validator(mode='after')
    def validate_users(self) -> 'UsersSection':
        if self.positions is not None and len(self.positions) != self.count:
            raise ValueError(f"positions lists {len(self.positions)} users, count is {self.count}")
        if isinstance(self.min_rate_bps, list):
            if len(self.min_rate_bps) != self.count:
                raise ValueError("min_rate_bps list must have one entry per user")
            if any(r <= 0 for r in self.min_rate_bps):
                raise ValueError("min_rate_bps must be > 0")
        elif self.min_rate_bps <= 0:
            raise ValueError("min_rate_bps must be > 0")
        if not self.branches:
            raise ValueError("users need at least one receiver branch")
        return self

    def min_rates(self) -> List[float]:
        if isinstance(self.min_rate_bps, list):
            return list(self.min_rate_bps)
        return [float(self.min_rate_bps)] * self.count


class NoiseSection(_Section):
    amplifier_noise_density: float = Field(default=4e-20, ge=0)
    background_current: float = Field(default=5e-3, ge=0)
    include_signal_shot: bool = True


class BlockersSection(_Section):
    count: int = Field(default=0, ge=0)
    hardcore_distance: float = Field(default=0.3, gt=0)
    radius: float = Field(default=0.15, gt=0)
    height: float = Field(default=1.65, gt=0)
    max_proposals: int = Field(default=10_000, ge=1)
    placement: Literal["uniform", "near_users"] = "uniform"
    near_distance: float = Field(default=1.0, gt=0)

    @model_validator(mode='after')
    def validate_hardcore(self) -> 'BlockersSection':
        if self.hardcore_distance < 2 * self.radius:
            raise ValueError("hardcore_distance must be at least the blocker diameter")
        if self.placement == "near_users" and self.near_distance <= self.radius:
            raise ValueError("near_distance must exceed the blocker radius")
        return self


class ChannelSection(_Section):
    alignment_tolerance_deg: float = Field(default=10.0, ge=0, le=180)
    # The encoded RL state does not carry which mirrors are taken, so with
    # exclusivity on the learned problem is not Markov in that state; the
    # action mask still keeps every allocation valid.
    mirror_exclusive: bool = False


class TrainingSection(_Section):
    learning_rate: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    discount: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    epsilon_start: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    epsilon_min: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    epsilon_decay: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    episodes: Optional[int] = Field(default=None, ge=0)


class SweepSection(_Section):
    reference_power_w: Optional[float] = Field(default=None, gt=0)
    powers_w: List[float] = Field(default_factory=list)
    blocker_counts: List[int] = Field(default_factory=lambda: [0])
    array_counts: List[int] = Field(default_factory=lambda: [1])
    seeds: Optional[List[int]] = None

    @model_validator(mode='after')
    def validate_sweep(self) -> 'SweepSection':
        if any(p <= 0 for p in self.powers_w):
            raise ValueError("powers_w must be > 0")
        if any(c < 0 for c in self.blocker_counts):
            raise ValueError("blocker_counts must be >= 0")
        if any(c < 1 for c in self.array_counts):
            raise ValueError("array_counts must be >= 1")
        return self


class ScenarioConfig(_Section):
    """A validated scenario; `seed` is mandatory"""
    name: str = "scenario"
    seed: int = Field(..., ge=0)
    room: RoomSection = Field(default_factory=RoomSection)
    ap_defaults: APDefaults = Field(default_factory=APDefaults)
    access_points: List[APSection]
    mirror_arrays: List[MirrorArraySection] = Field(default_factory=list)
    users: UsersSection = Field(default_factory=UsersSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    blockers: BlockersSection = Field(default_factory=BlockersSection)
    channel: ChannelSection = Field(default_factory=ChannelSection)
    training: TrainingSection = Field(default_factory=TrainingSection)
    sweep: SweepSection = Field(default_factory=SweepSection)

    @model_validator(mode='after')
    def validate_placement(self) -> 'ScenarioConfig':
        room = self.room
        if not self.access_points:
            raise ValueError("at least one access point is required")
        for i, ap in enumerate(self.access_points):
            x, y, z = ap.position
            if not (0 <= x <= room.width and 0 <= y <= room.depth and 0 <= z <= room.height):
                raise ValueError(f"access_points[{i}] at {ap.position} is outside the room")

        if self.users.height >= room.height:
            raise ValueError("users.height must be below the ceiling")
        for k, (x, y) in enumerate(self.users.positions or []):
            if not (0 < x < room.width and 0 < y < room.depth):
                raise ValueError(f"users.positions[{k}] = ({x}, {y}) is outside the room")
        if self.users.positions is None:
            margin = self.users.placement_margin
            if 2 * margin >= min(room.width, room.depth):
                raise ValueError("users.placement_margin leaves no floor area")

        for a, arr in enumerate(self.mirror_arrays):
            along = room.width if arr.wall in ("y_min", "y_max") else room.depth
            half_w = (arr.cols * arr.element_width + (arr.cols - 1) * arr.gap) / 2
            half_h = (arr.rows * arr.element_height + (arr.rows - 1) * arr.gap) / 2
            h, z = arr.center
            if h - half_w < 0 or h + half_w > along or z - half_h < 0 or z + half_h > room.height:
                raise ValueError(f"mirror_arrays[{a}] does not fit on wall {arr.wall}")

        if self.blockers.height >= room.height:
            raise ValueError("blockers.height must be below the ceiling")
        if max(self.sweep.array_counts) > max(len(self.mirror_arrays), 1):
            raise ValueError("sweep.array_counts exceeds the number of mirror arrays")
        return self

    @property
    def reference_power(self) -> float:
        return self.sweep.reference_power_w or self.ap_defaults.optical_power_w

    def training_overrides(self) -> Dict[str, Any]:
        return self.training.model_dump(exclude_none=True)


def _format_validation_error(exc: ValidationError) -> ScenarioValidationError:
    err = exc.errors()[0]
    field = ".".join(str(p) for p in err.get('loc', ())) or None
    return ScenarioValidationError(err.get('msg', str(exc)), field=field, value=err.get('input'))


def parse_scenario(data: Dict[str, Any]) -> ScenarioConfig:
    """Validate an already-parsed mapping"""
    if 'seed' not in data:
        raise ScenarioValidationError("scenario has no seed", field='seed')
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise _format_validation_error(e) from e


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a TOML scenario file"""
    path = Path(path)
    try:
        with path.open('rb') as f:
            data = tomllib.load(f)
    except FileNotFoundError as e:
        raise ScenarioValidationError(f"scenario file not found: {path}", field='path', value=str(path)) from e
    except tomllib.TOMLDecodeError as e:
        raise ScenarioValidationError(f"malformed scenario file {path}: {e}", field='path', value=str(path)) from e

    config = parse_scenario(data)
    logger.debug(f"시나리오 로드됨: {path} ({config.name})")
    return config


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package"""
    if name not in BUNDLED_SCENARIOS:
        raise ScenarioValidationError(
            f"unknown bundled scenario '{name}'", field='scenario', value=name
        )
    return Path(str(resources.files('src.config') / 'scenarios' / f'{name}.toml'))


def resolve_scenario(ref: str) -> ScenarioConfig:
    """Load a scenario by file path or bundled name"""
    if ref in BUNDLED_SCENARIOS and not Path(ref).exists():
        return load_scenario(bundled_scenario_path(ref))
    return load_scenario(ref)
