# tests/conftest.py
"""
pytest 설정 및 공통 fixture
"""
import math
import os
import sys

import pytest

# 환경 변수 설정
os.environ['OWC_ENV'] = 'testing'
os.environ['OWC_LOG_LEVEL'] = 'ERROR'  # 테스트 중 로그 최소화
os.environ.pop('OWC_METRICS_FILE', None)

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.channel.geometry import steer_mirror  # noqa: E402
from src.models.scene import (  # noqa: E402
    AccessPoint,
    MirrorElement,
    ReceiverBranch,
    Scene,
    UserTerminal,
    WALL_NORMALS,
)

TINY_SCENARIO = """
name = "tiny"
seed = 7

[[access_points]]
position = [1.25, 2.5, 3.0]

[[access_points]]
position = [3.75, 2.5, 3.0]

[[mirror_arrays]]
wall = "y_min"
rows = 1
cols = 2
center = [2.5, 1.5]
steering = "coverage"

[users]
count = 2
positions = [[1.5, 1.0], [3.5, 1.0]]

[blockers]
count = 0
hardcore_distance = 0.5

[training]
episodes = 60

[sweep]
reference_power_w = 5.0
powers_w = [1.0, 2.0, 5.0]
blocker_counts = [0, 1]
array_counts = [1]
seeds = [1, 2]
"""


@pytest.fixture(autouse=True)
def reset_singletons():
    """싱글톤 리셋"""
    from src.config.settings import get_settings
    get_settings.cache_clear()

    from src.cache.manager import reset_cache_manager
    reset_cache_manager()

    import src.utils.logging as logging_module
    logging_module._experiment_logger = None
    logging_module.clear_run_context()
    yield
    get_settings.cache_clear()


def steered_mirror(center, ap_position, target, wall_id="y_min", **kwargs) -> MirrorElement:
    """중심에서 AP 광선을 target 으로 반사하도록 조정된 미러"""
    orientation = steer_mirror(center, ap_position, target, WALL_NORMALS[wall_id])
    return MirrorElement(center=center, orientation=orientation, wall_id=wall_id, **kwargs)


@pytest.fixture
def make_scene():
    """Scene 팩토리"""
    def factory(aps, users, mirrors=(), blockers=(), **kwargs) -> Scene:
        return Scene(
            access_points=tuple(aps),
            users=tuple(users),
            mirrors=tuple(mirrors),
            blockers=tuple(blockers),
            **kwargs,
        )
    return factory


@pytest.fixture
def down_ap():
    """천장 중앙에서 아래를 향하는 AP"""
    return AccessPoint(position=(2.5, 2.5, 3.0))


@pytest.fixture
def up_branch():
    """위를 향하는 단일 수광부"""
    return ReceiverBranch()


@pytest.fixture
def golden_mirror():
    """(2.5, 0, 1.5) 미러, AP (2.5, 2.5, 3) 에서 사용자 (2.5, 2, 1) 로 조정"""
    return steered_mirror((2.5, 0.0, 1.5), (2.5, 2.5, 3.0), (2.5, 2.0, 1.0))


@pytest.fixture
def small_scene(make_scene):
    """K=2, L=2, M=2: 각 미러가 반대편 AP 에서 사용자에게 조정됨"""
    aps = [AccessPoint(position=(1.25, 2.5, 3.0)), AccessPoint(position=(3.75, 2.5, 3.0))]
    users = [UserTerminal(position=(1.5, 1.0, 0.85)), UserTerminal(position=(3.5, 1.0, 0.85))]
    mirrors = [
        steered_mirror((2.0, 0.0, 1.5), aps[0].position, users[1].position),
        steered_mirror((3.0, 0.0, 1.5), aps[1].position, users[0].position),
    ]
    return make_scene(aps, users, mirrors)


@pytest.fixture
def myopia_scene(make_scene):
    """
    LoS 가 모두 막힌 사용자 (벽을 향한 수평 수광부).
    AP1 에서 조정된 미러로만 도달 가능
    """
    aps = [AccessPoint(position=(1.0, 4.0, 3.0)), AccessPoint(position=(4.0, 2.5, 3.0))]
    wall_facing = ReceiverBranch(
        elevation=math.pi / 2, azimuth=-math.pi / 2, fov_semi_angle=math.radians(60.0)
    )
    user = UserTerminal(position=(2.5, 1.0, 0.85), branches=(wall_facing,))
    mirror = steered_mirror((2.5, 0.0, 1.5), aps[1].position, user.position)
    return make_scene(aps, [user], [mirror])


@pytest.fixture
def tiny_scenario_path(tmp_path):
    """작은 시나리오 TOML 파일"""
    path = tmp_path / "tiny.toml"
    path.write_text(TINY_SCENARIO, encoding='utf-8')
    return path


@pytest.fixture
def tiny_scenario(tiny_scenario_path):
    from src.config.scenario import load_scenario
    return load_scenario(tiny_scenario_path)


@pytest.fixture
def steered():
    """steered_mirror 헬퍼"""
    return steered_mirror
