# tests/test_optics.py
"""
채널 이득, 잡음, 채널 테이블 테스트

기준값은 verify_channel_golden.py 의 독립 계산과 일치해야 함
"""
import math

import numpy as np
import pytest

from src.cache import get_cache_manager
from src.channel import (
    branch_select,
    build_channel_tables,
    compute_channel_tables,
    irs_gain,
    lambertian_order,
    los_gain,
    noise_variance,
)
from src.models import (
    AccessPoint,
    Blocker,
    DegenerateGeometryError,
    MirrorElement,
    MirrorOrientation,
    NoiseModel,
    ReceiverBranch,
    ScenarioValidationError,
    UserTerminal,
)

LOS_GOLDEN = 1.5915e-6
IRS_GOLDEN = 7.6166e-10


class TestLambertianOrder:
    """람버시안 차수 테스트"""

    def test_sixty_degrees_is_one(self):
        assert lambertian_order(math.radians(60.0)) == 1.0

    def test_forty_five_degrees(self):
        assert lambertian_order(math.radians(45.0)) == 2.0

    @pytest.mark.parametrize('angle', [0.0, math.pi / 2, -0.1])
    def test_out_of_range(self, angle):
        with pytest.raises(ScenarioValidationError):
            lambertian_order(angle)


class TestLosGain:
    """LoS 이득 테스트"""

    def test_on_axis_golden(self, down_ap, up_branch):
        h = los_gain(down_ap, up_branch, (2.5, 2.5, 1.0))
        assert h == pytest.approx(LOS_GOLDEN, abs=1e-10)
        assert h == pytest.approx(2 * 20e-6 / (2 * math.pi * 4), rel=1e-12)

    def test_outside_fov(self, down_ap):
        narrow = ReceiverBranch(fov_semi_angle=math.radians(10.0))
        assert los_gain(down_ap, narrow, (4.5, 2.5, 1.0)) == 0.0

    def test_blocker_on_path(self, down_ap, up_branch):
        blocker = Blocker(center_xy=(2.5, 2.5))
        assert los_gain(down_ap, up_branch, (2.5, 2.5, 1.0), [blocker]) == 0.0

    def test_behind_emitter(self, up_branch):
        up_ap = AccessPoint(position=(2.5, 2.5, 1.5), normal=(0.0, 0.0, 1.0))
        assert los_gain(up_ap, up_branch, (2.5, 2.5, 1.0)) == 0.0

    def test_coincident(self, down_ap, up_branch):
        with pytest.raises(DegenerateGeometryError):
            los_gain(down_ap, up_branch, down_ap.position)

    def test_decreases_with_distance(self, down_ap, up_branch):
        gains = [los_gain(down_ap, up_branch, (2.5, 2.5, z)) for z in (2.0, 1.5, 1.0, 0.5)]
        assert all(a > b for a, b in zip(gains, gains[1:]))


class TestIrsGain:
    """미러 경로 이득 테스트"""

    def test_worked_case_golden(self, down_ap, up_branch, golden_mirror):
        h = irs_gain(down_ap, golden_mirror, up_branch, (2.5, 2.0, 1.0))
        assert h == pytest.approx(IRS_GOLDEN, abs=1e-13)

    def test_mirror_turned_away(self, down_ap, up_branch):
        mirror = MirrorElement(center=(2.5, 0.0, 1.5), orientation=MirrorOrientation(yaw_z=1.5))
        assert irs_gain(down_ap, mirror, up_branch, (2.5, 2.0, 1.0)) == 0.0

    def test_incidence_outside_fov(self, down_ap, golden_mirror):
        narrow = ReceiverBranch(fov_semi_angle=math.radians(60.0))
        # incidence at the receiver is about 76 degrees
        assert irs_gain(down_ap, golden_mirror, narrow, (2.5, 2.0, 1.0)) == 0.0

    def test_blocked_second_leg(self, down_ap, up_branch, golden_mirror):
        blocker = Blocker(center_xy=(2.5, 1.0))
        assert irs_gain(down_ap, golden_mirror, up_branch, (2.5, 2.0, 1.0), [blocker]) == 0.0

    def test_tolerance_widens_gate(self, down_ap, up_branch, steered):
        # steered at a point 0.3 m beside the receiver
        mirror = steered((2.5, 0.0, 1.5), down_ap.position, (2.8, 2.0, 1.0))
        strict = irs_gain(down_ap, mirror, up_branch, (2.5, 2.0, 1.0), alignment_tolerance=math.radians(1.0))
        loose = irs_gain(down_ap, mirror, up_branch, (2.5, 2.0, 1.0), alignment_tolerance=math.radians(20.0))
        assert strict == 0.0
        assert loose > 0.0


class TestBranchSelect:
    """다중 수광부 선택 테스트"""

    def test_single_branch_equals_los(self, down_ap, up_branch):
        user = UserTerminal(position=(2.0, 2.0, 0.85))
        gain, idx = branch_select(down_ap, None, user)
        assert idx == 0
        assert gain == los_gain(down_ap, up_branch, user.position)

    def test_in_fov_branch_wins(self, down_ap):
        sideways = ReceiverBranch(elevation=math.pi / 2, fov_semi_angle=math.radians(30.0))
        user = UserTerminal(position=(2.5, 2.5, 1.0), branches=(sideways, ReceiverBranch()))
        gain, idx = branch_select(down_ap, None, user)
        assert idx == 1
        assert gain > 0

    def test_adding_branch_never_decreases(self, down_ap):
        rng = np.random.default_rng(3)
        for _ in range(100):
            position = (rng.uniform(0.3, 4.7), rng.uniform(0.3, 4.7), 0.85)
            first = ReceiverBranch(elevation=rng.uniform(0, 1.2), azimuth=rng.uniform(-3, 3))
            extra = ReceiverBranch(elevation=rng.uniform(0, 1.2), azimuth=rng.uniform(-3, 3))
            one, _ = branch_select(down_ap, None, UserTerminal(position=position, branches=(first,)))
            two, _ = branch_select(down_ap, None, UserTerminal(position=position, branches=(first, extra)))
            assert two >= one


class TestNoise:
    """수신 잡음 테스트"""

    def test_all_zero(self):
        model = NoiseModel(amplifier_noise_density=0.0, background_current=0.0, include_signal_shot=False)
        assert noise_variance(model, 1e-6, 0.4, 20e6) == 0.0

    def test_linear_in_bandwidth(self):
        model = NoiseModel()
        assert noise_variance(model, 1e-6, 0.4, 40e6) == pytest.approx(2 * noise_variance(model, 1e-6, 0.4, 20e6))

    def test_default_value(self):
        q = 1.602176634e-19
        expected = 2 * q * 0.4 * 1e-6 * 20e6 + 2 * q * 5e-3 * 20e6 + 4e-20 * 20e6
        assert noise_variance(NoiseModel(), 1e-6, 0.4, 20e6) == pytest.approx(expected, rel=1e-12)


class TestChannelTables:
    """채널 테이블 테스트"""

    def test_single_link_tables(self, make_scene, down_ap, golden_mirror, up_branch):
        user = UserTerminal(position=(2.5, 2.0, 1.0))
        scene = make_scene([down_ap], [user], [golden_mirror])
        tables = compute_channel_tables(scene)
        assert tables.h_los.shape == (1, 1)
        assert tables.h_irs.shape == (1, 2, 1)
        assert tables.h_los[0, 0] == los_gain(down_ap, up_branch, user.position)
        assert tables.h_irs[0, 0, 0] == pytest.approx(IRS_GOLDEN, abs=1e-13)
        assert tables.h_irs[0, tables.null_mirror, 0] == 0.0

    def test_tables_are_read_only(self, small_scene):
        tables = compute_channel_tables(small_scene)
        with pytest.raises(ValueError):
            tables.h_los[0, 0] = 1.0

    def test_blockers_only_remove_gain(self, small_scene):
        blocked = small_scene.with_blockers([Blocker(center_xy=(2.0, 1.2)), Blocker(center_xy=(3.2, 0.6))])
        clear = compute_channel_tables(small_scene)
        less = compute_channel_tables(blocked)
        assert np.all(less.h_los <= clear.h_los)
        assert np.all(less.h_irs <= clear.h_irs)

    def test_entries_match_link_functions(self, small_scene):
        tables = compute_channel_tables(small_scene)
        for k, user in enumerate(small_scene.users):
            for l, ap in enumerate(small_scene.access_points):
                assert tables.h_los[k, l] == branch_select(ap, None, user)[0]
                for m, mirror in enumerate(small_scene.mirrors):
                    gain, _ = branch_select(ap, mirror, user, include_los=False)
                    assert tables.h_irs[k, m, l] == pytest.approx(gain, rel=1e-12, abs=0.0)

    def test_steered_mirrors_give_gain(self, small_scene):
        tables = compute_channel_tables(small_scene)
        assert tables.h_irs[1, 0, 0] > 0
        assert tables.h_irs[0, 1, 1] > 0

    def test_cached_per_geometry(self, small_scene):
        first = build_channel_tables(small_scene)
        again = build_channel_tables(small_scene.with_power(1.0))
        assert again is first
        stats = get_cache_manager().get_stats()
        assert stats['hits'] == 1
        assert stats['misses'] == 1

    def test_blockers_change_cache_key(self, small_scene):
        first = build_channel_tables(small_scene)
        other = build_channel_tables(small_scene.with_blockers([Blocker(center_xy=(1.0, 4.0))]))
        assert other is not first
