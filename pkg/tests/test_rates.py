# tests/test_rates.py
"""
간섭, SINR, 전송률, 로그 효용 테스트
"""
import math

import numpy as np
import pytest

from src.channel import (
    RATE_FACTOR,
    UNASSIGNED,
    Allocation,
    allocation_utility,
    build_channel_tables,
    interference,
    link_metrics,
    qos_satisfied,
    rate_value,
    sinr,
    sinr_value,
    user_rate,
    user_rates,
    utility_batch,
)
from src.models import (
    AccessPoint,
    Blocker,
    ContractViolationError,
    NoiseModel,
    NoiselessLinkError,
    UserTerminal,
)


def random_allocation(rng, num_users, num_aps, num_mirrors) -> Allocation:
    return Allocation(
        tuple(int(a) for a in rng.integers(0, num_aps, num_users)),
        tuple(int(m) for m in rng.integers(0, num_mirrors + 1, num_users)),
    )


class TestScalarFormulas:
    """SINR 및 전송률 식 테스트"""

    def test_zero_signal(self):
        assert sinr_value(0.0, 0.0, 1e-12) == 0.0

    def test_equal_magnitudes(self):
        assert sinr_value(2e-6, 0.0, (2e-6) ** 2) == pytest.approx(1.0)

    def test_rate_at_unit_log(self):
        assert rate_value(2 * math.pi / math.e, 20e6, 1) == pytest.approx(20e6, rel=1e-12)

    def test_rate_zero_sinr(self):
        assert rate_value(0.0, 20e6, 1) == 0.0

    def test_bandwidth_split(self):
        assert rate_value(3.0, 20e6, 2) == pytest.approx(rate_value(3.0, 20e6, 1) / 2)

    def test_rate_factor(self):
        assert RATE_FACTOR == pytest.approx(0.43263, abs=1e-5)


class TestInterference:
    """LoS 간섭 테스트"""

    def test_single_ap_no_interference(self, make_scene, down_ap):
        scene = make_scene([down_ap], [UserTerminal(position=(2.0, 2.0, 0.85))])
        tables = build_channel_tables(scene)
        assert interference(0, Allocation((0,), (0,)), tables, scene) == 0.0

    def test_one_interferer(self, small_scene):
        tables = build_channel_tables(small_scene)
        alloc = Allocation(ap_of=(0, 1), mirror_of=(2, 2))
        user = small_scene.users[0]
        expected = user.responsivity * small_scene.access_points[1].optical_power * tables.h_los[0, 1]
        assert interference(0, alloc, tables, small_scene) == pytest.approx(expected, rel=1e-12)

    def test_shared_ap_has_no_interferer(self, small_scene):
        tables = build_channel_tables(small_scene)
        alloc = Allocation(ap_of=(0, 0), mirror_of=(2, 2))
        assert interference(0, alloc, tables, small_scene) == 0.0
        assert interference(1, alloc, tables, small_scene) == 0.0

    def test_unassigned_user_does_not_interfere(self, small_scene):
        tables = build_channel_tables(small_scene)
        ap = np.array([[0, UNASSIGNED]])
        mirror = np.array([[2, 2]])
        metrics = link_metrics(small_scene, tables, ap, mirror)
        assert metrics.interference[0, 0] == 0.0
        assert metrics.rate[0, 1] == 0.0
        assert metrics.k_in[0, 0] == 1


class TestRates:
    """사용자 전송률 테스트"""

    def test_shared_ap_halves_prelog(self, small_scene):
        tables = build_channel_tables(small_scene)
        metrics = link_metrics(small_scene, tables, np.array([[0, 0]]), np.array([[2, 2]]))
        assert list(metrics.k_in[0]) == [2, 2]
        expected = 20e6 / 2 * math.log2(1 + RATE_FACTOR * metrics.sinr[0, 0])
        assert metrics.rate[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_sinr_matches_formula(self, small_scene):
        tables = build_channel_tables(small_scene)
        alloc = Allocation(ap_of=(0, 1), mirror_of=(1, 0))
        user = small_scene.users[0]
        ap = small_scene.access_points[0]
        h = tables.h_los[0, 0] + tables.h_irs[0, 1, 0]
        signal = user.responsivity * ap.optical_power * h
        i = interference(0, alloc, tables, small_scene)
        q = small_scene.noise.electron_charge
        noise = (
            2 * q * user.responsivity * ap.optical_power * h * ap.bandwidth
            + 2 * q * small_scene.noise.background_current * ap.bandwidth
            + small_scene.noise.amplifier_noise_density * ap.bandwidth
        )
        assert sinr(0, alloc, tables, small_scene) == pytest.approx(signal ** 2 / (i ** 2 + noise), rel=1e-12)

    def test_mirror_adds_rate(self, small_scene):
        tables = build_channel_tables(small_scene)
        without = user_rate(0, Allocation((1, 0), (2, 2)), tables, small_scene)
        with_mirror = user_rate(0, Allocation((1, 0), (1, 2)), tables, small_scene)
        assert with_mirror > without

    def test_power_monotone(self, small_scene):
        rng = np.random.default_rng(8)
        tables = build_channel_tables(small_scene)
        for _ in range(100):
            alloc = random_allocation(rng, 2, 2, 2)
            low = user_rates(small_scene.with_power(1.0), tables, alloc)
            high = user_rates(small_scene.with_power(2.0), tables, alloc)
            assert np.all(high >= low)

    def test_sinr_grows_with_power_across_scenes(self, make_scene, small_scene):
        rng = np.random.default_rng(31)
        for _ in range(100):
            aps = [AccessPoint(position=(*rng.uniform(0.5, 4.5, size=2), 3.0)) for _ in range(2)]
            users = [UserTerminal(position=(*rng.uniform(0.3, 4.7, size=2), 0.85)) for _ in range(3)]
            blockers = [Blocker(center_xy=tuple(rng.uniform(0.5, 4.5, size=2))) for _ in range(2)]
            scene = make_scene(aps, users, small_scene.mirrors, blockers)
            tables = build_channel_tables(scene)
            alloc = random_allocation(rng, 3, 2, 2)
            ap, mirror = alloc.as_arrays()
            power = float(rng.uniform(0.5, 5.0))
            low = link_metrics(scene.with_power(power), tables, ap, mirror).sinr
            high = link_metrics(scene.with_power(2 * power), tables, ap, mirror).sinr
            assert np.all(high >= low)

    def test_noiseless_link(self, make_scene, down_ap):
        silent = NoiseModel(amplifier_noise_density=0.0, background_current=0.0, include_signal_shot=False)
        far = UserTerminal(position=(0.1, 0.1, 2.9))
        scene = make_scene([down_ap], [far], noise=silent)
        tables = build_channel_tables(scene)
        with pytest.raises(NoiselessLinkError):
            user_rates(scene, tables, Allocation((0,), (0,)))

    def test_shape_mismatch(self, small_scene):
        tables = build_channel_tables(small_scene)
        with pytest.raises(ContractViolationError):
            link_metrics(small_scene, tables, np.array([[0]]), np.array([[0]]))


class TestUtility:
    """로그 효용 및 QoS 테스트"""

    def test_equal_rates(self):
        assert utility_batch(np.array([[5e6, 5e6, 5e6]]))[0] == pytest.approx(3 * math.log(5e6))

    def test_zero_rate_is_neg_inf(self):
        assert utility_batch(np.array([[5e6, 0.0]]))[0] == -math.inf

    def test_matches_recomputation(self, small_scene):
        rng = np.random.default_rng(12)
        tables = build_channel_tables(small_scene)
        for _ in range(20):
            alloc = random_allocation(rng, 2, 2, 2)
            rates = user_rates(small_scene, tables, alloc)
            expected = float(np.sum(np.log(rates))) if np.all(rates > 0) else -math.inf
            assert allocation_utility(alloc, small_scene, tables) == pytest.approx(expected)

    def test_invalid_allocation(self, small_scene):
        with pytest.raises(ContractViolationError):
            allocation_utility(Allocation((0, 2), (0, 0)), small_scene)

    def test_qos_threshold_inclusive(self, make_scene, down_ap):
        user = UserTerminal(position=(2.0, 2.0, 0.85))
        scene = make_scene([down_ap], [user])
        tables = build_channel_tables(scene)
        rate = user_rate(0, Allocation((0,), (0,)), tables, scene)
        at_threshold = make_scene([down_ap], [user.model_copy(update={'min_rate': rate})])
        assert bool(qos_satisfied(Allocation((0,), (0,)), at_threshold)[0])

    def test_qos_zero_minimum(self, small_scene):
        relaxed = small_scene.model_copy(
            update={'users': tuple(u.model_copy(update={'min_rate': 0.0}) for u in small_scene.users)}
        )
        assert qos_satisfied(Allocation((0, 0), (2, 2)), relaxed).all()

    def test_blocked_user_fails_qos(self, make_scene):
        ap = AccessPoint(position=(2.5, 2.5, 3.0))
        hidden = UserTerminal(position=(2.5, 2.5, 0.85))
        scene = make_scene([ap], [hidden], blockers=[Blocker(center_xy=(2.5, 2.5))])
        assert not qos_satisfied(Allocation((0,), (0,)), scene)[0]
