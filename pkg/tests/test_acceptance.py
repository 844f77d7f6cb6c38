# tests/test_acceptance.py
"""
축소 장면의 최적 탐색 비교와 번들 시나리오의 기법 순서 (느림)
"""
import time

import pytest

from src.allocators import ExhaustiveAllocator, make_allocator
from src.channel import build_channel_tables
from src.config.scenario import parse_scenario, resolve_scenario
from src.experiments import ExperimentRunner
from src.models import TrainConfig
from src.scene.layout import build_scene

AP_LAYOUTS = {
    2: [[1.25, 2.5, 3.0], [3.75, 2.5, 3.0]],
    3: [[1.0, 1.5, 3.0], [2.5, 3.5, 3.0], [4.0, 1.5, 3.0]],
}

# (aps, mirrors, user positions)
REDUCED_SCENES = [
    (2, 2, [[2.63, 4.44], [0.72, 1.83]]),
    (2, 3, [[4.24, 4.05], [4.33, 1.02]]),
    (3, 2, [[1.35, 3.65], [1.19, 4.71]]),
    (3, 4, [[0.72, 3.27], [2.56, 1.65]]),
    (2, 2, [[4.58, 0.62], [1.66, 3.09], [3.22, 2.45]]),
    (2, 4, [[1.69, 2.48], [0.78, 2.28], [2.93, 1.20]]),
    (3, 2, [[3.32, 4.35], [2.16, 1.49], [0.39, 4.46]]),
    (3, 3, [[2.65, 1.67], [3.48, 0.64], [4.55, 3.16]]),
    (2, 4, [[4.27, 1.29], [2.60, 4.34]]),
    (2, 3, [[3.63, 0.91], [1.72, 1.28], [1.73, 2.92]]),
]

TRAINING = TrainConfig(episodes=3000, epsilon_decay=0.998, epsilon_min=0.01)

MIN_EXACT_MATCHES = 8
TIME_LIMIT_S = 300.0


def reduced_scene(index: int):
    aps, mirrors, positions = REDUCED_SCENES[index]
    cfg = parse_scenario({
        'name': f"reduced_{index}",
        'seed': 100 + index,
        'access_points': [{'position': p} for p in AP_LAYOUTS[aps]],
        'mirror_arrays': [{'wall': 'y_min', 'rows': 1, 'cols': mirrors, 'center': [2.5, 1.5]}],
        'users': {'count': len(positions), 'positions': positions},
    })
    return build_scene(cfg)


@pytest.mark.slow
class TestLearnedPolicyQuality:
    """학습된 정책과 최적 할당 비교"""

    def test_matches_oracle_on_reduced_scenes(self):
        started = time.perf_counter()
        matches = {'qlearning': 0, 'sarsa': 0}

        for index in range(len(REDUCED_SCENES)):
            scene = reduced_scene(index)
            tables = build_channel_tables(scene)
            oracle = ExhaustiveAllocator().run(scene, tables)
            assert oracle.utility > 0

            for algo in matches:
                learned = make_allocator(algo, seed=index, config=TRAINING).run(scene, tables)
                assert learned.utility >= 0.95 * oracle.utility, (index, algo)
                matches[algo] += learned.allocation == oracle.allocation

        elapsed = time.perf_counter() - started
        for algo, count in matches.items():
            assert count >= MIN_EXACT_MATCHES, (algo, count)
        assert elapsed < TIME_LIMIT_S


@pytest.mark.slow
class TestSchemeOrdering:
    """번들 시나리오에서 기법 간 평균 합 전송률 비교"""

    def test_power_sweep_ordering(self):
        cfg = resolve_scenario('default_fig4')
        df = ExperimentRunner(cfg).run_power_sweep([cfg.reference_power]).to_frame()
        assert df['seed'].nunique() == 20
        mean = df.groupby('scheme')['sum_rate_bps'].mean()

        assert mean['rl_joint'] > mean['distance_based'] > mean['no_irs']
        assert mean['rl_joint'] >= 1.20 * mean['distance_based']
        assert mean['rl_joint'] >= 1.30 * mean['no_irs']

    def test_blockage_sweep_ordering(self):
        cfg = resolve_scenario('default_fig5')
        df = ExperimentRunner(cfg).run_blockage_sweep([0, 2, 3], [1, 2]).to_frame()
        assert df['seed'].nunique() == 20
        mean = df.groupby(['scheme', 'arrays', 'sweep_var'])['sum_rate_bps'].mean()

        for arrays in (1, 2):
            rl = [mean['rl_joint', arrays, b] for b in (0.0, 2.0, 3.0)]
            assert rl[0] > rl[1] > rl[2]
            for scheme in ('distance_based', 'no_irs'):
                fixed = [mean[scheme, arrays, b] for b in (0.0, 2.0, 3.0)]
                assert fixed[0] >= fixed[1] >= fixed[2]
        for b in (2.0, 3.0):
            assert mean['rl_joint', 2, b] >= 1.05 * mean['rl_joint', 1, b]
