# tests/test_agents.py
"""
Q-learning, SARSA 갱신식 및 학습 루프 테스트
"""
import numpy as np
import pytest

from src.allocators import ExhaustiveAllocator, make_allocator
from src.channel import Allocation, build_channel_tables, user_rates
from src.models import (
    AccessPoint,
    ContractViolationError,
    OutputExistsError,
    ScenarioValidationError,
    TrainConfig,
    UserTerminal,
)
from src.rl import (
    AllocationEnv,
    QTable,
    TrainingHistory,
    greedy_allocation,
    load_qtable,
    make_agent,
    q_learning_update,
    refine_mirrors,
    sarsa_update,
    save_qtable,
    select_action,
    train,
)


def explore_all(episodes: int) -> TrainConfig:
    """epsilon 을 1 로 고정하고 alpha = 1 로 마지막 보상을 그대로 저장"""
    return TrainConfig(
        learning_rate=1.0, epsilon_start=1.0, epsilon_min=1.0, epsilon_decay=1.0, episodes=episodes
    )


class TestUpdateRules:
    """갱신식 테스트"""

    def test_q_learning_worked_example(self):
        q = QTable(2, 2)
        q.values[1, 0] = 1.0
        q.values[1, 1] = 0.5
        assert q_learning_update(q, 0, 0, 2.0, 1, [0, 1], 0.5, 0.9) == pytest.approx(1.45)
        assert q.values[0, 0] == pytest.approx(1.45)

    def test_sarsa_worked_example(self):
        q = QTable(2, 2)
        q.values[0, 0] = 1.0
        q.values[1, 1] = 2.0
        assert sarsa_update(q, 0, 0, 0.5, 1, 1, 0.1, 0.9) == pytest.approx(1.13)

    def test_terminal_bootstraps_zero(self):
        q = QTable(2, 2)
        q.values[1, :] = 100.0
        assert q_learning_update(q, 0, 0, 2.0, None, None, 0.5, 0.9) == pytest.approx(1.0)
        assert sarsa_update(q, 0, 1, 2.0, None, None, 0.5, 0.9) == pytest.approx(1.0)

    def test_max_over_valid_next_only(self):
        q = QTable(2, 3)
        q.values[1] = [10.0, 1.0, 2.0]
        assert q_learning_update(q, 0, 0, 0.0, 1, [1, 2], 1.0, 1.0) == pytest.approx(2.0)

    def test_randomized_against_direct_formula(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            values = rng.normal(size=(3, 4))
            s, a, s2, a2 = (int(v) for v in rng.integers(0, [3, 4, 3, 4]))
            r, alpha, gamma = float(rng.normal()), float(rng.uniform(0.01, 1.0)), float(rng.uniform(0.01, 1.0))

            q = QTable(3, 4, values=values.copy())
            got = q_learning_update(q, s, a, r, s2, [0, 1, 2, 3], alpha, gamma)
            direct = values[s, a] + alpha * (r + gamma * values[s2].max() - values[s, a])
            assert got == pytest.approx(direct, rel=1e-12, abs=1e-12)

            q = QTable(3, 4, values=values.copy())
            got = sarsa_update(q, s, a, r, s2, a2, alpha, gamma)
            direct = values[s, a] + alpha * (r + gamma * values[s2, a2] - values[s, a])
            assert got == pytest.approx(direct, rel=1e-12, abs=1e-12)


class TestSelectAction:
    """epsilon-greedy 선택 테스트"""

    def test_greedy(self):
        q = QTable(1, 4)
        q.values[0] = [0.0, 3.0, 1.0, 2.0]
        assert select_action(q, 0, [0, 1, 2, 3], 0.0) == 1

    def test_ties_to_lowest_id(self):
        q = QTable(1, 4)
        assert select_action(q, 0, [2, 3], 0.0) == 2

    def test_restricted_to_valid(self):
        q = QTable(1, 4)
        q.values[0] = [9.0, 1.0, 0.0, 5.0]
        assert select_action(q, 0, [1, 2], 0.0) == 1

    def test_full_exploration_stays_valid(self):
        q = QTable(1, 4)
        rng = np.random.default_rng(1)
        picks = {select_action(q, 0, [1, 3], 1.0, rng) for _ in range(200)}
        assert picks == {1, 3}

    def test_full_exploration_is_uniform(self):
        q = QTable(1, 6)
        q.values[0] = [5.0, 0.0, 9.0, 1.0, 0.0, 3.0]
        valid = [0, 2, 3, 5]
        rng = np.random.default_rng(17)
        draws = 10_000
        counts = np.bincount([select_action(q, 0, valid, 1.0, rng) for _ in range(draws)], minlength=6)
        p = 1.0 / len(valid)
        sigma = np.sqrt(draws * p * (1 - p))
        assert counts[[1, 4]].sum() == 0
        for a in valid:
            assert abs(counts[a] - draws * p) <= 3 * sigma

    def test_no_valid_action(self):
        with pytest.raises(ContractViolationError):
            select_action(QTable(1, 2), 0, [], 0.0)

    def test_exploration_needs_rng(self):
        with pytest.raises(ContractViolationError):
            select_action(QTable(1, 2), 0, [0, 1], 0.5)


class TestTraining:
    """학습 루프 테스트"""

    def test_zero_episodes(self, small_scene):
        env = AllocationEnv(small_scene)
        q, history = train(env, 'qlearning', TrainConfig(episodes=0), np.random.default_rng(0))
        assert not q.values.any()
        assert len(history) == 0
        assert history.convergence == 0.0

    def test_single_link_stores_reward(self, make_scene, down_ap, golden_mirror):
        user = UserTerminal(position=(2.5, 2.0, 1.0))
        scene = make_scene([down_ap], [user], [golden_mirror])
        env = AllocationEnv(scene)
        assert (env.num_states, env.num_actions) == (4, 1)

        for algo in ('qlearning', 'sarsa'):
            q, _ = train(env, algo, explore_all(1), np.random.default_rng(0))
            rate = user_rates(scene, env.tables, Allocation((0,), (0,)))[0]
            assert q.values[0, 0] == pytest.approx(rate / user.min_rate)

    @pytest.mark.parametrize("algo", ["qlearning", "sarsa"])
    def test_single_user_matches_oracle(self, small_scene, algo):
        scene = small_scene.model_copy(update={'users': (small_scene.users[0],)})
        tables = build_channel_tables(scene)
        env = AllocationEnv(scene, tables)
        q, _ = train(env, algo, explore_all(200), np.random.default_rng(3))

        learned = greedy_allocation(q, env)
        oracle = ExhaustiveAllocator().run(scene, tables)
        assert env.final_utility(learned) == pytest.approx(oracle.utility)

    @pytest.mark.parametrize("algo", ["qlearning", "sarsa"])
    def test_deterministic(self, small_scene, algo):
        cfg = TrainConfig(episodes=50)
        env = AllocationEnv(small_scene)
        q1, h1 = train(env, algo, cfg, np.random.default_rng(11))
        q2, h2 = train(env, algo, cfg, np.random.default_rng(11))
        assert np.array_equal(q1.values, q2.values)
        assert np.array_equal(h1.returns, h2.returns)

    def test_epsilon_schedule(self, small_scene):
        cfg = TrainConfig(episodes=5, epsilon_start=1.0, epsilon_decay=0.5, epsilon_min=0.1)
        _, history = train(AllocationEnv(small_scene), 'sarsa', cfg, np.random.default_rng(0))
        assert list(history.epsilons) == pytest.approx([1.0, 0.5, 0.25, 0.125, 0.1])

    def test_history_returns_are_positive(self, small_scene):
        env = AllocationEnv(small_scene)
        _, history = train(env, "qlearning", TrainConfig(episodes=20), np.random.default_rng(0))
        assert len(history) == 20
        assert np.all(history.returns >= 0)
        assert history.convergence == pytest.approx(float(np.max(history.max_delta)))

    @pytest.mark.parametrize("algo", ["qlearning", "sarsa"])
    def test_reward_scale_keeps_greedy_policy(self, small_scene, algo):
        # power-of-two scales keep every update exact, so Q scales exactly
        tables = build_channel_tables(small_scene)
        cfg = TrainConfig(episodes=300)
        base_env = AllocationEnv(small_scene, tables)
        q, _ = train(base_env, algo, cfg, np.random.default_rng(5))
        for c in (0.25, 4.0):
            scaled = small_scene.model_copy(
                update={'users': tuple(u.model_copy(update={'min_rate': u.min_rate / c}) for u in small_scene.users)}
            )
            env = AllocationEnv(scaled, tables)
            q_c, _ = train(env, algo, cfg, np.random.default_rng(5))
            assert np.array_equal(q_c.values, c * q.values)
            assert greedy_allocation(q_c, env) == greedy_allocation(q, base_env)

    @pytest.mark.parametrize("algo", ["qlearning", "sarsa"])
    def test_small_scene_reaches_brute_force_optimum(self, small_scene, algo):
        tables = build_channel_tables(small_scene)
        cfg = TrainConfig(episodes=5000, epsilon_decay=0.999)
        learned = make_allocator(algo, seed=0, config=cfg).run(small_scene, tables)
        oracle = ExhaustiveAllocator().run(small_scene, tables)
        assert learned.utility == pytest.approx(oracle.utility, rel=1e-12)

    def test_table_shape_checked(self, small_scene):
        env = AllocationEnv(small_scene)
        with pytest.raises(ContractViolationError):
            make_agent('qlearning', TrainConfig(episodes=1)).train(env, np.random.default_rng(0), q=QTable(2, 2))

    def test_unknown_algorithm(self):
        with pytest.raises(ScenarioValidationError):
            make_agent('dqn', TrainConfig())

    def test_convergence_window(self):
        history = TrainingHistory(
            returns=np.zeros(4), epsilons=np.ones(4), max_delta=np.array([5.0, 0.001, 0.002, 0.0]), window=3
        )
        assert history.convergence == pytest.approx(0.002)
        assert history.converged()


class TestMirrorRefinement:
    """롤아웃 이후 미러 보정 테스트"""

    def test_swaps_in_steered_mirrors(self, small_scene):
        env = AllocationEnv(small_scene)
        rollout = Allocation(ap_of=(1, 0), mirror_of=(0, 1))
        refined = refine_mirrors(rollout, env)
        assert refined.ap_of == rollout.ap_of
        assert refined.mirror_of == (1, 0)
        assert env.final_utility(refined) > env.final_utility(rollout)

    def test_lowest_index_of_largest_gain(self, small_scene):
        env = AllocationEnv(small_scene)
        h = env.tables.h_irs
        for ap_of in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            refined = refine_mirrors(Allocation(ap_of=ap_of, mirror_of=(1, 1)), env)
            for k, (l, m) in enumerate(zip(refined.ap_of, refined.mirror_of)):
                gains = h[k, :env.num_mirrors, l]
                assert gains[m] == gains.max()
                assert m == int(np.flatnonzero(gains == gains.max())[0])

    def test_zero_gain_ties_collapse_to_mirror_zero(self, small_scene):
        env = AllocationEnv(small_scene)
        refined = refine_mirrors(Allocation(ap_of=(0, 1), mirror_of=(1, 1)), env)
        assert refined.mirror_of == (0, 0)

    def test_rates_never_drop(self, small_scene):
        env = AllocationEnv(small_scene)
        for a0 in range(env.num_actions):
            for a1 in range(env.num_actions):
                alloc = Allocation.from_actions([a0, a1], env.num_mirrors)
                before = user_rates(small_scene, env.tables, alloc)
                after = user_rates(small_scene, env.tables, refine_mirrors(alloc, env))
                assert np.all(after >= before)

    def test_exclusive_keeps_mirrors_distinct(self, small_scene):
        scene = small_scene.model_copy(update={'mirror_exclusive': True})
        env = AllocationEnv(scene)
        refined = refine_mirrors(Allocation(ap_of=(1, 0), mirror_of=(0, 1)), env)
        assert len(set(refined.mirror_of)) == 2

    def test_greedy_rollout_stays_unrefined(self, small_scene):
        env = AllocationEnv(small_scene)
        q = QTable.for_env(env)
        assert greedy_allocation(q, env) == Allocation(ap_of=(0, 0), mirror_of=(0, 0))


class TestQTablePersistence:
    """Q-table 저장 및 로드 테스트"""

    def test_round_trip_bit_exact(self, tmp_path):
        q = QTable(6, 4, values=np.random.default_rng(5).normal(size=(6, 4)))
        path = save_qtable(q, tmp_path / "q.npy")
        loaded = load_qtable(path)
        assert loaded.values.tobytes() == q.values.tobytes()

    def test_refuses_overwrite(self, tmp_path):
        path = save_qtable(QTable(2, 2), tmp_path / "q.npy")
        with pytest.raises(OutputExistsError):
            save_qtable(QTable(2, 2), path)
        save_qtable(QTable(2, 2), path, overwrite=True)

    def test_env_mismatch(self, tmp_path, small_scene):
        path = save_qtable(QTable(3, 3), tmp_path / "q.npy")
        with pytest.raises(ContractViolationError):
            load_qtable(path, AllocationEnv(small_scene))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioValidationError):
            load_qtable(tmp_path / "absent.npy")

    def test_ap_count_changes_shape(self, make_scene, golden_mirror):
        user = UserTerminal(position=(2.5, 2.0, 1.0))
        one = make_scene([AccessPoint(position=(2.5, 2.5, 3.0))], [user], [golden_mirror])
        two = make_scene(
            [AccessPoint(position=(1.0, 2.5, 3.0)), AccessPoint(position=(4.0, 2.5, 3.0))], [user], [golden_mirror]
        )
        q = QTable.for_env(AllocationEnv(one))
        with pytest.raises(ContractViolationError):
            q.check_env(AllocationEnv(two))
