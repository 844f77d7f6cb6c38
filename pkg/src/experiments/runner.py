# src/experiments/runner.py
"""
실험 실행기
시드별 독립 작업을 joblib 으로 병렬 실행하고 결정적 순서로 병합
"""
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .. import __version__
from ..allocators import (
    AllocationOutcome,
    ExhaustiveAllocator,
    RL_SCHEMES,
    TwoStageAllocator,
    evaluate_allocation,
    make_allocator,
)
from ..channel.tables import build_channel_tables
from ..config import get_settings
from ..config.scenario import ScenarioConfig
from ..models.errors import OracleBudgetError, ScenarioValidationError
from ..models.results import ExperimentResult, ResultRow, join_values
from ..models.scene import Scene
from ..models.training import TrainConfig
from ..rl.agents import ALGO_INDEX, TrainingHistory, greedy_allocation, make_agent, refine_mirrors
from ..rl.environment import AllocationEnv
from ..rl.qtable import QTable
from ..scene.layout import build_scene, training_rng
from ..utils import (
    PerformanceLogger,
    clear_run_context,
    get_experiment_logger,
    get_logger,
    set_run_context,
)

logger = get_logger(__name__)

PER_USER_SCHEMES = ('qlearning', 'sarsa')
SWEEP_SCHEMES = ('rl_joint', 'distance_based', 'no_irs')


def default_seeds(cfg: ScenarioConfig) -> List[int]:
    """Scenario seed list, else `default_seed_count` seeds from the scenario seed"""
    if cfg.sweep.seeds:
        return list(cfg.sweep.seeds)
    return list(range(cfg.seed, cfg.seed + get_settings().default_seed_count))


def _episodes(scheme: str, config: TrainConfig) -> int:
    return config.episodes if scheme in RL_SCHEMES else 0


def outcome_rows(
    outcome: AllocationOutcome,
    scene: Scene,
    seed: int,
    episodes: int,
    sweep_var: float,
    arrays: int,
    per_user: bool = False,
) -> List[ResultRow]:
    """Rows for one outcome; one per user when `per_user`"""
    common = dict(
        scheme=outcome.scheme,
        sum_rate_bps=outcome.sum_rate,
        utility=outcome.utility,
        feasible=outcome.feasible,
        seed=seed,
        episodes=episodes,
        power_w=scene.access_points[0].optical_power,
        blockers=len(scene.blockers),
        arrays=arrays,
        user_rates_bps=join_values([float(r) for r in outcome.rates]),
        infeasible_users=join_values([int(k) for k in outcome.infeasible_users]),
    )
    if not per_user:
        return [ResultRow(sweep_var=sweep_var, **common)]
    return [
        ResultRow(sweep_var=float(k), user=k, rate_bps=float(rate), **common)
        for k, rate in enumerate(outcome.rates)
    ]


def reference_outcome(scene: Scene, tables, oracle_budget: Optional[int]) -> AllocationOutcome:
    """Exhaustive optimum, or two_stage when the oracle is over budget"""
    try:
        return ExhaustiveAllocator(oracle_budget=oracle_budget).run(scene, tables)
    except OracleBudgetError as e:
        logger.warning(f"Oracle over budget ({e.details.get('candidates')} candidates), using two_stage")
        return TwoStageAllocator(oracle_budget=oracle_budget).run(scene, tables)


def _array_count(cfg: ScenarioConfig, array_count: Optional[int]) -> int:
    return len(cfg.mirror_arrays) if array_count is None else array_count


def per_user_job(
    cfg: ScenarioConfig,
    seed: int,
    config: TrainConfig,
    oracle_budget: Optional[int],
    power: float,
) -> List[ResultRow]:
    """Q-learning, SARSA and the reference scheme on one user drop"""
    set_run_context(run_id=f"{cfg.name}:per-user", seed=seed)
    scene = build_scene(cfg, seed=seed, power=power)
    tables = build_channel_tables(scene)
    arrays = _array_count(cfg, None)

    rows: List[ResultRow] = []
    for scheme in PER_USER_SCHEMES:
        set_run_context(scheme=scheme)
        outcome = make_allocator(scheme, seed, config, oracle_budget=oracle_budget).run(scene, tables)
        rows += outcome_rows(outcome, scene, seed, config.episodes, 0.0, arrays, per_user=True)

    set_run_context(scheme="oracle")
    rows += outcome_rows(reference_outcome(scene, tables, oracle_budget), scene, seed, 0, 0.0, arrays, per_user=True)
    return rows


def power_sweep_job(
    cfg: ScenarioConfig,
    seed: int,
    powers: Sequence[float],
    config: TrainConfig,
    oracle_budget: Optional[int],
    reoptimize: bool,
) -> List[ResultRow]:
    """All sweep schemes on one user drop across `powers`"""
    set_run_context(run_id=f"{cfg.name}:power-sweep", seed=seed)
    scene = build_scene(cfg, seed=seed, power=cfg.reference_power)
    tables = build_channel_tables(scene)
    arrays = _array_count(cfg, None)

    rows: List[ResultRow] = []
    for scheme in SWEEP_SCHEMES:
        set_run_context(scheme=scheme)
        episodes = _episodes(scheme, config)
        if reoptimize:
            for p in powers:
                scene_p = scene.with_power(p)
                outcome = make_allocator(scheme, seed, config, oracle_budget=oracle_budget).run(scene_p, tables)
                rows += outcome_rows(outcome, scene_p, seed, episodes, p, arrays)
            continue

        decided = make_allocator(scheme, seed, config, oracle_budget=oracle_budget).run(scene, tables)
        for p in powers:
            scene_p = scene.with_power(p)
            outcome = evaluate_allocation(scene_p, decided.allocation, scheme, tables)
            rows += outcome_rows(outcome, scene_p, seed, episodes, p, arrays)
    return rows


def blockage_job(
    cfg: ScenarioConfig,
    seed: int,
    blocker_count: int,
    array_count: int,
    powers: Sequence[float],
    config: TrainConfig,
    oracle_budget: Optional[int],
) -> List[ResultRow]:
    """Sweep schemes on one (blockers, arrays, seed) scene, evaluated over `powers`"""
    set_run_context(run_id=f"{cfg.name}:blockage-sweep", seed=seed)
    scene = build_scene(
        cfg, seed=seed, blocker_count=blocker_count, array_count=array_count, power=cfg.reference_power
    )
    tables = build_channel_tables(scene)

    rows: List[ResultRow] = []
    for scheme in SWEEP_SCHEMES:
        set_run_context(scheme=scheme)
        decided = make_allocator(scheme, seed, config, oracle_budget=oracle_budget).run(scene, tables)
        for p in powers:
            scene_p = scene.with_power(p)
            outcome = evaluate_allocation(scene_p, decided.allocation, scheme, tables)
            rows += outcome_rows(outcome, scene_p, seed, _episodes(scheme, config), float(blocker_count), array_count)
    return rows


def eval_job(
    cfg: ScenarioConfig,
    seed: int,
    algo: str,
    qtable: QTable,
    oracle_budget: Optional[int],
) -> List[ResultRow]:
    """Greedy policy of a stored Q-table against the reference scheme"""
    set_run_context(run_id=f"{cfg.name}:eval", seed=seed, scheme=algo)
    scene = build_scene(cfg, seed=seed, power=cfg.reference_power)
    tables = build_channel_tables(scene)
    env = AllocationEnv(scene, tables)
    qtable.check_env(env)
    arrays = _array_count(cfg, None)

    outcome = evaluate_allocation(scene, refine_mirrors(greedy_allocation(qtable, env), env), algo, tables)
    rows = outcome_rows(outcome, scene, seed, 0, 0.0, arrays, per_user=True)
    rows += outcome_rows(reference_outcome(scene, tables, oracle_budget), scene, seed, 0, 0.0, arrays, per_user=True)
    return rows


class ExperimentRunner:
    """
    실험 실행기

    모든 실험은 (시나리오, 시드 목록)의 순수 함수이며, 작업 순서와 무관하게
    결과 행은 결정적 순서로 정렬됨
    """

    def __init__(
        self,
        cfg: ScenarioConfig,
        seeds: Optional[Sequence[int]] = None,
        train_config: Optional[TrainConfig] = None,
        oracle_budget: Optional[int] = None,
        n_jobs: Optional[int] = None,
    ):
        self.settings = get_settings()
        self.cfg = cfg
        self.seeds = list(seeds) if seeds is not None else default_seeds(cfg)
        if not self.seeds:
            raise ScenarioValidationError("at least one seed is required", field='seeds')
        self.train_config = train_config or TrainConfig.from_settings(overrides=cfg.training_overrides())
        self.oracle_budget = oracle_budget or self.settings.oracle_budget
        self.n_jobs = n_jobs or self.settings.n_jobs
        self.experiment_logger = get_experiment_logger()

    def _map(self, fn: Callable[..., List[ResultRow]], jobs: Sequence[Tuple[Any, ...]]) -> List[ResultRow]:
        """Run jobs, results in submission order"""
        if self.n_jobs == 1 or len(jobs) <= 1:
            results = [fn(*job) for job in jobs]
        else:
            results = Parallel(n_jobs=self.n_jobs)(delayed(fn)(*job) for job in jobs)
        clear_run_context()
        return [row for rows in results for row in rows]

    def metadata(self, experiment: str, **extra: Any) -> Dict[str, Any]:
        """Everything needed to reproduce a run; no timestamps"""
        meta = {
            'experiment': experiment,
            'version': __version__,
            'scenario': self.cfg.model_dump(mode='json'),
            'seeds': self.seeds,
            'train_config': self.train_config.model_dump(),
            'oracle_budget': self.oracle_budget,
        }
        meta.update(extra)
        return meta

    def _finish(self, experiment: str, sweep: str, rows: List[ResultRow], **extra: Any) -> ExperimentResult:
        result = ExperimentResult(experiment=experiment, rows=rows, metadata=self.metadata(experiment, **extra))
        for value in sorted({r.sweep_var for r in rows}):
            self.experiment_logger.log_sweep_point(
                sweep=sweep, value=value, rows=sum(1 for r in rows if r.sweep_var == value)
            )
        return result

    def run_per_user(self, power: Optional[float] = None) -> ExperimentResult:
        """Per-user rates of Q-learning, SARSA and the oracle"""
        power = power or self.cfg.reference_power
        jobs = [(self.cfg, s, self.train_config, self.oracle_budget, power) for s in self.seeds]
        with PerformanceLogger("per-user experiment", logger).add_context(seeds=len(self.seeds)):
            rows = self._map(per_user_job, jobs)
        return self._finish("per_user", "user", rows, power_w=power)

    def run_power_sweep(self, powers: Sequence[float], reoptimize: bool = False) -> ExperimentResult:
        """Sum rate of the sweep schemes over transmit powers"""
        powers = [float(p) for p in powers]
        if any(p <= 0 for p in powers):
            raise ScenarioValidationError("powers must be > 0", field='powers', value=powers)
        jobs = [] if not powers else [
            (self.cfg, s, powers, self.train_config, self.oracle_budget, reoptimize) for s in self.seeds
        ]
        with PerformanceLogger("power sweep", logger).add_context(seeds=len(self.seeds), powers=len(powers)):
            rows = self._map(power_sweep_job, jobs)
        return self._finish("power_sweep", "power_w", rows, powers_w=powers, reoptimize=reoptimize)

    def run_blockage_sweep(
        self,
        blocker_counts: Sequence[int],
        array_counts: Sequence[int],
        powers: Optional[Sequence[float]] = None,
    ) -> ExperimentResult:
        """Blocker count x mirror-array count grid, averaged over seeds"""
        powers = [float(p) for p in (powers or [self.cfg.reference_power])]
        available = len(self.cfg.mirror_arrays)
        for a in array_counts:
            if a < 1 or a > available:
                raise ScenarioValidationError(
                    f"array count {a} outside 1..{available}", field='array_counts', value=a
                )
        if any(b < 0 for b in blocker_counts):
            raise ScenarioValidationError("blocker counts must be >= 0", field='blocker_counts')

        jobs = [
            (self.cfg, s, int(b), int(a), powers, self.train_config, self.oracle_budget)
            for a in array_counts
            for b in blocker_counts
            for s in self.seeds
        ]
        with PerformanceLogger("blockage sweep", logger).add_context(jobs=len(jobs)):
            rows = self._map(blockage_job, jobs)
        return self._finish(
            "blockage_sweep",
            "blockers",
            rows,
            blocker_counts=list(blocker_counts),
            array_counts=list(array_counts),
            powers_w=powers,
        )

    def train(self, algo: str, seed: Optional[int] = None) -> Tuple[QTable, TrainingHistory]:
        """Train one agent on the scene of `seed` (first seed by default)"""
        seed = self.seeds[0] if seed is None else seed
        set_run_context(run_id=f"{self.cfg.name}:train", seed=seed, scheme=algo)
        try:
            scene = build_scene(self.cfg, seed=seed, power=self.cfg.reference_power)
            env = AllocationEnv(scene, build_channel_tables(scene))
            agent = make_agent(algo, self.train_config)
            return agent.train(env, training_rng(seed, ALGO_INDEX[algo]))
        finally:
            clear_run_context()

    def evaluate_qtable(self, algo: str, qtable: QTable) -> ExperimentResult:
        """Greedy allocation of a stored Q-table on every seed's scene"""
        jobs = [(self.cfg, s, algo, qtable, self.oracle_budget) for s in self.seeds]
        rows = self._map(eval_job, jobs)
        return self._finish("eval", "user", rows, algo=algo)


def history_frame(history: TrainingHistory) -> pd.DataFrame:
    """Per-episode training curve as a DataFrame"""
    return pd.DataFrame({
        'episode': np.arange(1, len(history) + 1),
        'return': history.returns,
        'epsilon': history.epsilons,
        'max_delta': history.max_delta,
    })
