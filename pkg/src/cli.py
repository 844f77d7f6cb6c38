# src/cli.py
"""
명령행 인터페이스
validate, per-user, power-sweep, blockage-sweep, train, eval
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__
from .config import get_settings
from .config.scenario import ScenarioConfig, resolve_scenario
from .models.errors import ScenarioValidationError, SimulationError, handle_unexpected_error
from .models.training import TrainConfig
from .monitoring import MetricsCollector, export_metrics
from .rl.agents import AGENTS
from .rl.qtable import load_qtable, save_qtable
from .utils import get_logger, setup_logging
from .experiments import ExperimentRunner, export_csv, history_frame, write_history

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2


def _list_of(cast: Callable, name: str) -> Callable[[str], List]:
    def parse(text: str) -> List:
        text = text.strip()
        if not text:
            return []
        try:
            return [cast(part) for part in text.split(',')]
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name}: expected a comma-separated list, got '{text}'")
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', required=True, help="scenario TOML file or bundled name (default_fig3, ...)")
    common.add_argument('--seeds', type=_list_of(int, 'seeds'), help="comma-separated seeds")
    common.add_argument('--episodes', type=int, help="training episodes per run")
    common.add_argument('--oracle-budget', type=int, help="largest (L*M)^K the exhaustive search accepts")
    common.add_argument('--n-jobs', type=int, help="parallel workers")
    common.add_argument('--metrics-file', help="write Prometheus metrics here")
    common.add_argument('--overwrite', action='store_true', help="replace existing output files")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument('--out', help="result CSV path")

    parser = argparse.ArgumentParser(
        prog='owc-irs-sim',
        description="IRS-aided optical wireless allocation simulator",
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('validate', parents=[common], help="load and check a scenario")
    sub.add_parser('per-user', parents=[common, out], help="per-user rates of Q-learning, SARSA and the oracle")

    p = sub.add_parser('power-sweep', parents=[common, out], help="sum rate versus transmit power")
    p.add_argument('--powers', type=_list_of(float, 'powers'), help="comma-separated powers in W")
    p.add_argument('--reoptimize', action='store_true', help="re-decide the allocation at every power")

    p = sub.add_parser('blockage-sweep', parents=[common, out], help="sum rate versus blockers and mirror arrays")
    p.add_argument('--blocker-counts', type=_list_of(int, 'blocker-counts'))
    p.add_argument('--array-counts', type=_list_of(int, 'array-counts'))
    p.add_argument('--powers', type=_list_of(float, 'powers'))

    p = sub.add_parser('train', parents=[common, out], help="train one agent and save its Q-table")
    p.add_argument('--algo', required=True, choices=sorted(AGENTS))
    p.add_argument('--qtable', required=True, help="output .npy path")

    p = sub.add_parser('eval', parents=[common, out], help="evaluate a saved Q-table")
    p.add_argument('--algo', required=True, choices=sorted(AGENTS))
    p.add_argument('--qtable', required=True, help="input .npy path")
    return parser


def _train_config(cfg: ScenarioConfig, args: argparse.Namespace) -> TrainConfig:
    overrides = cfg.training_overrides()
    if args.episodes is not None:
        overrides['episodes'] = args.episodes
    return TrainConfig.from_settings(overrides=overrides)


def _runner(cfg: ScenarioConfig, args: argparse.Namespace) -> ExperimentRunner:
    if args.oracle_budget is not None and args.oracle_budget < 1:
        raise ScenarioValidationError("oracle budget must be >= 1", field='oracle_budget', value=args.oracle_budget)
    if args.n_jobs is not None and args.n_jobs < 1:
        raise ScenarioValidationError("n-jobs must be >= 1", field='n_jobs', value=args.n_jobs)
    return ExperimentRunner(
        cfg,
        seeds=args.seeds,
        train_config=_train_config(cfg, args),
        oracle_budget=args.oracle_budget,
        n_jobs=args.n_jobs,
    )


def _out_path(cfg: ScenarioConfig, args: argparse.Namespace, experiment: str) -> Path:
    return Path(args.out) if args.out else Path(f"{cfg.name}_{experiment}.csv")


def _configured_powers(cfg: ScenarioConfig, args: argparse.Namespace) -> List[float]:
    if args.powers is not None:
        return args.powers
    return list(cfg.sweep.powers_w) or [cfg.reference_power]


def cmd_validate(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    arrays = ", ".join(f"{a.wall} {a.rows}x{a.cols}" for a in cfg.mirror_arrays) or "none"
    print(f"{cfg.name}: ok")
    print(f"  seed={cfg.seed} aps={len(cfg.access_points)} users={cfg.users.count} arrays=[{arrays}]")
    print(f"  blockers={cfg.blockers.count} reference_power={cfg.reference_power} W")
    return EXIT_OK


def cmd_per_user(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    result = _runner(cfg, args).run_per_user()
    paths = export_csv(result, _out_path(cfg, args, 'per_user'), overwrite=args.overwrite)
    print(paths['csv'])
    return EXIT_OK


def cmd_power_sweep(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    result = _runner(cfg, args).run_power_sweep(_configured_powers(cfg, args), reoptimize=args.reoptimize)
    paths = export_csv(result, _out_path(cfg, args, 'power_sweep'), overwrite=args.overwrite)
    print(paths['csv'])
    return EXIT_OK


def cmd_blockage_sweep(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    blockers = args.blocker_counts if args.blocker_counts is not None else cfg.sweep.blocker_counts
    arrays = args.array_counts if args.array_counts is not None else cfg.sweep.array_counts
    result = _runner(cfg, args).run_blockage_sweep(blockers, arrays, _configured_powers(cfg, args))
    paths = export_csv(result, _out_path(cfg, args, 'blockage_sweep'), overwrite=args.overwrite)
    print(paths['csv'])
    return EXIT_OK


def cmd_train(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    runner = _runner(cfg, args)
    q, history = runner.train(args.algo)
    path = save_qtable(q, args.qtable, overwrite=args.overwrite)
    print(path)
    if args.out:
        print(write_history(history_frame(history), args.out, overwrite=args.overwrite))
    print(f"convergence={history.convergence:.6g} converged={history.converged()}")
    return EXIT_OK


def cmd_eval(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    q = load_qtable(args.qtable)
    result = _runner(cfg, args).evaluate_qtable(args.algo, q)
    paths = export_csv(result, _out_path(cfg, args, f'eval_{args.algo}'), overwrite=args.overwrite)
    print(paths['csv'])
    return EXIT_OK


COMMANDS: Dict[str, Callable[[ScenarioConfig, argparse.Namespace], int]] = {
    'validate': cmd_validate,
    'per-user': cmd_per_user,
    'power-sweep': cmd_power_sweep,
    'blockage-sweep': cmd_blockage_sweep,
    'train': cmd_train,
    'eval': cmd_eval,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)

    setup_logging()
    settings = get_settings()
    MetricsCollector.init_metrics()
    logger.debug(f"Starting {args.command} in {settings.environment} mode")

    code = EXIT_OK
    try:
        cfg = resolve_scenario(args.scenario)
        code = COMMANDS[args.command](cfg, args)
    except ScenarioValidationError as e:
        e.log_error()
        print(f"error: {e.user_message}", file=sys.stderr)
        code = EXIT_VALIDATION
    except SimulationError as e:
        e.log_error()
        MetricsCollector.record_error(e.error_code, 'cli')
        print(f"error: {e.user_message}", file=sys.stderr)
        code = EXIT_FAILURE
    except Exception as e:
        response = handle_unexpected_error(e, context={'command': args.command})
        print(f"error: {response.message}", file=sys.stderr)
        code = EXIT_FAILURE

    export_metrics(args.metrics_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
