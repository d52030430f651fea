"""
nib-planner - Main Entry Point
Command-line interface for scenario validation, staged planning, planning runs and sweeps
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv

from nib_planner import __version__
from nib_planner.callbacks.execution_tracker import get_tracker
from nib_planner.config.settings import get_log_level, get_output_dir
from nib_planner.core import SWEEP_AXES, PlanningOrchestrator, run_planning, sweep
from nib_planner.errors import ConfigError, InfeasibleError, PlannerError
from nib_planner.models.schemas import ConfigViolation, ScenarioConfig
from nib_planner.reporting import (
    load_artifacts,
    persist_run,
    persist_stage,
    persist_sweep,
    persist_users,
    write_report,
)
from nib_planner.scenario import config_hash, load_config, sample_population, with_overrides

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Staged commands and the last stage each runs
STAGED_COMMANDS = {
    'deploy': 'deployment',
    'associate': 'association',
    'optimize-beams': 'beamopt',
    'allocate': 'metrics',
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nib-planner",
        description="Deployment and resource planning of UAV-borne network-in-a-box nodes under a HAPS backhaul",
    )
    parser.add_argument("--config", help="Scenario file (JSON, or YAML by suffix)")
    parser.add_argument("--seed", type=int, help="Override the scenario seed")
    parser.add_argument("--out", help="Output directory (NIB_PLANNER_OUTPUT_DIR wins)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per sweep point")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Table format")
    parser.add_argument("--dump-channels", action="store_true", help="Also write per-link channel tables")
    parser.add_argument("--log-level", help="Logging level (default from NIB_PLANNER_LOG_LEVEL, else INFO)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("validate", help="Check a scenario file")
    commands.add_parser("generate-users", help="Draw the ground users")
    deploy = commands.add_parser("deploy", help="Disk-cover deployment at r_min")
    deploy.add_argument("--method", choices=["auto", "gdc-greedy", "gdc-exact", "gdc-lattice", "hex"])
    associate = commands.add_parser("associate", help="Deployment and user association at r_min")
    associate.add_argument("--rule", choices=["max-sinr", "nearest", "random"])
    commands.add_parser("optimize-beams", help="Through beam optimization at r_min")
    commands.add_parser("allocate", help="Full single epoch at r_min (NOMA and SCA)")
    commands.add_parser("run", help="Sequential planning over the beam-radius range")
    sweep_parser = commands.add_parser("sweep", help="Monte Carlo sweep of one parameter")
    sweep_parser.add_argument("--axis", required=True, choices=list(SWEEP_AXES))
    sweep_parser.add_argument("--values", required=True, nargs="+", type=float)
    sweep_parser.add_argument("--stop-after", metavar="STAGE", help="Last stage of each trial, e.g. deployment")
    report = commands.add_parser("report", help="Regenerate tables from saved run artifacts")
    report.add_argument("--out", default=argparse.SUPPRESS, help="Run directory to read")
    return parser


def _load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    if not args.config:
        raise ConfigError([ConfigViolation(field="--config", message="a scenario file is required")])
    config = load_config(args.config)
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.trials is not None:
        updates["monte_carlo.trials"] = args.trials
    if getattr(args, "method", None):
        updates["deployment.method"] = args.method
    if getattr(args, "rule", None):
        updates["association.rule"] = args.rule
    return with_overrides(config, **updates) if updates else config


def _print_header(title: str) -> None:
    print("=" * 80)
    print(title)
    print("=" * 80)


def _print_execution_summary() -> None:
    summary = get_tracker().get_summary()
    print("\n" + "-" * 80)
    print("EXECUTION SUMMARY")
    print("-" * 80)
    print(f"Stages: {' -> '.join(summary['executed_stages'])}")
    if summary['infeasible_epochs']:
        print(f"Infeasible epochs: {summary['infeasible_epochs']}")
    for error in summary['errors'][:10]:
        epoch = f"epoch {error['epoch']}, " if error['epoch'] is not None else ""
        print(f"  ✗ {error['stage']} ({epoch}{error['type']}): {error['message']}")


def cmd_validate(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    print(f"✓ Scenario '{config.name}' is valid (hash {config_hash(config)[:16]})")
    return 0


def cmd_generate_users(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    population = sample_population(config)
    files = persist_users(population, config, get_output_dir(args.out), args.format)
    print(f"✓ {population.size} users written ({', '.join(files)})")
    return 0


def cmd_staged(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    orchestrator = PlanningOrchestrator(config)
    state = orchestrator.run_epoch(0, config.sweep.r_min_m, stop_after=STAGED_COMMANDS[args.command])
    if not state.feasible:
        raise InfeasibleError(state.infeasibility)
    files = persist_stage(
        state, config, get_output_dir(args.out), args.command, args.format, args.dump_channels,
        nibs=orchestrator.nib_nodes(state),
    )
    print(f"✓ {args.command} at r={state.radius_m:.0f} m: {state.n_nibs} NIB(s) ({', '.join(files)})")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    _print_header(f"Planning - {config.name}")
    result = run_planning(config)
    outdir = get_output_dir(args.out)
    files = persist_run(result, outdir, args.format, args.dump_channels)
    artifacts = result.artifacts
    print(f"\nBest epoch: {artifacts.best_epoch} with R_a* = {artifacts.best_sum_rate_access_bps / 1e6:.3f} Mbps")
    print(f"NIBs: {len(artifacts.nibs)}; {len(files)} file(s) in {outdir}")
    _print_execution_summary()
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    _print_header(f"Sweep {args.axis} - {config.name}")
    result = sweep(config, args.axis, args.values, trials=args.trials, stop_after=args.stop_after)
    outdir = get_output_dir(args.out)
    files = persist_sweep(result, config, outdir, args.format)
    print(f"\n{len(result.trials)} trial(s) over {len(result.values)} point(s); {', '.join(files)} in {outdir}")
    _print_execution_summary()
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    outdir = get_output_dir(args.out)
    artifacts = load_artifacts(outdir)
    files = write_report(artifacts, outdir, args.format)
    _print_header(f"Report - {artifacts.config.name} (seed {artifacts.manifest.seed})")
    for epoch in artifacts.epochs:
        status = f"R_a={epoch.sum_rate_access_bps / 1e6:.3f} Mbps" if epoch.feasible else "infeasible"
        print(f"  epoch {epoch.iteration}: r={epoch.radius_m:.0f} m, J={epoch.n_nibs}, {status}")
    print(f"✓ {len(files)} table(s) written to {outdir}")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    'validate': cmd_validate,
    'generate-users': cmd_generate_users,
    'deploy': cmd_staged,
    'associate': cmd_staged,
    'optimize-beams': cmd_staged,
    'allocate': cmd_staged,
    'run': cmd_run,
    'sweep': cmd_sweep,
    'report': cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and map failures to exit codes"""
    load_dotenv()
    args = build_parser().parse_args(argv)
    level = get_log_level(args.log_level)
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)
    get_tracker().reset()

    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except InfeasibleError as e:
        report = e.report
        ids = f" (NIBs {report.nib_ids})" if report.nib_ids else ""
        print(f"❌ Infeasible: {e}{ids}", file=sys.stderr)
        return e.exit_code
    except PlannerError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
