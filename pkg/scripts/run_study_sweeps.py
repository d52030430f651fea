"""
Script to run the deployment, backhaul and access sweeps of the numerical study
Each sweep loads a shipped scenario and writes its trial and summary tables under outputs/study/
"""

import argparse
import logging
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from nib_planner.config.settings import get_output_dir
from nib_planner.core import sweep
from nib_planner.errors import PlannerError
from nib_planner.reporting import persist_sweep
from nib_planner.scenario import load_config

logger = logging.getLogger(__name__)

SCENARIO_DIR = project_root / "scenarios"

# (name, scenario file, axis, values, last stage per trial)
STUDIES = [
    ("deployment_vs_area", "deployment_study.json", "coverage_radius", [1000.0, 1500.0, 2000.0, 2500.0, 3000.0], "deployment"),
    ("deployment_vs_density", "deployment_study.json", "density", [2.0, 5.0, 10.0, 20.0], "deployment"),
    ("backhaul_vs_snr", "backhaul_study.json", "transmit_snr", [-10.0, 0.0, 10.0, 20.0, 30.0], None),
    ("access_vs_power", "urban.json", "tx_power", [0.0, 5.0, 10.0, 15.0], None),
    ("access_vs_antennas", "urban.json", "n_antennas", [2.0, 4.0, 8.0], None),
]


def run_study(name: str, scenario_file: str, axis: str, values, stop_after, outdir: Path, trials) -> bool:
    """Run one sweep and write its tables; returns False if it failed"""
    print(f"\n{name}: {axis} over {values}")
    try:
        config = load_config(SCENARIO_DIR / scenario_file)
        result = sweep(config, axis, values, trials=trials, stop_after=stop_after)
        files = persist_sweep(result, config, outdir / name)
    except PlannerError as e:
        print(f"  ✗ {e}")
        return False
    feasible = int(result.trials["feasible"].sum())
    print(f"  ✓ {feasible}/{len(result.trials)} feasible trial(s); {', '.join(files)}")
    return True


def main():
    """Run every study sweep"""
    parser = argparse.ArgumentParser(description="Run the study sweeps over the shipped scenarios")
    parser.add_argument("--out", help="Output root (default outputs/study)")
    parser.add_argument("--trials", type=int, help="Override the trials of every scenario")
    parser.add_argument("--only", nargs="+", help="Study names to run")
    args = parser.parse_args()

    logging.basicConfig(level=logging.WARNING, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    outdir = get_output_dir(args.out or "outputs/study")

    print("=" * 80)
    print("Study sweeps")
    print("=" * 80)
    print(f"Output directory: {outdir}")

    selected = [s for s in STUDIES if not args.only or s[0] in args.only]
    failed = [s[0] for s in selected if not run_study(*s, outdir=outdir, trials=args.trials)]

    print("\n" + "=" * 80)
    if failed:
        print(f"✗ {len(failed)} sweep(s) failed: {', '.join(failed)}")
        return 1
    print(f"✓ {len(selected)} sweep(s) written to {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
