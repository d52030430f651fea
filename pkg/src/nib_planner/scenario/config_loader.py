"""
Scenario Loader
Parses JSON/YAML scenario files into ScenarioConfig and checks cross-field invariants
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml
from pydantic import ValidationError

from nib_planner.beamopt.geometry import BEAM_FLOOR_FACTOR
from nib_planner.errors import ConfigError
from nib_planner.models.schemas import ConfigViolation, ScenarioConfig

logger = logging.getLogger(__name__)

PMF_TOLERANCE = 1e-9


def _violations_from_pydantic(exc: ValidationError) -> List[ConfigViolation]:
    violations = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error.get("loc", ())) or "<root>"
        violations.append(ConfigViolation(field=path, message=error.get("msg", "invalid")))
    return violations


def parse_config(data: Dict[str, Any]) -> ScenarioConfig:
    """
    Build a ScenarioConfig from a plain mapping and validate it

    Args:
        data: Decoded scenario document

    Returns:
        Valid ScenarioConfig

    Raises:
        ConfigError: On schema errors or invariant violations
    """
    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_violations_from_pydantic(exc)) from exc
    except KeyError as exc:
        # unknown environment preset
        raise ConfigError([ConfigViolation(field="environment.preset", message=str(exc))]) from exc

    violations = validate(config)
    if violations:
        raise ConfigError(violations)
    return config


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Load a scenario file

    Args:
        path: JSON file, or YAML when the suffix is .yaml/.yml

    Returns:
        Valid ScenarioConfig

    Raises:
        ConfigError: If the file is missing, unparsable, or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([ConfigViolation(field="<file>", message=f"cannot read {path}: {exc}")]) from exc

    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError([ConfigViolation(field="<file>", message=f"parse failure in {path}: {exc}")]) from exc

    if not isinstance(data, dict):
        raise ConfigError([ConfigViolation(field="<root>", message="scenario document must be a mapping")])

    logger.info(f"Loaded scenario '{data.get('name', path.stem)}' from {path}")
    return parse_config(data)


def validate(config: ScenarioConfig) -> List[ConfigViolation]:
    """
    Check the cross-field invariants of a scenario

    Args:
        config: Scenario to check

    Returns:
        List of violations with dotted field paths; empty when valid
    """
    violations: List[ConfigViolation] = []

    def add(field: str, message: str) -> None:
        violations.append(ConfigViolation(field=field, message=message))

    # RAT profiles
    if not config.rats:
        add("rats", "at least one RAT profile is required")
    else:
        ids = [rat.id for rat in config.rats]
        if len(set(ids)) != len(ids):
            add("rats.id", f"duplicate RAT ids in {ids}")
        total = sum(rat.demand_prob for rat in config.rats)
        if abs(total - 1.0) > PMF_TOLERANCE:
            add("rats.demand_prob", f"demand probabilities sum to {total:.12g}, expected 1")
    unknown = sorted(set(config.nib.tx_power_per_rat_w) - set(config.rat_ids()))
    if unknown:
        add("nib.tx_power_per_rat_w", f"power given for unknown RATs {unknown}")
    for rat_id, power in config.nib.tx_power_per_rat_w.items():
        if power <= 0:
            add(f"nib.tx_power_per_rat_w.{rat_id}", "power must be positive")

    # Propagation environment
    env = config.environment
    if env.eta_nlos_db < env.eta_los_db:
        add("environment.eta_nlos_db", f"eta_NLOS={env.eta_nlos_db} below eta_LOS={env.eta_los_db}")

    # HAPS
    haps = config.haps
    low, high = haps.altitude_band_m
    if low > high:
        add("haps.altitude_band_m", f"lower bound {low} above upper bound {high}")
    elif not low <= haps.altitude_m <= high:
        add("haps.altitude_m", f"altitude {haps.altitude_m} outside band [{low}, {high}]")

    # NIB bounds
    nib = config.nib
    h_min, h_max = nib.altitude_bounds_m
    if h_min <= 0:
        add("nib.altitude_bounds_m", "minimum altitude must be positive")
    if h_min > h_max:
        add("nib.altitude_bounds_m", f"H_min={h_min} above H_max={h_max}")
    if h_max >= haps.altitude_m:
        add("nib.altitude_bounds_m", f"H_max={h_max} not below HAPS altitude {haps.altitude_m}")
    t_min, t_max = nib.hpbw_bounds_deg
    if t_min > t_max:
        add("nib.hpbw_bounds_deg", f"theta_min={t_min} above theta_max={t_max}")
    if t_min <= 0 or t_max >= 90:
        add("nib.hpbw_bounds_deg", "beamwidth bounds must lie in (0, 90) degrees")

    # Beam-radius sweep
    r_min = config.sweep.r_min_m
    for rat in config.rats:
        floor = BEAM_FLOOR_FACTOR * rat.wavelength_m * h_min / nib.aperture_diameter_m
        if r_min < floor:
            add("sweep.r_min_m", f"r_min={r_min} below the {rat.id} beam-radius floor {floor:.4g}")
    if config.r_max_m > haps.coverage_radius_m:
        add("sweep.r_max_m", f"r_max={config.r_max_m} exceeds coverage radius {haps.coverage_radius_m}")
    if r_min > config.r_max_m:
        add("sweep.r_min_m", f"r_min={r_min} above r_max={config.r_max_m}")

    if violations:
        logger.debug(f"Scenario '{config.name}' has {len(violations)} violation(s)")
    return violations


def config_hash(config: ScenarioConfig) -> str:
    """SHA-256 of the canonical JSON form of a scenario"""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def with_overrides(config: ScenarioConfig, **updates: Any) -> ScenarioConfig:
    """
    Copy a scenario with dotted-path overrides, e.g. {'haps.tx_power_w': 50}

    Args:
        config: Base scenario
        updates: Mapping of dotted path (with '__' standing for '.') to new value

    Returns:
        Re-validated ScenarioConfig
    """
    data = config.model_dump(mode="json")
    for dotted, value in updates.items():
        parts = dotted.replace("__", ".").split(".")
        node = data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return parse_config(data)
