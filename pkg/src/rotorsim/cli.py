# -*- coding: utf-8 -*-

"""Command line front end.

Run ``rotorsim <command> --help`` for the flags of each command::

    rotorsim trim --speed 0 --weight 16000 --alt 5250
    rotorsim sweep --speeds 0:10:160 --case heavy
    rotorsim linearize --speed 100 --output models/100kts
    rotorsim simulate --scenario_override ship.speed_kts=0
    rotorsim tables-check

Errors end the process with the exit code of their class and one line
``rotorsim: error: <Kind>: <message>`` on stderr.
"""

import configparser
import os
import sys
from typing import Dict, List, Optional, Sequence, Union

import fire
import numpy as np
import pandas as pd
from loguru import logger

from rotorsim.config import DEFAULT_VEHICLE, VehicleConfig
from rotorsim.errors import InvalidArgumentError, RotorSimError
from rotorsim.linmod import export_linear_model, linearize
from rotorsim.mission import DEFAULT_SCENARIO, ScenarioConfig, simulate_ship_landing
from rotorsim.tables import describe_tables, load_tables, tables_dir
from rotorsim.trim import FlightCondition, solve_trim, trim_sweep
from rotorsim.utils import FLOAT_FORMAT, ensure_parent, format_number, write_csv
from rotorsim.vehicle import STATE_NAMES, Vehicle
from rotorsim.version import get_version

__all__ = ["CASES", "COMMANDS", "main", "run_cli", "parse_speeds"]

# overrides on the bundled vehicle, gross weight (lbf), altitude (ft)
CASES = {
    "nominal": ((), 16000.0, 5250.0),
    "heavy": (("fuselage.gross_weight_lbf=16360",), 16360.0, 3670.0),
}

Overrides = Union[None, str, Sequence[str]]


def configure_logging(verbose: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")


def _override_list(override: Overrides) -> List[str]:
    if override is None:
        return []
    if isinstance(override, str):
        return override.split()
    return [str(item) for item in override]


def parse_speeds(speeds) -> List[float]:
    """``start:step:stop`` (stop included), a comma list or a single number."""
    if isinstance(speeds, (int, float)):
        return [float(speeds)]
    if isinstance(speeds, (list, tuple)):
        return [float(s) for s in speeds]
    text = str(speeds).strip()
    if ":" in text:
        try:
            start, step, stop = (float(part) for part in text.split(":"))
        except ValueError as exc:
            raise InvalidArgumentError(f"Speed range '{text}' is not start:step:stop") from exc
        if step <= 0.0 or stop < start:
            raise InvalidArgumentError(f"Speed range '{text}' is empty")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"Speeds '{text}' are not numbers") from exc


def _setup(verbose: bool, case: str, config: Optional[str], override: Overrides, weight, alt):
    configure_logging(verbose)
    if case not in CASES:
        raise InvalidArgumentError(f"Unknown case '{case}', expected one of {', '.join(CASES)}")
    case_overrides, case_weight, case_alt = CASES[case]
    overrides = [*case_overrides, *_override_list(override)]
    vehicle_config = VehicleConfig.from_file(config or DEFAULT_VEHICLE, overrides)
    weight = case_weight if weight is None else float(weight)
    alt = case_alt if alt is None else float(alt)
    return vehicle_config, weight, alt


def _condition(speed, weight, alt, climb, turn) -> FlightCondition:
    return FlightCondition(
        airspeed=float(speed),
        turn_rate=float(np.deg2rad(turn)),
        gross_weight=weight,
        altitude=alt,
        climb_rate_fpm=None if climb is None else float(climb),
    )


def write_manifest(path: str, command: str, arguments: Dict[str, object], config_text: str) -> str:
    """Sidecar file with the command, its arguments and the effective vehicle configuration."""
    manifest = configparser.ConfigParser(interpolation=None)
    manifest.optionxform = str
    manifest["command"] = {"name": command, "rotorsim_version": get_version(with_git_hash=True)}
    manifest["command"].update(
        {key: format_number(value) if isinstance(value, float) else str(value) for key, value in arguments.items()}
    )
    vehicle = configparser.ConfigParser(interpolation=None)
    vehicle.optionxform = str
    vehicle.read_string(config_text)
    for section in vehicle.sections():
        manifest[f"vehicle.{section}"] = dict(vehicle.items(section))
    with open(ensure_parent(path), "w", encoding="utf-8", newline="\n") as handle:
        manifest.write(handle)
    return path


def _manifest_path(output: str) -> str:
    return os.path.splitext(output)[0] + ".manifest.cfg"


def trim(
    speed: float = 0.0,
    weight: Optional[float] = None,
    alt: Optional[float] = None,
    climb: Optional[float] = None,
    turn: float = 0.0,
    output: str = "trim.csv",
    config: Optional[str] = None,
    case: str = "nominal",
    override: Overrides = None,
    verbose: bool = False,
) -> str:
    """Solve one trim point and write it as a one-row CSV.

    Args:
        speed: airspeed (kts).
        weight: gross weight (lbf); defaults to the case weight.
        alt: altitude (ft); defaults to the case altitude.
        climb: climb rate (ft/min), negative for descent.
        turn: turn rate (deg/s), positive to the right.
        output: CSV file; a ``.manifest.cfg`` sidecar is written next to it.
        config: vehicle config file; the case's bundled file when omitted.
        case: ``nominal`` (16,000 lbf at 5,250 ft) or ``heavy`` (16,360 lbf at 3,670 ft).
        override: ``section.key=value`` items, whitespace separated or a list.
        verbose: log solver iterations.
    """
    vehicle_config, weight, alt = _setup(verbose, case, config, override, weight, alt)
    condition = _condition(speed, weight, alt, climb, turn)
    result = solve_trim(condition, vehicle_config)
    row = result.summary()
    row.update({"tail_power_hp": result.tail_power_hp, "stabilator_deg": np.rad2deg(result.stabilator)})
    row.update(dict(zip(STATE_NAMES, result.state)))
    write_csv(pd.DataFrame([row]), output)
    arguments = dict(speed=float(speed), weight=weight, alt=alt, climb=climb, turn=float(turn))
    write_manifest(_manifest_path(output), "trim", arguments, vehicle_config.to_text())
    logger.info(f"Trim written to {output}")
    return output


def sweep(
    speeds="0:10:160",
    weight: Optional[float] = None,
    alt: Optional[float] = None,
    climb: Optional[float] = None,
    turn: float = 0.0,
    output: str = "sweep.csv",
    config: Optional[str] = None,
    case: str = "nominal",
    override: Overrides = None,
    verbose: bool = False,
) -> str:
    """Trim across airspeeds; failed points appear as rows of NaN.

    Args:
        speeds: ``start:step:stop`` in kts (stop included) or a comma list.
        weight: gross weight (lbf); defaults to the case weight.
        alt: altitude (ft); defaults to the case altitude.
        climb: climb rate (ft/min) applied at every forward speed.
        turn: turn rate (deg/s).
        output: CSV file; a ``.manifest.cfg`` sidecar is written next to it.
        config: vehicle config file; the case's bundled file when omitted.
        case: ``nominal`` or ``heavy``.
        override: ``section.key=value`` items, whitespace separated or a list.
        verbose: log solver iterations.
    """
    vehicle_config, weight, alt = _setup(verbose, case, config, override, weight, alt)
    values = parse_speeds(speeds)
    template = _condition(0.0, weight, alt, None, turn)
    if climb is not None:
        template = FlightCondition(
            turn_rate=template.turn_rate, gross_weight=weight, altitude=alt, climb_rate_fpm=float(climb)
        )
    frame = trim_sweep(values, template, vehicle_config)
    write_csv(frame, output)
    arguments = dict(speeds=",".join(f"{v:g}" for v in values), weight=weight, alt=alt, climb=climb, turn=float(turn))
    write_manifest(_manifest_path(output), "sweep", arguments, vehicle_config.to_text())
    logger.info(f"Sweep of {len(frame)} points written to {output}")
    return output


def linearize_command(
    speed: float = 0.0,
    weight: Optional[float] = None,
    alt: Optional[float] = None,
    climb: Optional[float] = None,
    turn: float = 0.0,
    output: str = "linear_model",
    config: Optional[str] = None,
    case: str = "nominal",
    override: Overrides = None,
    keep: Overrides = None,
    verbose: bool = False,
) -> str:
    """Trim, linearize and write ``A.csv``, ``B.csv`` and ``manifest.cfg``.

    Args:
        speed: airspeed (kts).
        weight: gross weight (lbf); defaults to the case weight.
        alt: altitude (ft); defaults to the case altitude.
        climb: climb rate (ft/min).
        turn: turn rate (deg/s).
        output: directory receiving the model files.
        config: vehicle config file; the case's bundled file when omitted.
        case: ``nominal`` or ``heavy``.
        override: ``section.key=value`` items, whitespace separated or a list.
        keep: state names to export, comma or whitespace separated; all 25 when omitted.
        verbose: log every Jacobian probe.
    """
    vehicle_config, weight, alt = _setup(verbose, case, config, override, weight, alt)
    condition = _condition(speed, weight, alt, climb, turn)
    vehicle = Vehicle(vehicle_config.with_weight(weight), altitude=alt)
    result = solve_trim(condition, vehicle=vehicle)
    model = linearize(result, vehicle)
    if keep:
        model = model.reduce(_override_list(keep.replace(",", " ") if isinstance(keep, str) else keep))
    export_linear_model(model, output, vehicle.config.to_text())
    return output


def simulate(
    scenario: str = DEFAULT_SCENARIO,
    output: str = "mission",
    config: Optional[str] = None,
    override: Overrides = None,
    scenario_override: Overrides = None,
    verbose: bool = False,
) -> str:
    """Fly the ship-landing mission and write the flight log and landing report.

    Args:
        scenario: scenario file; the bundled moving-ship landing when omitted.
        output: directory receiving ``flight_log.csv`` and ``landing_report.cfg``.
        config: vehicle config file; the scenario's choice when omitted.
        override: vehicle ``section.key=value`` items.
        scenario_override: scenario ``section.key=value`` items, e.g. ``ship.speed_kts=0``.
        verbose: log at debug level.
    """
    configure_logging(verbose)
    settings = ScenarioConfig.from_file(scenario, _override_list(scenario_override))
    vehicle_config = VehicleConfig.from_file(config) if config else None
    vehicle_config = settings.vehicle_config(vehicle_config)
    if override:
        vehicle_config = vehicle_config.with_overrides(_override_list(override))
    try:
        report = simulate_ship_landing(settings, vehicle_config)
    except RotorSimError as exc:
        log = getattr(exc, "log", None)
        if log is not None and len(log):
            path = log.write(os.path.join(output, "flight_log.csv"))
            logger.warning(f"Partial flight log written to {path}")
        raise
    log_path = report.log.write(os.path.join(output, "flight_log.csv"))
    report_path = os.path.join(output, "landing_report.cfg")
    text = configparser.ConfigParser(interpolation=None)
    text.optionxform = str
    text["landing"] = {key: format_number(value) for key, value in report.summary().items()}
    text["phases"] = {name: format_number(start) for name, start in report.phase_starts.items()}
    text["scenario"] = {
        "file": settings.source,
        "overrides": " ".join(_override_list(scenario_override)),
        "rotorsim_version": get_version(with_git_hash=True),
    }
    vehicle = configparser.ConfigParser(interpolation=None)
    vehicle.optionxform = str
    vehicle.read_string(vehicle_config.to_text())
    for section in vehicle.sections():
        text[f"vehicle.{section}"] = dict(vehicle.items(section))
    with open(ensure_parent(report_path), "w", encoding="utf-8", newline="\n") as handle:
        text.write(handle)
    logger.info(f"Flight log {log_path}, landing report {report_path}")
    return output


def tables_check(directory: Optional[str] = None, config: Optional[str] = None, verbose: bool = False) -> str:
    """Validate the lookup tables and print their grid coverage.

    Args:
        directory: table directory; ``TRAC_TABLES_DIR`` or the bundled data when omitted.
        config: vehicle config whose ``[tables]`` section names the files.
        verbose: log at debug level.
    """
    configure_logging(verbose)
    names = VehicleConfig.from_file(config).tables if config else VehicleConfig().tables
    tables = load_tables(
        names.rotor_airfoil, names.tail_airfoil, names.interference, names.stabilator, directory or tables_dir()
    )
    frame = describe_tables(tables)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n").rstrip("\n")


def version(git: bool = False) -> str:
    """Print the package version.

    Args:
        git: append the short git hash of the checkout.
    """
    return get_version(with_git_hash=git)


COMMANDS = {
    "trim": trim,
    "sweep": sweep,
    "linearize": linearize_command,
    "simulate": simulate,
    "tables-check": tables_check,
    "version": version,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatch one command and map its outcome to a process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "tables_check":
        argv[0] = "tables-check"
    try:
        fire.Fire(COMMANDS, command=argv, name="rotorsim")
    except fire.core.FireExit as exc:
        return 0 if not exc.code else 1
    except RotorSimError as exc:
        reason = " ".join(str(exc).split())
        sys.stderr.write(f"rotorsim: error: {type(exc).__name__}: {reason}\n")
        return exc.exit_code
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
