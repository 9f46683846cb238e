# -*- coding: utf-8 -*-

"""Closed-loop autonomous flight and the ship-landing scenario.

A mission is flown as five phases: initial descent, steady forward flight,
steady coordinated turn, deceleration and final landing. Each phase owns a
trim point, a linear model augmented with earth position, an LQR gain and a
reference generator. Four outputs are tracked in every phase: the position
error along and across the reference heading, the height error and the
heading error. The reference of each phase starts where the previous one
ended, so references are continuous across switches.

Positions are metres in north-east-down axes; the vehicle state stays in
feet. The conversion happens in :func:`update_position` and in the
controller's deviation vector.
"""

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from more_itertools import chunked
from tqdm import tqdm

from rotorsim.config import (
    DATA_DIR,
    DEFAULT_VEHICLE,
    VehicleConfig,
    _key,
    parse_overrides,
    read_sections,
    section_from_mapping,
    section_to_mapping,
)
from rotorsim.errors import (
    ConfigError,
    DivergenceError,
    InvalidArgumentError,
    MissionFailure,
    RotorSimError,
)
from rotorsim.frames import FT_TO_M, KTS_TO_FTS, EulerAngles, euler_to_dcm
from rotorsim.linmod import LinearModel, augment_position, linearize
from rotorsim.lqr import ControlCommand, GainSet, control_law, design_gains, selection_matrix, steady_state_targets
from rotorsim.trim import FlightCondition, TrimResult, solve_trim
from rotorsim.utils import write_csv
from rotorsim.vehicle import CONTROL_NAMES, N_STATES, SOURCES, STATE_NAMES, ControlVector, Vehicle

__all__ = [
    "PHASES",
    "DEFAULT_SCENARIO",
    "MAX_DT",
    "StartConfig",
    "ShipConfig",
    "SimulationConfig",
    "PhaseConfig",
    "ScenarioConfig",
    "ShipState",
    "Reference",
    "StraightReference",
    "TurnReference",
    "DecelerationReference",
    "LandingReference",
    "MissionPlant",
    "VehiclePlant",
    "PhaseController",
    "FlightLog",
    "MissionReport",
    "integrate_step",
    "update_position",
    "slew_limit",
    "wrap_angle",
    "heading_rotation",
    "landing_error",
    "phase_condition",
    "prepare_controllers",
    "run_mission",
    "simulate_ship_landing",
]

PHASES = ("descent", "forward", "turn", "decel", "landing")
DEFAULT_SCENARIO = os.path.join(DATA_DIR, "ship_landing.cfg")
MAX_DT = 0.05
KTS_TO_MS = KTS_TO_FTS * FT_TO_M
FPM_TO_MS = FT_TO_M / 60.0


# configuration


@dataclass(frozen=True)
class StartConfig:
    north: float = _key("north_m", 0.0)
    east: float = _key("east_m", 0.0)
    down: float = _key("down_m", -60.96)
    speed_kts: float = _key("speed_kts", 30.0)
    heading: float = _key("heading_deg", 0.0, "deg")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.north, self.east, self.down])


@dataclass(frozen=True)
class ShipConfig:
    north: float = _key("north_m", 679.7285)
    east: float = _key("east_m", -88.0)
    down: float = _key("down_m", -5.0)
    speed_kts: float = _key("speed_kts", 10.0)
    heading: float = _key("heading_deg", 0.0, "deg")
    landing_radius: float = _key("landing_radius_m", 3.0)
    gear_offset: float = _key("gear_offset_m", 0.4826)

    def __post_init__(self):
        if self.speed_kts < 0.0 or self.landing_radius <= 0.0 or self.gear_offset < 0.0:
            raise ConfigError("[ship] speed, landing radius and gear offset must be non-negative")


@dataclass(frozen=True)
class SimulationConfig:
    dt: float = _key("dt_s", 0.005)
    control_rate: float = _key("control_rate_hz", 50.0)
    slew_limit: float = _key("slew_limit_pct_s", 10.0)
    max_time: float = _key("max_time_s", 300.0)
    touchdown_sink: float = _key("touchdown_sink_m_s", 1.0)
    gross_weight: float = _key("gross_weight_lbf", 16000.0)
    altitude: float = _key("altitude_ft", 0.0)
    vehicle: str = _key("vehicle", "")
    vehicle_overrides: str = _key("vehicle_overrides", "")

    def __post_init__(self):
        if not 0.0 < self.dt <= MAX_DT:
            raise ConfigError(f"[simulation] dt_s must lie in (0, {MAX_DT}], got {self.dt}")
        if self.control_rate <= 0.0 or self.slew_limit <= 0.0:
            raise ConfigError("[simulation] control rate and slew limit must be positive")
        if self.substeps < 1:
            raise ConfigError("[simulation] the control period must span at least one physics step")

    @property
    def control_period(self) -> float:
        return self.substeps * self.dt

    @property
    def substeps(self) -> int:
        return int(round(1.0 / (self.control_rate * self.dt)))

    @property
    def overrides(self) -> List[str]:
        return self.vehicle_overrides.split()


@dataclass(frozen=True)
class PhaseConfig:
    """Settings of one phase. Keys a phase does not use are ignored by it."""

    speed_kts: float = _key("speed_kts", -1.0)
    climb_rate_fpm: float = _key("climb_rate_fpm", 0.0)
    turn_rate: float = _key("turn_rate_deg_s", 0.0, "deg")
    target_down: float = _key("target_down_m", -25.0)
    lead_distance: float = _key("lead_distance_m", 460.0)
    heading_change: float = _key("heading_change_deg", 0.0, "deg")
    duration: float = _key("duration_s", 80.0)
    hover_height: float = _key("hover_height_m", 15.0)
    hold: float = _key("hold_s", 0.0)
    sink_rate: float = _key("sink_rate_m_s", 0.5)
    timeout: float = _key("timeout_s", 120.0)
    outputs: str = _key("outputs", "north,east,down,psi")
    offsets: str = _key("offsets", "0,0,0,0")
    q_weights: str = _key("q_weights", "")
    r_weights: str = _key("r_weights", "1,1,1,1")

    @property
    def tracked(self) -> Tuple[str, ...]:
        names = tuple(name.strip() for name in self.outputs.split(",") if name.strip())
        if len(names) != len(CONTROL_NAMES):
            raise ConfigError(f"Exactly {len(CONTROL_NAMES)} tracked outputs are needed, got {names}")
        return names

    @property
    def output_offsets(self) -> np.ndarray:
        return np.array([float(v) for v in self.offsets.split(",")])

    @property
    def state_weights(self) -> Dict[str, float]:
        weights = {}
        for item in filter(None, (part.strip() for part in self.q_weights.split(","))):
            name, _, value = item.partition(":")
            weights[name.strip()] = float(value)
        return weights

    @property
    def control_weights(self) -> List[float]:
        return [float(v) for v in self.r_weights.split(",")]


_PHASE_DEFAULTS = {
    "descent": dict(speed_kts=30.0, climb_rate_fpm=-500.0, timeout=60.0),
    "forward": dict(speed_kts=30.0, timeout=60.0),
    "turn": dict(
        speed_kts=30.0,
        turn_rate=float(np.deg2rad(-3.0)),
        heading_change=float(np.deg2rad(-15.0)),
        timeout=30.0,
    ),
    "decel": dict(speed_kts=20.0, timeout=100.0),
    "landing": dict(hold=10.0, timeout=80.0),
}

_SCENARIO_SECTIONS = {
    "helicopter": StartConfig,
    "ship": ShipConfig,
    "simulation": SimulationConfig,
    **{phase: PhaseConfig for phase in PHASES},
}


@dataclass(frozen=True)
class ScenarioConfig:
    helicopter: StartConfig = field(default_factory=StartConfig)
    ship: ShipConfig = field(default_factory=ShipConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    phases: Dict[str, PhaseConfig] = field(
        default_factory=lambda: {phase: PhaseConfig(**_PHASE_DEFAULTS[phase]) for phase in PHASES}
    )
    source: str = "defaults"

    @classmethod
    def from_file(cls, path: str = DEFAULT_SCENARIO, overrides: Optional[Sequence[str]] = None) -> "ScenarioConfig":
        parser = read_sections(path)
        for (section, key), value in parse_overrides(overrides).items():
            if section not in _SCENARIO_SECTIONS:
                raise ConfigError(f"Override names unknown scenario section '{section}'")
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, key, value)
        unknown = sorted(set(parser.sections()) - set(_SCENARIO_SECTIONS))
        if unknown:
            raise ConfigError(f"{path}: unknown sections {', '.join(unknown)}")
        parts = {}
        for section, cls_ in _SCENARIO_SECTIONS.items():
            mapping = dict(parser.items(section)) if parser.has_section(section) else {}
            if section in _PHASE_DEFAULTS:
                mapping = {**section_to_mapping(PhaseConfig(**_PHASE_DEFAULTS[section])), **mapping}
            parts[section] = section_from_mapping(cls_, mapping, section)
        logger.debug(f"Loaded scenario from {path}")
        return cls(
            helicopter=parts["helicopter"],
            ship=parts["ship"],
            simulation=parts["simulation"],
            phases={phase: parts[phase] for phase in PHASES},
            source=path,
        )

    def vehicle_config(self, config: Optional[VehicleConfig] = None) -> VehicleConfig:
        """Vehicle configuration with the scenario's overrides applied."""
        if config is None:
            path = self.simulation.vehicle or DEFAULT_VEHICLE
            if not os.path.isabs(path) and not os.path.isfile(path):
                path = os.path.join(DATA_DIR, path)
            return VehicleConfig.from_file(path, self.simulation.overrides)
        return config.with_overrides(self.simulation.overrides) if self.simulation.overrides else config


# geometry


def wrap_angle(angle):
    """Wrap to [-pi, pi)."""
    return (np.asarray(angle) + np.pi) % (2.0 * np.pi) - np.pi


def heading_rotation(heading: float) -> np.ndarray:
    """Earth-to-path rotation about the down axis."""
    c, s = np.cos(heading), np.sin(heading)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def update_position(
    position, attitude: EulerAngles, body_velocity, dt: float, next_attitude=None, next_velocity=None
) -> np.ndarray:
    """Advance the earth position (m) with the body velocity (ft/s) over ``dt`` seconds.

    With the end-of-step attitude and velocity given, the trapezoidal rule is used.
    """
    if dt < 0.0:
        raise InvalidArgumentError(f"Time step must be non-negative, got {dt}")
    earth = euler_to_dcm(attitude).inverse().apply(body_velocity)
    if next_attitude is not None and next_velocity is not None:
        earth = 0.5 * (earth + euler_to_dcm(next_attitude).inverse().apply(next_velocity))
    return np.asarray(position, dtype=float) + FT_TO_M * earth * dt


@dataclass(frozen=True)
class ShipState:
    """Ship moving at constant velocity; ``position`` is the deck centre at t = 0."""

    position: np.ndarray
    velocity: np.ndarray
    landing_radius: float = 3.0
    gear_offset: float = 0.4826

    @classmethod
    def from_config(cls, config: ShipConfig) -> "ShipState":
        speed = config.speed_kts * KTS_TO_MS
        velocity = speed * np.array([np.cos(config.heading), np.sin(config.heading), 0.0])
        return cls(
            position=np.array([config.north, config.east, config.down]),
            velocity=velocity,
            landing_radius=config.landing_radius,
            gear_offset=config.gear_offset,
        )

    @property
    def deck_height(self) -> float:
        """Height of the deck above the sea surface (m)."""
        return -float(self.position[2])

    @property
    def heading(self) -> float:
        return float(np.arctan2(self.velocity[1], self.velocity[0])) if np.any(self.velocity[:2]) else 0.0

    def at(self, time: float) -> np.ndarray:
        return self.position + self.velocity * time


# references


@dataclass(frozen=True)
class Reference:
    """Reference position (m), velocity (m/s) and heading (rad) at one instant."""

    position: np.ndarray
    velocity: np.ndarray
    heading: float


class StraightReference:
    """Constant-velocity path along ``heading``; the height stops at ``target_down`` if given."""

    def __init__(self, start: Reference, speed: float, climb_rate: float = 0.0, target_down: Optional[float] = None):
        self.start = start
        self.horizontal = speed * np.array([np.cos(start.heading), np.sin(start.heading), 0.0])
        self.climb_rate = climb_rate
        self.target_down = target_down
        self.level_time = np.inf
        if target_down is not None and climb_rate != 0.0:
            self.level_time = max((start.position[2] - target_down) / climb_rate, 0.0)

    def at(self, t: float) -> Reference:
        climb_time = min(t, self.level_time)
        position = self.start.position + self.horizontal * t + np.array([0.0, 0.0, -self.climb_rate * climb_time])
        vertical = -self.climb_rate if t < self.level_time else 0.0
        return Reference(position, self.horizontal + np.array([0.0, 0.0, vertical]), self.start.heading)

    def finished(self, t: float) -> bool:
        return t >= self.level_time


class TurnReference:
    """Constant-speed arc at ``rate`` rad/s (positive to the right) through ``heading_change``."""

    def __init__(self, start: Reference, speed: float, rate: float, heading_change: float):
        if rate == 0.0 or np.sign(rate) != np.sign(heading_change):
            raise InvalidArgumentError("Turn rate and heading change need the same non-zero sign")
        self.start, self.speed, self.rate = start, speed, rate
        self.duration = heading_change / rate

    def at(self, t: float) -> Reference:
        t = min(t, self.duration)
        psi0 = self.start.heading
        psi = psi0 + self.rate * t
        radius = self.speed / self.rate
        offset = radius * np.array([np.sin(psi) - np.sin(psi0), np.cos(psi0) - np.cos(psi), 0.0])
        velocity = self.speed * np.array([np.cos(psi), np.sin(psi), 0.0])
        return Reference(self.start.position + offset, velocity, float(psi))

    def finished(self, t: float) -> bool:
        return t >= self.duration


class DecelerationReference:
    """Cubic Hermite blend from the current reference to a hover point moving with the ship.

    The relative position goes from its starting value and rate to zero
    with zero rate after ``duration`` seconds; heading blends smoothly to
    the ship heading.
    """

    def __init__(self, start: Reference, ship: ShipState, time0: float, duration: float, hover_height: float):
        if duration <= 0.0:
            raise InvalidArgumentError("Deceleration duration must be positive")
        self.ship, self.time0, self.duration = ship, time0, duration
        self.hover_offset = np.array([0.0, 0.0, -(hover_height + ship.gear_offset)])
        self.d0 = start.position - self.hover_point(0.0)
        self.v0 = start.velocity - ship.velocity
        self.psi0 = start.heading
        self.dpsi = float(wrap_angle(ship.heading - start.heading))

    def hover_point(self, t: float) -> np.ndarray:
        return self.ship.at(self.time0 + t) + self.hover_offset

    def at(self, t: float) -> Reference:
        s = min(max(t / self.duration, 0.0), 1.0)
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        relative = h00 * self.d0 + h10 * self.duration * self.v0
        rate = (6 * s**2 - 6 * s) / self.duration * self.d0 + (3 * s**2 - 4 * s + 1) * self.v0
        if s >= 1.0:
            relative, rate = np.zeros(3), np.zeros(3)
        heading = self.psi0 + self.dpsi * (3 * s**2 - 2 * s**3)
        return Reference(self.hover_point(t) + relative, self.ship.velocity + rate, float(heading))

    def finished(self, t: float) -> bool:
        return t >= self.duration


class LandingReference:
    """Hold over the deck for ``hold`` seconds, then sink at ``sink_rate`` until contact."""

    def __init__(self, ship: ShipState, time0: float, hover_height: float, hold: float, sink_rate: float):
        if sink_rate <= 0.0:
            raise InvalidArgumentError("Sink rate must be positive")
        self.ship, self.time0 = ship, time0
        self.hover_height, self.hold, self.sink_rate = hover_height, hold, sink_rate

    def at(self, t: float) -> Reference:
        sinking = t > self.hold
        height = self.hover_height - self.sink_rate * max(t - self.hold, 0.0)
        position = self.ship.at(self.time0 + t) + np.array([0.0, 0.0, -(height + self.ship.gear_offset)])
        velocity = self.ship.velocity + np.array([0.0, 0.0, self.sink_rate if sinking else 0.0])
        return Reference(position, velocity, self.ship.heading)

    def finished(self, t: float) -> bool:
        return False


# plants


class MissionPlant(Protocol):
    def derivative(self, y: np.ndarray, u: ControlVector) -> np.ndarray:
        ...

    def body_velocity(self, y: np.ndarray) -> np.ndarray:
        ...

    def attitude(self, y: np.ndarray) -> EulerAngles:
        ...


class VehiclePlant:
    """The assembled vehicle flown through its explicit dynamics."""

    def __init__(self, vehicle: Vehicle):
        self.vehicle = vehicle

    def derivative(self, y, u: ControlVector) -> np.ndarray:
        return self.vehicle.derivative(y, u)

    def body_velocity(self, y) -> np.ndarray:
        return np.asarray(y[0:3], dtype=float)

    def attitude(self, y) -> EulerAngles:
        return EulerAngles(float(y[6]), float(y[7]), float(y[8]))

    def loads(self, y, u: ControlVector) -> Dict[str, np.ndarray]:
        evaluation = self.vehicle.evaluate(y, np.zeros(N_STATES), u)
        return {source: evaluation.loads[source].as_array() for source in SOURCES}


def integrate_step(
    plant: MissionPlant, y, u: ControlVector, dt: float, time: float = 0.0, phase: str = ""
) -> np.ndarray:
    """One classical Runge-Kutta step of the explicit dynamics.

    Raises:
        InvalidArgumentError: ``dt`` outside (0, 0.05] s.
        DivergenceError: the new state is not finite.
    """
    if not 0.0 < dt <= MAX_DT:
        raise InvalidArgumentError(f"Time step must lie in (0, {MAX_DT}] s, got {dt}")
    y = np.asarray(y, dtype=float)
    try:
        k1 = plant.derivative(y, u)
        k2 = plant.derivative(y + 0.5 * dt * k1, u)
        k3 = plant.derivative(y + 0.5 * dt * k2, u)
        k4 = plant.derivative(y + dt * k3, u)
    except RotorSimError as exc:
        raise DivergenceError(f"Dynamics failed at t={time:.3f} s: {exc}", time=time, phase=phase) from exc
    y_next = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y_next)):
        raise DivergenceError(f"State diverged at t={time:.3f} s in phase '{phase}'", time=time, phase=phase)
    return y_next


def slew_limit(previous, target, max_step: float) -> np.ndarray:
    """Move from ``previous`` toward ``target`` by at most ``max_step`` per channel."""
    previous = np.asarray(previous, dtype=float)
    return previous + np.clip(np.asarray(target, dtype=float) - previous, -max_step, max_step)


# control


def phase_condition(name: str, phase: PhaseConfig, scenario: ScenarioConfig) -> FlightCondition:
    """Trim condition the phase's linear model is taken at."""
    sim = scenario.simulation
    common = dict(gross_weight=sim.gross_weight, altitude=sim.altitude)
    if name == "landing":
        climb = -phase.sink_rate / FPM_TO_MS
        return FlightCondition(airspeed=scenario.ship.speed_kts, climb_rate_fpm=climb, **common)
    speed = phase.speed_kts
    if speed < 0.0:
        speed = 0.5 * (scenario.helicopter.speed_kts + scenario.ship.speed_kts)
    turn_rate = phase.turn_rate if name == "turn" else 0.0
    climb = phase.climb_rate_fpm if phase.climb_rate_fpm else None
    return FlightCondition(airspeed=speed, turn_rate=turn_rate, climb_rate_fpm=climb, **common)


@dataclass(frozen=True)
class PhaseController:
    """Trim point, augmented linear model, gains and set point of one phase."""

    name: str
    trim_state: np.ndarray
    trim_controls: np.ndarray
    model: LinearModel
    gains: GainSet
    tracked: Tuple[str, ...]
    offsets: np.ndarray
    x_ss: np.ndarray = field(default=None)
    u_ss: np.ndarray = field(default=None)

    @classmethod
    def build(
        cls,
        name: str,
        trim_state,
        trim_controls,
        model: LinearModel,
        tracked: Sequence[str] = ("north", "east", "down", "psi"),
        offsets=(0.0, 0.0, 0.0, 0.0),
        q_weights: Optional[Dict[str, float]] = None,
        r_weights: Optional[Sequence[float]] = None,
    ) -> "PhaseController":
        gains = design_gains(model, q_weights, r_weights, label=name)
        cs = selection_matrix(model.state_names, tracked)
        ds = np.zeros((cs.shape[0], model.b.shape[1]))
        x_ss, u_ss = steady_state_targets(model.a, model.b, cs, ds, offsets)
        return cls(
            name=name,
            trim_state=np.asarray(trim_state, dtype=float),
            trim_controls=np.asarray(trim_controls, dtype=float),
            model=model,
            gains=gains,
            tracked=tuple(tracked),
            offsets=np.asarray(offsets, dtype=float),
            x_ss=x_ss,
            u_ss=u_ss,
        )

    def reference_state(self, ref: Reference) -> np.ndarray:
        """Trim state carried to the reference heading and velocity."""
        x_ref = self.trim_state.copy()
        path_velocity = heading_rotation(ref.heading) @ ref.velocity / FT_TO_M
        trim_attitude = EulerAngles(self.trim_state[6], self.trim_state[7], 0.0)
        x_ref[0:3] = euler_to_dcm(trim_attitude).apply(path_velocity)
        x_ref[8] = ref.heading
        return x_ref

    def deviation(self, y, position, ref: Reference) -> np.ndarray:
        dy = np.asarray(y, dtype=float) - self.reference_state(ref)
        dy[8] = wrap_angle(dy[8])
        dp = heading_rotation(ref.heading) @ (np.asarray(position, dtype=float) - ref.position) / FT_TO_M
        return np.concatenate([dy, dp])

    def command(self, y, position, ref: Reference) -> ControlCommand:
        return control_law(self.gains.k, self.deviation(y, position, ref), self.x_ss, self.u_ss, self.trim_controls)


def prepare_controllers(
    scenario: ScenarioConfig, vehicle: Vehicle
) -> Tuple[Dict[str, PhaseController], Dict[str, TrimResult]]:
    """Trim, linearize and design gains for every phase, seeding each trim with the previous one."""
    controllers, trims = {}, {}
    guess = None
    for name in PHASES:
        phase = scenario.phases[name]
        condition = phase_condition(name, phase, scenario)
        trim = solve_trim(condition, initial_guess=guess, vehicle=vehicle)
        guess = trim.unknowns
        model = augment_position(linearize(trim, vehicle))
        controllers[name] = PhaseController.build(
            name,
            trim.state,
            trim.controls.as_array(),
            model,
            tracked=phase.tracked,
            offsets=phase.output_offsets,
            q_weights=phase.state_weights,
            r_weights=phase.control_weights,
        )
        trims[name] = trim
        logger.info(f"Phase '{name}' prepared at {condition.airspeed:g} kts")
    return controllers, trims


# logging


@dataclass
class FlightLog:
    """One row per control step."""

    rows: List[Dict[str, float]] = field(default_factory=list)
    touchdown: Optional[Dict[str, float]] = None
    phase_starts: Dict[str, float] = field(default_factory=dict)

    def append(
        self,
        time: float,
        phase: str,
        y,
        controls,
        position,
        ship_position,
        saturated: Sequence[bool] = (),
        loads: Optional[Dict[str, np.ndarray]] = None,
    ) -> Dict[str, float]:
        relative = np.asarray(ship_position) - np.asarray(position)
        row = {"time_s": time, "phase": phase}
        row.update(dict(zip(STATE_NAMES, np.asarray(y, dtype=float))))
        row.update({f"{name}_pct": value for name, value in zip(CONTROL_NAMES, controls)})
        row.update({"north_m": position[0], "east_m": position[1], "down_m": position[2]})
        row.update({"ship_north_m": ship_position[0], "ship_east_m": ship_position[1], "ship_down_m": ship_position[2]})
        row.update({"dX_m": relative[0], "dY_m": relative[1], "dZ_m": relative[2]})
        row["saturated"] = int(any(saturated))
        for source, values in (loads or {}).items():
            row.update({f"{source}_{axis}": v for axis, v in zip(("X", "Y", "Z", "L", "M", "N"), values)})
        self.rows.append(row)
        return row

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def times(self) -> np.ndarray:
        return np.array([row["time_s"] for row in self.rows])

    def positions(self) -> np.ndarray:
        return np.array([[row["north_m"], row["east_m"], row["down_m"]] for row in self.rows])

    def controls(self) -> np.ndarray:
        return np.array([[row[f"{name}_pct"] for name in CONTROL_NAMES] for row in self.rows])

    def write(self, path: str) -> str:
        return write_csv(self.to_frame(), path)


def landing_error(log: FlightLog, ship: ShipState) -> np.ndarray:
    """Ship minus helicopter position at touchdown (m), height corrected by the gear offset.

    Raises:
        MissionFailure: the log holds no touchdown.
    """
    if log.touchdown is None:
        raise MissionFailure("No touchdown in the flight log", log=log)
    td = log.touchdown
    helicopter = np.array([td["north_m"], td["east_m"], td["down_m"]])
    deck = ship.at(td["time_s"])
    error = deck - helicopter
    error[2] -= ship.gear_offset
    return error


@dataclass(frozen=True)
class MissionReport:
    log: FlightLog
    landing_error: np.ndarray
    duration: float
    phase_starts: Dict[str, float]

    def summary(self) -> Dict[str, float]:
        dx, dy, dz = self.landing_error
        return {"duration_s": self.duration, "dX_m": dx, "dY_m": dy, "dZ_m": dz}


# mission loop


def _touchdown(position, velocity_down: float, ship: ShipState, time: float, sim: SimulationConfig, log: FlightLog):
    deck = ship.at(time)
    gear = position[2] + ship.gear_offset
    if gear < deck[2]:
        return False
    miss = float(np.hypot(*(position[:2] - deck[:2])))
    if miss > ship.landing_radius:
        raise MissionFailure(f"Missed the deck by {miss:.2f} m at t={time:.2f} s", log=log)
    if velocity_down - ship.velocity[2] > sim.touchdown_sink:
        raise MissionFailure(f"Hard landing at {velocity_down:.2f} m/s sink rate", log=log)
    return True


def _next_reference(
    name: str, phase: PhaseConfig, start: Reference, ship: ShipState, time: float, scenario: ScenarioConfig
):
    condition = phase_condition(name, phase, scenario)
    speed = condition.speed * np.cos(condition.gamma) * FT_TO_M
    if name == "descent":
        return StraightReference(start, speed, phase.climb_rate_fpm * FPM_TO_MS, phase.target_down)
    if name == "forward":
        return StraightReference(start, speed)
    if name == "turn":
        return TurnReference(start, speed, phase.turn_rate, phase.heading_change)
    if name == "decel":
        return DecelerationReference(start, ship, time, phase.duration, phase.hover_height)
    hover = scenario.phases["decel"].hover_height
    return LandingReference(ship, time, hover, phase.hold, phase.sink_rate)


def _phase_done(
    name: str, phase: PhaseConfig, reference, elapsed: float, ref: Reference, ship: ShipState, time: float
) -> bool:
    if name == "forward":
        gap = heading_rotation(ship.heading) @ (ship.at(time) - ref.position)
        return gap[0] <= phase.lead_distance
    return reference.finished(elapsed)


def run_mission(
    scenario: ScenarioConfig,
    plant: MissionPlant,
    controllers: Dict[str, PhaseController],
    initial_state=None,
    progress: bool = True,
) -> MissionReport:
    """Fly all phases until touchdown.

    Raises:
        MissionFailure: a phase timed out, the state diverged or the deck was missed.
            The partial log travels with the exception.
    """
    sim = scenario.simulation
    ship = ShipState.from_config(scenario.ship)
    start = scenario.helicopter
    first = controllers[PHASES[0]]
    y = np.array(first.trim_state if initial_state is None else initial_state, dtype=float)
    y[8] = start.heading
    position = start.position.astype(float)
    controls = first.trim_controls.copy()
    max_step = sim.slew_limit * sim.control_period
    log = FlightLog()

    velocity0 = start.speed_kts * KTS_TO_MS * np.array([np.cos(start.heading), np.sin(start.heading), 0.0])
    ref = Reference(position.copy(), velocity0, start.heading)
    time, index = 0.0, 0
    name = PHASES[index]
    reference = _next_reference(name, scenario.phases[name], ref, ship, time, scenario)
    phase_start = 0.0
    log.phase_starts[name] = 0.0
    logger.info(f"Mission start: phase '{name}'")
    n_physics = int(np.ceil(sim.max_time / sim.dt))
    n_control = int(np.ceil(n_physics / sim.substeps))

    try:
        blocks = chunked(range(n_physics), sim.substeps)
        for block in tqdm(blocks, total=n_control, desc="mission", disable=not progress):
            elapsed = time - phase_start
            ref = reference.at(elapsed)
            command = controllers[name].command(y, position, ref)
            controls = slew_limit(controls, command.command, max_step)
            u = ControlVector.from_array(controls)
            loads = plant.loads(y, u) if hasattr(plant, "loads") else None
            log.append(time, name, y, controls, position, ship.at(time), command.saturated, loads)

            for step in block:
                y_next = integrate_step(plant, y, u, sim.dt, step * sim.dt, name)
                position = update_position(
                    position,
                    plant.attitude(y),
                    plant.body_velocity(y),
                    sim.dt,
                    plant.attitude(y_next),
                    plant.body_velocity(y_next),
                )
                y = y_next
                time = (step + 1) * sim.dt
                if name == "landing":
                    earth = euler_to_dcm(plant.attitude(y)).inverse().apply(plant.body_velocity(y)) * FT_TO_M
                    if _touchdown(position, earth[2], ship, time, sim, log):
                        log.append(time, name, y, controls, position, ship.at(time))
                        log.touchdown = dict(log.rows[-1])
                        error = landing_error(log, ship)
                        logger.info(
                            f"Touchdown at t={time:.2f} s, error (dX, dY, dZ) = "
                            f"({error[0]:.4f}, {error[1]:.4f}, {error[2]:.4f}) m"
                        )
                        return MissionReport(log, error, time, dict(log.phase_starts))

            elapsed = time - phase_start
            phase = scenario.phases[name]
            if elapsed > phase.timeout:
                raise MissionFailure(f"Phase '{name}' timed out after {elapsed:.1f} s", log=log)
            if position[2] > 0.0:
                raise MissionFailure(f"Descended below the sea surface at t={time:.2f} s", log=log)
            if _phase_done(name, phase, reference, elapsed, reference.at(elapsed), ship, time):
                handover = reference.at(elapsed)
                index += 1
                name = PHASES[index]
                reference = _next_reference(name, scenario.phases[name], handover, ship, time, scenario)
                phase_start = time
                log.phase_starts[name] = time
                logger.info(f"t={time:.2f} s: switching to phase '{name}'")
    except DivergenceError as exc:
        raise MissionFailure(f"Diverged in phase '{exc.phase}' at t={exc.time:.2f} s", log=log) from exc
    raise MissionFailure(f"No touchdown within {sim.max_time:g} s", log=log)


def simulate_ship_landing(
    scenario: Optional[ScenarioConfig] = None,
    config: Optional[VehicleConfig] = None,
    progress: bool = True,
) -> MissionReport:
    """Prepare every phase and fly the scenario with the assembled vehicle."""
    scenario = scenario or ScenarioConfig.from_file()
    vehicle_config = scenario.vehicle_config(config).with_weight(scenario.simulation.gross_weight)
    vehicle = Vehicle(vehicle_config, altitude=scenario.simulation.altitude)
    controllers, _ = prepare_controllers(scenario, vehicle)
    return run_mission(scenario, VehiclePlant(vehicle), controllers, progress=progress)
