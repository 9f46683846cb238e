# -*- coding: utf-8 -*-

"""Steady-flight trim: hover, level flight, climbs and descents, coordinated turns.

Sixteen unknowns (four controls, roll and pitch attitude, four inflow
states, six flap and lag harmonics) are solved against sixteen residual
rows (forces, moments, inflow, flap and lag dynamics). The remaining rows
hold by construction: body rates follow from the prescribed turn rate and
blade harmonic rates are zero.

Convergence is judged on a scaled residual: forces divided by the weight,
moments by weight times rotor radius, hinge moments by ``I Omega^2``.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
from loguru import logger
from tqdm import tqdm

from rotorsim.config import VehicleConfig
from rotorsim.errors import (
    InvalidArgumentError,
    NonConvergenceError,
    RotorSimError,
    SaturationError,
)
from rotorsim.frames import HP_FTLBS, KTS_TO_FTS, EulerAngles, euler_rate_matrix, euler_to_dcm
from rotorsim.fuselage import Loads
from rotorsim.inflow import steady_inflow
from rotorsim.tables import TableSet
from rotorsim.vehicle import (
    EULER,
    FLAP,
    INFLOW,
    LAG,
    N_STATES,
    RATES,
    TAIL_INFLOW,
    VELOCITY,
    ControlVector,
    SystemState,
    Vehicle,
)

__all__ = [
    "TRIM_UNKNOWNS",
    "TRIM_CONSTRAINTS",
    "SWEEP_COLUMNS",
    "FlightCondition",
    "TrimResult",
    "trim_unknowns",
    "newton_solve",
    "hover_seed",
    "solve_trim",
    "trim_sweep",
]

TRIM_UNKNOWNS = (
    "collective", "lateral", "longitudinal", "pedal", "phi", "theta",
    "lambda0", "lambda1c", "lambda1s", "lambda_tr",
    "beta0", "beta1c", "beta1s", "zeta0", "zeta1c", "zeta1s",
)  # fmt: skip
TRIM_CONSTRAINTS = (
    "X", "Y", "Z", "L", "M", "N", "inflow0", "inflow1c", "inflow1s", "inflow_tr",
    "flap0", "flap1c", "flap1s", "lag0", "lag1c", "lag1s",
)  # fmt: skip
_ROWS = np.array([0, 1, 2, 3, 4, 5, 9, 10, 11, 12, 16, 17, 18, 22, 23, 24])
_STEPS = np.array([1e-3] * 4 + [1e-5] * 12)

SWEEP_COLUMNS = (
    "speed_kts",
    "power_hp",
    "theta_F_deg",
    "phi_F_deg",
    "beta0_deg",
    "beta1c_deg",
    "beta1s_deg",
    "zeta0_deg",
    "col_pct",
    "lat_pct",
    "lon_pct",
    "ped_pct",
    "residual_norm",
    "iterations",
)


@dataclass(frozen=True)
class FlightCondition:
    """Prescribed steady flight.

    Args:
        airspeed: true airspeed along the flight path (kts).
        flight_path_angle: climb angle (rad), positive up.
        turn_rate: heading rate (rad/s), positive to the right.
        gross_weight: weight (lbf).
        altitude: pressure altitude (ft).
        climb_rate_fpm: climb rate (ft/min). Sets the flight path angle in
            forward flight and the vertical speed at zero airspeed.
    """

    airspeed: float = 0.0
    flight_path_angle: float = 0.0
    turn_rate: float = 0.0
    gross_weight: float = 16000.0
    altitude: float = 5250.0
    climb_rate_fpm: Optional[float] = None

    def __post_init__(self):
        if not np.isfinite(self.airspeed) or self.airspeed < 0.0:
            raise InvalidArgumentError(f"Airspeed must be non-negative, got {self.airspeed}")
        if not self.gross_weight > 0.0:
            raise InvalidArgumentError(f"Gross weight must be positive, got {self.gross_weight}")
        if abs(self.flight_path_angle) >= np.pi / 2:
            raise InvalidArgumentError("Flight path angle must lie inside (-pi/2, pi/2)")
        if self.climb_rate_fpm is not None and self.airspeed > 0.0:
            if abs(self.climb_rate_fpm / 60.0) >= self.speed:
                raise InvalidArgumentError("Climb rate exceeds the airspeed")

    @property
    def speed(self) -> float:
        """Airspeed in ft/s."""
        return self.airspeed * KTS_TO_FTS

    @property
    def gamma(self) -> float:
        if self.climb_rate_fpm is not None and self.airspeed > 0.0:
            return float(np.arcsin(self.climb_rate_fpm / 60.0 / self.speed))
        return self.flight_path_angle

    @property
    def climb_rate(self) -> float:
        """Vertical speed (ft/s), positive up."""
        if self.airspeed == 0.0:
            return (self.climb_rate_fpm or 0.0) / 60.0
        return self.speed * np.sin(self.gamma)

    def earth_velocity(self) -> np.ndarray:
        """Velocity in north-east-down axes with the nose pointing north."""
        if self.airspeed == 0.0:
            return np.array([0.0, 0.0, -self.climb_rate])
        return self.speed * np.array([np.cos(self.gamma), 0.0, -np.sin(self.gamma)])


def trim_unknowns(condition: FlightCondition) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Unknown and constraint names for a condition; the sets are the same for every regime."""
    logger.debug(
        f"Trim at {condition.airspeed} kts, gamma={condition.gamma:.4f} rad, "
        f"turn rate={condition.turn_rate:.4f} rad/s"
    )
    return TRIM_UNKNOWNS, TRIM_CONSTRAINTS


def state_from_unknowns(x: np.ndarray, condition: FlightCondition) -> Tuple[np.ndarray, np.ndarray, ControlVector]:
    """Full state, state derivative and controls for a trim unknown vector."""
    controls = ControlVector.from_array(x[0:4])
    phi, theta = x[4], x[5]
    angles = EulerAngles(phi, theta, 0.0)
    y = np.zeros(N_STATES)
    y[VELOCITY] = euler_to_dcm(angles).apply(condition.earth_velocity())
    y[RATES] = np.linalg.solve(euler_rate_matrix(phi, theta), [0.0, 0.0, condition.turn_rate])
    y[EULER] = [phi, theta, 0.0]
    y[INFLOW] = x[6:9]
    y[TAIL_INFLOW] = x[9]
    y[FLAP] = x[10:13]
    y[LAG] = x[13:16]
    y_dot = np.zeros(N_STATES)
    y_dot[8] = condition.turn_rate
    return y, y_dot, controls


def newton_solve(
    fun: Callable[[np.ndarray], np.ndarray],
    x0,
    steps,
    tol: float = 1e-8,
    max_iter: int = 50,
    max_halvings: int = 8,
    scale=None,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Damped Newton iteration with a central-difference Jacobian.

    Convergence is ``max |f| < tol`` on the residual exactly as ``fun``
    returns it. ``scale`` divides the residual rows for the step-halving
    merit ``max |f / scale|`` only; the full step halves up to
    ``max_halvings`` times while the merit does not decrease, and evaluation
    failures count as increases.

    Returns:
        Solution, residual at the solution and the iteration count.

    Raises:
        NonConvergenceError: after ``max_iter`` iterations, carrying the last residual.
    """
    x = np.asarray(x0, dtype=float).copy()
    steps = np.broadcast_to(np.asarray(steps, dtype=float), x.shape)
    f = np.asarray(fun(x), dtype=float)
    weights = np.broadcast_to(1.0 / np.asarray(1.0 if scale is None else scale, dtype=float), f.shape)
    norm = np.max(np.abs(f))
    merit = np.max(np.abs(f * weights))
    for iteration in range(max_iter):
        if norm < tol:
            return x, f, iteration
        jac = np.empty((f.size, x.size))
        for j in range(x.size):
            dx = np.zeros_like(x)
            dx[j] = steps[j]
            jac[:, j] = (fun(x + dx) - fun(x - dx)) / (2.0 * steps[j])
        try:
            delta = scipy.linalg.solve(jac * weights[:, None], -f * weights)
        except (scipy.linalg.LinAlgError, ValueError):
            delta = np.linalg.lstsq(jac * weights[:, None], -f * weights, rcond=None)[0]
        alpha = 1.0
        for _ in range(max_halvings + 1):
            candidate = x + alpha * delta
            try:
                f_new = np.asarray(fun(candidate), dtype=float)
                new_merit = np.max(np.abs(f_new * weights))
            except RotorSimError:
                f_new, new_merit = None, np.inf
            if new_merit < merit:
                break
            alpha *= 0.5
        if f_new is None or not np.isfinite(new_merit):
            raise NonConvergenceError(
                "Newton step failed to produce a finite residual", residual=f, iterations=iteration + 1
            )
        x, f, merit = candidate, f_new, new_merit
        norm = np.max(np.abs(f))
        logger.debug(f"Newton iteration {iteration + 1}: |f|={norm:.3e}, merit {merit:.3e}, step scale {alpha:g}")
    if norm < tol:
        return x, f, max_iter
    raise NonConvergenceError(
        f"No convergence after {max_iter} iterations, |f|={norm:.3e}", residual=f, iterations=max_iter
    )


def hover_seed(vehicle: Vehicle, condition: FlightCondition) -> np.ndarray:
    """Starting point from momentum theory and uniform-blade estimates."""
    mr = vehicle.config.main_rotor
    tr = vehicle.config.tail_rotor
    rho = vehicle.atmosphere.density
    tip = mr.omega * mr.radius
    weight = condition.gross_weight
    ct = weight / (rho * np.pi * mr.radius**2 * tip**2)
    mu = condition.speed / tip
    lam = steady_inflow([ct, 0.0, 0.0], mu, condition.climb_rate / tip)
    lam_total = lam[0] + condition.climb_rate / tip
    theta75 = 6.0 * ct / (mr.solidity * mr.lift_slope) * 1.0 / (1.0 + 1.5 * mu**2) + 1.5 * lam_total
    theta0 = theta75 - mr.twist * (0.75 * mr.radius - mr.root_cutout) / (mr.radius - mr.root_cutout)

    profile = mr.solidity * 0.01 / 8.0 * (1.0 + 4.65 * mu**2)
    torque = rho * np.pi * mr.radius**3 * tip**2 * (ct * lam_total + profile)
    tr_arm = abs(tr.hub_x)
    tr_thrust = torque / tr_arm / np.cos(tr.cant)
    tr_tip = tr.omega * tr.radius
    ct_tr = tr_thrust / (rho * np.pi * tr.radius**2 * tr_tip**2)
    lam_tr = np.sqrt(abs(ct_tr) / 2.0)
    theta_tr = 3.0 * (2.0 * ct_tr / (tr.lift_slope * tr.solidity) + lam_tr / 2.0)

    props = vehicle.main_rotor.props
    beta0 = (weight / mr.blades) * (2.0 / 3.0) * (mr.radius - mr.hinge_offset) / props.flap_stiffness
    zeta0 = (torque / mr.blades) / max(props.lag_stiffness, 1e-9)
    controls = vehicle.rigging.percent([theta0, 0.0, 0.0, theta_tr])
    drag = 0.5 * rho * condition.speed**2 * vehicle.config.fuselage.flat_plate_area
    theta = -np.arctan2(drag, weight) + 0.5 * abs(mr.mast_tilt)
    phi = -tr_thrust * np.cos(tr.cant) / weight
    x = np.zeros(len(TRIM_UNKNOWNS))
    x[0:4] = controls.as_array()
    x[4:6] = [phi, theta]
    x[6:9] = lam
    x[9] = lam_tr
    x[10] = beta0
    x[13] = zeta0
    return x


@dataclass(frozen=True)
class TrimResult:
    """A converged steady-flight solution."""

    condition: FlightCondition
    state: np.ndarray
    state_dot: np.ndarray
    controls: ControlVector
    unknowns: np.ndarray
    residual_norm: float
    scaled_norm: float
    power_hp: float
    tail_power_hp: float
    iterations: int
    stabilator: float
    loads: Dict[str, Loads] = field(default_factory=dict)

    @property
    def system_state(self) -> SystemState:
        return SystemState(self.state)

    @property
    def theta(self) -> float:
        return float(self.state[7])

    @property
    def phi(self) -> float:
        return float(self.state[6])

    def summary(self) -> Dict[str, float]:
        """One sweep-table row."""
        deg = np.rad2deg
        return {
            "speed_kts": self.condition.airspeed,
            "power_hp": self.power_hp,
            "theta_F_deg": deg(self.theta),
            "phi_F_deg": deg(self.phi),
            "beta0_deg": deg(self.state[13]),
            "beta1c_deg": deg(self.state[14]),
            "beta1s_deg": deg(self.state[15]),
            "zeta0_deg": deg(self.state[19]),
            "col_pct": self.controls.collective,
            "lat_pct": self.controls.lateral,
            "lon_pct": self.controls.longitudinal,
            "ped_pct": self.controls.pedal,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
        }


def _scales(vehicle: Vehicle) -> np.ndarray:
    mr = vehicle.config.main_rotor
    weight = vehicle.weight
    hinge = vehicle.main_rotor.props.inertia * mr.omega**2
    return np.array([weight] * 3 + [weight * mr.radius] * 3 + [1.0] * 4 + [hinge] * 6)


def _vehicle_for(condition: FlightCondition, config: VehicleConfig, tables: Optional[TableSet]) -> Vehicle:
    return Vehicle(config.with_weight(condition.gross_weight), tables, altitude=condition.altitude)


def solve_trim(
    condition: FlightCondition,
    config: Optional[VehicleConfig] = None,
    initial_guess: Optional[np.ndarray] = None,
    *,
    tables: Optional[TableSet] = None,
    vehicle: Optional[Vehicle] = None,
    tol: float = 1e-8,
    max_iter: int = 50,
) -> TrimResult:
    """Solve for the steady state of ``condition``.

    Args:
        condition: prescribed flight condition.
        config: vehicle configuration, bundled UH-60 when omitted.
        initial_guess: unknown vector in :data:`TRIM_UNKNOWNS` order; a
            momentum-theory seed is used when omitted.
        tables: preloaded lookup tables.
        vehicle: prebuilt vehicle; must match the condition's weight and altitude.
        tol: infinity-norm tolerance on the system residual in physical units
            (lbf, lbf ft and the nondimensional inflow rows).
        max_iter: Newton iteration limit.

    Raises:
        NonConvergenceError: iteration limit reached.
        SaturationError: a converged control lies outside 0-100 %.
    """
    if vehicle is None:
        vehicle = _vehicle_for(condition, config or VehicleConfig(), tables)
    trim_unknowns(condition)
    scales = _scales(vehicle)

    def constraints(x: np.ndarray) -> np.ndarray:
        y, y_dot, controls = state_from_unknowns(x, condition)
        return vehicle.residual(y, y_dot, controls, check_controls=False)[_ROWS]

    x0 = hover_seed(vehicle, condition) if initial_guess is None else np.asarray(initial_guess, float)
    x, f, iterations = newton_solve(constraints, x0, _STEPS, tol=tol, max_iter=max_iter, scale=scales)
    y, y_dot, controls = state_from_unknowns(x, condition)
    evaluation = vehicle.evaluate(y, y_dot, controls, check_controls=False)
    saturated = controls.out_of_range()
    if saturated:
        channel = saturated[0]
        raise SaturationError(
            f"Trim at {condition.airspeed:g} kts needs {channel} at {getattr(controls, channel):.2f} %",
            channel=channel,
        )
    result = TrimResult(
        condition=condition,
        state=y,
        state_dot=y_dot,
        controls=controls,
        unknowns=x,
        residual_norm=float(np.max(np.abs(evaluation.residual))),
        scaled_norm=float(np.max(np.abs(f / scales))),
        power_hp=evaluation.rotor.power / HP_FTLBS,
        tail_power_hp=evaluation.tail.power / HP_FTLBS,
        iterations=iterations,
        stabilator=evaluation.stabilator,
        loads=dict(evaluation.loads),
    )
    logger.info(
        f"Trimmed {condition.airspeed:g} kts in {iterations} iterations: "
        f"power {result.power_hp:.1f} hp, theta {np.rad2deg(result.theta):.2f} deg"
    )
    return result


def trim_sweep(
    speeds: Sequence[float],
    template: Optional[FlightCondition] = None,
    config: Optional[VehicleConfig] = None,
    tables: Optional[TableSet] = None,
    progress: bool = True,
) -> pd.DataFrame:
    """Trim at each speed, seeding every point with the previous solution.

    Failed points are logged and reported as rows of NaN; the sweep continues.
    """
    speeds = [float(s) for s in speeds]
    if any(b < a for a, b in zip(speeds, speeds[1:])):
        raise InvalidArgumentError("Sweep speeds must be sorted ascending")
    template = template or FlightCondition()
    config = config or VehicleConfig()
    vehicle = _vehicle_for(template, config, tables)
    rows: List[Dict[str, float]] = []
    guess = None
    for speed in tqdm(speeds, desc="trim sweep", disable=not progress):
        condition = replace(template, airspeed=speed)
        try:
            result = solve_trim(condition, initial_guess=guess, vehicle=vehicle)
        except RotorSimError as exc:
            logger.warning(f"Sweep point {speed:g} kts failed: {exc}")
            row = {column: np.nan for column in SWEEP_COLUMNS}
            row["speed_kts"] = speed
            row["iterations"] = getattr(exc, "iterations", np.nan)
            rows.append(row)
            continue
        guess = result.unknowns
        rows.append(result.summary())
    return pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))
