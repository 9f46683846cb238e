# -*- coding: utf-8 -*-

"""Assembly of the full system residual ``f(y, y_dot, u, t) = 0``.

State vector (25 entries)::

     0- 8  u, v, w, p, q, r, phi, theta, psi      fuselage
     9-11  lambda0, lambda1c, lambda1s            main rotor inflow
       12  lambda_tr                              tail rotor inflow
    13-15  beta0, beta1c, beta1s                  flap harmonics
    16-18  their rates
    19-21  zeta0, zeta1c, zeta1s                  lag harmonics
    22-24  their rates

Residual rows: force (3), moment (3), Euler kinematics (3), main rotor
inflow (3), tail rotor inflow (1), flap kinematics (3), flap dynamics (3),
lag kinematics (3), lag dynamics (3).

The residual is affine in ``y_dot``; :meth:`Vehicle.mass_matrix` gives its
slope analytically so the explicit dynamics follow from one linear solve.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from rotorsim.atmosphere import Atmosphere, atmosphere_at
from rotorsim.config import RiggingConfig, VehicleConfig
from rotorsim.empennage import HORIZONTAL, VERTICAL, surface_loads, surface_velocity
from rotorsim.errors import AssemblyError, InvalidArgumentError, RotorSimError, UndefinedSkewError
from rotorsim.frames import KTS_TO_FTS, EulerAngles, euler_rate_matrix
from rotorsim.fuselage import (
    FuselageState,
    Loads,
    MassProperties,
    force_residual,
    fuselage_aero_loads,
    moment_residual,
)
from rotorsim.inflow import APPARENT_MASS, inflow_residual
from rotorsim.main_rotor import (
    MainRotor,
    RotorLoads,
    RotorState,
    Swashplate,
    flap_inertial_hub_loads,
    flap_residual,
    harmonic_accelerations,
    lag_residual,
)
from rotorsim.tables import TableSet, load_tables
from rotorsim.tail_rotor import (
    TailRotorOutput,
    tr_body_loads,
    tr_inflow_residual,
    tr_local_velocity,
    tr_thrust_torque,
    tr_total_speed,
)

__all__ = [
    "N_STATES",
    "N_CONTROLS",
    "STATE_NAMES",
    "STATE_UNITS",
    "CONTROL_NAMES",
    "RESIDUAL_NAMES",
    "SOURCES",
    "VELOCITY",
    "RATES",
    "EULER",
    "INFLOW",
    "TAIL_INFLOW",
    "FLAP",
    "FLAP_RATE",
    "LAG",
    "LAG_RATE",
    "ControlVector",
    "Rigging",
    "SystemState",
    "Evaluation",
    "Vehicle",
    "total_loads",
    "system_residual",
]

STATE_NAMES = (
    "u", "v", "w", "p", "q", "r", "phi", "theta", "psi",
    "lambda0", "lambda1c", "lambda1s", "lambda_tr",
    "beta0", "beta1c", "beta1s", "beta0_dot", "beta1c_dot", "beta1s_dot",
    "zeta0", "zeta1c", "zeta1s", "zeta0_dot", "zeta1c_dot", "zeta1s_dot",
)  # fmt: skip
STATE_UNITS = (
    ("ft/s",) * 3 + ("rad/s",) * 3 + ("rad",) * 3 + ("-",) * 4
    + ("rad",) * 3 + ("rad/s",) * 3 + ("rad",) * 3 + ("rad/s",) * 3
)  # fmt: skip
RESIDUAL_NAMES = (
    "X", "Y", "Z", "L", "M", "N", "phi_kin", "theta_kin", "psi_kin",
    "inflow0", "inflow1c", "inflow1s", "inflow_tr",
    "flap0_kin", "flap1c_kin", "flap1s_kin", "flap0", "flap1c", "flap1s",
    "lag0_kin", "lag1c_kin", "lag1s_kin", "lag0", "lag1c", "lag1s",
)  # fmt: skip
CONTROL_NAMES = ("collective", "lateral", "longitudinal", "pedal")
SOURCES = ("main_rotor", "tail_rotor", "horizontal_tail", "vertical_tail", "fuselage")

N_STATES = len(STATE_NAMES)
N_CONTROLS = len(CONTROL_NAMES)

VELOCITY = slice(0, 3)
RATES = slice(3, 6)
EULER = slice(6, 9)
INFLOW = slice(9, 12)
TAIL_INFLOW = 12
FLAP = slice(13, 16)
FLAP_RATE = slice(16, 19)
LAG = slice(19, 22)
LAG_RATE = slice(22, 25)


@dataclass(frozen=True)
class ControlVector:
    """Pilot inputs in percent of travel; 50 % is the neutral position."""

    collective: float = 50.0
    lateral: float = 50.0
    longitudinal: float = 50.0
    pedal: float = 50.0

    @classmethod
    def from_array(cls, values) -> "ControlVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (N_CONTROLS,):
            raise InvalidArgumentError(f"A control vector has 4 entries, got {values.shape}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.collective, self.lateral, self.longitudinal, self.pedal])

    def out_of_range(self) -> Tuple[str, ...]:
        """Names of channels outside [0, 100] %."""
        return tuple(
            name for name, value in zip(CONTROL_NAMES, self.as_array()) if not 0.0 <= value <= 100.0
        )


class Rigging:
    """Affine maps from percent travel to swashplate and tail rotor pitch."""

    def __init__(self, config: RiggingConfig):
        self.config = config
        self._ends = np.array([config.channels[name] for name in CONTROL_NAMES])

    def angles(self, controls: ControlVector) -> np.ndarray:
        """Collective, lateral cyclic, longitudinal cyclic and tail collective (rad)."""
        low, high = self._ends[:, 0], self._ends[:, 1]
        return low + (high - low) * controls.as_array() / 100.0

    def percent(self, angles) -> ControlVector:
        low, high = self._ends[:, 0], self._ends[:, 1]
        return ControlVector.from_array(100.0 * (np.asarray(angles, dtype=float) - low) / (high - low))

    def swashplate(self, controls: ControlVector) -> Tuple[Swashplate, float]:
        theta0, theta1c, theta1s, theta_tr = self.angles(controls)
        return Swashplate(theta0, theta1c, theta1s), float(theta_tr)


@dataclass(frozen=True)
class SystemState:
    """Named view of the 25-entry state vector."""

    vector: np.ndarray

    def __post_init__(self):
        vector = np.asarray(self.vector, dtype=float)
        if vector.shape != (N_STATES,):
            raise InvalidArgumentError(f"A system state has {N_STATES} entries, got {vector.shape}")
        object.__setattr__(self, "vector", vector)

    @classmethod
    def from_parts(
        cls,
        fuselage: FuselageState,
        inflow=(0.0, 0.0, 0.0),
        tail_inflow: float = 0.0,
        rotor: Optional[RotorState] = None,
    ) -> "SystemState":
        rotor = rotor or RotorState.zeros()
        return cls(
            np.concatenate([fuselage.as_array(), np.asarray(inflow, float), [tail_inflow], rotor.as_array()])
        )

    @property
    def fuselage(self) -> FuselageState:
        return FuselageState.from_array(self.vector[0:9])

    @property
    def inflow(self) -> np.ndarray:
        return self.vector[INFLOW]

    @property
    def tail_inflow(self) -> float:
        return float(self.vector[TAIL_INFLOW])

    @property
    def rotor(self) -> RotorState:
        return RotorState.from_array(self.vector[13:25])


def total_loads(loads: Iterable[Loads]) -> Loads:
    """Componentwise sum of the five component loads."""
    loads = list(loads)
    present = {item.source for item in loads}
    missing = [source for source in SOURCES if source not in present]
    if missing:
        raise AssemblyError(f"missing load sources: {', '.join(missing)}", source="total")
    total = Loads(source="total")
    for item in loads:
        total = total + item
    return total


@dataclass(frozen=True)
class Evaluation:
    """Residual plus the intermediate quantities of one evaluation."""

    residual: np.ndarray
    loads: Dict[str, Loads]
    total: Loads
    rotor: RotorLoads
    tail: TailRotorOutput
    tail_speed: float
    chi: float
    stabilator: float
    swashplate: Swashplate = field(default_factory=Swashplate)

    @property
    def power(self) -> float:
        """Main rotor shaft power (ft lbf/s)."""
        return self.rotor.power


class Vehicle:
    """The assembled helicopter at one atmosphere.

    Args:
        config: vehicle configuration.
        tables: lookup tables; loaded from the configured files when omitted.
        altitude: pressure altitude (ft) for density and speed of sound.
        disabled: component sources whose loads are replaced by zero.
    """

    def __init__(
        self,
        config: VehicleConfig,
        tables: Optional[TableSet] = None,
        altitude: float = 0.0,
        disabled: Sequence[str] = (),
    ):
        unknown = set(disabled) - set(SOURCES)
        if unknown:
            raise InvalidArgumentError(f"Unknown component sources {sorted(unknown)}")
        self.config = config
        self.tables = tables or load_tables(
            config.tables.rotor_airfoil,
            config.tables.tail_airfoil,
            config.tables.interference,
            config.tables.stabilator,
        )
        self.atmosphere: Atmosphere = atmosphere_at(altitude)
        self.mass_properties = MassProperties.from_config(config.fuselage)
        self.rigging = Rigging(config.rigging)
        self.main_rotor = MainRotor(config.main_rotor, self.tables.rotor_airfoil)
        self.disabled = frozenset(disabled)
        self._static_mass_matrix = self._build_static_mass_matrix()
        logger.debug(
            f"Vehicle assembled: {config.fuselage.gross_weight:.0f} lbf at {altitude:.0f} ft, "
            f"rho={self.atmosphere.density:.7f} slug/ft^3"
        )

    @property
    def weight(self) -> float:
        return self.config.fuselage.gross_weight

    def _component(self, source: str, loads: Loads) -> Loads:
        if source in self.disabled:
            return Loads(source=source)
        if not loads.is_finite():
            raise AssemblyError("non-finite loads", source=source)
        return loads

    def evaluate(self, y, y_dot, u: ControlVector, t: float = 0.0, check_controls: bool = True) -> Evaluation:
        """Evaluate the residual and keep the component breakdown.

        ``t`` is accepted for the residual signature; the model is time invariant.
        Controls outside 0-100 % raise :class:`InvalidArgumentError` unless
        ``check_controls`` is off, as it is inside the trim and linearization solvers.
        """
        y = np.asarray(y, dtype=float)
        y_dot = np.asarray(y_dot, dtype=float)
        if y.shape != (N_STATES,) or y_dot.shape != (N_STATES,):
            raise InvalidArgumentError(f"State and derivative need {N_STATES} entries")
        if check_controls:
            outside = u.out_of_range()
            if outside:
                raise InvalidArgumentError(f"Controls outside 0-100 %: {', '.join(outside)}")
        rho = self.atmosphere.density
        sound = self.atmosphere.speed_of_sound
        mr_cfg = self.config.main_rotor
        tip = mr_cfg.omega * mr_cfg.radius

        try:
            fus = FuselageState.from_array(y[0:9])
            fus_dot = FuselageState.from_array(y_dot[0:9])
        except RotorSimError as exc:
            raise AssemblyError(str(exc), source="fuselage") from exc
        velocity, rates = fus.velocity, fus.rates
        rotor = RotorState.from_array(y[13:25])
        lam = y[INFLOW]
        swash, theta_tr = self.rigging.swashplate(u)

        try:
            rotor_loads = self.main_rotor.loads(velocity, rates, lam, rotor, swash, rho, sound)
            accel = harmonic_accelerations(rotor.beta, rotor.beta_dot, y_dot[FLAP_RATE], mr_cfg.omega)
            f_in, m_in = flap_inertial_hub_loads(
                accel, self.main_rotor.props, mr_cfg.blades, mr_cfg.hinge_offset
            )
            mr_loads = self.main_rotor.body_loads(rotor_loads.hub_force + f_in, rotor_loads.hub_moment + m_in)
            try:
                chi = rotor_loads.chi(lam[0])
            except UndefinedSkewError:
                chi = 0.0
            inflow_res = inflow_residual(
                lam, y_dot[INFLOW], rotor_loads.forcing, rotor_loads.mu, mr_cfg.omega, rotor_loads.climb_inflow
            )
        except AssemblyError:
            raise
        except RotorSimError as exc:
            raise AssemblyError(str(exc), source="main_rotor") from exc

        beta_1c = float(rotor.beta[1])
        try:
            tr_cfg = self.config.tail_rotor
            tr_velocity = tr_local_velocity(
                velocity, rates, tr_cfg, lam[0], tip, beta_1c, chi, self.tables.interference
            )
            tail = tr_thrust_torque(theta_tr, tr_velocity, y[TAIL_INFLOW], tr_cfg, rho)
            tail_speed = tr_total_speed(tr_velocity, y[TAIL_INFLOW], tr_cfg)
            tail_res = tr_inflow_residual(y[TAIL_INFLOW], y_dot[TAIL_INFLOW], tail.ct, tail_speed, tr_cfg)
            tr_loads = tr_body_loads(tail.thrust, tail.torque, tr_cfg)
        except RotorSimError as exc:
            raise AssemblyError(str(exc), source="tail_rotor") from exc

        airspeed_kts = float(np.linalg.norm(velocity)) / KTS_TO_FTS
        surfaces = {}
        stabilator = self.config.horizontal_tail.incidence
        for component, surface in ((HORIZONTAL, self.config.horizontal_tail), (VERTICAL, self.config.vertical_tail)):
            try:
                incidence = surface.incidence
                if surface.scheduled:
                    incidence = self.tables.stabilator(airspeed_kts)
                if component == HORIZONTAL:
                    stabilator = incidence
                local = surface_velocity(
                    velocity, rates, surface, lam[0], tip, beta_1c, chi, self.tables.interference, component
                )
                surfaces[component] = surface_loads(
                    local, surface, incidence, rho, self.tables.tail_airfoil, component, sound
                )
            except RotorSimError as exc:
                raise AssemblyError(str(exc), source=component) from exc

        fus_loads = fuselage_aero_loads(fus, rho, self.config.fuselage)
        loads = {
            "main_rotor": self._component("main_rotor", mr_loads),
            "tail_rotor": self._component("tail_rotor", tr_loads),
            HORIZONTAL: self._component(HORIZONTAL, surfaces[HORIZONTAL]),
            VERTICAL: self._component(VERTICAL, surfaces[VERTICAL]),
            "fuselage": self._component("fuselage", fus_loads),
        }
        total = total_loads(loads.values())

        mp = self.mass_properties
        try:
            kinematics = y_dot[EULER] - euler_rate_matrix(fus.phi, fus.theta) @ rates
        except RotorSimError as exc:
            raise AssemblyError(str(exc), source="fuselage") from exc
        props = self.main_rotor.props
        residual = np.concatenate(
            [
                force_residual(fus, fus_dot, total, mp),
                moment_residual(fus, fus_dot, total, mp),
                kinematics,
                inflow_res,
                [tail_res],
                y_dot[FLAP] - y[FLAP_RATE],
                flap_residual(
                    rotor.beta,
                    rotor.beta_dot,
                    y_dot[FLAP_RATE],
                    rotor_loads.flap_moments,
                    props,
                    mr_cfg.flap_spring,
                    mr_cfg.flap_damper,
                ),
                y_dot[LAG] - y[LAG_RATE],
                lag_residual(
                    rotor.zeta,
                    rotor.zeta_dot,
                    y_dot[LAG_RATE],
                    rotor_loads.lag_moments,
                    props,
                    mr_cfg.lag_spring,
                    mr_cfg.lag_damper,
                ),
            ]
        )
        return Evaluation(
            residual=residual,
            loads=loads,
            total=total,
            rotor=rotor_loads,
            tail=tail,
            tail_speed=tail_speed,
            chi=chi,
            stabilator=stabilator,
            swashplate=swash,
        )

    def residual(self, y, y_dot, u: ControlVector, t: float = 0.0, check_controls: bool = True) -> np.ndarray:
        return self.evaluate(y, y_dot, u, t, check_controls).residual

    def _build_static_mass_matrix(self) -> np.ndarray:
        """State-independent part of ``d(residual)/d(y_dot)``."""
        cfg = self.config.main_rotor
        props = self.main_rotor.props
        e = np.zeros((N_STATES, N_STATES))
        e[0:3, 0:3] = -self.mass_properties.mass * np.eye(3)
        e[3:6, 3:6] = -self.mass_properties.inertia
        e[6:9, 6:9] = np.eye(3)
        e[9:12, 9:12] = APPARENT_MASS / cfg.omega
        e[13:16, 13:16] = np.eye(3)
        e[16:19, 16:19] = -props.inertia * np.eye(3)
        e[19:22, 19:22] = np.eye(3)
        e[22:25, 22:25] = -props.inertia * np.eye(3)
        if "main_rotor" not in self.disabled:
            for column, accel in zip(range(16, 19), np.eye(3)):
                f_hub, m_hub = flap_inertial_hub_loads(accel, props, cfg.blades, cfg.hinge_offset)
                loads = self.main_rotor.body_loads(f_hub, m_hub)
                e[0:3, column] += loads.force
                e[3:6, column] += loads.moment
        return e

    def mass_matrix(self, y, evaluation: Optional[Evaluation] = None, u: Optional[ControlVector] = None) -> np.ndarray:
        """Analytic ``E = d(residual)/d(y_dot)`` at state ``y``.

        Only the tail rotor inflow time constant depends on the state; pass
        an evaluation at ``y`` to reuse its flow speed.
        """
        if evaluation is None:
            if u is None:
                raise InvalidArgumentError("mass_matrix needs an evaluation or the controls")
            evaluation = self.evaluate(y, np.zeros(N_STATES), u)
        e = self._static_mass_matrix.copy()
        e[TAIL_INFLOW, TAIL_INFLOW] = (
            4.0 * self.config.tail_rotor.radius / (2.0 * np.pi * evaluation.tail_speed)
        )
        return e

    def derivative(self, y, u: ControlVector, t: float = 0.0) -> np.ndarray:
        """Explicit dynamics ``y_dot = -E^-1 residual(y, 0, u)``."""
        evaluation = self.evaluate(y, np.zeros(N_STATES), u, t)
        return -np.linalg.solve(self.mass_matrix(y, evaluation), evaluation.residual)


def system_residual(y, y_dot, u: ControlVector, t: float, vehicle: Vehicle) -> np.ndarray:
    """Residual vector of the assembled model; zero iff ``(y, y_dot, u)`` is consistent."""
    return vehicle.residual(y, y_dot, u, t)
