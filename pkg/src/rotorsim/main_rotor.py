# -*- coding: utf-8 -*-

"""Articulated main rotor: blade-element airloads, offset-hinge flap and lag dynamics.

Loads are integrated on a radial x azimuth grid for one reference blade and
multiplied by the blade count, the discrete form of ``N_b / 2 pi`` times the
azimuth integral. Blade motion is first harmonic in azimuth; the harmonic
balance of the hinge moment equations gives three flap and three lag
residuals in multiblade coordinates.

Geometry follows :mod:`rotorsim.frames`: the hub frame is the body frame
tilted by the mast angle, azimuth zero is aft, the rotor turns
counter-clockwise seen from above. Unit vectors of the reference blade are
``e_r = (-cos psi, sin psi, 0)`` and ``e_t = (sin psi, cos psi, 0)``; flap is
positive up, lag positive behind the hinge (against rotation).

The hub loads reach the fuselage through the hinges: the hub moment is
``e e_r x (hinge shear)`` plus the spring moments, and the shaft torque is
the sum of in-plane element forces times their radius. The torque equation
is quasi-steady in lag, so lag accelerations do not load the hub.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from rotorsim.atmosphere import RHO_SL
from rotorsim.config import MainRotorConfig
from rotorsim.errors import InvalidArgumentError, NumericError
from rotorsim.fuselage import Loads
from rotorsim.frames import FrameTransform, rotation_y
from rotorsim.inflow import wake_skew
from rotorsim.tables import AirfoilTable

__all__ = [
    "Swashplate",
    "RotorState",
    "BladeProperties",
    "ElementLoads",
    "RotorLoads",
    "MainRotor",
    "blade_pitch",
    "element_airloads",
    "harmonic_accelerations",
    "flap_residual",
    "lag_residual",
    "flap_inertial_hub_loads",
    "integrate_rotor_loads",
    "lock_number",
]


@dataclass(frozen=True)
class Swashplate:
    """Blade pitch controls (rad): collective and the two cyclic components."""

    theta0: float = 0.0
    theta1c: float = 0.0
    theta1s: float = 0.0


@dataclass(frozen=True)
class RotorState:
    """Multiblade flap and lag harmonics ``[x0, x1c, x1s]`` and their rates."""

    beta: np.ndarray
    beta_dot: np.ndarray
    zeta: np.ndarray
    zeta_dot: np.ndarray

    @classmethod
    def zeros(cls) -> "RotorState":
        return cls(np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3))

    @classmethod
    def from_array(cls, values) -> "RotorState":
        values = np.asarray(values, dtype=float)
        if values.shape != (12,):
            raise InvalidArgumentError(f"A rotor state has 12 entries, got {values.shape}")
        return cls(values[0:3], values[3:6], values[6:9], values[9:12])

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.beta, self.beta_dot, self.zeta, self.zeta_dot])


@dataclass(frozen=True)
class BladeProperties:
    """Span integrals of a uniform blade outboard of the hinge.

    Attributes:
        mass: blade mass outboard of the hinge (slug).
        first_moment: ``S = int m (y - e) dy`` (slug ft).
        inertia: ``I = int m (y - e)^2 dy`` (slug ft^2).
        flap_stiffness: ``Omega^2 int m y (y - e) dy``, centrifugal flap stiffness.
        lag_stiffness: ``Omega^2 int m e (y - e) dy``, centrifugal lag stiffness.
    """

    mass: float
    first_moment: float
    inertia: float
    flap_stiffness: float
    lag_stiffness: float
    omega: float

    @classmethod
    def from_config(cls, config: MainRotorConfig) -> "BladeProperties":
        m, e, span = config.blade_mass, config.hinge_offset, config.radius - config.hinge_offset
        first = m * span**2 / 2.0
        second = m * span**3 / 3.0
        omega2 = config.omega**2
        return cls(
            mass=m * span,
            first_moment=first,
            inertia=second,
            flap_stiffness=omega2 * (second + e * first),
            lag_stiffness=omega2 * e * first,
            omega=config.omega,
        )

    @property
    def gyroscopic(self) -> float:
        """``int m y (y - e) dy``, the coupling of hub rates into flap."""
        return self.flap_stiffness / self.omega**2

    @property
    def flap_frequency(self) -> float:
        """Rotating flap natural frequency (rad/s) without hinge spring."""
        return float(np.sqrt(self.flap_stiffness / self.inertia))

    @property
    def lag_frequency(self) -> float:
        return float(np.sqrt(self.lag_stiffness / self.inertia))


def lock_number(config: MainRotorConfig, rho: float = RHO_SL) -> float:
    """Lock number ``rho a c R^4 / I`` from the configured blade mass."""
    props = BladeProperties.from_config(config)
    return rho * config.lift_slope * config.chord * config.radius**4 / props.inertia


def blade_pitch(psi, controls: Swashplate, geom: MainRotorConfig, r) -> np.ndarray:
    """Blade pitch at azimuth ``psi`` and radius ``r`` (ft).

    Collective, cyclic shifted by the control phase, and linear twist that is
    zero at the first airfoil section.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < geom.hinge_offset - 1e-12) or np.any(r > geom.radius + 1e-12):
        raise InvalidArgumentError(
            f"Radius must lie between the hinge ({geom.hinge_offset} ft) and the tip ({geom.radius} ft)"
        )
    phase = np.asarray(psi, dtype=float) + geom.control_phase
    twist = geom.twist * (r - geom.root_cutout) / (geom.radius - geom.root_cutout)
    return controls.theta0 + controls.theta1c * np.cos(phase) + controls.theta1s * np.sin(phase) + twist


@dataclass(frozen=True)
class ElementLoads:
    lift: np.ndarray
    drag: np.ndarray
    normal: np.ndarray
    in_plane: np.ndarray
    alpha: np.ndarray
    phi: np.ndarray


def element_airloads(
    u_t,
    u_p,
    pitch,
    table: AirfoilTable,
    rho: float,
    chord: float,
    dr: float,
    speed_of_sound: float = np.inf,
) -> ElementLoads:
    """Section lift and drag on blade elements, resolved normal and in-plane.

    ``normal`` points along the blade's up normal, ``in_plane`` opposes rotation.
    The inflow angle is ``phi = atan2(U_P, U_T)`` and the angle of attack
    ``pitch - phi``.
    """
    if not dr > 0.0:
        raise InvalidArgumentError(f"Element width must be positive, got {dr}")
    u_t = np.asarray(u_t, dtype=float)
    u_p = np.asarray(u_p, dtype=float)
    speed2 = u_t**2 + u_p**2
    phi = np.arctan2(u_p, u_t)
    alpha = np.asarray(pitch, dtype=float) - phi
    coefficients = table(alpha, np.sqrt(speed2) / speed_of_sound)
    dynamic = 0.5 * rho * speed2 * chord * dr
    lift = dynamic * coefficients[..., 0]
    drag = dynamic * coefficients[..., 1]
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    return ElementLoads(
        lift=lift,
        drag=drag,
        normal=lift * cos_phi - drag * sin_phi,
        in_plane=lift * sin_phi + drag * cos_phi,
        alpha=alpha,
        phi=phi,
    )


def harmonic_accelerations(x, x_dot, x_ddot, omega: float) -> np.ndarray:
    """Rotating-frame acceleration harmonics of a first-harmonic blade motion."""
    x0, x1c, x1s = x
    v0, v1c, v1s = x_dot
    a0, a1c, a1s = x_ddot
    return np.array(
        [
            a0,
            a1c + 2.0 * omega * v1s - omega**2 * x1c,
            a1s - 2.0 * omega * v1c - omega**2 * x1s,
        ]
    )


def _rate_harmonics(x, x_dot, omega: float) -> np.ndarray:
    return np.array([x_dot[0], x_dot[1] + omega * x[2], x_dot[2] - omega * x[1]])


def _hinge_residual(x, x_dot, x_ddot, moments, inertia, damping, stiffness, omega) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    accel = harmonic_accelerations(x, x_dot, x_ddot, omega)
    rates = _rate_harmonics(x, x_dot, omega)
    return np.asarray(moments, dtype=float) - (inertia * accel + damping * rates + stiffness * x)


def flap_residual(
    beta, beta_dot, beta_ddot, moments, props: BladeProperties, spring: float = 0.0, damper: float = 0.0
) -> np.ndarray:
    """Harmonic balance of the flap hinge moment equation.

    ``moments`` are the harmonics ``[M0, M1c, M1s]`` of the applied flap
    moment (aerodynamic plus gyroscopic). The residual is zero when
    ``I beta'' + C beta' + (K_cf + K_s) beta`` balances them in every harmonic.
    """
    return _hinge_residual(
        beta, beta_dot, beta_ddot, moments, props.inertia, damper, props.flap_stiffness + spring, props.omega
    )


def lag_residual(
    zeta, zeta_dot, zeta_ddot, moments, props: BladeProperties, spring: float = 0.0, damper: float = 0.0
) -> np.ndarray:
    """Harmonic balance of the lag hinge moment equation; ``moments`` are drag moments about the hinge."""
    return _hinge_residual(
        zeta, zeta_dot, zeta_ddot, moments, props.inertia, damper, props.lag_stiffness + spring, props.omega
    )


def flap_inertial_hub_loads(
    accel: np.ndarray, props: BladeProperties, blades: int, hinge_offset: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Hub force and moment (hub frame) from the flap inertia shear at the hinges.

    The shear of one blade is ``S a(psi)`` along hub z; averaged over the
    azimuth and multiplied by the blade count.
    """
    a0, a1c, a1s = accel
    s = props.first_moment
    force = np.array([0.0, 0.0, blades * s * a0])
    moment = blades * hinge_offset * s / 2.0 * np.array([a1s, a1c, 0.0])
    return force, moment


@dataclass(frozen=True)
class RotorLoads:
    """Quasi-static main rotor loads for one state (no harmonic-acceleration terms).

    Attributes:
        hub_force: hub frame force (lbf) on the fuselage.
        hub_moment: hub frame moment (lbf ft) about the hub center.
        thrust: aerodynamic thrust along the shaft, up positive (lbf).
        torque: shaft torque (lbf ft).
        power: ``torque * Omega`` (ft lbf/s).
        forcing: ``[C_T, C_1c, C_1s]`` for the inflow model.
        flap_moments: harmonics of aerodynamic plus gyroscopic flap moment.
        lag_moments: harmonics of aerodynamic lag moment.
        mu: in-plane advance ratio at the hub.
        climb_inflow: ``-w_hub / (Omega R)``.
    """

    hub_force: np.ndarray
    hub_moment: np.ndarray
    thrust: float
    torque: float
    power: float
    forcing: np.ndarray
    flap_moments: np.ndarray
    lag_moments: np.ndarray
    mu: float
    climb_inflow: float

    @property
    def ct(self) -> float:
        return float(self.forcing[0])

    def chi(self, lambda0: float) -> float:
        return wake_skew(lambda0, self.mu, self.climb_inflow)


class MainRotor:
    """Blade-element model of the main rotor on a fixed radial x azimuth grid."""

    def __init__(self, config: MainRotorConfig, airfoil: AirfoilTable):
        self.config = config
        self.airfoil = airfoil
        self.props = BladeProperties.from_config(config)
        self.to_hub: FrameTransform = rotation_y(config.mast_tilt, "body", "hub")
        n_r, n_psi = config.radial_elements, config.azimuth_steps
        self.dr = (config.radius - config.root_cutout) / n_r
        self.r = config.root_cutout + (np.arange(n_r) + 0.5) * self.dr
        self.psi = 2.0 * np.pi * np.arange(n_psi) / n_psi
        self._cos = np.cos(self.psi)[:, None]
        self._sin = np.sin(self.psi)[:, None]
        self._arm = (self.r - config.hinge_offset)[None, :]
        self._twist = (
            config.twist * (self.r - config.root_cutout) / (config.radius - config.root_cutout)
        )[None, :]
        gamma = lock_number(config)
        if abs(gamma - config.lock_number) > 0.05 * config.lock_number:
            logger.warning(
                f"Blade mass {config.blade_mass} slug/ft gives Lock number {gamma:.3f}, "
                f"configured {config.lock_number}"
            )
        logger.debug(
            f"Main rotor grid {n_r} x {n_psi}, flap frequency "
            f"{self.props.flap_frequency / config.omega:.4f}/rev, lag frequency "
            f"{self.props.lag_frequency / config.omega:.4f}/rev"
        )

    @property
    def samples_per_blade(self) -> int:
        return self.r.size * self.psi.size

    def hub_kinematics(self, velocity, rates) -> Tuple[np.ndarray, np.ndarray]:
        """Hub velocity and angular rate in hub axes from body-axis CG motion."""
        velocity = np.asarray(velocity, dtype=float)
        rates = np.asarray(rates, dtype=float)
        hub_velocity = velocity + np.cross(rates, self.config.hub_position)
        return self.to_hub.apply(hub_velocity), self.to_hub.apply(rates)

    def loads(
        self,
        velocity,
        rates,
        lam,
        rotor: RotorState,
        controls: Swashplate,
        rho: float,
        speed_of_sound: float,
    ) -> RotorLoads:
        """Integrate airloads and quasi-static inertial loads over the disk."""
        cfg, props = self.config, self.props
        omega, radius, e = cfg.omega, cfg.radius, cfg.hinge_offset
        tip = omega * radius
        (u_h, v_h, w_h), (p_h, q_h, r_h) = self.hub_kinematics(velocity, rates)
        cos, sin = self._cos, self._sin
        arm = self._arm
        r = self.r[None, :]

        beta = rotor.beta[0] + rotor.beta[1] * cos + rotor.beta[2] * sin
        rates_b = _rate_harmonics(rotor.beta, rotor.beta_dot, omega)
        beta_dot = rates_b[0] + rates_b[1] * cos + rates_b[2] * sin
        rates_z = _rate_harmonics(rotor.zeta, rotor.zeta_dot, omega)
        zeta_dot = rates_z[0] + rates_z[1] * cos + rates_z[2] * sin

        lam_local = lam[0] + (lam[1] * cos + lam[2] * sin) * (r / radius)
        v_radial = -u_h * cos + v_h * sin
        u_t = omega * r + u_h * sin + v_h * cos - r_h * r - arm * zeta_dot
        u_p = (
            tip * lam_local
            - w_h
            + arm * beta_dot
            - v_radial * beta
            - r * (p_h * sin + q_h * cos)
        )
        phase = self.psi[:, None] + cfg.control_phase
        pitch = (
            controls.theta0
            + controls.theta1c * np.cos(phase)
            + controls.theta1s * np.sin(phase)
            + self._twist
        )
        elements = element_airloads(
            u_t, u_p, pitch, self.airfoil, rho, cfg.chord, self.dr, speed_of_sound
        )
        f_n, f_d = elements.normal, elements.in_plane
        if not (np.all(np.isfinite(f_n)) and np.all(np.isfinite(f_d))):
            bad = np.argwhere(~np.isfinite(f_n + f_d))[0]
            raise NumericError(
                f"Non-finite airload at azimuth index {bad[0]}, radial index {bad[1]}",
                indices=tuple(int(i) for i in bad),
            )

        cos_b = np.cos(beta[:, 0])
        sin_b = np.sin(beta[:, 0])
        normal_sum = f_n.sum(axis=1)
        drag_sum = f_d.sum(axis=1)
        c = cos[:, 0]
        s = sin[:, 0]
        # per-azimuth shear of the reference blade, hub axes
        radial = -normal_sum * sin_b + props.mass * omega**2 * e + omega**2 * props.first_moment * cos_b
        shear = np.stack(
            [
                -radial * c - drag_sum * s,
                radial * s - drag_sum * c,
                -normal_sum * cos_b,
            ],
            axis=1,
        )
        blades = cfg.blades
        hub_force = blades * shear.mean(axis=0)
        e_r = np.stack([-c, s, np.zeros_like(c)], axis=1)
        e_t = np.stack([s, c, np.zeros_like(c)], axis=1)
        hinge_moment = np.cross(e * e_r, shear)
        spring = -cfg.flap_spring * beta[:, :1] * e_t
        torque = blades * float(np.mean((f_d * r).sum(axis=1)))
        hub_moment = blades * (hinge_moment + spring).mean(axis=0) + np.array([0.0, 0.0, torque])

        flap_aero = (f_n * arm).sum(axis=1)
        gyro = 2.0 * omega * props.gyroscopic * (p_h * c - q_h * s)
        flap_moment = flap_aero + gyro
        lag_moment = (f_d * arm).sum(axis=1)

        thrust_elements = f_n * cos_b[:, None]
        thrust = blades * float(np.mean(thrust_elements.sum(axis=1)))
        norm = rho * np.pi * radius**2 * tip**2
        weighted = (thrust_elements * (r / radius)).sum(axis=1)
        if norm > 0.0:
            forcing = np.array(
                [thrust, blades * np.mean(weighted * c), blades * np.mean(weighted * s)]
            ) / norm
        else:
            forcing = np.zeros(3)

        return RotorLoads(
            hub_force=hub_force,
            hub_moment=hub_moment,
            thrust=thrust,
            torque=torque,
            power=torque * omega,
            forcing=forcing,
            flap_moments=_project(flap_moment, c, s),
            lag_moments=_project(lag_moment, c, s),
            mu=float(np.hypot(u_h, v_h) / tip),
            climb_inflow=float(-w_h / tip),
        )

    def body_loads(self, hub_force, hub_moment, source: str = "main_rotor") -> Loads:
        """Hub-frame loads moved to the CG in body axes."""
        to_body = self.to_hub.inverse()
        force = to_body.apply(hub_force)
        moment = to_body.apply(hub_moment)
        return Loads.at_point(force, self.config.hub_position, source, moment=moment)

    def blade_pitch(self, psi, controls: Swashplate, r) -> np.ndarray:
        return blade_pitch(psi, controls, self.config, r)


def _project(values: np.ndarray, c: np.ndarray, s: np.ndarray) -> np.ndarray:
    return np.array([values.mean(), 2.0 * np.mean(values * c), 2.0 * np.mean(values * s)])


def integrate_rotor_loads(
    rotor_model: MainRotor,
    velocity,
    rates,
    lam,
    rotor: Optional[RotorState],
    controls: Swashplate,
    rho: float,
    speed_of_sound: float,
) -> RotorLoads:
    """Disk-integrated loads of ``rotor_model``; a missing rotor state means an undeflected blade."""
    return rotor_model.loads(
        velocity, rates, lam, rotor or RotorState.zeros(), controls, rho, speed_of_sound
    )
