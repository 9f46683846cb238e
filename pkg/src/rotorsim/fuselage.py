# -*- coding: utf-8 -*-

"""Rigid-body equations of motion and fuselage drag."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rotorsim.config import FuselageConfig
from rotorsim.errors import InvalidArgumentError
from rotorsim.frames import G_FTS2

__all__ = [
    "FuselageState",
    "MassProperties",
    "Loads",
    "force_residual",
    "moment_residual",
    "flat_plate_area",
    "fuselage_aero_loads",
]


@dataclass(frozen=True)
class FuselageState:
    """Body-axis velocities (ft/s), body rates (rad/s) and Euler angles (rad)."""

    u: float = 0.0
    v: float = 0.0
    w: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    @classmethod
    def from_array(cls, values) -> "FuselageState":
        values = np.asarray(values, dtype=float)
        if values.shape != (9,):
            raise InvalidArgumentError(f"A fuselage state has 9 entries, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("Fuselage state must be finite")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.u, self.v, self.w, self.p, self.q, self.r, self.phi, self.theta, self.psi]
        )

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    @property
    def rates(self) -> np.ndarray:
        return np.array([self.p, self.q, self.r])


@dataclass(frozen=True)
class MassProperties:
    mass: float
    inertia: np.ndarray

    def __post_init__(self):
        inertia = np.asarray(self.inertia, dtype=float)
        if not self.mass > 0.0:
            raise InvalidArgumentError(f"Mass must be positive, got {self.mass}")
        if inertia.shape != (3, 3) or not np.allclose(inertia, inertia.T):
            raise InvalidArgumentError("Inertia tensor must be a symmetric 3x3 matrix")
        if np.any(np.linalg.eigvalsh(inertia) <= 0.0):
            raise InvalidArgumentError("Inertia tensor must be positive definite")
        object.__setattr__(self, "inertia", inertia)

    @classmethod
    def from_config(cls, config: FuselageConfig) -> "MassProperties":
        return cls(config.mass, config.inertia)


@dataclass(frozen=True)
class Loads:
    """Force (lbf) and moment (lbf ft) about the CG in body axes."""

    force: np.ndarray = field(default_factory=lambda: np.zeros(3))
    moment: np.ndarray = field(default_factory=lambda: np.zeros(3))
    source: str = ""

    def __post_init__(self):
        force = np.asarray(self.force, dtype=float).reshape(3)
        moment = np.asarray(self.moment, dtype=float).reshape(3)
        object.__setattr__(self, "force", force)
        object.__setattr__(self, "moment", moment)

    @classmethod
    def at_point(cls, force, position, source: str = "", moment=None) -> "Loads":
        """Loads of a force applied at ``position`` (body axes, relative to the CG)."""
        force = np.asarray(force, dtype=float)
        total_moment = np.cross(np.asarray(position, dtype=float), force)
        if moment is not None:
            total_moment = total_moment + np.asarray(moment, dtype=float)
        return cls(force, total_moment, source)

    @property
    def X(self) -> float:  # noqa: N802
        return float(self.force[0])

    @property
    def Y(self) -> float:  # noqa: N802
        return float(self.force[1])

    @property
    def Z(self) -> float:  # noqa: N802
        return float(self.force[2])

    @property
    def L(self) -> float:  # noqa: N802
        return float(self.moment[0])

    @property
    def M(self) -> float:  # noqa: N802
        return float(self.moment[1])

    @property
    def N(self) -> float:  # noqa: N802
        return float(self.moment[2])

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.force, self.moment])

    def __add__(self, other: "Loads") -> "Loads":
        return Loads(self.force + other.force, self.moment + other.moment, "total")

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.force)) and np.all(np.isfinite(self.moment)))


def force_residual(
    state: FuselageState, state_dot: FuselageState, total: Loads, mp: MassProperties
) -> np.ndarray:
    """Translational equilibrium, zero when the loads balance inertia and gravity."""
    u, v, w = state.velocity
    p, q, r = state.rates
    sphi, cphi = np.sin(state.phi), np.cos(state.phi)
    sthe, cthe = np.sin(state.theta), np.cos(state.theta)
    m = mp.mass
    return np.array(
        [
            total.X - m * (state_dot.u + q * w - r * v + G_FTS2 * sthe),
            total.Y - m * (state_dot.v + r * u - p * w - G_FTS2 * sphi * cthe),
            total.Z - m * (state_dot.w + p * v - q * u - G_FTS2 * cphi * cthe),
        ]
    )


def moment_residual(
    state: FuselageState, state_dot: FuselageState, total: Loads, mp: MassProperties
) -> np.ndarray:
    """Rotational equilibrium with the full inertia tensor, products of inertia included."""
    omega = state.rates
    omega_dot = state_dot.rates
    inertia = mp.inertia
    return total.moment - (inertia @ omega_dot + np.cross(omega, inertia @ omega))


def flat_plate_area(config: FuselageConfig, alpha_deg: float) -> float:
    """Equivalent flat-plate area (ft^2); the fit takes the angle of attack in degrees."""
    scaled = config.flat_plate_alpha_scale * alpha_deg
    return config.flat_plate_area + config.flat_plate_alpha_gain * scaled**2


def fuselage_aero_loads(
    state: FuselageState,
    rho: float,
    config: FuselageConfig,
    alpha_deg: Optional[float] = None,
) -> Loads:
    """Fuselage drag acting at the CG, opposite to the velocity in the x-z plane.

    The dynamic pressure is taken on the x-z plane speed, which reduces to
    ``u`` in level flight and keeps the drag in vertical climb and descent.

    Args:
        state: fuselage state.
        rho: air density (slug/ft^3).
        config: fuselage parameters holding the flat-plate fit.
        alpha_deg: fuselage angle of attack in degrees. Computed from ``u`` and
            ``w`` when omitted.

    Returns:
        Loads: drag resolved along body x and z, no side force and no moments.
    """
    if not rho > 0.0:
        raise InvalidArgumentError(f"Air density must be positive, got {rho}")
    speed = np.hypot(state.u, state.w)
    if speed == 0.0:
        return Loads(source="fuselage")
    if alpha_deg is None:
        alpha_deg = float(np.rad2deg(np.arctan2(state.w, state.u)))
    drag = 0.5 * rho * speed**2 * flat_plate_area(config, alpha_deg)
    alpha = np.deg2rad(alpha_deg)
    force = -drag * np.array([np.cos(alpha), 0.0, np.sin(alpha)])
    return Loads(force, np.zeros(3), "fuselage")
