# -*- coding: utf-8 -*-

"""Closed-form tail rotor with main-rotor wake interference and one inflow state.

The thrust axis is ``n = (0, cos(cant), -sin(cant))`` in body axes: the
tail rotor pushes the tail to the right, against the main rotor torque,
and the cant adds an upward component.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rotorsim.config import TailRotorConfig
from rotorsim.errors import InvalidArgumentError
from rotorsim.fuselage import Loads
from rotorsim.tables import InterferenceTable

__all__ = [
    "SPEED_FLOOR",
    "TailRotorOutput",
    "thrust_axis",
    "wake_interference",
    "tr_local_velocity",
    "tr_disk_components",
    "tr_thrust_torque",
    "tr_body_loads",
    "tr_total_speed",
    "tr_inflow_residual",
]

SPEED_FLOOR = 1.0  # ft/s


@dataclass(frozen=True)
class TailRotorOutput:
    thrust: float  # lbf
    torque: float  # lbf ft
    ct: float
    cq: float
    mu: float
    inflow: float  # total inflow ratio through the disk
    power: float  # ft lbf/s


def thrust_axis(geom: TailRotorConfig) -> np.ndarray:
    return np.array([0.0, np.cos(geom.cant), -np.sin(geom.cant)])


def wake_interference(
    lambda0: float,
    tip_speed: float,
    beta_1c: float,
    chi: Optional[float],
    table: Optional[InterferenceTable],
    component: str,
) -> np.ndarray:
    """Change of a component's velocity relative to the air caused by the main rotor wake.

    The table gives the wake velocity at the component as ``(vx, vz)`` times
    ``lambda0 * Omega R``, positive aft and down, so the relative velocity gains
    ``+vx`` along body x and ``-vz`` along body z.
    """
    if table is None or chi is None or lambda0 == 0.0:
        return np.zeros(3)
    vx, vz = table(chi, beta_1c, component)
    return lambda0 * tip_speed * np.array([vx, 0.0, -vz])


def tr_local_velocity(
    velocity,
    rates,
    geom: TailRotorConfig,
    lambda0: float = 0.0,
    mr_tip_speed: float = 0.0,
    beta_1c: float = 0.0,
    chi: Optional[float] = None,
    table: Optional[InterferenceTable] = None,
) -> np.ndarray:
    """Velocity of the tail rotor hub relative to the air, body axes (ft/s)."""
    velocity = np.asarray(velocity, dtype=float)
    rates = np.asarray(rates, dtype=float)
    local = velocity + np.cross(rates, geom.hub_position)
    return local + wake_interference(lambda0, mr_tip_speed, beta_1c, chi, table, "tail_rotor")


def tr_disk_components(local_velocity, geom: TailRotorConfig):
    """Split a hub velocity into in-plane speed and speed along the thrust axis."""
    local_velocity = np.asarray(local_velocity, dtype=float)
    axis = thrust_axis(geom)
    normal = float(local_velocity @ axis)
    in_plane = float(np.linalg.norm(local_velocity - normal * axis))
    return in_plane, normal


def tr_thrust_torque(
    theta0: float, local_velocity, lam: float, geom: TailRotorConfig, rho: float
) -> TailRotorOutput:
    """Thrust and torque from the closed-form coefficient expressions.

    ``C_T = (a sigma / 2) [theta0 (1/3 + mu^2/2) + theta_tw (1/4 + mu^2/4) - lambda/2]``
    and ``C_Q = lambda C_T + (sigma delta0 / 8)(1 + 4.65 mu^2)``, where
    ``lambda`` is the inflow state plus the normal velocity ratio.
    """
    if not rho > 0.0:
        raise InvalidArgumentError(f"Air density must be positive, got {rho}")
    tip = geom.omega * geom.radius
    in_plane, normal = tr_disk_components(local_velocity, geom)
    mu = in_plane / tip
    inflow = lam + normal / tip
    sigma, a = geom.solidity, geom.lift_slope
    ct = 0.5 * a * sigma * (
        theta0 * (1.0 / 3.0 + mu**2 / 2.0) + geom.twist * (0.25 + mu**2 / 4.0) - inflow / 2.0
    )
    cq = inflow * ct + sigma * geom.profile_drag / 8.0 * (1.0 + 4.65 * mu**2)
    scale = rho * np.pi * geom.radius**2 * tip**2
    return TailRotorOutput(
        thrust=scale * ct,
        torque=scale * geom.radius * cq,
        ct=ct,
        cq=cq,
        mu=mu,
        inflow=inflow,
        power=scale * geom.radius * cq * geom.omega,
    )


def tr_body_loads(thrust: float, torque: float, geom: TailRotorConfig) -> Loads:
    """Thrust along the canted axis at the hub plus the shaft torque reaction.

    The lateral component is ``T cos(cant)``, the vertical ``T sin(cant)`` (up).
    """
    axis = thrust_axis(geom)
    return Loads.at_point(thrust * axis, geom.hub_position, "tail_rotor", moment=-torque * axis)


def tr_total_speed(local_velocity, lam: float, geom: TailRotorConfig) -> float:
    """Flow speed through the disk including the induced velocity, floored at 1 ft/s."""
    tip = geom.omega * geom.radius
    in_plane, normal = tr_disk_components(local_velocity, geom)
    return max(float(np.hypot(in_plane, normal + lam * tip)), SPEED_FLOOR)


def tr_inflow_residual(lam: float, lam_dot: float, ct: float, speed: float, geom: TailRotorConfig) -> float:
    """One-state dynamic inflow residual.

    ``(4 R / (2 pi |V|)) lam_dot + lam - C_T Omega R / (2 |V|)``, with ``|V|``
    floored at :data:`SPEED_FLOOR`.
    """
    speed = max(abs(speed), SPEED_FLOOR)
    tau = 4.0 * geom.radius / (2.0 * np.pi * speed)
    return tau * lam_dot + lam - ct * geom.omega * geom.radius / (2.0 * speed)
