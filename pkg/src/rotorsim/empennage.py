# -*- coding: utf-8 -*-

"""Horizontal stabilator and vertical fin."""

from typing import Optional

import numpy as np

from rotorsim.config import SurfaceConfig
from rotorsim.errors import InvalidArgumentError
from rotorsim.fuselage import Loads
from rotorsim.tables import AirfoilTable, InterferenceTable
from rotorsim.tail_rotor import wake_interference

__all__ = ["HORIZONTAL", "VERTICAL", "surface_velocity", "surface_loads"]

HORIZONTAL = "horizontal_tail"
VERTICAL = "vertical_tail"


def surface_velocity(
    velocity,
    rates,
    surface: SurfaceConfig,
    lambda0: float = 0.0,
    mr_tip_speed: float = 0.0,
    beta_1c: float = 0.0,
    chi: Optional[float] = None,
    table: Optional[InterferenceTable] = None,
    component: str = HORIZONTAL,
) -> np.ndarray:
    """Local velocity relative to the air at a tail surface, body axes (ft/s).

    The free stream is scaled by the dynamic-pressure ratio, rotation adds
    ``omega x r`` and the main rotor wake adds its interference velocity.
    """
    velocity = np.asarray(velocity, dtype=float)
    rates = np.asarray(rates, dtype=float)
    local = surface.dynamic_pressure_ratio * velocity + np.cross(rates, surface.position)
    return local + wake_interference(lambda0, mr_tip_speed, beta_1c, chi, table, component)


def surface_loads(
    local_velocity,
    surface: SurfaceConfig,
    incidence: float,
    rho: float,
    table: AirfoilTable,
    component: str = HORIZONTAL,
    speed_of_sound: float = np.inf,
) -> Loads:
    """Lift and drag of one tail surface, moved to the CG.

    The stabilator works in the body x-z plane with angle of attack
    ``atan2(w, u) + incidence``; the fin works in the x-y plane with
    ``atan2(v, u) + incidence``. Lift is perpendicular to the in-plane flow,
    drag opposes it.
    """
    if not rho > 0.0:
        raise InvalidArgumentError(f"Air density must be positive, got {rho}")
    u, v, w = np.asarray(local_velocity, dtype=float)
    if component == HORIZONTAL:
        cross = w
    elif component == VERTICAL:
        cross = v
    else:
        raise InvalidArgumentError(f"Unknown tail surface '{component}'")
    speed = float(np.hypot(u, cross))
    if speed == 0.0:
        return Loads(source=component)
    alpha = np.arctan2(cross, u) + incidence
    cl, cd, _ = table(alpha, speed / speed_of_sound)
    dynamic = 0.5 * rho * speed**2 * surface.area
    if component == HORIZONTAL:
        lift_dir = np.array([w, 0.0, -u]) / speed
        drag_dir = -np.array([u, 0.0, w]) / speed
    else:
        lift_dir = np.array([v, -u, 0.0]) / speed
        drag_dir = -np.array([u, v, 0.0]) / speed
    force = dynamic * (cl * lift_dir + cd * drag_dir)
    return Loads.at_point(force, surface.position, component)
