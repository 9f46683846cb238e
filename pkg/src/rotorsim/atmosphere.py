# -*- coding: utf-8 -*-

"""International standard atmosphere in imperial units."""

from dataclasses import dataclass

import numpy as np

from rotorsim.errors import InvalidArgumentError

__all__ = ["Atmosphere", "density_at", "speed_of_sound_at", "atmosphere_at"]

RHO_SL = 0.0023769  # slug/ft^3
T_SL = 518.67  # R
A_SL = 1116.45  # ft/s
LAPSE = 0.00356616  # R/ft
H_TROPOPAUSE = 36089.24  # ft
MAX_ALTITUDE = 40000.0  # ft
_EXPONENT = 4.2558797
_SCALE_HEIGHT = 20805.8  # ft, isothermal layer


@dataclass(frozen=True)
class Atmosphere:
    altitude: float  # ft
    density: float  # slug/ft^3
    speed_of_sound: float  # ft/s


def _check(altitude: float) -> None:
    if not np.isfinite(altitude) or altitude < 0.0 or altitude > MAX_ALTITUDE:
        raise InvalidArgumentError(
            f"Altitude {altitude} ft outside the supported range [0, {MAX_ALTITUDE:.0f}] ft"
        )


def _temperature_ratio(altitude: float) -> float:
    return 1.0 - LAPSE * min(altitude, H_TROPOPAUSE) / T_SL


def density_at(altitude: float) -> float:
    """ISA density (slug/ft^3) for ``0 <= altitude <= 40000`` ft."""
    _check(altitude)
    rho = RHO_SL * _temperature_ratio(altitude) ** _EXPONENT
    if altitude > H_TROPOPAUSE:
        rho *= np.exp(-(altitude - H_TROPOPAUSE) / _SCALE_HEIGHT)
    return float(rho)


def speed_of_sound_at(altitude: float) -> float:
    _check(altitude)
    return float(A_SL * np.sqrt(_temperature_ratio(altitude)))


def atmosphere_at(altitude: float) -> Atmosphere:
    return Atmosphere(altitude, density_at(altitude), speed_of_sound_at(altitude))
