# -*- coding: utf-8 -*-

"""Vehicle configuration: sectioned key-value files mapped onto frozen dataclasses.

Keys carry their unit in the name (``radius_ft``, ``mast_tilt_deg``). Angles
are written in degrees and stored in radians. Defaults reproduce the UH-60
configuration table; entries the table does not provide are marked
``not from table`` in ``data/uh60.cfg``.
"""

import configparser
import io
import os
from dataclasses import dataclass, field, fields, replace
from typing import Dict, Iterable, Optional, Tuple, Type, TypeVar

import numpy as np
from loguru import logger

from rotorsim.errors import ConfigError
from rotorsim.frames import G_FTS2

__all__ = [
    "DATA_DIR",
    "DEFAULT_VEHICLE",
    "MainRotorConfig",
    "TailRotorConfig",
    "FuselageConfig",
    "SurfaceConfig",
    "RiggingConfig",
    "TablesConfig",
    "VehicleConfig",
    "read_sections",
    "parse_overrides",
    "section_from_mapping",
    "section_to_mapping",
]

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
DEFAULT_VEHICLE = os.path.join(DATA_DIR, "uh60.cfg")

T = TypeVar("T")


def _key(name: str, default, unit: Optional[str] = None):
    return field(default=default, metadata={"key": name, "unit": unit})


def _to_internal(value: float, unit: Optional[str]) -> float:
    return float(np.deg2rad(value)) if unit == "deg" else value


def _to_file(value, unit: Optional[str]):
    return float(np.rad2deg(value)) if unit == "deg" else value


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def _coerce(raw: str, default, where: str):
    try:
        if isinstance(default, bool):
            lowered = raw.strip().lower()
            if lowered not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(raw)
            return lowered in ("true", "yes", "1")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse '{raw}' as {type(default).__name__}") from exc
    return raw.strip()


def section_from_mapping(cls: Type[T], mapping: Dict[str, str], section: str) -> T:
    """Build a section dataclass from raw strings, rejecting unknown keys."""
    by_key = {f.metadata["key"]: f for f in fields(cls)}
    unknown = sorted(set(mapping) - set(by_key))
    if unknown:
        raise ConfigError(f"[{section}] unknown keys: {', '.join(unknown)}")
    kwargs = {}
    for key, raw in mapping.items():
        item = by_key[key]
        value = _coerce(raw, item.default, f"[{section}] {key}")
        kwargs[item.name] = _to_internal(value, item.metadata["unit"])
    return cls(**kwargs)


def section_to_mapping(instance) -> Dict[str, str]:
    return {
        f.metadata["key"]: _format(_to_file(getattr(instance, f.name), f.metadata["unit"]))
        for f in fields(instance)
    }


def read_sections(path: str) -> configparser.ConfigParser:
    """Read a sectioned key-value file; a missing or malformed file is a config error."""
    if not os.path.isfile(path):
        raise ConfigError(f"Configuration file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ConfigError(f"Malformed configuration file {path}: {exc}") from exc
    return parser


def parse_overrides(overrides: Optional[Iterable[str]]) -> Dict[Tuple[str, str], str]:
    """Turn ``section.key=value`` strings into a lookup."""
    parsed = {}
    for item in overrides or ():
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"Override '{item}' is not of the form section.key=value")
        target, value = item.split("=", 1)
        section, key = target.strip().split(".", 1)
        parsed[(section.strip(), key.strip())] = value.strip()
    return parsed


def _positive(where: str, **values: float) -> None:
    for name, value in values.items():
        if not np.isfinite(value) or value <= 0.0:
            raise ConfigError(f"[{where}] {name} must be positive, got {value}")


@dataclass(frozen=True)
class MainRotorConfig:
    blades: int = _key("blades", 4)
    radius: float = _key("radius_ft", 26.83)
    chord: float = _key("chord_ft", 1.75)
    omega: float = _key("omega_rad_s", 27.0)
    tip_speed: float = _key("tip_speed_ft_s", 724.41)
    mast_tilt: float = _key("mast_tilt_deg", float(np.deg2rad(-3.0)), "deg")
    root_cutout: float = _key("first_airfoil_section_ft", 5.08)
    twist: float = _key("twist_deg", float(np.deg2rad(-18.0)), "deg")
    solidity: float = _key("solidity", 0.083)
    lock_number: float = _key("lock_number", 5.11)
    control_phase: float = _key("control_phase_deg", float(np.deg2rad(-9.7)), "deg")
    hinge_offset: float = _key("hinge_offset_ft", 0.0466 * 26.83)
    blade_mass: float = _key("blade_mass_slug_ft", 0.433)
    lift_slope: float = _key("lift_slope_per_rad", 5.73)
    flap_spring: float = _key("flap_spring_ftlb_rad", 0.0)
    flap_damper: float = _key("flap_damper_ftlb_s_rad", 0.0)
    lag_spring: float = _key("lag_spring_ftlb_rad", 0.0)
    lag_damper: float = _key("lag_damper_ftlb_s_rad", 0.0)
    hub_x: float = _key("hub_x_ft", 0.0)
    hub_y: float = _key("hub_y_ft", 0.0)
    hub_z: float = _key("hub_z_ft", -5.8)
    radial_elements: int = _key("radial_elements", 100)
    azimuth_steps: int = _key("azimuth_steps", 360)

    def __post_init__(self):
        _positive(
            "main_rotor",
            radius=self.radius,
            chord=self.chord,
            omega=self.omega,
            blade_mass=self.blade_mass,
        )
        if self.blades < 2:
            raise ConfigError(f"[main_rotor] blades must be at least 2, got {self.blades}")
        if not 0.0 <= self.hinge_offset < self.radius:
            raise ConfigError("[main_rotor] hinge offset must satisfy 0 <= eR < R")
        if not self.hinge_offset <= self.root_cutout < self.radius:
            raise ConfigError("[main_rotor] first airfoil section must lie between hinge and tip")
        if self.radial_elements < 1 or self.azimuth_steps < 4:
            raise ConfigError("[main_rotor] need at least 1 radial element and 4 azimuth steps")
        if abs(self.omega * self.radius - self.tip_speed) > 1e-3 * self.tip_speed:
            logger.warning(
                f"Main rotor tip speed {self.tip_speed} ft/s differs from omega*R = "
                f"{self.omega * self.radius:.2f} ft/s; omega*R is used"
            )

    @property
    def hub_position(self) -> np.ndarray:
        return np.array([self.hub_x, self.hub_y, self.hub_z])


@dataclass(frozen=True)
class TailRotorConfig:
    blades: int = _key("blades", 4)
    radius: float = _key("radius_ft", 5.5)
    chord: float = _key("chord_ft", 0.81)
    omega: float = _key("omega_rad_s", 124.62)
    tip_speed: float = _key("tip_speed_ft_s", 685.41)
    cant: float = _key("cant_deg", float(np.deg2rad(20.0)), "deg")
    twist: float = _key("twist_deg", 0.0, "deg")
    lift_slope: float = _key("lift_slope_per_rad", 5.73)
    profile_drag: float = _key("profile_drag", 0.008)
    hub_x: float = _key("hub_x_ft", -31.0)
    hub_y: float = _key("hub_y_ft", 1.2)
    hub_z: float = _key("hub_z_ft", -6.3)

    def __post_init__(self):
        _positive("tail_rotor", radius=self.radius, chord=self.chord, omega=self.omega)
        if self.blades < 1:
            raise ConfigError("[tail_rotor] blades must be at least 1")

    @property
    def hub_position(self) -> np.ndarray:
        return np.array([self.hub_x, self.hub_y, self.hub_z])

    @property
    def solidity(self) -> float:
        return self.blades * self.chord / (np.pi * self.radius)


@dataclass(frozen=True)
class FuselageConfig:
    gross_weight: float = _key("gross_weight_lbf", 16000.0)
    ixx: float = _key("ixx_slug_ft2", 4659.0)
    iyy: float = _key("iyy_slug_ft2", 38512.0)
    izz: float = _key("izz_slug_ft2", 36796.0)
    ixz: float = _key("ixz_slug_ft2", 1882.0)
    ixy: float = _key("ixy_slug_ft2", 0.0)
    iyz: float = _key("iyz_slug_ft2", 0.0)
    flat_plate_area: float = _key("flat_plate_area_ft2", 35.14)
    flat_plate_alpha_gain: float = _key("flat_plate_alpha_gain_ft2", 0.016)
    flat_plate_alpha_scale: float = _key("flat_plate_alpha_scale", 1.66)

    def __post_init__(self):
        _positive("fuselage", gross_weight=self.gross_weight, flat_plate_area=self.flat_plate_area)
        if np.any(np.linalg.eigvalsh(self.inertia) <= 0.0):
            raise ConfigError("[fuselage] inertia tensor must be positive definite")

    @property
    def mass(self) -> float:
        return self.gross_weight / G_FTS2

    @property
    def inertia(self) -> np.ndarray:
        return np.array(
            [
                [self.ixx, -self.ixy, -self.ixz],
                [-self.ixy, self.iyy, -self.iyz],
                [-self.ixz, -self.iyz, self.izz],
            ]
        )


@dataclass(frozen=True)
class SurfaceConfig:
    area: float = _key("area_ft2", 45.0)
    station_x: float = _key("station_x_ft", -28.5)
    station_y: float = _key("station_y_ft", 0.0)
    station_z: float = _key("station_z_ft", 0.3)
    dynamic_pressure_ratio: float = _key("dynamic_pressure_ratio", 0.9)
    incidence: float = _key("incidence_deg", 0.0, "deg")
    scheduled: bool = _key("scheduled", True)

    def __post_init__(self):
        _positive("surface", area=self.area)
        if not 0.0 < self.dynamic_pressure_ratio <= 1.0:
            raise ConfigError("dynamic pressure ratio must lie in (0, 1]")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.station_x, self.station_y, self.station_z])


_FIN_DEFAULTS = dict(
    area=32.3, station_x=-27.9, station_y=0.0, station_z=-2.1, incidence=0.0, scheduled=False
)


@dataclass(frozen=True)
class RiggingConfig:
    """Percent travel endpoints per channel, as (angle at 0 %, angle at 100 %)."""

    collective_low: float = _key("collective_0pct_deg", 0.0, "deg")
    collective_high: float = _key("collective_100pct_deg", float(np.deg2rad(26.0)), "deg")
    lateral_low: float = _key("lateral_0pct_deg", float(np.deg2rad(8.0)), "deg")
    lateral_high: float = _key("lateral_100pct_deg", float(np.deg2rad(-8.0)), "deg")
    longitudinal_low: float = _key("longitudinal_0pct_deg", float(np.deg2rad(-16.0)), "deg")
    longitudinal_high: float = _key("longitudinal_100pct_deg", float(np.deg2rad(16.0)), "deg")
    pedal_low: float = _key("pedal_0pct_deg", float(np.deg2rad(24.0)), "deg")
    pedal_high: float = _key("pedal_100pct_deg", float(np.deg2rad(-6.0)), "deg")

    def __post_init__(self):
        for name, (low, high) in self.channels.items():
            if low == high:
                raise ConfigError(f"[rigging] {name} travel has zero range")

    @property
    def channels(self) -> Dict[str, Tuple[float, float]]:
        return {
            "collective": (self.collective_low, self.collective_high),
            "lateral": (self.lateral_low, self.lateral_high),
            "longitudinal": (self.longitudinal_low, self.longitudinal_high),
            "pedal": (self.pedal_low, self.pedal_high),
        }


@dataclass(frozen=True)
class TablesConfig:
    rotor_airfoil: str = _key("rotor_airfoil", "rotor_airfoil.csv")
    tail_airfoil: str = _key("tail_airfoil", "tail_airfoil.csv")
    interference: str = _key("interference", "interference.csv")
    stabilator: str = _key("stabilator", "stabilator.csv")


_SECTIONS = {
    "main_rotor": MainRotorConfig,
    "tail_rotor": TailRotorConfig,
    "fuselage": FuselageConfig,
    "horizontal_tail": SurfaceConfig,
    "vertical_tail": SurfaceConfig,
    "rigging": RiggingConfig,
    "tables": TablesConfig,
}


@dataclass(frozen=True)
class VehicleConfig:
    """All physical parameters of the aircraft plus rigging and table references."""

    main_rotor: MainRotorConfig = field(default_factory=MainRotorConfig)
    tail_rotor: TailRotorConfig = field(default_factory=TailRotorConfig)
    fuselage: FuselageConfig = field(default_factory=FuselageConfig)
    horizontal_tail: SurfaceConfig = field(default_factory=SurfaceConfig)
    vertical_tail: SurfaceConfig = field(default_factory=lambda: SurfaceConfig(**_FIN_DEFAULTS))
    rigging: RiggingConfig = field(default_factory=RiggingConfig)
    tables: TablesConfig = field(default_factory=TablesConfig)
    source: str = "defaults"

    @classmethod
    def from_file(
        cls, path: str = DEFAULT_VEHICLE, overrides: Optional[Iterable[str]] = None
    ) -> "VehicleConfig":
        """Read a vehicle file and apply ``section.key=value`` overrides."""
        parser = read_sections(path)
        for (section, key), value in parse_overrides(overrides).items():
            if section not in _SECTIONS:
                raise ConfigError(f"Override names unknown section '{section}'")
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, key, value)
        unknown = sorted(set(parser.sections()) - set(_SECTIONS))
        if unknown:
            raise ConfigError(f"{path}: unknown sections {', '.join(unknown)}")
        parts = {}
        for section, cls_ in _SECTIONS.items():
            mapping = dict(parser.items(section)) if parser.has_section(section) else {}
            if section == "vertical_tail":
                base = section_to_mapping(SurfaceConfig(**_FIN_DEFAULTS))
                mapping = {**base, **mapping}
            parts[section] = section_from_mapping(cls_, mapping, section)
        logger.debug(f"Loaded vehicle configuration from {path}")
        return cls(**parts, source=path)

    def with_weight(self, gross_weight: float) -> "VehicleConfig":
        return replace(self, fuselage=replace(self.fuselage, gross_weight=gross_weight))

    def with_overrides(self, overrides: Iterable[str]) -> "VehicleConfig":
        """Apply overrides to an in-memory configuration."""
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        parser.read_string(self.to_text())
        for (section, key), value in parse_overrides(overrides).items():
            if section not in _SECTIONS:
                raise ConfigError(f"Override names unknown section '{section}'")
            parser.set(section, key, value)
        parts = {
            section: section_from_mapping(cls_, dict(parser.items(section)), section)
            for section, cls_ in _SECTIONS.items()
        }
        return VehicleConfig(**parts, source=self.source)

    def to_text(self) -> str:
        """Render the effective configuration in the file format."""
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        for section in _SECTIONS:
            parser[section] = section_to_mapping(getattr(self, section))
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue()
