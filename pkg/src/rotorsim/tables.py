# -*- coding: utf-8 -*-

"""Empirical lookup data: airfoil coefficients, wake interference and the stabilator schedule.

All tables are immutable once built. CSV files need a header row and may
contain comment lines starting with ``#``:

* airfoil tables: ``alpha_deg, mach, cl, cd, cm``
* interference table: ``chi_deg, beta1c_deg, component, vx, vz``
* stabilator schedule: ``speed_kts, incidence_deg``

The bundled datasets are approximations (thin-airfoil lift with a stall
break, a smooth downwash lobe, a linear stabilator schedule), not measured
data. Point ``TRAC_TABLES_DIR`` at another directory to replace them.
"""

import os
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.interpolate import RegularGridInterpolator

from rotorsim.errors import InvalidArgumentError, TableError

__all__ = [
    "TABLES_ENV",
    "COMPONENTS",
    "AirfoilTable",
    "InterferenceTable",
    "StabilatorSchedule",
    "TableSet",
    "tables_dir",
    "read_airfoil_csv",
    "read_interference_csv",
    "read_stabilator_csv",
    "load_tables",
    "lookup_airfoil",
    "lookup_interference",
    "stabilator_incidence",
    "describe_tables",
]

TABLES_ENV = "TRAC_TABLES_DIR"
COMPONENTS = ("tail_rotor", "horizontal_tail", "vertical_tail")

_THIS_DIR = os.path.dirname(os.path.abspath(__file__))
_GRID_TOL = 1e-9


def tables_dir() -> str:
    """Directory holding the CSV tables, honouring ``TRAC_TABLES_DIR``."""
    return os.environ.get(TABLES_ENV) or os.path.join(_THIS_DIR, "data")


def _strictly_increasing(values: np.ndarray) -> bool:
    return values.size > 1 and bool(np.all(np.diff(values) > 0))


def _grid(frame: pd.DataFrame, first: str, second: str, columns, name: str):
    """Pivot a long table into axes and a (n_first, n_second, n_columns) value block."""
    if frame.empty:
        raise TableError(f"{name}: table is empty")
    if frame.duplicated(subset=[first, second]).any():
        raise TableError(f"{name}: duplicate grid nodes")
    axis_a = np.sort(frame[first].unique())
    axis_b = np.sort(frame[second].unique())
    if len(frame) != axis_a.size * axis_b.size:
        raise TableError(
            f"{name}: {len(frame)} rows do not form a full {axis_a.size}x{axis_b.size} grid"
        )
    ordered = frame.sort_values([first, second])
    values = ordered[list(columns)].to_numpy(dtype=float).reshape(axis_a.size, axis_b.size, -1)
    if not np.all(np.isfinite(values)):
        raise TableError(f"{name}: non-finite entries")
    return axis_a.astype(float), axis_b.astype(float), values


def _read_csv(path: str, required, name: str) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise TableError(f"{name}: file not found: {path}")
    try:
        frame = pd.read_csv(path, comment="#", skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise TableError(f"{name}: cannot parse {path}: {exc}") from exc
    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise TableError(f"{name}: missing columns {missing} in {path}")
    return frame


class AirfoilTable:
    """Section coefficients on an angle-of-attack x Mach grid.

    Args:
        alpha: angle of attack nodes (rad), strictly increasing, covering [-pi, pi].
        mach: Mach nodes, strictly increasing, min <= 0.3 and max >= 0.9.
        values: array of shape (n_alpha, n_mach, 3) holding cl, cd, cm.
        name: label used in messages.
    """

    def __init__(self, alpha: np.ndarray, mach: np.ndarray, values: np.ndarray, name: str = "airfoil"):
        alpha = np.asarray(alpha, dtype=float)
        mach = np.asarray(mach, dtype=float)
        values = np.asarray(values, dtype=float)
        if not _strictly_increasing(alpha):
            raise TableError(f"{name}: alpha grid must be strictly increasing")
        if alpha[0] > -np.pi + _GRID_TOL or alpha[-1] < np.pi - _GRID_TOL:
            raise TableError(f"{name}: alpha grid must cover [-pi, pi]")
        if not _strictly_increasing(mach):
            raise TableError(f"{name}: Mach grid must be strictly increasing")
        if mach[0] > 0.3 or mach[-1] < 0.9:
            raise TableError(f"{name}: Mach grid must reach down to 0.3 and up to 0.9")
        if values.shape != (alpha.size, mach.size, 3):
            raise TableError(f"{name}: value block has shape {values.shape}")
        if np.any(values[..., 1] <= 0.0):
            raise TableError(f"{name}: drag coefficient must be positive everywhere")
        self.name = name
        self.alpha = alpha
        self.mach = mach
        self.values = values
        self._interp = RegularGridInterpolator((alpha, mach), values, method="linear")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, name: str = "airfoil") -> "AirfoilTable":
        frame = frame.assign(alpha=np.deg2rad(frame["alpha_deg"].astype(float)))
        alpha, mach, values = _grid(frame, "alpha", "mach", ("cl", "cd", "cm"), name)
        return cls(alpha, mach, values, name=name)

    def __call__(self, alpha, mach) -> np.ndarray:
        """Vectorized lookup; returns an array ``(..., 3)`` of cl, cd, cm."""
        alpha = np.asarray(alpha, dtype=float)
        mach = np.asarray(mach, dtype=float)
        if np.any(mach < 0.0):
            raise InvalidArgumentError("Mach number must be non-negative")
        wrapped = np.mod(alpha + np.pi, 2.0 * np.pi) - np.pi
        wrapped = np.clip(wrapped, self.alpha[0], self.alpha[-1])
        clipped = np.clip(mach, self.mach[0], self.mach[-1])
        alpha_b, mach_b = np.broadcast_arrays(wrapped, clipped)
        points = np.stack([alpha_b.ravel(), mach_b.ravel()], axis=-1)
        return self._interp(points).reshape(alpha_b.shape + (3,))


class InterferenceTable:
    """Main-rotor wake interference factors per receiving component.

    Values are the downwash factors (vx, vz) scaling ``lambda0 * Omega * R``:
    the velocity of the air at the component, positive aft and down.
    """

    def __init__(self, chi: np.ndarray, beta1c: np.ndarray, values: Dict[str, np.ndarray]):
        chi = np.asarray(chi, dtype=float)
        beta1c = np.asarray(beta1c, dtype=float)
        if not _strictly_increasing(chi) or not _strictly_increasing(beta1c):
            raise TableError("interference: grids must be strictly increasing")
        if chi[0] > _GRID_TOL or chi[-1] < np.pi / 2 - _GRID_TOL:
            raise TableError("interference: chi grid must cover [0, pi/2]")
        if set(values) != set(COMPONENTS):
            raise TableError(f"interference: components must be {COMPONENTS}, got {sorted(values)}")
        self.chi = chi
        self.beta1c = beta1c
        self.values = {}
        self._interp = {}
        for component, block in values.items():
            block = np.asarray(block, dtype=float)
            if block.shape != (chi.size, beta1c.size, 2):
                raise TableError(f"interference: {component} block has shape {block.shape}")
            self.values[component] = block
            self._interp[component] = RegularGridInterpolator((chi, beta1c), block)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "InterferenceTable":
        blocks = {}
        axes = None
        for component, part in frame.groupby("component"):
            part = part.assign(
                chi=np.deg2rad(part["chi_deg"].astype(float)),
                beta1c=np.deg2rad(part["beta1c_deg"].astype(float)),
            )
            chi, beta1c, block = _grid(part, "chi", "beta1c", ("vx", "vz"), f"interference/{component}")
            if axes is not None and not (
                np.array_equal(axes[0], chi) and np.array_equal(axes[1], beta1c)
            ):
                raise TableError("interference: all components must share one grid")
            axes = (chi, beta1c)
            blocks[str(component).strip()] = block
        if axes is None:
            raise TableError("interference: table is empty")
        return cls(axes[0], axes[1], blocks)

    def __call__(self, chi: float, beta1c: float, component: str) -> Tuple[float, float]:
        if component not in self._interp:
            raise InvalidArgumentError(f"Unknown interference component '{component}'")
        point = [
            float(np.clip(chi, self.chi[0], self.chi[-1])),
            float(np.clip(beta1c, self.beta1c[0], self.beta1c[-1])),
        ]
        vx, vz = self._interp[component]([point])[0]
        return float(vx), float(vz)


class StabilatorSchedule:
    """Piecewise-linear stabilator incidence versus airspeed."""

    def __init__(self, speeds_kts: np.ndarray, incidence: np.ndarray):
        speeds_kts = np.asarray(speeds_kts, dtype=float)
        incidence = np.asarray(incidence, dtype=float)
        if speeds_kts.size == 0 or speeds_kts.shape != incidence.shape:
            raise TableError("stabilator: schedule is empty or ragged")
        if speeds_kts.size > 1 and not _strictly_increasing(speeds_kts):
            raise TableError("stabilator: airspeed breakpoints must be strictly increasing")
        if np.any(np.diff(incidence) > 0.0):
            raise TableError("stabilator: incidence must not increase with airspeed")
        self.speeds_kts = speeds_kts
        self.incidence = incidence

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "StabilatorSchedule":
        frame = frame.sort_values("speed_kts")
        return cls(frame["speed_kts"].to_numpy(float), np.deg2rad(frame["incidence_deg"].to_numpy(float)))

    def __call__(self, airspeed_kts: float) -> float:
        if airspeed_kts < 0.0:
            raise InvalidArgumentError(f"Airspeed must be non-negative, got {airspeed_kts}")
        return float(np.interp(airspeed_kts, self.speeds_kts, self.incidence))


def read_airfoil_csv(path: str, name: Optional[str] = None) -> AirfoilTable:
    name = name or os.path.basename(path)
    frame = _read_csv(path, ("alpha_deg", "mach", "cl", "cd", "cm"), name)
    return AirfoilTable.from_frame(frame, name=name)


def read_interference_csv(path: str) -> InterferenceTable:
    frame = _read_csv(path, ("chi_deg", "beta1c_deg", "component", "vx", "vz"), "interference")
    frame["component"] = frame["component"].astype(str).str.strip()
    return InterferenceTable.from_frame(frame)


def read_stabilator_csv(path: str) -> StabilatorSchedule:
    frame = _read_csv(path, ("speed_kts", "incidence_deg"), "stabilator")
    return StabilatorSchedule.from_frame(frame)


@dataclass(frozen=True)
class TableSet:
    rotor_airfoil: AirfoilTable
    tail_airfoil: AirfoilTable
    interference: InterferenceTable
    stabilator: StabilatorSchedule


def load_tables(
    rotor_airfoil: str = "rotor_airfoil.csv",
    tail_airfoil: str = "tail_airfoil.csv",
    interference: str = "interference.csv",
    stabilator: str = "stabilator.csv",
    directory: Optional[str] = None,
) -> TableSet:
    """Read the four tables; relative file names resolve against :func:`tables_dir`."""
    directory = directory or tables_dir()

    def resolve(filename: str) -> str:
        return filename if os.path.isabs(filename) else os.path.join(directory, filename)

    logger.debug(f"Loading lookup tables from {directory}")
    return TableSet(
        rotor_airfoil=read_airfoil_csv(resolve(rotor_airfoil), "rotor_airfoil"),
        tail_airfoil=read_airfoil_csv(resolve(tail_airfoil), "tail_airfoil"),
        interference=read_interference_csv(resolve(interference)),
        stabilator=read_stabilator_csv(resolve(stabilator)),
    )


def lookup_airfoil(table: AirfoilTable, alpha: float, mach: float) -> Tuple[float, float, float]:
    """Bilinear section coefficients (cl, cd, cm) at one point."""
    cl, cd, cm = table(alpha, mach)
    return float(cl), float(cd), float(cm)


def lookup_interference(
    table: InterferenceTable, chi: float, beta_1c: float, component: str
) -> Tuple[float, float]:
    return table(chi, beta_1c, component)


def stabilator_incidence(schedule: StabilatorSchedule, airspeed: float) -> float:
    return schedule(airspeed)


def describe_tables(tables: TableSet) -> pd.DataFrame:
    """Grid coverage summary, one row per table."""
    rows = []
    for label in ("rotor_airfoil", "tail_airfoil"):
        table = getattr(tables, label)
        rows.append(
            {
                "table": label,
                "axis_1": "alpha_deg",
                "min_1": np.rad2deg(table.alpha[0]),
                "max_1": np.rad2deg(table.alpha[-1]),
                "nodes_1": table.alpha.size,
                "axis_2": "mach",
                "min_2": table.mach[0],
                "max_2": table.mach[-1],
                "nodes_2": table.mach.size,
            }
        )
    inter = tables.interference
    rows.append(
        {
            "table": "interference",
            "axis_1": "chi_deg",
            "min_1": np.rad2deg(inter.chi[0]),
            "max_1": np.rad2deg(inter.chi[-1]),
            "nodes_1": inter.chi.size,
            "axis_2": "beta1c_deg",
            "min_2": np.rad2deg(inter.beta1c[0]),
            "max_2": np.rad2deg(inter.beta1c[-1]),
            "nodes_2": inter.beta1c.size,
        }
    )
    stab = tables.stabilator
    rows.append(
        {
            "table": "stabilator",
            "axis_1": "speed_kts",
            "min_1": stab.speeds_kts[0],
            "max_1": stab.speeds_kts[-1],
            "nodes_1": stab.speeds_kts.size,
            "axis_2": "incidence_deg",
            "min_2": np.rad2deg(stab.incidence.min()),
            "max_2": np.rad2deg(stab.incidence.max()),
            "nodes_2": stab.incidence.size,
        }
    )
    return pd.DataFrame(rows)
