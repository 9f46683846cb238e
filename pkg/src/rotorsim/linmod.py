# -*- coding: utf-8 -*-

"""Linear state-space models about a trim point.

The implicit residual ``f(y, y_dot, u) = 0`` is expanded to first order,
``E dy_dot + F dy + G du = 0``, and solved for ``dy_dot = A dy + B du``
with ``A = -E^-1 F`` and ``B = -E^-1 G``.
"""

import configparser
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
from loguru import logger

from rotorsim.errors import ExtractionError, InvalidArgumentError, ProbeError
from rotorsim.frames import EulerAngles, euler_to_dcm
from rotorsim.utils import format_number, write_csv
from rotorsim.vehicle import CONTROL_NAMES, N_STATES, STATE_NAMES, STATE_UNITS, ControlVector, Vehicle
from rotorsim.version import get_version

__all__ = [
    "REL_STEP",
    "ABS_STEP",
    "LinearModel",
    "probe_steps",
    "jacobians",
    "extract_ab",
    "linearize",
    "export_linear_model",
    "augment_position",
    "POSITION_STATES",
]

REL_STEP = 1e-6
ABS_STEP = 1e-7
_ILL_CONDITIONED = 1e12

Residual = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def probe_steps(x, rel_step: float = REL_STEP, abs_step: float = ABS_STEP) -> np.ndarray:
    """Per-entry perturbation ``max(rel_step * |x|, abs_step)``."""
    return np.maximum(rel_step * np.abs(np.asarray(x, dtype=float)), abs_step)


def _central_columns(
    fun: Callable[[np.ndarray], np.ndarray], x0: np.ndarray, steps: np.ndarray, label: str, offset: int = 0
):
    columns = []
    for k in range(x0.size):
        dx = np.zeros_like(x0)
        dx[k] = steps[k]
        plus = np.asarray(fun(x0 + dx), dtype=float)
        minus = np.asarray(fun(x0 - dx), dtype=float)
        if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
            raise ProbeError(f"Non-finite residual while probing {label} column {k}", column=offset + k)
        columns.append((plus - minus) / (2.0 * steps[k]))
        logger.debug(f"Probed {label}[{k}] with step {steps[k]:.3e}")
    return np.column_stack(columns)


def jacobians(
    residual: Residual,
    y,
    y_dot,
    u,
    rel_step: float = REL_STEP,
    abs_step: float = ABS_STEP,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Central-difference Jacobians ``E = df/dy_dot``, ``F = df/dy``, ``G = df/du``.

    Args:
        residual: callable ``(y, y_dot, u) -> f`` on plain arrays.
        y: expansion state.
        y_dot: expansion state derivative (zero at a trim).
        u: expansion controls.
        rel_step: step relative to the entry magnitude.
        abs_step: step floor.

    Raises:
        ProbeError: a perturbed residual is not finite. Columns are numbered
            through ``y_dot``, ``y`` and ``u`` in that order.
    """
    y = np.asarray(y, dtype=float)
    y_dot = np.asarray(y_dot, dtype=float)
    u = np.asarray(u, dtype=float)
    e = _central_columns(lambda v: residual(y, v, u), y_dot, probe_steps(y_dot, rel_step, abs_step), "y_dot")
    f = _central_columns(
        lambda v: residual(v, y_dot, u), y, probe_steps(y, rel_step, abs_step), "y", offset=y_dot.size
    )
    g = _central_columns(
        lambda v: residual(y, y_dot, v), u, probe_steps(u, rel_step, abs_step), "u", offset=y_dot.size + y.size
    )
    return e, f, g


@dataclass(frozen=True)
class LinearModel:
    """``dy_dot = A dy + B du`` about a trim point."""

    a: np.ndarray
    b: np.ndarray
    state_names: Tuple[str, ...] = STATE_NAMES
    control_names: Tuple[str, ...] = CONTROL_NAMES
    trim_state: Optional[np.ndarray] = None
    trim_controls: Optional[np.ndarray] = None
    condition: Dict[str, float] = field(default_factory=dict)
    condition_number: float = float("nan")

    def __post_init__(self):
        n = len(self.state_names)
        if self.a.shape != (n, n) or self.b.shape != (n, len(self.control_names)):
            raise InvalidArgumentError(
                f"A {self.a.shape} and B {self.b.shape} do not match {n} states and "
                f"{len(self.control_names)} controls"
            )
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise ExtractionError("Linear model has non-finite entries", self.condition_number)

    @property
    def index(self) -> Dict[str, int]:
        """State name to row index."""
        return {name: i for i, name in enumerate(self.state_names)}

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def modes(self) -> np.ndarray:
        """Eigenvalues of A sorted by real part, then imaginary part."""
        eig = np.linalg.eigvals(self.a)
        return eig[np.lexsort((eig.imag, eig.real))]

    def is_stable(self) -> bool:
        return bool(np.all(self.modes().real < 0.0))

    def reduce(self, keep: Sequence[str]) -> "LinearModel":
        """Restrict to the named states; dropped states are held at their trim values."""
        index = self.index
        missing = [name for name in keep if name not in index]
        if missing:
            raise InvalidArgumentError(f"Unknown states {missing}")
        rows = [index[name] for name in keep]
        return LinearModel(
            a=self.a[np.ix_(rows, rows)],
            b=self.b[rows, :],
            state_names=tuple(keep),
            control_names=self.control_names,
            trim_state=None if self.trim_state is None else self.trim_state[rows],
            trim_controls=self.trim_controls,
            condition=dict(self.condition),
            condition_number=self.condition_number,
        )

    def a_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.a, index=list(self.state_names), columns=list(self.state_names))

    def b_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.b, index=list(self.state_names), columns=list(self.control_names))


def extract_ab(e, f, g, **model_fields) -> LinearModel:
    """Solve ``E A = -F`` and ``E B = -G`` through an LU factorization of E.

    Raises:
        ExtractionError: E is singular, with its condition estimate.
    """
    e = np.asarray(e, dtype=float)
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if e.shape[0] != e.shape[1] or f.shape != e.shape or g.shape[0] != e.shape[0]:
        raise InvalidArgumentError(f"Incompatible shapes E{e.shape}, F{f.shape}, G{g.shape}")
    condition = float(np.linalg.cond(e))
    logger.debug(f"Condition number of E: {condition:.3e}")
    if not np.isfinite(condition) or condition * np.finfo(float).eps >= 1.0:
        raise ExtractionError("E is singular", condition)
    if condition > _ILL_CONDITIONED:
        logger.warning(f"E is poorly conditioned (cond={condition:.3e})")
    try:
        factor = scipy.linalg.lu_factor(e, check_finite=True)
    except (ValueError, scipy.linalg.LinAlgError) as exc:
        raise ExtractionError(f"E could not be factored: {exc}", condition) from exc
    if np.any(np.diag(factor[0]) == 0.0):
        raise ExtractionError("E is singular", condition)
    a = -scipy.linalg.lu_solve(factor, f)
    b = -scipy.linalg.lu_solve(factor, g)
    n = e.shape[0]
    model_fields.setdefault("state_names", STATE_NAMES if n == N_STATES else tuple(f"x{i}" for i in range(n)))
    m = g.shape[1]
    model_fields.setdefault(
        "control_names", CONTROL_NAMES if m == len(CONTROL_NAMES) else tuple(f"u{i}" for i in range(m))
    )
    return LinearModel(a=a, b=b, condition_number=condition, **model_fields)


def linearize(trim, vehicle: Vehicle, rel_step: float = REL_STEP, abs_step: float = ABS_STEP) -> LinearModel:
    """Full-order linear model of ``vehicle`` about a converged trim.

    Args:
        trim: a :class:`rotorsim.trim.TrimResult`.
        vehicle: the vehicle the trim was solved for.
    """
    if trim.residual_norm >= 1e-6 * vehicle.weight:
        logger.warning(f"Linearizing about a poorly converged trim (|f|={trim.residual_norm:.3e})")

    def residual(y, y_dot, u):
        return vehicle.residual(y, y_dot, ControlVector.from_array(u), check_controls=False)

    e, f, g = jacobians(residual, trim.state, trim.state_dot, trim.controls.as_array(), rel_step, abs_step)
    condition = trim.condition
    model = extract_ab(
        e,
        f,
        g,
        trim_state=np.array(trim.state),
        trim_controls=trim.controls.as_array(),
        condition={
            "airspeed_kts": condition.airspeed,
            "flight_path_angle_rad": condition.gamma,
            "turn_rate_rad_s": condition.turn_rate,
            "gross_weight_lbf": condition.gross_weight,
            "altitude_ft": condition.altitude,
        },
    )
    logger.info(f"Linear model at {condition.airspeed:g} kts: {np.sum(model.modes().real >= 0)} unstable modes")
    return model


def export_linear_model(model: LinearModel, directory: str, config_text: str = "") -> Tuple[str, str, str]:
    """Write ``A.csv``, ``B.csv`` and ``manifest.cfg`` into ``directory``.

    The manifest lists the state order with units, the controls, the trim
    condition and the effective vehicle configuration.
    """
    os.makedirs(directory, exist_ok=True)
    a_path = write_csv(model.a_frame(), os.path.join(directory, "A.csv"), index=True)
    b_path = write_csv(model.b_frame(), os.path.join(directory, "B.csv"), index=True)
    units = {**dict(zip(STATE_NAMES, STATE_UNITS)), **{name: "ft" for name in POSITION_STATES}}
    manifest = configparser.ConfigParser(interpolation=None)
    manifest.optionxform = str
    manifest["model"] = {
        "states": ",".join(model.state_names),
        "units": ",".join(units.get(name, "-") for name in model.state_names),
        "controls": ",".join(model.control_names),
        "control_units": ",".join("%" for _ in model.control_names),
        "condition_number_E": format_number(model.condition_number),
        "rotorsim_version": get_version(with_git_hash=True),
    }
    manifest["trim"] = {key: format_number(value) for key, value in model.condition.items()}
    if model.trim_state is not None:
        manifest["trim"].update({name: format_number(v) for name, v in zip(model.state_names, model.trim_state)})
    if model.trim_controls is not None:
        manifest["trim"].update({name: format_number(v) for name, v in zip(model.control_names, model.trim_controls)})
    if config_text:
        vehicle = configparser.ConfigParser(interpolation=None)
        vehicle.optionxform = str
        vehicle.read_string(config_text)
        for section in vehicle.sections():
            manifest[f"vehicle.{section}"] = dict(vehicle.items(section))
    manifest_path = os.path.join(directory, "manifest.cfg")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as handle:
        manifest.write(handle)
    logger.info(f"Linear model written to {directory}")
    return a_path, b_path, manifest_path


POSITION_STATES = ("north", "east", "down")


def _earth_velocity(y: np.ndarray) -> np.ndarray:
    return euler_to_dcm(EulerAngles(y[6], y[7], y[8])).inverse().apply(y[0:3])


def augment_position(model: LinearModel) -> LinearModel:
    """Append earth-axis position states (ft) driven by the linearized navigation equation.

    The new rows are ``d(position)/dt = C' v`` expanded about the trim
    state; positions feed back into nothing, so their columns are zero.
    """
    if model.trim_state is None or model.n_states != N_STATES:
        raise InvalidArgumentError("Position augmentation needs a full-order model with its trim state")
    trim = np.asarray(model.trim_state, dtype=float)
    nav = _central_columns(_earth_velocity, trim, probe_steps(trim), "navigation")
    n = model.n_states
    a = np.zeros((n + 3, n + 3))
    a[:n, :n] = model.a
    a[n:, :n] = nav
    b = np.vstack([model.b, np.zeros((3, model.b.shape[1]))])
    return LinearModel(
        a=a,
        b=b,
        state_names=tuple(model.state_names) + POSITION_STATES,
        control_names=model.control_names,
        trim_state=np.concatenate([trim, np.zeros(3)]),
        trim_controls=model.trim_controls,
        condition=dict(model.condition),
        condition_number=model.condition_number,
    )
