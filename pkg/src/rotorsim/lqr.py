# -*- coding: utf-8 -*-

"""Infinite-horizon LQR with set-point tracking.

The control law is ``du = u_ss - K (x - x_ss)`` where ``K = R^-1 B' P`` and
``P`` solves the continuous algebraic Riccati equation. The targets
``(x_ss, u_ss)`` solve ``[A B; Cs Ds] [x_ss; u_ss] = [0; y_ss]``.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from rotorsim.errors import InfeasibleSetPointError, InvalidArgumentError, NumericError, RiccatiError

__all__ = [
    "CONTROL_LIMITS",
    "GainSet",
    "SetPoint",
    "ControlCommand",
    "solve_care",
    "riccati_residual",
    "lqr_gain",
    "default_weights",
    "design_gains",
    "selection_matrix",
    "steady_state_targets",
    "control_law",
]

CONTROL_LIMITS = (0.0, 100.0)

_POSITION_LIKE = ("north", "east", "down", "phi", "theta", "psi")
_VELOCITY_LIKE = ("u", "v", "w", "p", "q", "r")
_REFINEMENT_STEPS = 5


def riccati_residual(a, b, q, r, p) -> np.ndarray:
    """``A'P + PA - P B R^-1 B' P + Q``."""
    a, b, q, r, p = (np.asarray(m, dtype=float) for m in (a, b, q, r, p))
    return a.T @ p + p @ a - p @ b @ np.linalg.solve(r, b.T @ p) + q


def _check_weights(a, b, q, r) -> None:
    n, m = b.shape
    if a.shape != (n, n) or q.shape != (n, n) or r.shape != (m, m):
        raise InvalidArgumentError(f"Inconsistent shapes A{a.shape} B{b.shape} Q{q.shape} R{r.shape}")
    if not np.allclose(q, q.T) or not np.allclose(r, r.T):
        raise InvalidArgumentError("Q and R must be symmetric")
    if np.min(np.linalg.eigvalsh(q)) < -1e-12 * max(1.0, np.max(np.abs(q))):
        raise InvalidArgumentError("Q must be positive semi-definite")
    if np.min(np.linalg.eigvalsh(r)) <= 0.0:
        raise InvalidArgumentError("R must be positive definite")


def solve_care(a, b, q, r) -> np.ndarray:
    """Stabilizing solution of the continuous algebraic Riccati equation.

    The stable invariant subspace of the Hamiltonian
    ``[[A, -B R^-1 B'], [-Q, -A']]`` is taken from an ordered Schur form and
    polished with Newton-Kleinman steps (one Lyapunov solve each).

    Raises:
        RiccatiError: the Hamiltonian has eigenvalues on the imaginary axis
            (pair not stabilizable or not detectable) or the subspace basis
            is singular.
    """
    a, b, q, r = (np.atleast_2d(np.asarray(m, dtype=float)) for m in (a, b, q, r))
    _check_weights(a, b, q, r)
    n = a.shape[0]
    s = b @ np.linalg.solve(r, b.T)
    hamiltonian = np.block([[a, -s], [-q, -a.T]])
    scale = max(1.0, np.linalg.norm(hamiltonian, 1))
    eigenvalues = np.linalg.eigvals(hamiltonian)
    if np.min(np.abs(eigenvalues.real)) < 1e-10 * scale:
        raise RiccatiError("Hamiltonian has eigenvalues on the imaginary axis; (A, B) is not stabilizable")
    try:
        _, z, sdim = scipy.linalg.schur(hamiltonian, output="real", sort="lhp")
    except (ValueError, scipy.linalg.LinAlgError) as exc:
        raise NumericError(f"Schur decomposition of the Hamiltonian failed: {exc}") from exc
    if sdim != n:
        raise RiccatiError(f"Stable subspace has dimension {sdim}, expected {n}")
    u1, u2 = z[:n, :n], z[n:, :n]
    if np.linalg.cond(u1) * np.finfo(float).eps >= 1.0:
        raise RiccatiError("Stable subspace basis is singular")
    p = np.linalg.solve(u1.T, u2.T).T
    p = 0.5 * (p + p.T)

    tol = 1e-8 * max(np.max(np.abs(q)), np.finfo(float).tiny)
    best = np.max(np.abs(riccati_residual(a, b, q, r, p)))
    for _ in range(_REFINEMENT_STEPS):
        if best < tol or best == 0.0:
            break
        k = np.linalg.solve(r, b.T @ p)
        closed = a - b @ k
        candidate = scipy.linalg.solve_continuous_lyapunov(closed.T, -(q + k.T @ r @ k))
        candidate = 0.5 * (candidate + candidate.T)
        norm = np.max(np.abs(riccati_residual(a, b, q, r, candidate)))
        if not norm < best:
            break
        p, best = candidate, norm
    logger.debug(f"Riccati residual {best:.3e} for {n} states")
    return p


def lqr_gain(a, b, q, r) -> Tuple[np.ndarray, np.ndarray]:
    """``K = R^-1 B' P`` and ``P``."""
    p = solve_care(a, b, q, r)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    k = np.linalg.solve(np.atleast_2d(np.asarray(r, dtype=float)), b.T @ p)
    return k, p


@dataclass(frozen=True)
class GainSet:
    """State feedback gain with the weights it was designed for.

    Construction checks that ``A - B K`` is Hurwitz.
    """

    k: np.ndarray
    q: np.ndarray
    r: np.ndarray
    a: np.ndarray
    b: np.ndarray
    state_names: Tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        eig = self.closed_loop_modes()
        if not np.all(eig.real < 0.0):
            raise RiccatiError(f"Closed loop '{self.label}' is not Hurwitz: max Re = {np.max(eig.real):.3e}")

    def closed_loop_modes(self) -> np.ndarray:
        return np.linalg.eigvals(self.a - self.b @ self.k)


def default_weights(state_names: Sequence[str], n_controls: int = 4) -> Tuple[np.ndarray, np.ndarray]:
    """Q: 10 on positions and attitudes, 1 on velocities and rates, 0.01 elsewhere; R: identity."""
    diag = [
        10.0 if name in _POSITION_LIKE else 1.0 if name in _VELOCITY_LIKE else 0.01 for name in state_names
    ]
    return np.diag(diag), np.eye(n_controls)


def design_gains(
    model,
    q_diag: Optional[Dict[str, float]] = None,
    r_diag: Optional[Sequence[float]] = None,
    label: str = "",
) -> GainSet:
    """LQR gains for a :class:`rotorsim.linmod.LinearModel` with per-state weight overrides."""
    q, r = default_weights(model.state_names, len(model.control_names))
    index = model.index
    for name, weight in (q_diag or {}).items():
        if name not in index:
            raise InvalidArgumentError(f"Weight given for unknown state '{name}'")
        q[index[name], index[name]] = weight
    if r_diag is not None:
        r = np.diag(np.asarray(r_diag, dtype=float))
    k, _ = lqr_gain(model.a, model.b, q, r)
    gains = GainSet(k=k, q=q, r=r, a=model.a, b=model.b, state_names=tuple(model.state_names), label=label)
    logger.info(f"Gains '{label}': slowest closed-loop mode {np.max(gains.closed_loop_modes().real):.4f} 1/s")
    return gains


def selection_matrix(state_names: Sequence[str], outputs: Sequence[str]) -> np.ndarray:
    """Rows of the identity picking ``outputs`` out of the state vector."""
    index = {name: i for i, name in enumerate(state_names)}
    unknown = [name for name in outputs if name not in index]
    if unknown:
        raise InvalidArgumentError(f"Tracked outputs {unknown} are not states")
    cs = np.zeros((len(outputs), len(state_names)))
    for row, name in enumerate(outputs):
        cs[row, index[name]] = 1.0
    return cs


@dataclass(frozen=True)
class SetPoint:
    """Tracked outputs and the steady state that realizes them."""

    cs: np.ndarray
    ds: np.ndarray
    y_ss: np.ndarray
    x_ss: np.ndarray = field(default=None)
    u_ss: np.ndarray = field(default=None)

    @classmethod
    def solve(cls, a, b, cs, y_ss, ds=None) -> "SetPoint":
        cs = np.atleast_2d(np.asarray(cs, dtype=float))
        ds = np.zeros((cs.shape[0], np.shape(b)[1])) if ds is None else np.asarray(ds, dtype=float)
        x_ss, u_ss = steady_state_targets(a, b, cs, ds, y_ss)
        return cls(cs=cs, ds=ds, y_ss=np.asarray(y_ss, dtype=float), x_ss=x_ss, u_ss=u_ss)


def steady_state_targets(a, b, cs, ds, y_ss) -> Tuple[np.ndarray, np.ndarray]:
    """Solve ``A x + B u = 0`` and ``Cs x + Ds u = y_ss``.

    Raises:
        InfeasibleSetPointError: the block matrix is not square or singular; carries its rank.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    cs = np.atleast_2d(np.asarray(cs, dtype=float))
    ds = np.atleast_2d(np.asarray(ds, dtype=float))
    y_ss = np.atleast_1d(np.asarray(y_ss, dtype=float))
    n, m = b.shape
    block = np.block([[a, b], [cs, ds]])
    rank = int(np.linalg.matrix_rank(block))
    if block.shape[0] != block.shape[1]:
        raise InfeasibleSetPointError(
            f"Need exactly {m} tracked outputs for {m} controls, got {cs.shape[0]}", rank=rank
        )
    if rank < n + m:
        raise InfeasibleSetPointError(f"Set-point block has rank {rank} < {n + m}", rank=rank)
    solution = np.linalg.solve(block, np.concatenate([np.zeros(n), y_ss]))
    return solution[:n], solution[n:]


@dataclass(frozen=True)
class ControlCommand:
    """Clamped absolute command, the increment it came from and per-channel saturation flags."""

    command: np.ndarray
    delta: np.ndarray
    saturated: Tuple[bool, ...]

    @property
    def any_saturated(self) -> bool:
        return any(self.saturated)


def control_law(
    k,
    x,
    x_ss,
    u_ss,
    trim_controls=None,
    limits: Tuple[float, float] = CONTROL_LIMITS,
) -> ControlCommand:
    """``du = u_ss - K (x - x_ss)`` added to the trim controls and clamped to ``limits`` percent."""
    k = np.atleast_2d(np.asarray(k, dtype=float))
    delta = np.asarray(u_ss, dtype=float) - k @ (np.asarray(x, dtype=float) - np.asarray(x_ss, dtype=float))
    base = np.zeros_like(delta) if trim_controls is None else np.asarray(trim_controls, dtype=float)
    raw = base + delta
    command = np.clip(raw, limits[0], limits[1])
    saturated = tuple(bool(flag) for flag in command != raw)
    if any(saturated):
        logger.debug(f"Control saturation {saturated} at raw command {np.round(raw, 3)}")
    return ControlCommand(command=command, delta=command - base, saturated=saturated)
