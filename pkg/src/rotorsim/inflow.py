# -*- coding: utf-8 -*-

"""Three-state Pitt-Peters dynamic inflow for the main rotor.

States are ordered ``[lambda0, lambda1c, lambda1s]`` and scale the local
inflow ``lambda0 + lambda1c (r/R) cos(psi) + lambda1s (r/R) sin(psi)``,
positive down through the disk. The forcing vector is
``[C_T, C_1c, C_1s]``: thrust coefficient and the first-harmonic moments of
the thrust distribution, ``sum(dT (r/R) cos(psi)) / (rho pi R^2 (Omega R)^2)``
and its sine counterpart. With azimuth zero aft, ``C_1c > 0`` means more
lift on the rear of the disk.

The static gain matrix in wind axes is

    L = [[1/2,               -(15 pi/64) X,      0          ],
         [(15 pi/64) X,      4 cos(chi)/(1+cos chi), 0      ],
         [0,                 0,          4/(1 + cos chi)    ]]

with ``X = tan(chi/2)``, divided by ``V_T`` on the first column block and by
the mass-flow parameter ``V`` on the harmonic columns. The coupling terms
are antisymmetric, which keeps ``L`` invertible over the whole skew range;
thrust alone then drives ``lambda1c = (15 pi/64) X C_T / V_T``, more inflow
over the rear of the disk. The apparent mass matrix is
``diag(8/(3 pi), 16/(45 pi), 16/(45 pi))``.
"""

from typing import Tuple

import numpy as np

from rotorsim.errors import SingularInflowError, UndefinedSkewError

__all__ = [
    "APPARENT_MASS",
    "wake_skew",
    "mass_flow",
    "static_gain",
    "inflow_residual",
    "steady_inflow",
    "local_inflow",
]

APPARENT_MASS = np.diag([8.0 / (3.0 * np.pi), 16.0 / (45.0 * np.pi), 16.0 / (45.0 * np.pi)])
_COUPLING = 15.0 * np.pi / 64.0
_FLOW_EPS = 1e-12


def local_inflow(lam, r: float, psi: float, radius: float) -> float:
    """Inflow ratio at radius ``r`` and azimuth ``psi`` from the three harmonics."""
    lam0, lam1c, lam1s = lam
    x = r / radius
    return float(lam0 + lam1c * x * np.cos(psi) + lam1s * x * np.sin(psi))


def wake_skew(lambda0: float, mu: float, climb_inflow: float = 0.0) -> float:
    """Wake skew angle from the in-plane advance ratio and the total normal inflow.

    Zero in hover, approaching pi/2 as the in-plane component dominates.
    """
    normal = lambda0 + climb_inflow
    if mu == 0.0 and normal == 0.0:
        raise UndefinedSkewError("Wake skew is undefined with zero in-plane and normal inflow")
    return float(np.arctan2(mu, normal))


def mass_flow(lambda0: float, mu: float, climb_inflow: float = 0.0) -> Tuple[float, float]:
    """Total flow ``V_T`` and mass-flow parameter ``V`` (both nondimensional)."""
    lam_total = lambda0 + climb_inflow
    v_total = float(np.hypot(mu, lam_total))
    if v_total < _FLOW_EPS:
        return v_total, v_total
    return v_total, float((mu**2 + lam_total * (lam_total + lambda0)) / v_total)


def static_gain(chi: float) -> np.ndarray:
    """Nondimensional static gain matrix before the mass-flow scaling."""
    cos_chi = np.cos(chi)
    coupling = _COUPLING * np.tan(chi / 2.0)
    return np.array(
        [
            [0.5, -coupling, 0.0],
            [coupling, 4.0 * cos_chi / (1.0 + cos_chi), 0.0],
            [0.0, 0.0, 4.0 / (1.0 + cos_chi)],
        ]
    )


def _inverse_gain_times(lam: np.ndarray, mu: float, climb_inflow: float) -> np.ndarray:
    if not np.any(lam):
        return np.zeros(3)
    v_total, v_flow = mass_flow(lam[0], mu, climb_inflow)
    if v_total < _FLOW_EPS or abs(v_flow) < _FLOW_EPS:
        raise SingularInflowError(
            f"Mass-flow parameter vanished (V_T={v_total:.3e}, V={v_flow:.3e}) with nonzero inflow"
        )
    chi = wake_skew(lam[0], mu, climb_inflow)
    return np.array([v_total, v_flow, v_flow]) * np.linalg.solve(static_gain(chi), lam)


def inflow_residual(
    lam,
    lam_dot,
    forcing,
    mu: float,
    omega: float,
    climb_inflow: float = 0.0,
) -> np.ndarray:
    """Residual ``(M/Omega) lam_dot + L^-1 lam - forcing`` of the three-state model.

    Args:
        lam: inflow states ``[lambda0, lambda1c, lambda1s]``.
        lam_dot: their time derivatives (1/s).
        forcing: ``[C_T, C_1c, C_1s]``.
        mu: in-plane advance ratio at the hub.
        omega: rotor speed (rad/s); converts time derivatives to rotor time.
        climb_inflow: normal inflow from hub motion, ``-w_hub / (Omega R)``.
    """
    lam = np.asarray(lam, dtype=float)
    lam_dot = np.asarray(lam_dot, dtype=float)
    forcing = np.asarray(forcing, dtype=float)
    return APPARENT_MASS @ lam_dot / omega + _inverse_gain_times(lam, mu, climb_inflow) - forcing


def steady_inflow(
    forcing, mu: float = 0.0, climb_inflow: float = 0.0, tol: float = 1e-12, max_iter: int = 200
) -> np.ndarray:
    """Steady inflow for a given forcing, by fixed-point iteration on the mass flow.

    In hover with thrust alone this reproduces ``lambda0 = sqrt(C_T / 2)``.
    """
    forcing = np.asarray(forcing, dtype=float)
    if not np.any(forcing):
        return np.zeros(3)
    lam = np.array([np.sqrt(abs(forcing[0]) / 2.0) + 1e-3, 0.0, 0.0])
    for _ in range(max_iter):
        v_total, v_flow = mass_flow(lam[0], mu, climb_inflow)
        chi = wake_skew(lam[0], mu, climb_inflow)
        update = static_gain(chi) @ (forcing / np.array([v_total, v_flow, v_flow]))
        step = update - lam
        lam = lam + 0.5 * step
        if np.max(np.abs(step)) < tol:
            return update
    raise SingularInflowError("Steady inflow iteration did not settle")
