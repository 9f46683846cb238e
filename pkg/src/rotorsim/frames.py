# -*- coding: utf-8 -*-

"""Reference frames, rotation kinematics and unit conventions.

Frames are right-handed with z pointing down. Earth-fixed axes are
north-east-down, body axes are forward-right-down. Attitudes use the
yaw-pitch-roll (3-2-1) sequence.

Rotor azimuth ``psi`` is zero with the reference blade pointing aft
(downstream) and grows in the direction of rotation. The main rotor turns
counter-clockwise seen from above, so ``psi = 90 deg`` is the advancing
blade over the right side.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rotorsim.errors import GimbalLockError, InvalidArgumentError

__all__ = [
    "G_FTS2",
    "KTS_TO_FTS",
    "FT_TO_M",
    "HP_FTLBS",
    "FRAMES",
    "EulerAngles",
    "FrameTransform",
    "euler_to_dcm",
    "dcm_to_euler",
    "rotation_y",
    "euler_rate_matrix",
    "body_rates_to_euler_rates",
]

G_FTS2 = 32.174
KTS_TO_FTS = 1.6878098571
FT_TO_M = 0.3048
HP_FTLBS = 550.0

FRAMES = ("earth", "body", "hub", "rotating", "lagged")

_GIMBAL_MARGIN = 1e-6


@dataclass(frozen=True)
class EulerAngles:
    """Fuselage attitude with respect to the earth-fixed frame (rad)."""

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.phi, self.theta, self.psi])


@dataclass(frozen=True)
class FrameTransform:
    """Direction-cosine matrix mapping vector components from ``source`` to ``target``."""

    matrix: np.ndarray
    source: str = "earth"
    target: str = "body"

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.shape != (3, 3):
            raise InvalidArgumentError(f"A frame transform needs a 3x3 matrix, got {matrix.shape}")
        for tag in (self.source, self.target):
            if tag not in FRAMES:
                raise InvalidArgumentError(f"Unknown frame '{tag}', expected one of {FRAMES}")
        object.__setattr__(self, "matrix", matrix)

    def apply(self, vector) -> np.ndarray:
        """Express ``vector`` (given in the source frame) in the target frame."""
        return self.matrix @ np.asarray(vector, dtype=float)

    def inverse(self) -> "FrameTransform":
        return FrameTransform(self.matrix.T, source=self.target, target=self.source)

    def compose(self, other: "FrameTransform") -> "FrameTransform":
        """Return ``self`` applied after ``other``."""
        if other.target != self.source:
            raise InvalidArgumentError(
                f"Cannot chain {other.source}->{other.target} with {self.source}->{self.target}"
            )
        return FrameTransform(self.matrix @ other.matrix, source=other.source, target=self.target)


def _check_finite(*values: float) -> None:
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError(f"Angles must be finite, got {values}")


def euler_to_dcm(angles: EulerAngles) -> FrameTransform:
    """Earth-to-body transform for a 3-2-1 attitude.

    Args:
        angles: roll, pitch and yaw in radians.

    Returns:
        FrameTransform: earth -> body direction cosines. Applied to ``(0, 0, g)``
        it gives ``(-g sin(theta), g sin(phi) cos(theta), g cos(phi) cos(theta))``.
    """
    _check_finite(angles.phi, angles.theta, angles.psi)
    sphi, cphi = np.sin(angles.phi), np.cos(angles.phi)
    sthe, cthe = np.sin(angles.theta), np.cos(angles.theta)
    spsi, cpsi = np.sin(angles.psi), np.cos(angles.psi)
    matrix = np.array(
        [
            [cthe * cpsi, cthe * spsi, -sthe],
            [sphi * sthe * cpsi - cphi * spsi, sphi * sthe * spsi + cphi * cpsi, sphi * cthe],
            [cphi * sthe * cpsi + sphi * spsi, cphi * sthe * spsi - sphi * cpsi, cphi * cthe],
        ]
    )
    return FrameTransform(matrix, source="earth", target="body")


def dcm_to_euler(transform: FrameTransform) -> EulerAngles:
    """Recover the 3-2-1 angles of an earth-to-body transform."""
    m = transform.matrix
    theta = -np.arcsin(np.clip(m[0, 2], -1.0, 1.0))
    phi = np.arctan2(m[1, 2], m[2, 2])
    psi = np.arctan2(m[0, 1], m[0, 0])
    return EulerAngles(float(phi), float(theta), float(psi))


def rotation_y(angle: float, source: str = "body", target: str = "hub") -> FrameTransform:
    """Single rotation about the y axis, with the same sign convention as a pitch attitude."""
    _check_finite(angle)
    c, s = np.cos(angle), np.sin(angle)
    return FrameTransform(np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]]), source, target)


def euler_rate_matrix(phi: float, theta: float) -> np.ndarray:
    """Matrix mapping body rates (p, q, r) to Euler angle rates."""
    if abs(theta) >= np.pi / 2 - _GIMBAL_MARGIN:
        raise GimbalLockError(f"Pitch attitude {theta:.9e} rad is too close to +-pi/2")
    sphi, cphi = np.sin(phi), np.cos(phi)
    tthe, cthe = np.tan(theta), np.cos(theta)
    return np.array(
        [
            [1.0, sphi * tthe, cphi * tthe],
            [0.0, cphi, -sphi],
            [0.0, sphi / cthe, cphi / cthe],
        ]
    )


def body_rates_to_euler_rates(
    p: float, q: float, r: float, angles: EulerAngles
) -> Tuple[float, float, float]:
    """Euler kinematics: (phi_dot, theta_dot, psi_dot) from body rates."""
    _check_finite(p, q, r, angles.phi, angles.theta)
    rates = euler_rate_matrix(angles.phi, angles.theta) @ np.array([p, q, r])
    return float(rates[0]), float(rates[1]), float(rates[2])
