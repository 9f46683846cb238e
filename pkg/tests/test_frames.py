# -*- coding: utf-8 -*-

"""Tests for frames and the standard atmosphere."""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from rotorsim.atmosphere import RHO_SL, atmosphere_at, density_at, speed_of_sound_at
from rotorsim.errors import GimbalLockError, InvalidArgumentError
from rotorsim.frames import (
    G_FTS2,
    EulerAngles,
    FrameTransform,
    body_rates_to_euler_rates,
    dcm_to_euler,
    euler_rate_matrix,
    euler_to_dcm,
    rotation_y,
)


class TestDirectionCosines(unittest.TestCase):
    """Earth-to-body rotations."""

    def test_identity_at_zero_attitude(self):
        """Zero angles give the identity."""
        assert_allclose(euler_to_dcm(EulerAngles()).matrix, np.eye(3), atol=1e-15)

    def test_gravity_projection(self):
        """Gravity in body axes follows the closed form."""
        phi, theta = 0.3, -0.2
        g = euler_to_dcm(EulerAngles(phi, theta, 1.1)).apply([0.0, 0.0, G_FTS2])
        expected = G_FTS2 * np.array(
            [-np.sin(theta), np.sin(phi) * np.cos(theta), np.cos(phi) * np.cos(theta)]
        )
        assert_allclose(g, expected, atol=1e-12)

    def test_orthonormal(self):
        """Rotation matrices are orthonormal with unit determinant."""
        m = euler_to_dcm(EulerAngles(0.4, 0.7, -2.0)).matrix
        assert_allclose(m @ m.T, np.eye(3), atol=1e-14)
        self.assertAlmostEqual(np.linalg.det(m), 1.0, places=14)

    def test_recover_angles(self):
        """Angles come back from their direction cosines."""
        angles = EulerAngles(-0.5, 0.25, 2.5)
        back = dcm_to_euler(euler_to_dcm(angles))
        assert_allclose(back.as_array(), angles.as_array(), atol=1e-12)

    def test_inverse_and_compose(self):
        """A transform composed with its inverse is the identity on the source frame."""
        t = euler_to_dcm(EulerAngles(0.1, 0.2, 0.3))
        loop = t.inverse().compose(t)
        self.assertEqual((loop.source, loop.target), ("earth", "earth"))
        assert_allclose(loop.matrix, np.eye(3), atol=1e-14)

    def test_compose_checks_frames(self):
        """Chaining mismatched frames is rejected."""
        t = euler_to_dcm(EulerAngles())
        with self.assertRaises(InvalidArgumentError):
            t.compose(t)

    def test_rejects_bad_input(self):
        """Shapes, tags and non-finite angles are checked."""
        with self.assertRaises(InvalidArgumentError):
            FrameTransform(np.eye(2))
        with self.assertRaises(InvalidArgumentError):
            FrameTransform(np.eye(3), source="wind")
        with self.assertRaises(InvalidArgumentError):
            euler_to_dcm(EulerAngles(np.nan, 0.0, 0.0))

    def test_shaft_tilt_matches_pitch(self):
        """A y rotation equals a pure pitch attitude."""
        assert_allclose(
            rotation_y(0.05).matrix, euler_to_dcm(EulerAngles(0.0, 0.05, 0.0)).matrix, atol=1e-15
        )


class TestEulerKinematics(unittest.TestCase):
    """Body rates to Euler angle rates."""

    def test_level_attitude(self):
        """At zero attitude the rates map one to one."""
        rates = body_rates_to_euler_rates(0.1, -0.2, 0.3, EulerAngles())
        assert_allclose(rates, (0.1, -0.2, 0.3), atol=1e-15)

    def test_banked_yaw_rate(self):
        """In a bank, pitch and yaw rate combine into the heading rate."""
        phi = np.deg2rad(30.0)
        _, _, psi_dot = body_rates_to_euler_rates(0.0, 0.5 * np.sin(phi), 0.5 * np.cos(phi), EulerAngles(phi))
        self.assertAlmostEqual(psi_dot, 0.5, places=12)

    def test_gimbal_lock(self):
        """Pitch attitudes at +-90 deg are refused."""
        with self.assertRaises(GimbalLockError):
            euler_rate_matrix(0.0, np.pi / 2)
        with self.assertRaises(GimbalLockError):
            body_rates_to_euler_rates(0.0, 0.0, 0.0, EulerAngles(0.0, -np.pi / 2, 0.0))


class TestAtmosphere(unittest.TestCase):
    """Standard atmosphere."""

    def test_sea_level(self):
        """Sea level values match the standard."""
        atmosphere = atmosphere_at(0.0)
        self.assertAlmostEqual(atmosphere.density, RHO_SL, places=10)
        self.assertAlmostEqual(atmosphere.speed_of_sound, 1116.45, places=6)

    def test_density_decreases(self):
        """Density falls with altitude and is about 0.86 of sea level at 5,250 ft."""
        ratio = density_at(5250.0) / RHO_SL
        self.assertGreater(ratio, 0.84)
        self.assertLess(ratio, 0.87)
        self.assertLess(speed_of_sound_at(5250.0), speed_of_sound_at(0.0))

    def test_range_checked(self):
        """Negative or very high altitudes are invalid."""
        for altitude in (-1.0, 50000.0, np.nan):
            with self.assertRaises(InvalidArgumentError):
                density_at(altitude)
