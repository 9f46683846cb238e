# -*- coding: utf-8 -*-

"""Tests for the blade-element main rotor."""

import unittest
from dataclasses import replace

import numpy as np
from numpy.testing import assert_allclose

from rotorsim.config import MainRotorConfig
from rotorsim.errors import InvalidArgumentError
from rotorsim.main_rotor import (
    BladeProperties,
    MainRotor,
    RotorState,
    Swashplate,
    blade_pitch,
    element_airloads,
    flap_residual,
    harmonic_accelerations,
    integrate_rotor_loads,
    lag_residual,
    lock_number,
)
from rotorsim.tables import load_tables

RHO = 0.002
SOUND = 1100.0


class TestBladeProperties(unittest.TestCase):
    """Uniform blade with an offset hinge."""

    def setUp(self):
        self.config = MainRotorConfig()
        self.props = BladeProperties.from_config(self.config)
        self.ratio = self.config.hinge_offset / (self.config.radius - self.config.hinge_offset)

    def test_flap_frequency(self):
        """Rotating flap frequency squared is 1 + 3e / 2(R - e) per rev."""
        nu = self.props.flap_frequency / self.config.omega
        self.assertAlmostEqual(nu / np.sqrt(1.0 + 1.5 * self.ratio), 1.0, delta=5e-3)
        self.assertAlmostEqual(nu**2, 1.0 + 1.5 * self.ratio, places=12)

    def test_lag_frequency_band(self):
        """The uncoupled lag frequency lies between 0.2 and 0.3 per rev."""
        nu = self.props.lag_frequency / self.config.omega
        self.assertAlmostEqual(nu**2, 1.5 * self.ratio, places=12)
        self.assertGreaterEqual(nu, 0.2)
        self.assertLessEqual(nu, 0.3)

    def test_lock_number(self):
        """The configured blade mass reproduces the configured Lock number."""
        from rotorsim.atmosphere import RHO_SL

        self.assertAlmostEqual(lock_number(self.config, RHO_SL) / self.config.lock_number, 1.0, delta=0.01)


class TestBladePitch(unittest.TestCase):
    """Swashplate to blade pitch."""

    def test_collective_at_root(self):
        """Twist is zero at the first airfoil section."""
        config = MainRotorConfig()
        pitch = blade_pitch(0.3, Swashplate(theta0=0.1), config, config.root_cutout)
        self.assertAlmostEqual(float(pitch), 0.1, places=15)

    def test_twist_at_tip(self):
        """The full twist is reached at the tip."""
        config = MainRotorConfig()
        pitch = blade_pitch(0.0, Swashplate(), config, config.radius)
        self.assertAlmostEqual(float(pitch), config.twist, places=15)

    def test_cyclic_phase(self):
        """Cyclic pitch peaks at the azimuth shifted by the control phase."""
        config = replace(MainRotorConfig(), twist=0.0)
        psi = -config.control_phase + np.pi / 2
        pitch = blade_pitch(psi, Swashplate(theta1s=0.05), config, config.root_cutout)
        self.assertAlmostEqual(float(pitch), 0.05, places=12)

    def test_radius_checked(self):
        """Stations outside the blade are refused."""
        config = MainRotorConfig()
        with self.assertRaises(InvalidArgumentError):
            blade_pitch(0.0, Swashplate(), config, config.radius + 1.0)


class TestHingeDynamics(unittest.TestCase):
    """Harmonic balance of the hinge equations."""

    def test_rotating_frame_acceleration(self):
        """Steady cyclic flapping has centripetal harmonic acceleration."""
        accel = harmonic_accelerations([0.05, 0.01, -0.02], np.zeros(3), np.zeros(3), 27.0)
        assert_allclose(accel, [0.0, -27.0**2 * 0.01, 27.0**2 * 0.02])

    def test_steady_coning(self):
        """Coning balances the mean flap moment against centrifugal stiffness."""
        props = BladeProperties.from_config(MainRotorConfig())
        beta0 = 0.06
        moments = [props.flap_stiffness * beta0, 0.0, 0.0]
        residual = flap_residual([beta0, 0.0, 0.0], np.zeros(3), np.zeros(3), moments, props)
        assert_allclose(residual, np.zeros(3), atol=1e-9 * props.flap_stiffness)

    def test_flap_resonance(self):
        """Without hinge offset, 1/rev flapping needs no cyclic moment."""
        config = replace(MainRotorConfig(), hinge_offset=0.0, root_cutout=5.08)
        props = BladeProperties.from_config(config)
        residual = flap_residual([0.0, 0.02, -0.01], np.zeros(3), np.zeros(3), np.zeros(3), props)
        assert_allclose(residual, np.zeros(3), atol=1e-9 * props.flap_stiffness)

    def test_lag_spring(self):
        """A lag spring adds to the centrifugal stiffness."""
        props = BladeProperties.from_config(MainRotorConfig())
        zeta = [0.01, 0.0, 0.0]
        plain = lag_residual(zeta, np.zeros(3), np.zeros(3), np.zeros(3), props)
        sprung = lag_residual(zeta, np.zeros(3), np.zeros(3), np.zeros(3), props, spring=1000.0)
        self.assertAlmostEqual(plain[0] - sprung[0], 10.0, places=9)


class TestRotorLoads(unittest.TestCase):
    """Disk integration on a coarse grid."""

    @classmethod
    def setUpClass(cls):
        cls.airfoil = load_tables().rotor_airfoil
        cls.config = replace(MainRotorConfig(), twist=0.0, radial_elements=10, azimuth_steps=24)
        cls.rotor = MainRotor(cls.config, cls.airfoil)

    def _hover(self, theta0=0.15, beta0=0.05):
        rotor_state = RotorState(np.array([beta0, 0.0, 0.0]), np.zeros(3), np.zeros(3), np.zeros(3))
        return self.rotor.loads(
            np.zeros(3), np.zeros(3), np.array([0.05, 0.0, 0.0]), rotor_state, Swashplate(theta0), RHO, SOUND
        )

    def test_axisymmetric_hover(self):
        """An axisymmetric hover has no side forces and no cyclic forcing."""
        loads = self._hover()
        self.assertGreater(loads.thrust, 0.0)
        self.assertLess(np.max(np.abs(loads.hub_force[:2])), 1e-6 * loads.thrust)
        assert_allclose(loads.forcing[1:], [0.0, 0.0], atol=1e-9 * loads.forcing[0])
        assert_allclose(loads.flap_moments[1:], [0.0, 0.0], atol=1e-9 * abs(loads.flap_moments[0]))
        self.assertEqual(loads.mu, 0.0)

    def test_torque_and_power(self):
        """The rotor absorbs power and thrust grows with collective."""
        low, high = self._hover(0.1), self._hover(0.2)
        self.assertGreater(low.torque, 0.0)
        self.assertAlmostEqual(low.power, low.torque * self.config.omega)
        self.assertGreater(high.thrust, low.thrust)
        self.assertGreater(high.power, low.power)

    def test_thrust_coefficient(self):
        """The forcing carries the thrust coefficient."""
        loads = self._hover()
        tip = self.config.omega * self.config.radius
        self.assertAlmostEqual(loads.ct, loads.thrust / (RHO * np.pi * self.config.radius**2 * tip**2), places=12)

    def test_body_loads(self):
        """Hub loads reach the CG through the hub offset."""
        loads = self._hover()
        body = self.rotor.body_loads(loads.hub_force, loads.hub_moment)
        self.assertEqual(body.source, "main_rotor")
        self.assertLess(body.Z, 0.0)

    def test_zero_density(self):
        """Without air the aerodynamic loads vanish exactly."""
        rotor_state = RotorState(np.array([0.05, 0.0, 0.0]), np.zeros(3), np.zeros(3), np.zeros(3))
        loads = integrate_rotor_loads(
            self.rotor, np.zeros(3), np.zeros(3), np.array([0.05, 0.0, 0.0]), rotor_state, Swashplate(0.15), 0.0, SOUND
        )
        self.assertEqual(loads.thrust, 0.0)
        self.assertEqual(loads.torque, 0.0)
        assert_allclose(loads.forcing, np.zeros(3))
        assert_allclose(loads.lag_moments, np.zeros(3))
        self.assertEqual(loads.hub_force[2], 0.0)

    def test_element_airloads(self):
        """With no inflow angle lift is all normal and drag all in-plane."""
        elements = element_airloads(
            np.array([500.0]), np.array([0.0]), np.array([0.0]), self.airfoil, RHO, 1.75, 1.0, SOUND
        )
        assert_allclose(elements.normal, elements.lift)
        assert_allclose(elements.in_plane, elements.drag)
        with self.assertRaises(InvalidArgumentError):
            element_airloads([500.0], [0.0], [0.0], self.airfoil, RHO, 1.75, 0.0)
