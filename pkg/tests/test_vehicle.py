# -*- coding: utf-8 -*-

"""Tests for the assembled vehicle residual."""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from rotorsim.config import RiggingConfig, VehicleConfig
from rotorsim.errors import AssemblyError, InvalidArgumentError
from rotorsim.fuselage import FuselageState, Loads
from rotorsim.tables import load_tables
from rotorsim.trim import FlightCondition, hover_seed, state_from_unknowns
from rotorsim.vehicle import (
    N_STATES,
    SOURCES,
    ControlVector,
    Rigging,
    SystemState,
    Vehicle,
    system_residual,
    total_loads,
)

COARSE = ["main_rotor.radial_elements=10", "main_rotor.azimuth_steps=24"]


class TestVehicle(unittest.TestCase):
    """Residual assembly on a coarse rotor grid."""

    @classmethod
    def setUpClass(cls):
        cls.tables = load_tables()
        cls.config = VehicleConfig().with_overrides(COARSE)
        cls.vehicle = Vehicle(cls.config, cls.tables, altitude=5250.0)
        condition = FlightCondition(airspeed=60.0, altitude=5250.0)
        x = hover_seed(cls.vehicle, condition)
        cls.y, _, cls.u = state_from_unknowns(x, condition)

    def test_shape_and_breakdown(self):
        """The residual has one row per state and all five load sources."""
        evaluation = self.vehicle.evaluate(self.y, np.zeros(N_STATES), self.u)
        self.assertEqual(evaluation.residual.shape, (N_STATES,))
        self.assertTrue(np.all(np.isfinite(evaluation.residual)))
        self.assertEqual(set(evaluation.loads), set(SOURCES))
        self.assertGreater(evaluation.power, 0.0)
        assert_allclose(
            system_residual(self.y, np.zeros(N_STATES), self.u, 0.0, self.vehicle), evaluation.residual
        )

    def test_mass_matrix_is_residual_slope(self):
        """The analytic mass matrix equals the finite-difference slope in the state derivative."""
        base = np.zeros(N_STATES)
        analytic = self.vehicle.mass_matrix(self.y, u=self.u)
        numeric = np.empty((N_STATES, N_STATES))
        step = 1e-3
        for k in range(N_STATES):
            dy = np.zeros(N_STATES)
            dy[k] = step
            plus = self.vehicle.residual(self.y, base + dy, self.u)
            minus = self.vehicle.residual(self.y, base - dy, self.u)
            numeric[:, k] = (plus - minus) / (2.0 * step)
        assert_allclose(numeric, analytic, rtol=1e-6, atol=1e-6 * np.max(np.abs(analytic)))

    def test_explicit_derivative_is_consistent(self):
        """The explicit derivative zeroes the implicit residual."""
        y_dot = self.vehicle.derivative(self.y, self.u)
        residual = self.vehicle.residual(self.y, y_dot, self.u)
        scale = np.max(np.abs(self.vehicle.residual(self.y, np.zeros(N_STATES), self.u)))
        self.assertLess(np.max(np.abs(residual)), 1e-8 * scale)

    def test_kinematic_rows(self):
        """Flap and lag kinematic rows compare derivatives with rate states."""
        y = self.y.copy()
        y[16:19] = [0.1, -0.2, 0.3]
        residual = self.vehicle.residual(y, np.zeros(N_STATES), self.u)
        assert_allclose(residual[13:16], [-0.1, 0.2, -0.3])
        assert_allclose(residual[19:22], np.zeros(3))

    def test_disabled_component(self):
        """A disabled component contributes zero loads."""
        vehicle = Vehicle(self.config, self.tables, altitude=5250.0, disabled=("fuselage",))
        evaluation = vehicle.evaluate(self.y, np.zeros(N_STATES), self.u)
        assert_allclose(evaluation.loads["fuselage"].as_array(), np.zeros(6))
        with self.assertRaises(InvalidArgumentError):
            Vehicle(self.config, self.tables, disabled=("rotor",))

    def test_component_errors_name_source(self):
        """A non-finite fuselage state is reported against the fuselage."""
        y = self.y.copy()
        y[0] = np.nan
        with self.assertRaises(AssemblyError) as context:
            self.vehicle.residual(y, np.zeros(N_STATES), self.u)
        self.assertEqual(context.exception.source, "fuselage")

    def test_shapes_checked(self):
        """State vectors of the wrong length are refused."""
        with self.assertRaises(InvalidArgumentError):
            self.vehicle.residual(np.zeros(3), np.zeros(N_STATES), self.u)

    def test_controls_checked(self):
        """Controls outside their travel are refused unless the check is off."""
        outside = ControlVector(self.u.collective, self.u.lateral, self.u.longitudinal, 101.0)
        with self.assertRaises(InvalidArgumentError) as context:
            self.vehicle.evaluate(self.y, np.zeros(N_STATES), outside)
        self.assertIn("pedal", str(context.exception))
        with self.assertRaises(InvalidArgumentError):
            self.vehicle.derivative(self.y, ControlVector(-0.5, 50.0, 50.0, 50.0))
        residual = self.vehicle.residual(self.y, np.zeros(N_STATES), outside, check_controls=False)
        self.assertTrue(np.all(np.isfinite(residual)))


class TestParts(unittest.TestCase):
    """Controls, rigging and state views."""

    def test_total_loads_needs_every_source(self):
        """Summing loads with a source missing is an assembly error."""
        loads = [Loads([1.0, 0.0, 0.0], source=source) for source in SOURCES]
        self.assertAlmostEqual(total_loads(loads).X, 5.0)
        with self.assertRaises(AssemblyError):
            total_loads(loads[:-1])

    def test_rigging_round_trip(self):
        """Percent travel maps to angles and back."""
        rigging = Rigging(RiggingConfig())
        controls = ControlVector(30.0, 55.0, 62.5, 40.0)
        assert_allclose(rigging.percent(rigging.angles(controls)).as_array(), controls.as_array())
        swash, theta_tr = rigging.swashplate(ControlVector(0.0, 50.0, 50.0, 100.0))
        self.assertAlmostEqual(swash.theta0, 0.0)
        self.assertAlmostEqual(swash.theta1c, 0.0)
        self.assertAlmostEqual(theta_tr, np.deg2rad(-6.0))

    def test_out_of_range(self):
        """Channels outside 0-100 % are named."""
        self.assertEqual(ControlVector(50.0, -1.0, 50.0, 101.0).out_of_range(), ("lateral", "pedal"))
        self.assertEqual(ControlVector().out_of_range(), ())
        with self.assertRaises(InvalidArgumentError):
            ControlVector.from_array([1.0, 2.0])

    def test_system_state_parts(self):
        """The named view splits the state vector."""
        state = SystemState.from_parts(FuselageState(u=10.0), inflow=(0.05, 0.0, 0.01), tail_inflow=0.07)
        self.assertEqual(state.vector.shape, (N_STATES,))
        self.assertEqual(state.fuselage.u, 10.0)
        self.assertEqual(state.tail_inflow, 0.07)
        assert_allclose(state.inflow, [0.05, 0.0, 0.01])
        assert_allclose(state.rotor.as_array(), np.zeros(12))
