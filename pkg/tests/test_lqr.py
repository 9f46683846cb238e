# -*- coding: utf-8 -*-

"""Tests for the LQR design and set-point tracking."""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from rotorsim.errors import InfeasibleSetPointError, InvalidArgumentError, RiccatiError
from rotorsim.linmod import LinearModel
from rotorsim.lqr import (
    GainSet,
    SetPoint,
    control_law,
    default_weights,
    design_gains,
    lqr_gain,
    riccati_residual,
    selection_matrix,
    solve_care,
    steady_state_targets,
)

DOUBLE_A = np.array([[0.0, 1.0], [0.0, 0.0]])
DOUBLE_B = np.array([[0.0], [1.0]])


class TestRiccati(unittest.TestCase):
    """Stabilizing Riccati solutions."""

    def test_scalar(self):
        """A pure integrator with unit weights has P = K = 1."""
        k, p = lqr_gain([[0.0]], [[1.0]], [[1.0]], [[1.0]])
        assert_allclose(p, [[1.0]], atol=1e-12)
        assert_allclose(k, [[1.0]], atol=1e-12)

    def test_double_integrator(self):
        """The double integrator has the known gain [1, sqrt(3)]."""
        k, p = lqr_gain(DOUBLE_A, DOUBLE_B, np.eye(2), [[1.0]])
        assert_allclose(k, [[1.0, np.sqrt(3.0)]], atol=1e-10)
        assert_allclose(p, [[np.sqrt(3.0), 1.0], [1.0, np.sqrt(3.0)]], atol=1e-10)
        assert_allclose(riccati_residual(DOUBLE_A, DOUBLE_B, np.eye(2), [[1.0]], p), np.zeros((2, 2)), atol=1e-10)

    def test_zero_state_weight(self):
        """With a stable plant and no state weight no feedback is needed."""
        p = solve_care([[-1.0]], [[1.0]], [[0.0]], [[1.0]])
        assert_allclose(p, [[0.0]], atol=1e-12)

    def test_unstabilizable(self):
        """A marginal mode without control authority has no stabilizing solution."""
        with self.assertRaises(RiccatiError):
            solve_care([[0.0]], [[0.0]], [[1.0]], [[1.0]])

    def test_weights_checked(self):
        """R must be positive definite and Q symmetric."""
        with self.assertRaises(InvalidArgumentError):
            solve_care(DOUBLE_A, DOUBLE_B, np.eye(2), [[-1.0]])
        with self.assertRaises(InvalidArgumentError):
            solve_care(DOUBLE_A, DOUBLE_B, [[1.0, 1.0], [0.0, 1.0]], [[1.0]])

    def test_gain_set_requires_hurwitz(self):
        """A gain that leaves an unstable mode is refused."""
        with self.assertRaises(RiccatiError):
            GainSet(k=np.zeros((1, 1)), q=np.eye(1), r=np.eye(1), a=np.eye(1), b=np.eye(1))


class TestDesign(unittest.TestCase):
    """Weights and gains on named models."""

    def setUp(self):
        self.model = LinearModel(a=DOUBLE_A, b=DOUBLE_B, state_names=("north", "u"), control_names=("c",))

    def test_default_weights(self):
        """Positions weigh most, velocities next and everything else little."""
        q, r = default_weights(["north", "u", "lambda0"], 2)
        assert_allclose(np.diag(q), [10.0, 1.0, 0.01])
        assert_allclose(r, np.eye(2))

    def test_design_with_overrides(self):
        """Per-state overrides reach Q and the closed loop is stable."""
        gains = design_gains(self.model, {"north": 4.0}, [2.0], label="hold")
        assert_allclose(np.diag(gains.q), [4.0, 1.0])
        assert_allclose(gains.r, [[2.0]])
        self.assertTrue(np.all(gains.closed_loop_modes().real < 0.0))
        with self.assertRaises(InvalidArgumentError):
            design_gains(self.model, {"east": 1.0})


class TestSetPoint(unittest.TestCase):
    """Steady targets for tracked outputs."""

    def test_position_target(self):
        """Holding a position needs no steady velocity or control."""
        cs = selection_matrix(("north", "u"), ["north"])
        x_ss, u_ss = steady_state_targets(DOUBLE_A, DOUBLE_B, cs, np.zeros((1, 1)), [2.0])
        assert_allclose(x_ss, [2.0, 0.0], atol=1e-12)
        assert_allclose(u_ss, [0.0], atol=1e-12)
        point = SetPoint.solve(DOUBLE_A, DOUBLE_B, cs, [2.0])
        assert_allclose(point.x_ss, x_ss)

    def test_infeasible(self):
        """A nonzero velocity cannot be held on a double integrator."""
        cs = selection_matrix(("north", "u"), ["u"])
        with self.assertRaises(InfeasibleSetPointError) as context:
            steady_state_targets(DOUBLE_A, DOUBLE_B, cs, np.zeros((1, 1)), [1.0])
        self.assertEqual(context.exception.rank, 2)

    def test_output_count(self):
        """The number of tracked outputs must equal the number of controls."""
        cs = selection_matrix(("north", "u"), ["north", "u"])
        with self.assertRaises(InfeasibleSetPointError):
            steady_state_targets(DOUBLE_A, DOUBLE_B, cs, np.zeros((2, 1)), [1.0, 0.0])
        with self.assertRaises(InvalidArgumentError):
            selection_matrix(("north", "u"), ["psi"])


class TestControlLaw(unittest.TestCase):
    """Feedback around the trim controls."""

    def test_unsaturated(self):
        """The increment adds to the trim controls."""
        command = control_law([[1.0, 2.0]], [1.0, 1.0], [0.0, 0.0], [0.5], trim_controls=[50.0])
        assert_allclose(command.command, [47.5])
        assert_allclose(command.delta, [-2.5])
        self.assertFalse(command.any_saturated)

    def test_saturated(self):
        """Commands are clamped to the travel and flagged."""
        command = control_law([[1.0, 2.0]], [1.0, 1.0], [0.0, 0.0], [0.5], trim_controls=[1.0])
        assert_allclose(command.command, [0.0])
        assert_allclose(command.delta, [-1.0])
        self.assertEqual(command.saturated, (True,))
