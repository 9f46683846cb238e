# -*- coding: utf-8 -*-

"""Tests for linear model extraction."""

import configparser
import os
import tempfile
import unittest

import numpy as np
import pandas as pd
from numpy.testing import assert_allclose

from rotorsim.errors import ExtractionError, InvalidArgumentError, ProbeError
from rotorsim.linmod import (
    POSITION_STATES,
    LinearModel,
    augment_position,
    export_linear_model,
    extract_ab,
    jacobians,
    probe_steps,
)
from rotorsim.vehicle import CONTROL_NAMES, N_STATES, STATE_NAMES


def _oscillator(y, y_dot, u):
    """``x'' + x = u`` in first-order implicit form."""
    return np.array([y_dot[0] - y[1], y_dot[1] + y[0] - u[0]])


class TestJacobians(unittest.TestCase):
    """Central-difference probing."""

    def test_steps(self):
        """Steps scale with the entry and never fall below the floor."""
        assert_allclose(probe_steps([0.0, 10.0, -1e3]), [1e-7, 1e-5, 1e-3])

    def test_linear_residual_is_exact(self):
        """For an affine residual the probes recover the matrices."""
        e0 = np.array([[2.0, 0.5], [0.0, 1.0]])
        f0 = np.array([[1.0, -3.0], [4.0, 0.5]])
        g0 = np.array([[0.0], [2.0]])

        def residual(y, y_dot, u):
            return e0 @ y_dot + f0 @ y + g0 @ u + 1.0

        e, f, g = jacobians(residual, [0.3, -0.2], [0.0, 0.0], [5.0])
        assert_allclose(e, e0, atol=1e-7)
        assert_allclose(f, f0, atol=1e-7)
        assert_allclose(g, g0, atol=1e-7)

    def test_probe_failure_names_column(self):
        """A non-finite probe reports the perturbed column."""

        def residual(y, y_dot, u):
            return np.array([np.inf if y[1] > 0.5 else 0.0, 0.0])

        with self.assertRaises(ProbeError) as context:
            jacobians(residual, [0.0, 0.5], [0.0, 0.0], [0.0])
        self.assertEqual(context.exception.column, 3)


class TestExtraction(unittest.TestCase):
    """Solving for A and B."""

    def test_harmonic_oscillator(self):
        """The oscillator has eigenvalues +-i and a unit input."""
        e, f, g = jacobians(_oscillator, [0.0, 0.0], [0.0, 0.0], [0.0])
        model = extract_ab(e, f, g)
        assert_allclose(model.a, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-7)
        assert_allclose(model.b, [[0.0], [1.0]], atol=1e-7)
        assert_allclose(np.sort(model.modes().imag), [-1.0, 1.0], atol=1e-7)
        assert_allclose(model.modes().real, [0.0, 0.0], atol=1e-7)
        self.assertEqual(model.state_names, ("x0", "x1"))
        self.assertFalse(model.is_stable())

    def test_singular_descriptor(self):
        """A singular E cannot be inverted."""
        e = np.array([[1.0, 0.0], [0.0, 0.0]])
        with self.assertRaises(ExtractionError) as context:
            extract_ab(e, np.eye(2), np.ones((2, 1)))
        self.assertGreater(context.exception.condition, 1e15)

    def test_shape_mismatch(self):
        """Incompatible blocks are refused."""
        with self.assertRaises(InvalidArgumentError):
            extract_ab(np.eye(2), np.eye(3), np.ones((2, 1)))

    def test_reduce(self):
        """Reduction keeps the named rows and columns."""
        a = np.arange(4.0).reshape(2, 2) - 5.0
        model = LinearModel(a=a, b=np.ones((2, 1)), state_names=("x", "y"), control_names=("u",))
        reduced = model.reduce(["y"])
        assert_allclose(reduced.a, [[-2.0]])
        with self.assertRaises(InvalidArgumentError):
            model.reduce(["z"])


class TestFullOrder(unittest.TestCase):
    """Models with the vehicle state layout."""

    def setUp(self):
        rng = np.random.default_rng(3)
        self.trim = np.zeros(N_STATES)
        self.trim[0] = 100.0
        self.trim[7] = 0.05
        self.model = LinearModel(
            a=rng.normal(size=(N_STATES, N_STATES)),
            b=rng.normal(size=(N_STATES, 4)),
            trim_state=self.trim,
            trim_controls=np.full(4, 50.0),
            condition={"airspeed_kts": 59.2},
            condition_number=12.0,
        )

    def test_augment_position(self):
        """Position rows integrate the earth-axis velocity."""
        model = augment_position(self.model)
        self.assertEqual(model.state_names[-3:], POSITION_STATES)
        self.assertEqual(model.a.shape, (N_STATES + 3, N_STATES + 3))
        north = model.a[N_STATES]
        self.assertAlmostEqual(north[0], np.cos(0.05), places=6)
        self.assertAlmostEqual(north[7], -100.0 * np.sin(0.05), places=4)
        down = model.a[N_STATES + 2]
        self.assertAlmostEqual(down[0], -np.sin(0.05), places=6)
        assert_allclose(model.a[:, N_STATES:], np.zeros((N_STATES + 3, 3)))
        assert_allclose(model.b[N_STATES:], np.zeros((3, 4)))

    def test_augment_needs_trim(self):
        """Reduced models cannot be augmented."""
        with self.assertRaises(InvalidArgumentError):
            augment_position(self.model.reduce(["u", "w"]))

    def test_export(self):
        """A, B and a manifest with the state order are written."""
        with tempfile.TemporaryDirectory() as directory:
            a_path, b_path, manifest_path = export_linear_model(
                self.model, os.path.join(directory, "out"), "[fuselage]\ngross_weight_lbf = 16000\n"
            )
            a = pd.read_csv(a_path, index_col=0)
            b = pd.read_csv(b_path, index_col=0)
            self.assertEqual(list(a.columns), list(STATE_NAMES))
            self.assertEqual(list(b.columns), list(CONTROL_NAMES))
            assert_allclose(a.to_numpy(), self.model.a, rtol=1e-8)
            manifest = configparser.ConfigParser(interpolation=None)
            manifest.read(manifest_path)
            self.assertEqual(manifest["model"]["states"].split(","), list(STATE_NAMES))
            self.assertEqual(manifest["vehicle.fuselage"]["gross_weight_lbf"], "16000")
            self.assertAlmostEqual(float(manifest["trim"]["airspeed_kts"]), 59.2)
