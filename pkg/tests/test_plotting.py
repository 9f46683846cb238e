# -*- coding: utf-8 -*-

"""Smoke tests for the figures."""

import unittest

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from rotorsim.plotting import plot_relative_distance, plot_sweep, plot_trajectory  # noqa: E402
from rotorsim.trim import SWEEP_COLUMNS  # noqa: E402


class TestFigures(unittest.TestCase):
    """Every figure builds from the documented columns."""

    def tearDown(self):
        plt.close("all")

    def test_sweep(self):
        """A sweep with a failed point still plots."""
        speeds = np.arange(0.0, 50.0, 10.0)
        sweep = pd.DataFrame({column: np.linspace(1.0, 2.0, speeds.size) for column in SWEEP_COLUMNS})
        sweep["speed_kts"] = speeds
        sweep.loc[2, "power_hp"] = np.nan
        fig = plot_sweep(sweep)
        self.assertEqual(sum(ax.get_visible() for ax in fig.axes), 8)

    def test_flight_log(self):
        """Trajectory and relative distance figures read the log columns."""
        t = np.linspace(0.0, 10.0, 20)
        log = pd.DataFrame(
            {
                "time_s": t,
                "north_m": 15.0 * t,
                "east_m": np.zeros_like(t),
                "down_m": -60.0 + t,
                "ship_north_m": 600.0 + 5.0 * t,
                "ship_east_m": np.full_like(t, -88.0),
                "ship_down_m": np.full_like(t, -5.0),
            }
        )
        log["dX_m"] = log["ship_north_m"] - log["north_m"]
        log["dY_m"] = log["ship_east_m"] - log["east_m"]
        log["dZ_m"] = log["ship_down_m"] - log["down_m"]
        self.assertEqual(len(plot_trajectory(log).axes), 3)
        self.assertEqual(len(plot_relative_distance(log).axes), 1)
