# -*- coding: utf-8 -*-

"""Tests for the mission loop, references and scenario loading."""

import os
import unittest

import numpy as np
from numpy.testing import assert_allclose

from rotorsim.config import VehicleConfig
from rotorsim.errors import ConfigError, DivergenceError, InvalidArgumentError, MissionFailure
from rotorsim.frames import FT_TO_M, KTS_TO_FTS, EulerAngles
from rotorsim.lqr import ControlCommand
from rotorsim.mission import (
    FPM_TO_MS,
    PHASES,
    DecelerationReference,
    FlightLog,
    LandingReference,
    Reference,
    ScenarioConfig,
    ShipState,
    StraightReference,
    TurnReference,
    heading_rotation,
    integrate_step,
    landing_error,
    phase_condition,
    run_mission,
    simulate_ship_landing,
    slew_limit,
    update_position,
    wrap_angle,
)
from rotorsim.vehicle import N_STATES, ControlVector

COARSE = ["main_rotor.radial_elements=10", "main_rotor.azimuth_steps=24"]
FULL_GRID = os.environ.get("ROTORSIM_FULL_GRID", "") not in ("", "0")


class OscillatorPlant:
    """``x'' + x = 0`` in the first two entries."""

    def derivative(self, y, u):
        return np.array([y[1], -y[0]])


class FrozenPlant:
    """A vehicle state that never changes."""

    def derivative(self, y, u):
        return np.zeros_like(y)

    def body_velocity(self, y):
        return np.zeros(3)

    def attitude(self, y):
        return EulerAngles(0.0, 0.0, float(y[8]))


class DivergingPlant(FrozenPlant):
    def derivative(self, y, u):
        return np.full_like(y, np.nan)


class HoldController:
    """Always commands the neutral controls."""

    trim_state = np.zeros(N_STATES)
    trim_controls = np.full(4, 50.0)

    def command(self, y, position, ref):
        return ControlCommand(self.trim_controls.copy(), np.zeros(4), (False,) * 4)


def _oscillator_error(dt: float) -> float:
    y = np.array([1.0, 0.0])
    for step in range(int(round(1.0 / dt))):
        y = integrate_step(OscillatorPlant(), y, ControlVector(), dt, step * dt)
    return abs(y[0] - np.cos(1.0))


class TestIntegration(unittest.TestCase):
    """Runge-Kutta steps and navigation."""

    def test_fourth_order(self):
        """Halving the step cuts the error about sixteen times."""
        coarse, fine = _oscillator_error(0.05), _oscillator_error(0.025)
        self.assertLess(coarse, 1e-6)
        self.assertGreater(coarse / fine, 12.0)
        self.assertLess(coarse / fine, 20.0)

    def test_step_bounds(self):
        """Steps outside (0, 0.05] s are refused."""
        for dt in (0.0, -0.01, 0.06):
            with self.assertRaises(InvalidArgumentError):
                integrate_step(OscillatorPlant(), [1.0, 0.0], ControlVector(), dt)

    def test_divergence(self):
        """A non-finite state stops the integration with time and phase."""
        with self.assertRaises(DivergenceError) as context:
            integrate_step(DivergingPlant(), np.zeros(N_STATES), ControlVector(), 0.01, 2.5, "turn")
        self.assertEqual(context.exception.phase, "turn")
        self.assertEqual(context.exception.time, 2.5)

    def test_update_position(self):
        """100 kts level flight covers 51.44 m in a second."""
        velocity = [100.0 * KTS_TO_FTS, 0.0, 0.0]
        position = update_position(np.zeros(3), EulerAngles(0.0, 0.0, 0.0), velocity, 1.0)
        assert_allclose(position, [51.44, 0.0, 0.0], atol=5e-3)
        east = update_position(np.zeros(3), EulerAngles(0.0, 0.0, np.pi / 2), velocity, 1.0)
        assert_allclose(east, [0.0, 51.44, 0.0], atol=5e-3)
        with self.assertRaises(InvalidArgumentError):
            update_position(np.zeros(3), EulerAngles(0.0, 0.0, 0.0), velocity, -1.0)

    def test_slew_limit(self):
        """Each channel moves by at most the allowed step."""
        assert_allclose(slew_limit([50.0, 50.0, 50.0], [60.0, 45.0, 50.1], 0.2), [50.2, 49.8, 50.1])

    def test_angles(self):
        """Headings wrap and rotate into the path frame."""
        self.assertAlmostEqual(float(wrap_angle(1.5 * np.pi)), -0.5 * np.pi)
        assert_allclose(heading_rotation(np.pi / 2) @ [0.0, 1.0, 0.0], [1.0, 0.0, 0.0], atol=1e-15)


class TestReferences(unittest.TestCase):
    """Reference generators."""

    def setUp(self):
        self.start = Reference(np.array([0.0, 0.0, -60.96]), np.array([10.0, 0.0, 0.0]), 0.0)
        self.ship = ShipState(np.array([500.0, 0.0, -5.0]), np.array([5.0, 0.0, 0.0]))

    def test_descent_levels_off(self):
        """The descent stops at the target height."""
        climb = -500.0 * FPM_TO_MS
        reference = StraightReference(self.start, 10.0, climb, -25.0)
        early = reference.at(1.0)
        self.assertAlmostEqual(early.position[2], -60.96 - climb)
        self.assertAlmostEqual(early.velocity[2], -climb)
        late = reference.at(20.0)
        self.assertAlmostEqual(late.position[2], -25.0)
        self.assertEqual(late.velocity[2], 0.0)
        self.assertAlmostEqual(late.position[0], 200.0)
        self.assertTrue(reference.finished(20.0))

    def test_turn(self):
        """A quarter turn to the right ends one radius north and east."""
        reference = TurnReference(self.start, 10.0, 0.1, np.pi / 2)
        end = reference.at(reference.duration)
        assert_allclose(end.position - self.start.position, [100.0, 100.0, 0.0], atol=1e-9)
        self.assertAlmostEqual(end.heading, np.pi / 2)
        with self.assertRaises(InvalidArgumentError):
            TurnReference(self.start, 10.0, 0.1, -np.pi / 2)

    def test_deceleration_is_continuous(self):
        """The blend starts on the previous reference and ends over the deck."""
        reference = DecelerationReference(self.start, self.ship, 10.0, 40.0, 15.0)
        begin = reference.at(0.0)
        assert_allclose(begin.position, self.start.position, atol=1e-9)
        assert_allclose(begin.velocity, self.start.velocity, atol=1e-9)
        end = reference.at(40.0)
        assert_allclose(end.position, self.ship.at(50.0) + [0.0, 0.0, -(15.0 + 0.4826)], atol=1e-9)
        assert_allclose(end.velocity, self.ship.velocity)

    def test_landing_sinks_after_hold(self):
        """The landing reference holds height, then sinks at a constant rate."""
        reference = LandingReference(self.ship, 0.0, 15.0, 10.0, 0.5)
        hold = reference.at(5.0)
        self.assertAlmostEqual(hold.position[2], -5.0 - 15.4826)
        sink = reference.at(14.0)
        self.assertAlmostEqual(sink.position[2], -5.0 - 13.4826)
        self.assertAlmostEqual(sink.velocity[2], 0.5)
        self.assertFalse(reference.finished(1e6))


class TestLanding(unittest.TestCase):
    """Landing error bookkeeping."""

    def _log(self, time, north, down):
        log = FlightLog()
        log.append(time, "landing", np.zeros(N_STATES), [50.0] * 4, [north, 0.0, down], [0.0, 0.0, 0.0])
        log.touchdown = dict(log.rows[-1])
        return log

    def test_stationary_ship(self):
        """Wheels on the deck centre give no error."""
        ship = ShipState(np.array([10.0, 0.0, -5.0]), np.zeros(3))
        assert_allclose(landing_error(self._log(3.0, 10.0, -5.4826), ship), np.zeros(3), atol=1e-12)

    def test_moving_ship(self):
        """The deck position is taken at the touchdown time."""
        ship = ShipState(np.array([10.0, 0.0, -5.0]), np.array([5.0, 0.0, 0.0]))
        assert_allclose(landing_error(self._log(2.0, 10.0, -5.4826), ship), [10.0, 0.0, 0.0], atol=1e-12)

    def test_no_touchdown(self):
        """Without touchdown there is no landing error."""
        with self.assertRaises(MissionFailure):
            landing_error(FlightLog(), ShipState(np.zeros(3), np.zeros(3)))

    def test_log_columns(self):
        """Rows carry states, controls and the ship-relative position."""
        frame = self._log(1.0, 4.0, -6.0).to_frame()
        for column in ("time_s", "phase", "u", "collective_pct", "north_m", "ship_down_m", "dX_m", "saturated"):
            self.assertIn(column, frame.columns)
        self.assertAlmostEqual(frame["dX_m"].iloc[0], -4.0)
        self.assertAlmostEqual(frame["dZ_m"].iloc[0], 6.0)


class TestScenario(unittest.TestCase):
    """Scenario files and phase conditions."""

    def test_bundled_scenario(self):
        """The bundled scenario starts at 200 ft and 30 kts behind a 10 kts ship."""
        scenario = ScenarioConfig.from_file()
        self.assertAlmostEqual(scenario.helicopter.down, -60.96)
        self.assertAlmostEqual(scenario.ship.north, 679.7285)
        self.assertEqual(scenario.ship.speed_kts, 10.0)
        self.assertEqual(tuple(scenario.phases), PHASES)
        self.assertAlmostEqual(scenario.phases["turn"].turn_rate, np.deg2rad(-3.0))
        self.assertEqual(scenario.simulation.substeps, 4)
        self.assertAlmostEqual(scenario.simulation.control_period, 0.02)
        ship = ShipState.from_config(scenario.ship)
        assert_allclose(ship.velocity, [10.0 * KTS_TO_FTS * FT_TO_M, 0.0, 0.0])
        self.assertAlmostEqual(ship.deck_height, 5.0)

    def test_overrides(self):
        """Overrides select the stationary ship and are validated."""
        scenario = ScenarioConfig.from_file(overrides=["ship.speed_kts=0"])
        self.assertEqual(scenario.ship.speed_kts, 0.0)
        with self.assertRaises(ConfigError):
            ScenarioConfig.from_file(overrides=["boat.speed_kts=0"])
        with self.assertRaises(ConfigError):
            ScenarioConfig.from_file(overrides=["simulation.dt_s=0"])

    def test_phase_conditions(self):
        """Each phase is trimmed at its own speed and climb rate."""
        scenario = ScenarioConfig.from_file()
        descent = phase_condition("descent", scenario.phases["descent"], scenario)
        self.assertEqual(descent.airspeed, 30.0)
        self.assertAlmostEqual(descent.climb_rate, -500.0 / 60.0)
        turn = phase_condition("turn", scenario.phases["turn"], scenario)
        self.assertAlmostEqual(turn.turn_rate, np.deg2rad(-3.0))
        landing = phase_condition("landing", scenario.phases["landing"], scenario)
        self.assertEqual(landing.airspeed, 10.0)
        self.assertAlmostEqual(landing.climb_rate, -0.5 / FT_TO_M)

    def test_phase_weights(self):
        """Weight strings parse into per-state and per-control weights."""
        phase = ScenarioConfig.from_file(overrides=["turn.q_weights=north:5, psi:2"]).phases["turn"]
        self.assertEqual(phase.state_weights, {"north": 5.0, "psi": 2.0})
        self.assertEqual(phase.control_weights, [1.0, 1.0, 1.0, 1.0])
        self.assertEqual(phase.tracked, ("north", "east", "down", "psi"))


class TestMissionLoop(unittest.TestCase):
    """The mission loop with stand-in plants."""

    def setUp(self):
        self.scenario = ScenarioConfig.from_file(overrides=["simulation.max_time_s=1"])
        self.controllers = {name: HoldController() for name in PHASES}

    def test_time_limit(self):
        """A mission that never lands fails with its partial log."""
        with self.assertRaises(MissionFailure) as context:
            run_mission(self.scenario, FrozenPlant(), self.controllers, progress=False)
        log = context.exception.log
        self.assertEqual(len(log), 50)
        self.assertEqual(set(log.to_frame()["phase"]), {"descent"})
        assert_allclose(log.positions()[-1], [0.0, 0.0, -60.96])

    def test_divergence_is_a_mission_failure(self):
        """Diverging dynamics end the mission."""
        with self.assertRaises(MissionFailure) as context:
            run_mission(self.scenario, DivergingPlant(), self.controllers, progress=False)
        self.assertEqual(len(context.exception.log), 1)


def _slew_steps(log: FlightLog) -> np.ndarray:
    return np.abs(np.diff(log.controls(), axis=0))


class TestLevelFlight(unittest.TestCase):
    """Thirty seconds of level flight with the assembled vehicle on a coarse rotor grid."""

    @classmethod
    def setUpClass(cls):
        cls.scenario = ScenarioConfig.from_file(
            overrides=["descent.climb_rate_fpm=0", "simulation.max_time_s=30"]
        )
        try:
            simulate_ship_landing(cls.scenario, VehicleConfig().with_overrides(COARSE), progress=False)
        except MissionFailure as failure:
            cls.log = failure.log
        else:
            raise AssertionError("level flight should run into the time limit")

    def test_flew_the_whole_window(self):
        """The level leg lasts until the time limit."""
        self.assertIsNone(self.log.touchdown)
        self.assertEqual(set(self.log.to_frame()["phase"]), {"descent"})
        self.assertGreater(self.log.times()[-1], 29.9)

    def test_altitude_hold(self):
        """Height stays within a metre of the start."""
        down = self.log.positions()[:, 2]
        self.assertLess(np.max(np.abs(down - down[0])), 1.0)

    def test_ground_track(self):
        """The vehicle keeps to the 30 kts track."""
        positions = self.log.positions()
        self.assertLess(np.max(np.abs(positions[:, 1])), 1.0)
        expected = 30.0 * KTS_TO_FTS * FT_TO_M * self.log.times()[-1]
        self.assertAlmostEqual(positions[-1, 0], expected, delta=2.0)

    def test_slew_rate(self):
        """No control moves faster than the slew limit."""
        limit = self.scenario.simulation.slew_limit * self.scenario.simulation.control_period
        self.assertLessEqual(np.max(_slew_steps(self.log)), limit + 1e-9)


class TestShipLanding(unittest.TestCase):
    """The bundled scenario flown with the assembled vehicle.

    The rotor runs on a coarse 10 x 24 grid for both trim and simulation; set
    ``ROTORSIM_FULL_GRID=1`` for the bundled grid.
    """

    grid = COARSE
    overrides = []

    @classmethod
    def setUpClass(cls):
        cls.scenario = ScenarioConfig.from_file(overrides=cls.overrides)
        cls.report = simulate_ship_landing(cls.scenario, VehicleConfig().with_overrides(cls.grid), progress=False)

    def test_touchdown(self):
        """The mission ends on the deck with every phase flown in order."""
        self.assertIsNotNone(self.report.log.touchdown)
        self.assertEqual(tuple(self.report.phase_starts), PHASES)
        starts = list(self.report.phase_starts.values())
        self.assertEqual(starts, sorted(starts))
        self.assertAlmostEqual(self.report.log.times()[-1], self.report.duration)

    def test_landing_error(self):
        """Each axis of the touchdown error is below half a metre."""
        self.assertLess(np.max(np.abs(self.report.landing_error)), 0.5)
        touchdown = self.report.log.touchdown
        gear = ShipState.from_config(self.scenario.ship).gear_offset
        logged = [touchdown["dX_m"], touchdown["dY_m"], touchdown["dZ_m"] - gear]
        assert_allclose(self.report.landing_error, logged, atol=1e-9)

    def test_duration(self):
        """The mission takes about three minutes."""
        self.assertGreaterEqual(self.report.duration, 0.8 * 180.0)
        self.assertLessEqual(self.report.duration, 1.2 * 180.0)

    def test_slew_rate(self):
        """Logged controls never step by more than the slew limit."""
        limit = self.scenario.simulation.slew_limit * self.scenario.simulation.control_period
        self.assertLessEqual(np.max(_slew_steps(self.report.log)), limit + 1e-9)

    def test_controls_in_range(self):
        """Logged controls stay inside their travel."""
        controls = self.report.log.controls()
        self.assertGreaterEqual(controls.min(), 0.0)
        self.assertLessEqual(controls.max(), 100.0)


class TestStationaryShipLanding(TestShipLanding):
    """The stationary-ship variant on the coarse grid."""

    overrides = ["ship.speed_kts=0"]


@unittest.skipUnless(FULL_GRID, "set ROTORSIM_FULL_GRID=1 to fly both ship variants on the bundled rotor grid")
class TestShipSpeedComparison(unittest.TestCase):
    """Moving and stationary ships on the bundled rotor grid."""

    @classmethod
    def setUpClass(cls):
        moving = ScenarioConfig.from_file()
        stationary = ScenarioConfig.from_file(overrides=["ship.speed_kts=0"])
        cls.moving = simulate_ship_landing(moving, progress=False)
        cls.stationary = simulate_ship_landing(stationary, progress=False)

    def test_both_land(self):
        """Both variants touch down within half a metre per axis."""
        for report in (self.moving, self.stationary):
            self.assertIsNotNone(report.log.touchdown)
            self.assertLess(np.max(np.abs(report.landing_error)), 0.5)

    def test_stationary_is_more_accurate(self):
        """A stationary deck is hit more precisely than a moving one."""
        self.assertLess(np.linalg.norm(self.stationary.landing_error), np.linalg.norm(self.moving.landing_error))
