"""Follower dynamics: closed-form linear solution, adaptive RK4, sync time.

The linear trajectory is a single exponential with
tau = I/(gamma_b + gamma_s) and plateau omega1 * gamma_b/(gamma_b + gamma_s),
so most checks here compare against that closed form directly.
"""

import numpy as np
import pytest

from nanospin import (
    ConfigError,
    FrictionCoefficients,
    ParticleSpec,
    QuadratureConfig,
    RunConfig,
    ThermalState,
    Trajectory,
    default_time_grid,
    delta_infinity,
    delta_measure,
    friction_coefficients,
    moment_of_inertia,
    solve_linear,
    solve_nonlinear,
    sync_time,
)


@pytest.fixture(scope="module")
def coeffs(particle, thermal, quad):
    c, _ = friction_coefficients(particle, 1e-7, thermal, quad)
    return c


class TestMomentOfInertia:
    def test_frozen_value(self, particle):
        # 0.4 * (3210 kg/m^3 * 4/3 pi (5 nm)^3) * (5 nm)^2
        assert moment_of_inertia(particle) == pytest.approx(1.680752e-38, rel=1e-6)

    def test_formula(self, particle):
        mass = particle.mass_density * particle.volume
        expected = 0.4 * mass * particle.radius**2
        assert moment_of_inertia(particle) == pytest.approx(expected, rel=1e-12)

    def test_fifth_power_scaling(self):
        small = moment_of_inertia(ParticleSpec(radius=5e-9))
        big = moment_of_inertia(ParticleSpec(radius=1e-8))
        assert big / small == pytest.approx(32.0, rel=1e-12)


class TestDeltaMeasure:
    def test_values(self):
        assert delta_measure(1e4, 0.0) == 1.0
        assert delta_measure(1e4, 1e4) == 0.0
        assert delta_measure(1e4, 5e3) == 0.5

    def test_array(self):
        out = delta_measure(2.0, np.array([0.0, 1.0, 2.0]))
        assert np.array_equal(out, [1.0, 0.5, 0.0])

    def test_requires_positive_driver(self):
        with pytest.raises(ConfigError):
            delta_measure(0.0, 1.0)
        with pytest.raises(ConfigError):
            delta_measure(-1e4, 1.0)


class TestDeltaInfinity:
    def test_plateau_value(self, coeffs):
        expected = coeffs.gamma_s / (coeffs.gamma_s + coeffs.gamma_b)
        assert delta_infinity(coeffs) == expected

    def test_limits(self):
        assert delta_infinity(FrictionCoefficients(gamma_s=0.0, gamma_b=1e-36)) == 0.0
        assert delta_infinity(FrictionCoefficients(gamma_s=1e-43, gamma_b=0.0)) == 1.0
        # uncoupled: the follower never moves, delta stays 1
        assert delta_infinity(FrictionCoefficients(gamma_s=0.0, gamma_b=0.0)) == 1.0


class TestTimeGrid:
    def test_shape_and_span(self):
        tau = 6.5e-3
        t = default_time_grid(tau, samples=400)
        assert t.shape == (401,)
        assert t[0] == 0.0
        assert np.all(np.diff(t) > 0.0)
        assert t[1] == pytest.approx(1e-3 * tau, rel=1e-12)
        assert t[-1] == pytest.approx(1e3 * tau, rel=1e-12)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ConfigError):
            default_time_grid(0.0)
        with pytest.raises(ConfigError):
            default_time_grid(float("inf"))
        with pytest.raises(ConfigError):
            default_time_grid(1.0, samples=1)


class TestTrajectoryValidation:
    def test_times_must_increase(self):
        with pytest.raises(ConfigError):
            Trajectory(
                times=np.array([0.0, 1.0, 1.0]),
                omega2=np.zeros(3),
                delta=np.ones(3),
            )

    def test_empty_rejected(self):
        with pytest.raises(ConfigError):
            Trajectory(times=np.array([]), omega2=np.array([]), delta=np.array([]))

    def test_samples_roundtrip(self):
        traj = Trajectory(
            times=np.array([0.0, 1.0]),
            omega2=np.array([0.0, 2.0]),
            delta=np.array([1.0, 0.5]),
        )
        assert list(traj.samples) == [(0.0, 0.0, 1.0), (1.0, 2.0, 0.5)]


class TestSolveLinear:
    def test_starts_at_rest(self, coeffs):
        inertia = 1.680752e-38
        tau = inertia / (coeffs.gamma_s + coeffs.gamma_b)
        traj = solve_linear(1e4, inertia, coeffs, default_time_grid(tau))
        assert traj.omega2[0] == 0.0
        assert traj.delta[0] == 1.0

    def test_reaches_plateau(self, coeffs):
        inertia = 1.680752e-38
        denom = coeffs.gamma_s + coeffs.gamma_b
        tau = inertia / denom
        traj = solve_linear(1e4, inertia, coeffs, default_time_grid(tau))
        plateau = 1e4 * coeffs.gamma_b / denom
        # at t = 1e3 tau the decaying exponential underflows entirely
        assert traj.omega2[-1] == plateau
        assert traj.delta[-1] == pytest.approx(delta_infinity(coeffs), rel=1e-6)

    def test_monotone_approach(self, coeffs):
        inertia = moment_of_inertia(ParticleSpec())
        tau = inertia / (coeffs.gamma_s + coeffs.gamma_b)
        traj = solve_linear(1e4, inertia, coeffs, default_time_grid(tau))
        assert np.all(np.diff(traj.omega2) >= 0.0)
        assert np.all(np.diff(traj.omega2[:100]) > 0.0)

    def test_delta_identity(self, coeffs):
        inertia = 1.680752e-38
        tau = inertia / (coeffs.gamma_s + coeffs.gamma_b)
        traj = solve_linear(1e4, inertia, coeffs, default_time_grid(tau))
        assert np.array_equal(traj.delta, (1e4 - traj.omega2) / 1e4)

    def test_convex_on_uniform_grid(self, coeffs):
        inertia = 1.680752e-38
        tau = inertia / (coeffs.gamma_s + coeffs.gamma_b)
        t = np.linspace(0.0, 5.0 * tau, 50)
        traj = solve_linear(1e4, inertia, coeffs, t)
        assert np.all(np.diff(traj.delta, n=2) > 0.0)

    def test_pure_drag_never_spins_up(self, coeffs):
        only_drag = FrictionCoefficients(gamma_s=coeffs.gamma_s, gamma_b=0.0)
        traj = solve_linear(1e4, 1.7e-38, only_drag, np.array([0.0, 1.0, 10.0]))
        assert np.all(traj.omega2 == 0.0)
        assert np.all(traj.delta == 1.0)
        assert not traj.zero_coupling
        assert sync_time(traj) is None

    def test_zero_coupling_flag(self):
        none = FrictionCoefficients(gamma_s=0.0, gamma_b=0.0)
        traj = solve_linear(1e4, 1.7e-38, none, np.array([0.0, 1.0]))
        assert traj.zero_coupling
        assert np.all(traj.delta == 1.0)
        assert sync_time(traj) is None

    def test_rejects_bad_inputs(self, coeffs):
        with pytest.raises(ConfigError):
            solve_linear(1e4, 0.0, coeffs, np.array([0.0, 1.0]))
        with pytest.raises(ConfigError):
            solve_linear(0.0, 1.7e-38, coeffs, np.array([0.0, 1.0]))


class TestSyncTime:
    def test_matches_closed_form(self, coeffs):
        inertia = moment_of_inertia(ParticleSpec())
        denom = coeffs.gamma_s + coeffs.gamma_b
        tau = inertia / denom
        d_inf = delta_infinity(coeffs)
        t = np.linspace(0.0, 6.0 * tau, 3001)
        traj = solve_linear(1e4, inertia, coeffs, t)
        expected = tau * np.log((1.0 - d_inf) / (0.01 - d_inf))
        assert sync_time(traj, 0.01) == pytest.approx(expected, rel=1e-6)

    def test_interpolates_linearly(self):
        traj = Trajectory(
            times=np.array([0.0, 1.0]),
            omega2=np.array([9.8e3, 1e4]),
            delta=np.array([0.02, 0.0]),
        )
        assert sync_time(traj, 0.01) == 0.5

    def test_first_sample_hit(self):
        traj = Trajectory(
            times=np.array([0.0, 1.0]),
            omega2=np.array([9.95e3, 9.99e3]),
            delta=np.array([0.005, 0.001]),
        )
        assert sync_time(traj, 0.01) == 0.0

    def test_none_when_plateau_above_threshold(self):
        half = FrictionCoefficients(gamma_s=1e-40, gamma_b=1e-40)
        traj = solve_linear(1e4, 1.7e-38, half, np.array([0.0, 1.0, 100.0]))
        assert sync_time(traj, 0.01) is None

    def test_threshold_domain(self, coeffs):
        traj = solve_linear(1e4, 1.7e-38, coeffs, np.array([0.0, 1.0]))
        for bad in (0.0, 1.0, 1.2, -0.1):
            with pytest.raises(ConfigError):
                sync_time(traj, bad)


class TestSolveNonlinear:
    def test_tracks_closed_form_at_low_spin(self, particle, thermal, quad, coeffs):
        config = RunConfig(particle, thermal, quad, distance=1e-7)
        traj = solve_nonlinear(config)
        assert traj.omega2[0] == 0.0
        assert traj.meta is config
        assert not traj.zero_coupling
        assert np.all(np.diff(traj.omega2) >= 0.0)
        lin = solve_linear(config.omega1, moment_of_inertia(particle), coeffs, traj.times)
        rel = np.abs(traj.omega2 - lin.omega2) / np.maximum(
            np.abs(lin.omega2), 1e-9 * config.omega1
        )
        assert rel.max() <= 1e-6

    def test_short_grid(self, particle, thermal, quad):
        config = RunConfig(particle, thermal, quad, distance=1e-7, samples=50)
        traj = solve_nonlinear(config)
        assert traj.times.shape == (51,)
        assert traj.omega2[-1] < config.omega1
