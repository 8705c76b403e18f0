"""Rotational dynamics of particle 2 under the two friction channels.

Particle 1 spins at a held-constant omega1; particle 2 starts at rest and
obeys

    I * domega2/dt = M_mutual(omega1, omega2) - M_vacuum(omega2).

In the linearized regime this is I * domega2/dt = gamma_b*(omega1-omega2)
- gamma_s*omega2, a single decaying exponential with time constant
tau = I/(gamma_b+gamma_s) and plateau omega1*gamma_b/(gamma_b+gamma_s).
The synchronization measure is delta = (omega1-omega2)/omega1, with
long-time value delta_inf = gamma_s/(gamma_b+gamma_s).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import ConfigError, ConvergenceError
from .material import ParticleSpec
from .torque import (
    FrictionCoefficients,
    SpinPair,
    friction_coefficients,
    mutual_torque,
    vacuum_torque,
)

if TYPE_CHECKING:
    from .config import RunConfig

__all__ = [
    "DIRECT_EVAL_FLOOR",
    "RotorState",
    "Trajectory",
    "moment_of_inertia",
    "delta_measure",
    "delta_infinity",
    "default_time_grid",
    "solve_linear",
    "solve_nonlinear",
    "sync_time",
]

# Smallest spin scale at which the direct kernels still converge at the
# default tolerance: spectral shifts below ~1e8 rad/s move the thermal
# weights by so few ulp that adaptive refinement floors above rel_tol.
# One safety decade on top of the measured boundary.
DIRECT_EVAL_FLOOR = 1e9


@dataclass(frozen=True)
class RotorState:
    """Instantaneous state: driver spin, follower spin, time."""

    omega1: float
    omega2: float
    time: float


@dataclass(frozen=True)
class Trajectory:
    """Time series of the follower spin and the synchronization measure.

    zero_coupling marks the degenerate gamma_b + gamma_s = 0 case where
    the follower never moves and the series is constant.
    """

    times: np.ndarray
    omega2: np.ndarray
    delta: np.ndarray
    meta: "RunConfig | None" = None
    zero_coupling: bool = False

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.size == 0:
            raise ConfigError("trajectory must contain at least one sample")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ConfigError("trajectory times must be strictly increasing")

    @property
    def samples(self):
        """Iterator of (time, omega2, delta) tuples."""
        return zip(self.times.tolist(), self.omega2.tolist(), self.delta.tolist())


def moment_of_inertia(particle: ParticleSpec) -> float:
    """Solid sphere about its symmetry axis: (2/5) m a^2."""
    mass = particle.mass_density * particle.volume
    return 0.4 * mass * particle.radius**2


def delta_measure(omega1: float, omega2):
    """Synchronization measure (omega1 - omega2)/omega1."""
    if not omega1 > 0.0:
        raise ConfigError("delta_measure requires omega1 > 0")
    w2 = np.asarray(omega2, dtype=float)
    out = (omega1 - w2) / omega1
    return out if out.ndim else float(out)


def delta_infinity(coeffs: FrictionCoefficients) -> float:
    """Long-time plateau gamma_s/(gamma_s + gamma_b); 1.0 if uncoupled."""
    denom = coeffs.gamma_s + coeffs.gamma_b
    if denom == 0.0:
        return 1.0
    return coeffs.gamma_s / denom


def default_time_grid(tau: float, samples: int = 400) -> np.ndarray:
    """t = 0 plus `samples` log-spaced times over [1e-3, 1e3] * tau."""
    if not (tau > 0.0 and np.isfinite(tau)):
        raise ConfigError("default_time_grid requires finite tau > 0")
    if samples < 2:
        raise ConfigError("require samples >= 2")
    return np.concatenate([[0.0], np.geomspace(1e-3 * tau, 1e3 * tau, samples)])


def solve_linear(
    omega1: float,
    inertia: float,
    coeffs: FrictionCoefficients,
    t_grid,
    meta: "RunConfig | None" = None,
) -> Trajectory:
    """Closed-form solution of the linearized follower equation on t_grid."""
    if inertia <= 0.0:
        raise ConfigError("inertia must be > 0")
    if not omega1 > 0.0:
        raise ConfigError("solve_linear requires omega1 > 0")
    t = np.asarray(t_grid, dtype=float)
    denom = coeffs.gamma_s + coeffs.gamma_b
    if denom == 0.0:
        w2 = np.zeros_like(t)
        return Trajectory(times=t, omega2=w2, delta=delta_measure(omega1, w2), meta=meta, zero_coupling=True)
    plateau = omega1 * coeffs.gamma_b / denom
    w2 = plateau * -np.expm1(-denom * t / inertia)
    return Trajectory(times=t, omega2=w2, delta=delta_measure(omega1, w2), meta=meta)


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _pair_scale(o1: float, o2: float) -> float:
    """Smallest nonzero scale among the spins and their difference."""
    scales = [abs(x) for x in (o1, o2, o1 - o2) if x != 0.0]
    return min(scales) if scales else 0.0


def solve_nonlinear(config: "RunConfig") -> Trajectory:
    """Adaptive step-doubling RK4 on the full torque balance.

    Torques are re-evaluated every stage, each channel independently:
    the direct kernel when its spin scales sit at or above
    DIRECT_EVAL_FLOOR, the linearized coefficient below (where the two
    agree to better than the integrator tolerance anyway). The follower
    transits arbitrarily small spins on its way up, and near the plateau
    the spin difference shrinks without bound, so both fallbacks are
    always exercised.
    """
    particle = config.particle
    inertia = moment_of_inertia(particle)
    coeffs, _ = friction_coefficients(
        particle,
        config.distance,
        config.thermal,
        config.quad,
        coupling_scale=config.coupling_scale,
        thermal_weight=config.thermal_weight,
        coth_half_argument=config.coth_half_argument,
    )
    denom = coeffs.gamma_s + coeffs.gamma_b
    omega1 = config.omega1
    if denom == 0.0:
        t = np.array([0.0, 1.0])
        w2 = np.zeros_like(t)
        return Trajectory(times=t, omega2=w2, delta=delta_measure(omega1, w2), meta=config, zero_coupling=True)
    tau = inertia / denom
    grid = default_time_grid(tau, config.samples)

    def net_torque(_t: float, w2: float) -> float:
        if _pair_scale(omega1, w2) >= DIRECT_EVAL_FLOOR:
            drive = mutual_torque(
                SpinPair(omega1, w2),
                config.distance,
                particle,
                config.thermal.T,
                config.quad,
                coupling_scale=config.coupling_scale,
                thermal_weight=config.thermal_weight,
            )
        else:
            drive = coeffs.gamma_b * (omega1 - w2)
        if abs(w2) >= DIRECT_EVAL_FLOOR:
            drag = vacuum_torque(
                w2,
                particle,
                config.thermal,
                config.quad,
                coth_half_argument=config.coth_half_argument,
            )
        else:
            drag = coeffs.gamma_s * w2
        return drive - drag

    def acc(t: float, w2: float) -> float:
        return net_torque(t, w2) / inertia

    rtol = 1e-6
    tol = rtol * abs(omega1)
    # 2.5*tau keeps h inside the real stability interval of RK4 for the
    # linearized flow, so the approach to the plateau stays monotone.
    h_max = 2.5 * tau
    h_min = 1e-12 * tau

    samples = [0.0]
    t_now, y = 0.0, 0.0
    h = min(1e-3 * tau, h_max)
    for t_target in grid[1:]:
        while t_now < t_target:
            h = min(h, t_target - t_now, h_max)
            if h < h_min:
                raise ConvergenceError(f"step size underflow at t = {t_now:.6e} s (h = {h:.3e})")
            y_full = _rk4_step(acc, t_now, y, h)
            y_half = _rk4_step(acc, t_now, y, 0.5 * h)
            y_two = _rk4_step(acc, t_now + 0.5 * h, y_half, 0.5 * h)
            err = abs(y_two - y_full) / 15.0
            if err <= tol:
                # local extrapolation: fifth-order combination
                y = y_two + (y_two - y_full) / 15.0
                t_now += h
                grow = 2.0 if err == 0.0 else min(2.0, 0.9 * (tol / err) ** 0.2)
                h = min(h_max, h * grow)
            else:
                h = max(h_min, 0.5 * h)
        samples.append(y)

    w2 = np.asarray(samples)
    return Trajectory(times=grid, omega2=w2, delta=delta_measure(omega1, w2), meta=config)


def sync_time(traj: Trajectory, threshold: float = 0.01) -> float | None:
    """First time with delta <= threshold, linearly interpolated between
    the bracketing samples; None if the trajectory never reaches it."""
    if not (0.0 < threshold < 1.0):
        raise ConfigError("threshold must lie in (0, 1)")
    t = traj.times
    delta = traj.delta
    if t.size == 0:
        raise ConfigError("empty trajectory")
    hits = np.nonzero(delta <= threshold)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return float(t[0])
    d0, d1 = float(delta[i - 1]), float(delta[i])
    t0, t1 = float(t[i - 1]), float(t[i])
    return t0 + (t1 - t0) * (d0 - threshold) / (d0 - d1)
