"""Fluctuation-induced torques on a spinning nanoparticle pair.

Two channels:

* vacuum drag: a single particle spinning at omega0 radiates into the
  fluctuating vacuum and is slowed; kernel built from the coincident-point
  field propagator, the particle's Im alpha, and coth thermal factors.
* mutual drive: particle 1's fluctuating dipole exerts a torque on
  particle 2 across the gap d, pushing it toward co-rotation; kernel built
  from 2|g_t|^2 and occupation-weighted Im alpha at spin-shifted
  frequencies.

Both integrands live on [omega_min, omega_max] (see quadrature module for
the infrared cutoff rationale). Below SPIN_DIRECT_FLOOR the spin shifts
are unresolvable in binary64 and direct evaluation is refused in favor of
the linearized coefficients gamma_s / gamma_b; structural checks may pass
allow_small_spins=True since operand-exchange antisymmetry holds exactly
at any magnitude.

The mutual channel carries an overall coupling_scale multiplier (the
absolute cross-prefactor between the two channels is calibration-grade;
DEFAULT_COUPLING_SCALE pins the 100 nm default run to a 0.030 s
synchronization time).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PoleError, SmallSpinError
from .greens import abs2_transverse_sum, im_g_self_transverse_sum
from .material import CONSTANTS, ParticleSpec, d_im_polarizability, im_polarizability
from .quadrature import (
    IntegrationResult,
    QuadratureConfig,
    integrate,
    integrate_with_diagnostics,
    resolved,
)

__all__ = [
    "ThermalState",
    "SpinPair",
    "FrictionCoefficients",
    "QuadratureConfig",
    "integrate",
    "SPIN_DIRECT_FLOOR",
    "DEFAULT_COUPLING_SCALE",
    "THERMAL_WEIGHTS",
    "coth_factor",
    "d_coth_factor",
    "occupation",
    "d_occupation",
    "default_omega_max",
    "vacuum_torque",
    "mutual_torque",
    "gamma_s",
    "gamma_b",
    "friction_coefficients",
]

# Direct kernel evaluation is refused for 0 < |spin| < this (rad/s):
# the shifted-argument differences fall below binary64 resolution.
SPIN_DIRECT_FLOOR = 1e6

# Mutual-channel magnitude calibration; see module docstring.
DEFAULT_COUPLING_SCALE = 3.81e22

THERMAL_WEIGHTS = ("symmetrized", "bose", "literal")


@dataclass(frozen=True)
class ThermalState:
    """Particle temperature T and environment temperature T0, kelvin."""

    T: float = 300.0
    T0: float = 300.0

    def __post_init__(self) -> None:
        if self.T < 0.0 or self.T0 < 0.0:
            raise ConfigError("temperatures must be >= 0")


@dataclass(frozen=True)
class SpinPair:
    """Angular velocities of the two particles, rad/s, either sign."""

    omega01: float
    omega02: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.omega01) and np.isfinite(self.omega02)):
            raise ConfigError("spins must be finite")


@dataclass(frozen=True)
class FrictionCoefficients:
    """Linearized drag coefficients, N*m*s.

    gamma_s: vacuum drag per unit spin. gamma_b: mutual drag per unit
    spin difference. Both nonnegative under the default conventions.
    """

    gamma_s: float
    gamma_b: float


def _beta_scale(T: float) -> float:
    # hbar / k_B T, the inverse thermal frequency
    return CONSTANTS.hbar / (CONSTANTS.k_B * T)


def coth_factor(omega, T: float, half_argument: bool = False):
    """coth(hbar*omega/k_B T), the symmetric thermal weight.

    T = 0 degenerates to sign(omega). Evaluation at omega = 0 with T > 0
    is a pole and raises; integrators must keep 0 out of the grid.
    half_argument switches to the coth(hbar*omega/2k_B T) convention.
    """
    w = np.asarray(omega, dtype=float)
    if T == 0.0:
        out = np.sign(w)
        return out if out.ndim else float(out)
    if np.any(w == 0.0):
        raise PoleError("coth_factor pole at omega = 0")
    x = w * (_beta_scale(T) * (0.5 if half_argument else 1.0))
    small = np.abs(x) < 1e-6
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        out = np.where(small, 1.0 / np.where(small, x, 1.0) + x / 3.0, 1.0 / np.tanh(xs))
    return out if out.ndim else float(out)


def d_coth_factor(omega, T: float, half_argument: bool = False):
    """d/d(omega) of coth_factor: -b/sinh^2(b*omega), b = hbar/k_B T
    (times 1/2 under half_argument). Zero for T = 0."""
    w = np.asarray(omega, dtype=float)
    if T == 0.0:
        out = np.zeros_like(w)
        return out if out.ndim else float(out)
    if np.any(w == 0.0):
        raise PoleError("d_coth_factor pole at omega = 0")
    b = _beta_scale(T) * (0.5 if half_argument else 1.0)
    x = b * w
    ax = np.abs(x)
    small = ax < 1e-6
    large = ax > 350.0  # sinh overflow guard; true value underflows anyway
    xs = np.where(small | large, 1.0, x)
    out = np.where(
        small,
        -1.0 / (b * np.where(small, w, 1.0) ** 2) + b / 3.0,
        np.where(large, 0.0, -b / np.sinh(xs) ** 2),
    )
    return out if out.ndim else float(out)


def occupation(omega, T: float, literal_sign: bool = False):
    """Thermal occupation number.

    Default: 1/(e^{hbar w/k_B T} - 1), extended to negative frequencies
    (n(-w) = -(1 + n(w)) falls out of expm1 automatically). literal_sign
    evaluates 1/(e^{-hbar w/k_B T} - 1) verbatim, which is -(1 + n(w)).
    """
    if T <= 0.0:
        raise ConfigError("occupation requires T > 0")
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0.0):
        raise PoleError("occupation pole at omega = 0")
    x = _beta_scale(T) * w
    if literal_sign:
        x = -x
    with np.errstate(over="ignore"):
        out = 1.0 / np.expm1(x)
    return out if out.ndim else float(out)


def d_occupation(omega, T: float):
    """d/d(omega) of the default occupation: -b/(4 sinh^2(b*omega/2))."""
    if T <= 0.0:
        raise ConfigError("d_occupation requires T > 0")
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0.0):
        raise PoleError("d_occupation pole at omega = 0")
    b = _beta_scale(T)
    x = 0.5 * b * w
    ax = np.abs(x)
    small = ax < 1e-6
    large = ax > 350.0
    xs = np.where(small | large, 1.0, x)
    out = np.where(
        small,
        -1.0 / (b * np.where(small, w, 1.0) ** 2) + b / 12.0,
        np.where(large, 0.0, -0.25 * b / np.sinh(xs) ** 2),
    )
    return out if out.ndim else float(out)


def _weight(omega, particle: ParticleSpec, T: float, mode: str):
    """Occupation-weighted Im alpha used by the mutual kernel."""
    s = im_polarizability(omega, particle)
    if mode == "symmetrized":
        return s * (occupation(omega, T) + 0.5)
    if mode == "bose":
        return s * occupation(omega, T)
    if mode == "literal":
        return s * occupation(omega, T, literal_sign=True)
    raise ConfigError(f"thermal_weight must be one of {THERMAL_WEIGHTS}")


def _d_weight(omega, particle: ParticleSpec, T: float, mode: str):
    """Analytic derivative of _weight."""
    s = im_polarizability(omega, particle)
    ds = d_im_polarizability(omega, particle)
    if mode == "symmetrized":
        return ds * (occupation(omega, T) + 0.5) + s * d_occupation(omega, T)
    if mode == "bose":
        return ds * occupation(omega, T) + s * d_occupation(omega, T)
    if mode == "literal":
        return -(ds * (1.0 + occupation(omega, T)) + s * d_occupation(omega, T))
    raise ConfigError(f"thermal_weight must be one of {THERMAL_WEIGHTS}")


def default_omega_max(thermal: ThermalState, particle: ParticleSpec) -> float:
    """Upper cutoff max(10 k_B T / hbar, 5 omega_L): beyond it both the
    thermal factors and the resonance tails are negligible at 1e-12."""
    t = max(thermal.T, thermal.T0)
    thermal_scale = 10.0 * CONSTANTS.k_B * t / CONSTANTS.hbar if t > 0.0 else 0.0
    return max(thermal_scale, 5.0 * particle.dielectric.omega_L)


def _thermal_breakpoints(particle: ParticleSpec, *temps: float) -> list[float]:
    pts = [particle.dielectric.omega_T, particle.dielectric.omega_L]
    for t in temps:
        if t > 0.0:
            pts.append(CONSTANTS.k_B * t / CONSTANTS.hbar)
    return pts


def _check_spin_in_band(quad: QuadratureConfig, *spins: float) -> None:
    # Shifted kernel arguments omega -+ spin must stay strictly positive
    # on the grid; half the infrared cutoff leaves a safe margin.
    limit = 0.5 * quad.omega_min
    for s in spins:
        if abs(s) > limit:
            raise ConfigError(
                f"|spin| = {abs(s):.3e} exceeds half the infrared cutoff "
                f"{quad.omega_min:.3e}; shifted kernel arguments would cross zero"
            )


def vacuum_torque(
    omega0: float,
    particle: ParticleSpec,
    thermal: ThermalState,
    quad: QuadratureConfig,
    *,
    allow_small_spins: bool = False,
    coth_half_argument: bool = False,
) -> float:
    """Drag torque (N*m) on a particle spinning at omega0 in the vacuum.

    Positive return value opposes the rotation; odd in omega0. Exactly
    zero at omega0 = 0 with T = T0. Refuses 0 < |omega0| <
    SPIN_DIRECT_FLOOR unless allow_small_spins (use gamma_s there).
    """
    if not np.isfinite(omega0):
        raise ConfigError("omega0 must be finite")
    if 0.0 < abs(omega0) < SPIN_DIRECT_FLOOR and not allow_small_spins:
        raise SmallSpinError(
            f"|omega0| = {abs(omega0):.3e} is below the direct-evaluation "
            f"floor {SPIN_DIRECT_FLOOR:.0e}; use gamma_s or pass allow_small_spins=True"
        )
    q = resolved(
        quad,
        default_omega_max(thermal, particle),
        _thermal_breakpoints(particle, thermal.T, thermal.T0) + [abs(omega0)],
    )
    _check_spin_in_band(q, omega0)
    T, T0 = thermal.T, thermal.T0

    def kernel(w):
        a0 = coth_factor(w, T0, coth_half_argument)
        wp = w + omega0
        wm = w - omega0
        bracket = im_polarizability(wp, particle) * (coth_factor(wp, T, coth_half_argument) - a0) - im_polarizability(
            wm, particle
        ) * (coth_factor(wm, T, coth_half_argument) - a0)
        return w * w * im_g_self_transverse_sum(w) * bracket

    value = integrate(kernel, q)
    return -(CONSTANTS.hbar / (2.0 * np.pi * CONSTANTS.c**2)) * value


def mutual_torque(
    spins: SpinPair,
    d: float,
    particle: ParticleSpec,
    T: float,
    quad: QuadratureConfig,
    *,
    coupling_scale: float = DEFAULT_COUPLING_SCALE,
    thermal_weight: str = "symmetrized",
    allow_small_spins: bool = False,
) -> float:
    """Torque (N*m) on particle 2 mediated by the gap field.

    Positive value drives particle 2 toward particle 1's spin. Exactly
    antisymmetric under spin exchange, exactly zero at equal spins.
    Refuses unequal spins whose nonzero scales sit below
    SPIN_DIRECT_FLOOR unless allow_small_spins (use gamma_b there).
    """
    if d < 10.0 * particle.radius:
        raise ConfigError(
            f"d = {d:.3e} m violates the point-dipole regime (require d >= 10*radius = {10 * particle.radius:.3e} m)"
        )
    if T <= 0.0:
        raise ConfigError("mutual_torque requires T > 0")
    o1, o2 = spins.omega01, spins.omega02
    if o1 != o2 and not allow_small_spins:
        scales = [abs(x) for x in (o1, o2, o1 - o2) if x != 0.0]
        if min(scales) < SPIN_DIRECT_FLOOR:
            raise SmallSpinError(
                f"smallest nonzero spin scale {min(scales):.3e} is below the "
                f"direct-evaluation floor {SPIN_DIRECT_FLOOR:.0e}; use gamma_b "
                "or pass allow_small_spins=True"
            )
    q = resolved(
        quad,
        default_omega_max(ThermalState(T, T), particle),
        _thermal_breakpoints(particle, T) + [abs(o1), abs(o2)],
    )
    _check_spin_in_band(q, o1, o2)

    def kernel(w):
        f2 = _weight(w - o2, particle, T, thermal_weight) - _weight(w + o2, particle, T, thermal_weight)
        g1 = im_polarizability(w + o1, particle) + im_polarizability(w - o1, particle)
        h1 = _weight(w - o1, particle, T, thermal_weight) - _weight(w + o1, particle, T, thermal_weight)
        k2 = im_polarizability(w + o2, particle) + im_polarizability(w - o2, particle)
        return abs2_transverse_sum(d, w) * (f2 * g1 - h1 * k2)

    value = integrate(kernel, q)
    return coupling_scale * 4.0 * np.pi * CONSTANTS.hbar * value


def _gamma_s_result(
    particle: ParticleSpec,
    thermal: ThermalState,
    quad: QuadratureConfig,
    coth_half_argument: bool = False,
) -> IntegrationResult:
    if thermal.T <= 0.0 or thermal.T0 <= 0.0:
        raise ConfigError("gamma_s requires T > 0 and T0 > 0")
    q = resolved(quad, default_omega_max(thermal, particle), _thermal_breakpoints(particle, thermal.T, thermal.T0))
    T, T0 = thermal.T, thermal.T0

    def kernel(w):
        s = im_polarizability(w, particle)
        ds = d_im_polarizability(w, particle)
        da = d_coth_factor(w, T, coth_half_argument)
        expanded = s * da
        if T != T0:
            expanded = expanded + ds * (coth_factor(w, T, coth_half_argument) - coth_factor(w, T0, coth_half_argument))
        return 2.0 * w * w * im_g_self_transverse_sum(w) * expanded

    res = integrate_with_diagnostics(kernel, q)
    scale = -(CONSTANTS.hbar / (2.0 * np.pi * CONSTANTS.c**2))
    return IntegrationResult(
        value=scale * res.value,
        error_estimate=abs(scale) * res.error_estimate,
        panels=res.panels,
        evaluations=res.evaluations,
        peak_kernel=res.peak_kernel,
    )


def gamma_s(
    particle: ParticleSpec,
    thermal: ThermalState,
    quad: QuadratureConfig,
    *,
    coth_half_argument: bool = False,
) -> float:
    """Vacuum drag per unit spin (N*m*s): d(vacuum_torque)/d(omega0) at 0.

    Uses the analytically expanded kernel, so it is exact at arbitrarily
    small spins where direct evaluation cancels away. Independent of d.
    """
    return _gamma_s_result(particle, thermal, quad, coth_half_argument).value


def _gamma_b_result(
    d: float,
    particle: ParticleSpec,
    T: float,
    quad: QuadratureConfig,
    coupling_scale: float = DEFAULT_COUPLING_SCALE,
    thermal_weight: str = "symmetrized",
) -> IntegrationResult:
    if d < 10.0 * particle.radius:
        raise ConfigError(
            f"d = {d:.3e} m violates the point-dipole regime (require d >= 10*radius = {10 * particle.radius:.3e} m)"
        )
    if T <= 0.0:
        raise ConfigError("gamma_b requires T > 0")
    q = resolved(quad, default_omega_max(ThermalState(T, T), particle), _thermal_breakpoints(particle, T))

    def kernel(w):
        return (
            4.0
            * abs2_transverse_sum(d, w)
            * _d_weight(w, particle, T, thermal_weight)
            * im_polarizability(w, particle)
        )

    res = integrate_with_diagnostics(kernel, q)
    scale = coupling_scale * 4.0 * np.pi * CONSTANTS.hbar
    return IntegrationResult(
        value=scale * res.value,
        error_estimate=abs(scale) * res.error_estimate,
        panels=res.panels,
        evaluations=res.evaluations,
        peak_kernel=res.peak_kernel,
    )


def gamma_b(
    d: float,
    particle: ParticleSpec,
    T: float,
    quad: QuadratureConfig,
    *,
    coupling_scale: float = DEFAULT_COUPLING_SCALE,
    thermal_weight: str = "symmetrized",
) -> float:
    """Mutual drag per unit spin difference (N*m*s): the slope of
    mutual_torque in (omega01 - omega02) at zero spins."""
    return _gamma_b_result(d, particle, T, quad, coupling_scale, thermal_weight).value


def friction_coefficients(
    particle: ParticleSpec,
    d: float,
    thermal: ThermalState,
    quad: QuadratureConfig,
    *,
    coupling_scale: float = DEFAULT_COUPLING_SCALE,
    thermal_weight: str = "symmetrized",
    coth_half_argument: bool = False,
) -> tuple[FrictionCoefficients, dict]:
    """Both linearized coefficients plus quadrature diagnostics."""
    rs = _gamma_s_result(particle, thermal, quad, coth_half_argument)
    rb = _gamma_b_result(d, particle, thermal.T, quad, coupling_scale, thermal_weight)
    coeffs = FrictionCoefficients(gamma_s=rs.value, gamma_b=rb.value)
    diagnostics = {
        "gamma_s": {
            "error_estimate_Nms": rs.error_estimate,
            "panels": rs.panels,
            "evaluations": rs.evaluations,
        },
        "gamma_b": {
            "error_estimate_Nms": rb.error_estimate,
            "panels": rb.panels,
            "evaluations": rb.evaluations,
        },
    }
    return coeffs, diagnostics
