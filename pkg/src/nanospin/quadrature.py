"""Adaptive panel quadrature with an interleaved 7/15-point rule pair.

The torque integrands are smooth except for a sharp phonon resonance
(width ~9e11 rad/s on a ~9e14 rad/s domain) and thermal-scale structure,
so a globally adaptive Gauss-Kronrod scheme with resonance breakpoints
converges in a few dozen panels. The engine is deterministic: identical
inputs produce an identical panel sequence and an identical float result.

Node and weight tables are the standard published 15-point Kronrod
extension of 7-point Gauss; the test suite verifies them by polynomial
exactness (degree 22 for the 15-point rule, degree 13 for the embedded
7-point rule).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, ConvergenceError, TailNotNegligibleError

__all__ = [
    "QuadratureConfig",
    "IntegrationResult",
    "integrate",
    "integrate_with_diagnostics",
]

# Kronrod-15 abscissae (positive half, descending) and weights; the
# embedded Gauss-7 points are the odd-index entries plus the center.
_XK = np.array([
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
])
_WK = np.array([
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
])
_WG = np.array([
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
])

# Full 15-point arrays on [-1, 1], ascending.
_NODES = np.concatenate([-_XK[:-1], [0.0], _XK[-2::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], [_WK[-1]], _WK[-2::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:14:2] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance and domain settings for the frequency integrals.

    rel_tol : relative tolerance on the total integral, in (0, 1e-3].
    abs_tol : absolute tolerance floor (torque units at the call site).
    max_subdivisions : panel splits before giving up.
    omega_min : lower integration bound, rad/s. The raw inter-particle
        kernel is infrared-divergent, so the physical integrals start at
        a small cutoff (default 1e13, ~7% of the phonon resonance); all
        reported quantities are insensitive to it at the 1e-4 level.
    omega_max : upper cutoff; None means "derive from the thermal state"
        (resolved by the torque assemblers before integration).
    breakpoints : initial panel edges (resonances, thermal scale);
        normalized to a sorted tuple, clipped to the domain at call time.
    certify_tail : require |kernel(omega_max)| <= 1e-12 * peak |kernel|.
        Disable for finite-support integrands whose natural domain ends
        exactly at omega_max.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 200
    omega_min: float = 1e13
    omega_max: float | None = None
    breakpoints: tuple[float, ...] = ()
    certify_tail: bool = True

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ConfigError("rel_tol must lie in (0, 1e-3]")
        if self.abs_tol < 0.0:
            raise ConfigError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ConfigError("max_subdivisions must be >= 1")
        if self.omega_min < 0.0:
            raise ConfigError("omega_min must be >= 0")
        pts = tuple(sorted(float(b) for b in set(self.breakpoints)))
        object.__setattr__(self, "breakpoints", pts)
        if self.omega_max is not None:
            if self.omega_max <= self.omega_min:
                raise ConfigError("omega_max must exceed omega_min")
            if pts and self.omega_max <= pts[-1]:
                raise ConfigError("omega_max must exceed the largest breakpoint")


@dataclass(frozen=True)
class IntegrationResult:
    """Value plus the diagnostics the run summary reports."""

    value: float
    error_estimate: float
    panels: int
    evaluations: int
    peak_kernel: float


def _panel(kernel, a: float, b: float):
    """One 15-point evaluation on [a, b]: (I15, |I15-I7|, peak|f|)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(kernel(mid + half * _NODES), dtype=float)
    if y.shape != (15,):
        raise ConfigError("kernel must map a float array to a same-shape array")
    if not np.all(np.isfinite(y)):
        raise ConvergenceError(
            f"kernel is not finite inside panel [{a:.6e}, {b:.6e}]",
            worst_panel=(a, b),
        )
    i15 = half * float(_WEIGHTS_K @ y)
    i7 = half * float(_WEIGHTS_G @ y)
    return i15, abs(i15 - i7), float(np.max(np.abs(y)))


def integrate_with_diagnostics(
    kernel: Callable[[np.ndarray], np.ndarray],
    quad: QuadratureConfig,
) -> IntegrationResult:
    """Globally adaptive integration of kernel over [omega_min, omega_max].

    Splits the current worst panel at its midpoint until the summed error
    estimate meets max(abs_tol, rel_tol * |integral|). Raises
    ConvergenceError (with the worst panel bounds) after max_subdivisions,
    and TailNotNegligibleError when tail certification fails.
    """
    if quad.omega_max is None:
        raise ConfigError("omega_max unresolved; supply a value or use the torque-level entry points")
    lo, hi = quad.omega_min, quad.omega_max

    edges = [lo] + [b for b in quad.breakpoints if lo < b < hi] + [hi]
    heap: list[tuple[float, int, float, float, float]] = []
    counter = 0
    total = 0.0
    err_total = 0.0
    peak = 0.0
    evals = 0
    for a, b in zip(edges[:-1], edges[1:]):
        i15, err, pk = _panel(kernel, a, b)
        total += i15
        err_total += err
        peak = max(peak, pk)
        evals += 15
        heapq.heappush(heap, (-err, counter, a, b, i15))
        counter += 1

    splits = 0
    while err_total > max(quad.abs_tol, quad.rel_tol * abs(total)):
        if splits >= quad.max_subdivisions:
            worst = heap[0]
            raise ConvergenceError(
                f"no convergence after {splits} subdivisions; "
                f"worst panel [{worst[2]:.6e}, {worst[3]:.6e}] "
                f"error {-worst[0]:.3e}",
                worst_panel=(worst[2], worst[3]),
            )
        neg_err, _, a, b, i_old = heapq.heappop(heap)
        total -= i_old
        err_total += neg_err  # neg_err = -err of the popped panel
        m = 0.5 * (a + b)
        for aa, bb in ((a, m), (m, b)):
            i15, err, pk = _panel(kernel, aa, bb)
            total += i15
            err_total += err
            peak = max(peak, pk)
            evals += 15
            heapq.heappush(heap, (-err, counter, aa, bb, i15))
            counter += 1
        splits += 1

    if quad.certify_tail:
        tail = float(np.abs(np.asarray(kernel(np.array([hi])), dtype=float))[0])
        evals += 1
        peak = max(peak, tail)
        if tail > 1e-12 * peak:
            raise TailNotNegligibleError(
                f"kernel at omega_max={hi:.6e} is {tail:.3e}, "
                f"above 1e-12 of the peak {peak:.3e}; raise omega_max"
            )

    return IntegrationResult(
        value=total,
        error_estimate=err_total,
        panels=len(heap),
        evaluations=evals,
        peak_kernel=peak,
    )


def integrate(kernel: Callable[[np.ndarray], np.ndarray], quad: QuadratureConfig) -> float:
    """Value-only wrapper around integrate_with_diagnostics."""
    return integrate_with_diagnostics(kernel, quad).value


def resolved(quad: QuadratureConfig, omega_max: float, extra_breakpoints: Sequence[float] = ()) -> QuadratureConfig:
    """Copy of quad with omega_max filled in (if unset) and breakpoints merged.

    Breakpoints outside (0, omega_max) are dropped: they mark panel edges,
    so points outside the domain carry no information.
    """
    omax = quad.omega_max if quad.omega_max is not None else omega_max
    merged = tuple(quad.breakpoints) + tuple(extra_breakpoints)
    return QuadratureConfig(
        rel_tol=quad.rel_tol,
        abs_tol=quad.abs_tol,
        max_subdivisions=quad.max_subdivisions,
        omega_min=quad.omega_min,
        omega_max=omax,
        breakpoints=tuple(b for b in merged if 0.0 < b < omax),
        certify_tail=quad.certify_tail,
    )
