"""Free-particle propagators, the two analytic approximations, and their bounds.

The spectral propagator is exact up to discretization (multiply the momentum
wave function by exp(-i p^2 t / 2 m hbar)); the direct quadrature propagator
is its deliberately independent O(N^2) oracle.  The short-time translation
and the large-time asymptotic form come with the rigorous sup-norm bounds

    sup_x |delta psi|^2 <= sqrt(t / (pi m hbar^3)) Dp^2        (short time)
    sup_x |delta psi|^2 <= sqrt(m^3 / (pi hbar^3 t^3)) Dx^2    (large time)

on the remainder delta psi once the stated reference (translated packet,
asymptotic form) is subtracted.

Two timescale conventions appear for the onset of the short-time regime:
t << m hbar / (2 Dp^2) and the weaker t << pi m hbar / Dp^2, a factor ~2pi
apart.  Tests use the stricter one; both are exposed via
observables.timescales (t_p) and the bound formula itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import (
    ComplexField,
    PhysicsParams,
    Representation,
    from_momentum,
    to_momentum,
)

__all__ = [
    "Method",
    "PropagationResult",
    "propagate_spectral",
    "propagate_quadrature",
    "short_time_approx",
    "short_time_error_bound",
    "asymptotic_form",
    "asymptotic_error_bound",
]

# Cap on scratch size for the O(N^2) kernels: rows per chunk are sized so a
# chunk holds at most ~4M complex doubles (64 MB).
_CHUNK_ELEMENTS = 4_000_000


class Method(Enum):
    SPECTRAL_EXACT = "spectral-exact"
    QUADRATURE = "quadrature"
    SHORT_TIME = "short-time"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class PropagationResult:
    field: ComplexField
    t: float
    method: Method


def _require_position(f: ComplexField, who: str):
    if f.representation is not Representation.POSITION:
        raise ValueError(f"{who} expects a position-representation field")


def propagate_spectral(psi0: ComplexField, t: float, params: PhysicsParams) -> PropagationResult:
    """Exact free evolution up to discretization, unitary by construction.

    The input should be decayed at the grid edges, otherwise evolution is
    periodic (the transform pair wraps around).
    """
    _require_position(psi0, "propagate_spectral")
    if t == 0:
        out = ComplexField(psi0.values.copy(), psi0.grid)
        return PropagationResult(out, 0.0, Method.SPECTRAL_EXACT)
    phi = to_momentum(psi0, params)
    p = psi0.grid.momentum_points(params.hbar)
    evolved = phi.values * np.exp(-1j * p**2 * t / (2 * params.mass * params.hbar))
    out = from_momentum(
        ComplexField(evolved, psi0.grid, Representation.MOMENTUM, hbar=params.hbar), params
    )
    return PropagationResult(out, t, Method.SPECTRAL_EXACT)


def _trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def propagate_quadrature(psi0: ComplexField, t: float, params: PhysicsParams) -> PropagationResult:
    """Direct trapezoidal evaluation of the propagator integral.

    psi(x,t) = int K(x,x',t) psi(x',0) dx' with the free kernel
    K = sqrt(m / 2 pi i hbar t) exp[i m (x-x')^2 / 2 hbar t].  O(N^2); the
    independent oracle for propagate_spectral.  Accuracy on oscillatory
    integrands is controlled by grid sizing: keep
    step <= hbar / (4 * p_max_relevant) with p_max_relevant the largest of
    the packet's momentum content and m |x - x'|_max / t.
    """
    _require_position(psi0, "propagate_quadrature")
    if t == 0:
        raise ValueError("propagate_quadrature: kernel is singular at t = 0 (identity)")
    m, hbar = params.mass, params.hbar
    x = psi0.grid.points
    weighted = _trapezoid_weights(psi0.grid.n, psi0.grid.step) * psi0.values
    nz = np.flatnonzero(weighted)
    if nz.size == 0:
        out = ComplexField(np.zeros_like(psi0.values), psi0.grid)
        return PropagationResult(out, t, Method.QUADRATURE)
    xs, vals = x[nz], weighted[nz]
    prefactor = np.sqrt(m / (2j * np.pi * hbar * t))
    out_values = np.empty(psi0.grid.n, dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // xs.size)
    for start in range(0, psi0.grid.n, rows):
        block = x[start : start + rows, None] - xs[None, :]
        out_values[start : start + rows] = np.exp(1j * m * block**2 / (2 * hbar * t)) @ vals
    out = ComplexField(prefactor * out_values, psi0.grid)
    return PropagationResult(out, t, Method.QUADRATURE)


def short_time_approx(
    psi0: ComplexField, t: float, params: PhysicsParams, pbar: float
) -> PropagationResult:
    """Short-time translation: exp(+i pbar^2 t / 2 m hbar) psi0(x - pbar t / m).

    The phase follows from dropping the (p - pbar)^2 term in
    p^2 = 2 pbar p - pbar^2 + (p - pbar)^2 inside the momentum-space
    propagator, which leaves exp(+i pbar^2 t / 2 m hbar); with this sign the
    remainder is Galilean invariant (boosting the packet does not change
    |delta psi|) and the rigorous short-time bound holds for moving packets.

    The shift is applied in the momentum representation, so it is exact for
    non-integer-lattice displacements; what remains when comparing against
    exact propagation is the physics error of the approximation, not
    interpolation error.  Recommended for |t| << m hbar / Dp^2 (not enforced).
    """
    _require_position(psi0, "short_time_approx")
    if t == 0:
        out = ComplexField(psi0.values.copy(), psi0.grid)
        return PropagationResult(out, 0.0, Method.SHORT_TIME)
    m, hbar = params.mass, params.hbar
    shift = pbar * t / m
    phi = to_momentum(psi0, params)
    p = psi0.grid.momentum_points(hbar)
    shifted = phi.values * np.exp(-1j * p * shift / hbar)
    psi = from_momentum(
        ComplexField(shifted, psi0.grid, Representation.MOMENTUM, hbar=hbar), params
    )
    values = np.exp(1j * pbar**2 * t / (2 * m * hbar)) * psi.values
    return PropagationResult(ComplexField(values, psi0.grid), t, Method.SHORT_TIME)


def short_time_error_bound(delta_p: float, t: float, params: PhysicsParams) -> float:
    """Rigorous pointwise bound sup_x |delta psi(x,t)|^2 <= sqrt(t/(pi m hbar^3)) Dp^2.

    Returns inf when delta_p is infinite (discontinuous packets): the
    short-time picture is inapplicable there.
    """
    if t < 0:
        raise ValueError(f"bound requires t >= 0, got {t}")
    if delta_p < 0:
        raise ValueError(f"delta_p must be nonnegative, got {delta_p}")
    if math.isinf(delta_p):
        return math.inf
    m, hbar = params.mass, params.hbar
    return math.sqrt(t / (np.pi * m * hbar**3)) * delta_p**2


def _continuous_ft_at(
    values: np.ndarray, x: np.ndarray, step: float, p_targets: np.ndarray, hbar: float
) -> np.ndarray:
    """Trapezoidal continuous transform of grid samples at arbitrary momenta."""
    weighted = _trapezoid_weights(values.size, step) * values
    out = np.empty(p_targets.size, dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // values.size)
    for start in range(0, p_targets.size, rows):
        phase = np.exp(-1j * np.outer(p_targets[start : start + rows], x) / hbar)
        out[start : start + rows] = phase @ weighted
    return out / math.sqrt(2 * np.pi * hbar)


def asymptotic_form(
    phi0: ComplexField, xbar: float, t: float, params: PhysicsParams
) -> PropagationResult:
    """Large-time form sqrt(m/it) exp[i m (x^2 - xbar^2)/2 hbar t] phi0(m(x-xbar)/t).

    phi0 is evaluated off-lattice by band-limited interpolation: the momentum
    samples are transformed back to the position grid and the continuous
    transform is re-evaluated at the required momenta m(x - xbar)/t.  The
    resulting density is (m/t) |phi0(m(x-xbar)/t)|^2.  Valid for
    |t| >> 2 m Dx^2 / hbar; t = 0 is rejected.
    """
    if phi0.representation is not Representation.MOMENTUM:
        raise ValueError("asymptotic_form expects a momentum-representation field")
    if t == 0:
        raise ValueError("asymptotic_form requires t != 0")
    if phi0.hbar != params.hbar:
        raise ValueError("phi0 momentum lattice hbar does not match params.hbar")
    m, hbar = params.mass, params.hbar
    grid = phi0.grid
    x = grid.points
    psi0 = from_momentum(phi0, params)
    p_targets = m * (x - xbar) / t
    phi_at = _continuous_ft_at(psi0.values, x, grid.step, p_targets, hbar)
    values = np.sqrt(m / (1j * t)) * np.exp(1j * m * (x**2 - xbar**2) / (2 * hbar * t)) * phi_at
    return PropagationResult(ComplexField(values, grid), t, Method.ASYMPTOTIC)


def asymptotic_error_bound(delta_x: float, t: float, params: PhysicsParams) -> float:
    """Rigorous bound sup_x |delta psi|^2 <= sqrt(m^3/(pi hbar^3 t^3)) Dx^2.

    delta_x is the spatial spread at the chosen initial instant; for packets
    with discontinuities the bound applies only when that instant is the one
    where the discontinuities exist (at any other time Dx does not exist).
    Returns inf for infinite delta_x.
    """
    if not t > 0:
        raise ValueError(f"bound requires t > 0, got {t}")
    if delta_x < 0:
        raise ValueError(f"delta_x must be nonnegative, got {delta_x}")
    if math.isinf(delta_x):
        return math.inf
    m, hbar = params.mass, params.hbar
    return math.sqrt(m**3 / (np.pi * hbar**3 * t**3)) * delta_x**2
