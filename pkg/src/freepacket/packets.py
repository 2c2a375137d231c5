"""Closed-form free-particle packet families, evaluable at arbitrary (x, t).

Two families built on the complex Gaussian

    chi(x,t) = (m tau / pi hbar)^(1/4) (t - i tau)^(-1/2)
               exp[ i m x^2 / (2 hbar (t - i tau)) ]

 * the Hermite-Gauss packets chi_n, generated by the invariant raising
   operator b+ = m x - p (t + i tau); they are shape-invariant, spreading
   only through the scale gamma(t) = sqrt(hbar (t^2 + tau^2) / (m tau));

 * the derivative packets (n-th spatial derivatives of chi), which are
   Hermite-Gaussians with the *complex* scale kappa and do change shape.

Plus the square packet with its sinc momentum function and its exact
evolution in terms of Fresnel integrals, and the Galilean boost that turns
any resting solution into a moving one.

All families are normalized to unit L2 norm at every time, and all complex
square roots take the principal branch, which keeps t = 0 values
real-positive where expected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import (
    ComplexField,
    PhysicsParams,
    Representation,
    fresnel,
    hermite,
    spectral_derivative,
)

__all__ = [
    "PhysicsParams",
    "GaussianFamily",
    "SquareFamily",
    "gaussian_chi",
    "hermite_gauss",
    "apply_b_dagger",
    "derivative_packet",
    "derivative_packet_asymptote",
    "square_initial",
    "square_momentum",
    "square_exact",
    "galilean_boost",
    "sample",
]

HERMITE_GAUSS_MAX_ORDER = 64
DERIVATIVE_MAX_ORDER = 16


@dataclass(frozen=True)
class GaussianFamily:
    """Gaussian-packet family with intrinsic timescale tau > 0."""

    params: PhysicsParams
    tau: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    def gamma(self, t: float) -> float:
        """Time-varying length scale gamma(t) = sqrt(hbar (t^2+tau^2)/(m tau))."""
        p = self.params
        return math.sqrt(p.hbar * (t**2 + self.tau**2) / (p.mass * self.tau))

    def beta(self, t: float) -> float:
        """Phase angle with e^{i beta} = sqrt(t - i tau)/sqrt(t + i tau).

        Continuous in t (beta in (-pi, 0)); beta(0) = -pi/2.
        """
        return -math.atan2(self.tau, t)

    def kappa(self, t: float) -> complex:
        """Complex inverse length, kappa^2 = -i m / (2 hbar (t - i tau)).

        Principal branch; real positive at t = 0.
        """
        p = self.params
        return complex(np.sqrt(-1j * p.mass / (2 * p.hbar * (t - 1j * self.tau))))


@dataclass(frozen=True)
class SquareFamily:
    """Square packet of width a: 1/sqrt(a) on |x| < a/2, 0 outside."""

    params: PhysicsParams
    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")


def gaussian_chi(fam: GaussianFamily, x, t: float):
    """The free Gaussian packet chi(x,t); |chi|^2 = exp(-x^2/gamma^2)/(gamma sqrt(pi))."""
    p = fam.params
    x = np.asarray(x, dtype=float)
    amp = (p.mass * fam.tau / (np.pi * p.hbar)) ** 0.25 / np.sqrt(t - 1j * fam.tau)
    return amp * np.exp(1j * p.mass * x**2 / (2 * p.hbar * (t - 1j * fam.tau)))


def hermite_gauss(fam: GaussianFamily, n: int, x, t: float):
    """Shape-invariant Hermite-Gauss packet chi_n(x,t), unit norm for every t.

    chi_n = pi^(-1/4) (gamma 2^n n!)^(-1/2)
            exp[i(theta - (n + 1/2) beta)] exp(-x^2/2 gamma^2) H_n(x/gamma)

    with theta = t x^2 / (2 tau gamma^2) and beta as in GaussianFamily.beta.
    The phase exponent -(n + 1/2) beta is fixed by requiring each chi_n to
    satisfy the free Schrodinger equation (oscillator-like ladder phases);
    chi_0 coincides exactly with gaussian_chi.
    """
    if not isinstance(n, (int, np.integer)) or n < 0 or n > HERMITE_GAUSS_MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {HERMITE_GAUSS_MAX_ORDER}], got {n}")
    x = np.asarray(x, dtype=float)
    g = fam.gamma(t)
    beta = fam.beta(t)
    theta = t * x**2 / (2 * fam.tau * g**2)
    log_norm = -0.25 * math.log(np.pi) - 0.5 * (math.log(g) + n * math.log(2.0) + math.lgamma(n + 1))
    return (
        math.exp(log_norm)
        * np.exp(1j * (theta - (n + 0.5) * beta))
        * np.exp(-(x**2) / (2 * g**2))
        * hermite(n, x / g)
    )


def apply_b_dagger(f: ComplexField, fam: GaussianFamily, t: float) -> ComplexField:
    """Apply the invariant raising operator b+ = m x - (t + i tau)(-i hbar d/dx).

    The derivative is computed spectrally, so the field should be smooth and
    decayed at the grid edges.  Applied to a sampled chi(., t) the result is
    proportional to chi_1(., t), and so on up the ladder.
    """
    if f.representation is not Representation.POSITION:
        raise ValueError("apply_b_dagger expects a position-representation field")
    p = fam.params
    momentum_term = -1j * p.hbar * spectral_derivative(f, 1).values
    values = p.mass * f.grid.points * f.values - (t + 1j * fam.tau) * momentum_term
    return ComplexField(values, f.grid)


def _derivative_norm_const(fam: GaussianFamily, n: int) -> float:
    # Unit L2 norm fixed at t = 0 (free evolution is unitary, so it holds
    # at every t):  ||kappa0^(n+1) H_n(kappa0 x) e^(-kappa0^2 x^2)||^2
    #             = kappa0^(2n+1) * I_n,
    # I_n = int H_n(u)^2 e^(-2u^2) du
    #     = sqrt(pi/2) n!^2 sum_j 1/(4^j j!^2 (n-2j)!).
    p = fam.params
    kappa0 = math.sqrt(p.mass / (2 * p.hbar * fam.tau))
    series = sum(
        1.0 / (4.0**j * math.factorial(j) ** 2 * math.factorial(n - 2 * j))
        for j in range(n // 2 + 1)
    )
    i_n = math.sqrt(np.pi / 2) * math.factorial(n) ** 2 * series
    return 1.0 / math.sqrt(kappa0 ** (2 * n + 1) * i_n)


def derivative_packet(fam: GaussianFamily, n: int, x, t: float):
    """Normalized n-th derivative packet, proportional to d^n chi / dx^n.

    Evaluates c_n kappa^(n+1) H_n(kappa x) exp(-kappa^2 x^2) with the
    principal-branch kappa of GaussianFamily.kappa and a real constant c_n
    giving unit L2 norm at every t.  Real at t = 0; unlike the chi_n these
    packets change shape as they evolve.
    """
    if not isinstance(n, (int, np.integer)) or n < 0 or n > DERIVATIVE_MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {DERIVATIVE_MAX_ORDER}], got {n}")
    x = np.asarray(x, dtype=float)
    kappa = fam.kappa(t)
    c_n = _derivative_norm_const(fam, n)
    return c_n * kappa ** (n + 1) * hermite(n, kappa * x) * np.exp(-(kappa**2) * x**2)


def derivative_packet_asymptote(fam: GaussianFamily, x, t: float):
    """Large-time magnitude envelope of the n = 2 derivative packet.

    N' (x^2 / t^(5/2)) exp(-m tau x^2 / (2 hbar t^2)) with
    N' = 2 (m^5 tau^5 / (9 pi hbar^5))^(1/4); its square integrates to 1.
    Vanishes at x = 0: the central hump of the packet dies out at large t.
    """
    if not t > 0:
        raise ValueError(f"asymptote requires t > 0, got {t}")
    p = fam.params
    x = np.asarray(x, dtype=float)
    n_prime = 2 * (p.mass**5 * fam.tau**5 / (9 * np.pi * p.hbar**5)) ** 0.25
    return n_prime * x**2 / t**2.5 * np.exp(-p.mass * fam.tau * x**2 / (2 * p.hbar * t**2))


def square_initial(fam: SquareFamily, x):
    """The square packet at t = 0: 1/sqrt(a) for |x| < a/2, 0 for |x| >= a/2."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) < fam.a / 2, 1.0 / math.sqrt(fam.a), 0.0).astype(complex)


def square_momentum(fam: SquareFamily, p):
    """Momentum wave function of the square packet: sqrt(a/2 pi hbar) sinc(a p / 2 hbar)."""
    hbar = fam.params.hbar
    p = np.asarray(p, dtype=float)
    z = fam.a * p / (2 * hbar)
    return (math.sqrt(fam.a / (2 * np.pi * hbar)) * np.sinc(z / np.pi)).astype(complex)


def square_exact(fam: SquareFamily, x, t: float):
    """Exact evolution of the square packet via Fresnel integrals.

    Substituting u(x') = sqrt(m/(pi hbar t)) (x' - x) into the propagator
    integral over the packet's support collapses it to

        psi(x,t) = (2 i a)^(-1/2) [F(u(a/2)) - F(u(-a/2))],
        F(u) = C(u) + i S(u),

    for t > 0; t < 0 follows from time-reversal symmetry about the real
    initial instant, psi(x,-t) = conj(psi(x,t)).  Validated against direct
    quadrature of the propagator integral in the test suite.
    """
    if t == 0:
        raise ValueError("square_exact is for t != 0; use square_initial at t = 0")
    if t < 0:
        return np.conj(square_exact(fam, x, -t))
    p = fam.params
    x = np.asarray(x, dtype=float)
    root = math.sqrt(p.mass / (np.pi * p.hbar * t))
    c_hi, s_hi = fresnel(root * (fam.a / 2 - x))
    c_lo, s_lo = fresnel(root * (-fam.a / 2 - x))
    diff = (c_hi - c_lo) + 1j * (s_hi - s_lo)
    return diff / np.sqrt(2j * fam.a)


def galilean_boost(
    xi: Callable[[np.ndarray, float], np.ndarray],
    p: float,
    t0: float,
    params: PhysicsParams,
) -> Callable[[np.ndarray, float], np.ndarray]:
    """Boost a resting solution xi(x,t) into one moving with momentum p.

    psi(x,t) = exp[(i/hbar)(p x - p^2 (t - t0)/(2m))] xi(x - p (t - t0)/m, t);
    at t = t0 this is exp(i p x/hbar) xi(x, t0).  The boosted packet keeps
    the spread history of xi while <p> shifts to p.
    """

    def boosted(x, t: float):
        x = np.asarray(x, dtype=float)
        dt = t - t0
        phase = np.exp(1j / params.hbar * (p * x - p**2 * dt / (2 * params.mass)))
        return phase * xi(x - p * dt / params.mass, t)

    return boosted


def sample(packet: Callable[[np.ndarray, float], np.ndarray], grid, t: float) -> ComplexField:
    """Evaluate a time-indexed packet on a grid at time t as a ComplexField."""
    return ComplexField(np.asarray(packet(grid.points, t), dtype=complex), grid)
