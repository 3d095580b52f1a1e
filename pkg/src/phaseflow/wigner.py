"""Wigner function of the Gaussian packet, physical and dimensionless.

Dimensionless variables use the time-invariant length
``L^2 = (hbar/2) Im(alpha) / |alpha|^2``:

    xi = x / L,  eta = p L / hbar,  tau = t hbar / (m L^2),  Omega = hbar W

and the density takes the form

    Omega = exp(-(xi~ - eps_tau eta~)^2 - eta~^2) / pi,
    xi_tau = xi0 + eta0 tau,  eps_tau = eps0 + tau.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import packet as pc
from .errors import ConfigurationError
from .numerics import QuadratureSpec, integrate_1d


class QuadratureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DimensionlessPacket:
    xi0: float
    eta0: float
    eps0: float
    delta: float
    L: float = 1.0

    def __post_init__(self):
        for name in ("xi0", "eta0", "eps0", "delta", "L"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(math.isfinite(v) for v in (self.xi0, self.eta0, self.eps0, self.delta, self.L)):
            raise ConfigurationError(f"dimensionless packet must be finite: {self}")
        if self.L <= 0:
            raise ConfigurationError(f"length scale must be positive, got {self.L}")


class PhasePoint(NamedTuple):
    """Dimensionless phase-space point; fields may also be equal-shape arrays."""

    xi: float
    eta: float


def length_scale(params: pc.PacketParams) -> float:
    a = params.alpha0
    return math.sqrt(0.5 * params.hbar * a.imag / abs(a) ** 2)


def rescale(params: pc.PacketParams) -> DimensionlessPacket:
    L = length_scale(params)
    return DimensionlessPacket(
        xi0=params.x0 / L,
        eta0=params.p0 * L / params.hbar,
        eps0=params.alpha0.real / params.alpha0.imag,
        delta=params.q / L,
        L=L,
    )


def to_physical(packet: DimensionlessPacket, hbar: float = 1.0, mass: float = 1.0) -> pc.PacketParams:
    """Inverse of :func:`rescale` for given units of action and mass."""
    L = packet.L
    im_alpha = 0.5 * hbar / (L**2 * (1.0 + packet.eps0**2))
    return pc.PacketParams(
        hbar=hbar,
        mass=mass,
        x0=packet.xi0 * L,
        p0=packet.eta0 * hbar / L,
        alpha0=complex(packet.eps0 * im_alpha, im_alpha),
        q=packet.delta * L,
    )


def time_unit(params: pc.PacketParams) -> float:
    """Physical duration of one unit of dimensionless time, m L^2 / hbar."""
    return params.mass * length_scale(params) ** 2 / params.hbar


def to_tau(params: pc.PacketParams, t):
    return t / time_unit(params)


def to_t(params: pc.PacketParams, tau):
    return tau * time_unit(params)


def epsilon_tau(packet: DimensionlessPacket, tau):
    return packet.eps0 + tau


def xi_tau(packet: DimensionlessPacket, tau):
    return packet.xi0 + packet.eta0 * tau


def omega(packet: DimensionlessPacket, point: PhasePoint, tau):
    xi_t = point.xi - xi_tau(packet, tau)
    eta_t = point.eta - packet.eta0
    eps = epsilon_tau(packet, tau)
    return np.exp(-((xi_t - eps * eta_t) ** 2) - eta_t**2) / math.pi


def omega_marginal(packet: DimensionlessPacket, xi, tau):
    """Position marginal of Omega: Gaussian with mean xi_tau, variance (1+eps^2)/2."""
    width2 = 1.0 + epsilon_tau(packet, tau) ** 2
    return np.exp(-((xi - xi_tau(packet, tau)) ** 2) / width2) / math.sqrt(math.pi * width2)


def wigner_physical(params: pc.PacketParams, x, p, t):
    alpha_t = complex(pc.evolve_alpha(params, t))
    x_rel = np.asarray(x, dtype=float) - pc.center(params, t)
    p_rel = np.asarray(p, dtype=float) - params.p0
    hbar, im_a, re_a = params.hbar, alpha_t.imag, alpha_t.real
    exponent = -2.0 * x_rel**2 * im_a / hbar - (p_rel - 2.0 * x_rel * re_a) ** 2 / (2.0 * hbar * im_a)
    return np.exp(exponent) / (math.pi * hbar)


def default_oracle_spec(params: pc.PacketParams, t: float, node_count: int = 400) -> QuadratureSpec:
    return QuadratureSpec.centered(0.0, 10.0 * float(pc.spread(params, t)), node_count)


def wigner_integral(params: pc.PacketParams, x: float, p: float, t: float,
                    spec: QuadratureSpec | None = None) -> complex:
    """(1/(pi hbar)) * integral dy exp(-2ipy/hbar) psi(x+y) conj(psi(x-y)) by quadrature."""
    if spec is None:
        spec = default_oracle_spec(params, t)
    needed = 8.0 * float(pc.spread(params, t))
    if spec.lower > -needed or spec.upper < needed:
        raise ConfigurationError(
            f"quadrature range [{spec.lower:g}, {spec.upper:g}] does not cover +-8 spreads ({needed:g})"
        )
    span = spec.upper - spec.lower
    if abs(p - params.p0) * span / params.hbar > spec.node_count / 4:
        warnings.warn(
            f"oscillation |p - p0| * range / hbar = {abs(p - params.p0) * span / params.hbar:.3g} "
            f"exceeds node_count/4 = {spec.node_count / 4:g}; increase node_count",
            QuadratureWarning,
            stacklevel=2,
        )

    def integrand(y):
        return (np.exp(-2j * p * y / params.hbar)
                * pc.psi(params, x + y, t) * np.conj(pc.psi(params, x - y, t)))

    return complex(integrate_1d(integrand, spec)) / (math.pi * params.hbar)


def wigner_quadrature_oracle(params: pc.PacketParams, x: float, p: float, t: float,
                             spec: QuadratureSpec | None = None) -> float:
    return wigner_integral(params, x, p, t, spec).real


def free_flow_preimage(point: PhasePoint, dtau) -> PhasePoint:
    """Phase point that free motion carries onto ``point`` after ``dtau``."""
    return PhasePoint(point.xi - point.eta * dtau, point.eta)


def shear_evolve_check(packet: DimensionlessPacket, point: PhasePoint, tau: float, tau_prime: float,
                       preimage: Callable[[PhasePoint, float], PhasePoint] = free_flow_preimage,
                       tol: float = 1e-12) -> bool:
    """Whether Omega(p, tau + tau') == Omega(preimage(p, tau'), tau) within ``tol``.

    ``preimage`` defaults to the exact free-particle map; swapping it lets a
    test confirm the check rejects a wrong evolution law.
    """
    later = omega(packet, point, tau + tau_prime)
    earlier = omega(packet, preimage(point, tau_prime), tau)
    return bool(np.all(np.abs(later - earlier) <= tol))


def grid_axes(packet: DimensionlessPacket, tau: float, n: int = 101, n_sigma: float = 4.0):
    """Ascending xi and eta axes spanning ``n_sigma`` marginal deviations around the centre."""
    eps = epsilon_tau(packet, tau)
    sx = n_sigma * math.sqrt(0.5 * (1.0 + eps**2))
    se = n_sigma * math.sqrt(0.5)
    xc = xi_tau(packet, tau)
    return np.linspace(xc - sx, xc + sx, n), np.linspace(packet.eta0 - se, packet.eta0 + se, n)


def omega_grid(packet: DimensionlessPacket, tau: float, xi_axis, eta_axis) -> np.ndarray:
    """Rows (xi, eta, omega), xi-major then eta, both ascending."""
    xi_mesh, eta_mesh = np.meshgrid(np.asarray(xi_axis, float), np.asarray(eta_axis, float), indexing="ij")
    values = omega(packet, PhasePoint(xi_mesh, eta_mesh), tau)
    return np.column_stack([xi_mesh.ravel(), eta_mesh.ravel(), values.ravel()])
