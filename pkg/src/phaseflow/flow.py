"""Probability beyond the detector and its shift/shear rate decomposition.

With ``d = delta - xi_tau`` and ``s^2 = 1 + eps_tau^2``:

    Pi          = erfc(d / s) / 2
    shift rate  = eta0 exp(-d^2/s^2) / sqrt(pi s^2)
    shear rate  = eps_tau d exp(-d^2/s^2) / sqrt(pi s^6)

The shift rate is the rigid translation by the mean momentum, the shear rate
the tilt about the centre. Their sum is dPi/dtau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import packet as pc
from .errors import BoundaryCase, ConfigurationError
from .numerics import QuadratureSpec, central_difference, erfc, integrate_1d
from .wigner import DimensionlessPacket, PhasePoint, epsilon_tau, omega, rescale, xi_tau

BOUNDARY_BAND = 1e-12
FD_STEP = 1e-5


@dataclass(frozen=True)
class FlowRates:
    shift_rate: float
    shear_rate: float
    total_rate: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_rate", self.shift_rate + self.shear_rate)


def _offset_and_width2(packet: DimensionlessPacket, tau):
    return packet.delta - xi_tau(packet, tau), 1.0 + epsilon_tau(packet, tau) ** 2


def probability_beyond(packet: DimensionlessPacket, tau):
    d, w2 = _offset_and_width2(packet, tau)
    return 0.5 * erfc(d / np.sqrt(w2))


def probability_before(packet: DimensionlessPacket, tau):
    """1 - Pi, evaluated directly so that it keeps full relative precision."""
    d, w2 = _offset_and_width2(packet, tau)
    return 0.5 * erfc(-d / np.sqrt(w2))


def probability_beyond_quadrature(params: pc.PacketParams, t: float, node_count: int = 400,
                                  n_spreads: float = 12.0) -> float:
    """Pi(t) by Gauss-Legendre integration of |psi|^2 over [q, x_t + n_spreads*spread]."""
    x_t = pc.center(params, t)
    width = n_spreads * float(pc.spread(params, t))
    lower, upper = max(params.q, x_t - width), x_t + width
    if lower >= upper:
        return 0.0
    return float(integrate_1d(lambda x: pc.density(params, x, t), QuadratureSpec(lower, upper, node_count)))


def flow_rates(packet: DimensionlessPacket, tau) -> FlowRates:
    d, w2 = _offset_and_width2(packet, tau)
    gauss = np.exp(-d * d / w2)
    shift = packet.eta0 * gauss / np.sqrt(math.pi * w2)
    shear = epsilon_tau(packet, tau) * d * gauss / np.sqrt(math.pi * w2**3)
    return FlowRates(shift, shear)


def gaussian_coefficients(packet: DimensionlessPacket, tau):
    """(a, b, c) with Omega(delta, eta, tau) = exp(-a eta^2 + 2 b eta - c) / pi."""
    d, _ = _offset_and_width2(packet, tau)
    eps = epsilon_tau(packet, tau)
    eta0 = packet.eta0
    a = 1.0 + eps**2
    b = a * eta0 + eps * d
    c = (d + eps * eta0) ** 2 + eta0**2
    return a, b, c


def momentum_integrals(packet: DimensionlessPacket, tau) -> tuple[float, float]:
    """Closed-form int Omega(delta, eta) d eta and int (eta - eta0) Omega(delta, eta) d eta."""
    a, b, c = gaussian_coefficients(packet, tau)
    zeroth = np.exp(b * b / a - c) / np.sqrt(math.pi * a)
    return zeroth, (b - a * packet.eta0) / a * zeroth


def momentum_integrals_quadrature(packet: DimensionlessPacket, tau: float,
                                  node_count: int = 400) -> tuple[float, float]:
    """Direct eta-quadrature of the same two integrals (independent check)."""
    a, b, _ = gaussian_coefficients(packet, tau)
    centre, half = b / a, 12.0 / math.sqrt(a)
    spec = QuadratureSpec.centered(centre, half, node_count)
    zeroth = integrate_1d(lambda eta: omega(packet, PhasePoint(packet.delta, eta), tau), spec)
    first = integrate_1d(
        lambda eta: (eta - packet.eta0) * omega(packet, PhasePoint(packet.delta, eta), tau), spec
    )
    return float(zeroth), float(first)


def dpi_dtau_central(packet: DimensionlessPacket, tau: float, h: float = FD_STEP) -> float:
    """Central-difference dPi/dtau.

    Differences the smaller of Pi and 1 - Pi so that a rate sitting on a tail
    of size ~1 is not swamped by cancellation.
    """
    if probability_beyond(packet, tau) <= 0.5:
        return central_difference(lambda s: probability_beyond(packet, s), tau, h)
    return -central_difference(lambda s: probability_before(packet, s), tau, h)


def _signed_condition(lhs: float, rhs: float, offset: float, band: float) -> bool:
    if offset == 0:
        raise BoundaryCase("detector sits at the packet centre; the condition is undefined")
    if abs(lhs - rhs) <= band:
        raise BoundaryCase(f"condition within {band:g} of equality (lhs={lhs!r}, rhs={rhs!r})")
    # dividing by the offset flips the inequality when the detector is behind the centre
    return lhs < rhs if offset > 0 else lhs > rhs


def negative_flow_condition_dimensionless(packet: DimensionlessPacket, tau: float,
                                          band: float = BOUNDARY_BAND) -> bool:
    """eps/(1+eps^2) < -eta0/(delta - xi_tau), i.e. dPi/dtau < 0.

    Raises :class:`BoundaryCase` at ``delta == xi_tau`` or when the two sides
    agree to within ``band``.
    """
    d, w2 = _offset_and_width2(packet, tau)
    if d == 0:
        raise BoundaryCase("detector sits at the packet centre; the condition is undefined")
    return _signed_condition(epsilon_tau(packet, tau) / w2, -packet.eta0 / d, d, band)


def negative_flow_condition_physical(params: pc.PacketParams, t: float, band: float = BOUNDARY_BAND) -> bool:
    """Re alpha_t < -p0 / (2 (q - x_t)), i.e. dPi/dt < 0.

    The band is applied after scaling both sides by ``2 L^2 / hbar`` so it
    coincides with the band of the dimensionless predicate.
    """
    offset = params.q - pc.center(params, t)
    if offset == 0:
        raise BoundaryCase("detector sits at the packet centre; the condition is undefined")
    scale = 2.0 * rescale(params).L ** 2 / params.hbar
    re_alpha = complex(pc.evolve_alpha(params, t)).real
    return _signed_condition(scale * re_alpha, -scale * params.p0 / (2.0 * offset), offset, band)


@dataclass(frozen=True)
class FlowScenario:
    packet: DimensionlessPacket
    tau_grid: tuple

    def __post_init__(self):
        grid = tuple(float(t) for t in self.tau_grid)
        if not grid:
            raise ConfigurationError("time grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError("time grid must be strictly increasing")
        object.__setattr__(self, "tau_grid", grid)

    def initial_spread(self) -> float:
        """(Delta x)_0 / L."""
        return math.sqrt(0.5 * (1.0 + self.packet.eps0**2))

    def issues(self) -> list[str]:
        """Departures from the textbook setup (packet left of q, moving right)."""
        found = []
        if self.packet.eta0 <= 0:
            found.append("eta0 <= 0: packet is not moving toward the detector")
        if self.packet.delta <= self.packet.xi0:
            found.append("delta <= xi0: packet does not start left of the detector")
        if self.packet.delta - self.packet.xi0 < 3.0 * self.initial_spread():
            found.append("delta - xi0 < 3 initial spreads: packet is not well separated from the detector")
        return found

    def require_separated(self) -> None:
        gap = self.packet.delta - self.packet.xi0
        if gap < 3.0 * self.initial_spread():
            raise ConfigurationError(
                f"strict scenario: delta - xi0 = {gap:g} < 3 initial spreads = {3 * self.initial_spread():g}"
            )


@dataclass(frozen=True)
class NegativeFlowInterval:
    start: float
    end: float
    min_total_rate: float


FLAG_BOUNDARY = -1


@dataclass
class FlowSeries:
    """Per-tau table. ``flag`` is 1 for negative flow, 0 otherwise, -1 at the boundary."""

    tau: np.ndarray
    pi: np.ndarray
    shift_rate: np.ndarray
    shear_rate: np.ndarray
    total_rate: np.ndarray
    flag: np.ndarray
    intervals: list[NegativeFlowInterval]

    def rows(self):
        for i in range(len(self.tau)):
            yield (self.tau[i], self.pi[i], self.shift_rate[i], self.shear_rate[i],
                   self.total_rate[i], int(self.flag[i]))


def _flag(packet: DimensionlessPacket, tau: float) -> int:
    try:
        return int(negative_flow_condition_dimensionless(packet, tau))
    except BoundaryCase:
        return FLAG_BOUNDARY


def negative_intervals(tau, flag, total_rate) -> list[NegativeFlowInterval]:
    """Maximal runs of consecutive grid points flagged as negative flow."""
    out = []
    start = None
    for i, f in enumerate(list(flag) + [0]):
        if f == 1 and start is None:
            start = i
        elif f != 1 and start is not None:
            out.append(NegativeFlowInterval(float(tau[start]), float(tau[i - 1]),
                                            float(np.min(total_rate[start:i]))))
            start = None
    return out


def scan_flow(scenario: FlowScenario) -> FlowSeries:
    tau = np.asarray(scenario.tau_grid)
    packet = scenario.packet
    rates = flow_rates(packet, tau)
    pi = probability_beyond(packet, tau)
    flag = np.array([_flag(packet, t) for t in tau], dtype=np.int8)
    return FlowSeries(
        tau=tau,
        pi=pi,
        shift_rate=np.asarray(rates.shift_rate, dtype=float),
        shear_rate=np.asarray(rates.shear_rate, dtype=float),
        total_rate=np.asarray(rates.total_rate, dtype=float),
        flag=flag,
        intervals=negative_intervals(tau, flag, rates.total_rate),
    )
