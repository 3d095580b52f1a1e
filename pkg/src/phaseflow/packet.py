"""Free Gaussian wave packet in physical units.

    psi(x, t) = exp(i/hbar * [alpha_t (x - x_t)^2 + p0 (x - x_t) + gamma_t])

with ``x_t = x0 + p0 t / m`` and ``1/alpha_t = 1/alpha0 + 2 t / m``. Only
``Im gamma_t`` is fixed by normalisation; the real part is chosen so that
psi solves the free Schrodinger equation with ``Re gamma_0 = 0``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UndefinedArrival


@dataclass(frozen=True)
class PacketParams:
    hbar: float
    mass: float
    x0: float
    p0: float
    alpha0: complex
    q: float

    def __post_init__(self):
        for name in ("hbar", "mass", "x0", "p0", "q"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        values = (self.hbar, self.mass, self.x0, self.p0, self.alpha0.real, self.alpha0.imag, self.q)
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError(f"packet parameters must be finite: {self}")
        if self.hbar <= 0 or self.mass <= 0:
            raise ConfigurationError("hbar and mass must be positive")
        if self.alpha0.imag <= 0:
            raise ConfigurationError(f"Im(alpha0) must be positive for a normalisable packet, got {self.alpha0}")


@dataclass(frozen=True)
class PacketState:
    t: float
    x_t: float
    alpha_t: complex
    gamma_t: complex
    spread: float


def center(params: PacketParams, t):
    return params.x0 + params.p0 * t / params.mass


def _dilation(params: PacketParams, t):
    # 1 + 2 alpha0 t / m, equal to alpha0 / alpha_t; never zero for Im(alpha0) > 0
    return 1.0 + 2.0 * params.alpha0 * t / params.mass


def evolve_alpha(params: PacketParams, t):
    return params.alpha0 / _dilation(params, t)


def initial_gamma(params: PacketParams) -> complex:
    im_gamma0 = -0.25 * params.hbar * math.log(2.0 * params.alpha0.imag / (math.pi * params.hbar))
    return complex(0.0, im_gamma0)


def evolve_gamma(params: PacketParams, t, *, include_kinetic_phase: bool = True):
    """gamma_t = gamma_0 + p0^2 t / (2m) + (i hbar / 2) log(1 + 2 alpha0 t / m).

    ``include_kinetic_phase=False`` drops the ``p0^2 t / 2m`` term. The result
    is then no longer a Schrodinger solution; it exists as a negative control
    for :func:`tdse_residual`.
    """
    dilation = _dilation(params, t)
    log = np.log(dilation) if np.ndim(dilation) else cmath.log(dilation)
    gamma = initial_gamma(params) + 0.5j * params.hbar * log
    if include_kinetic_phase:
        gamma = gamma + params.p0**2 * t / (2.0 * params.mass)
    return gamma


def spread(params: PacketParams, t):
    """Position standard deviation (Delta x)_t = sqrt(hbar / Im alpha_t) / 2."""
    return 0.5 * np.sqrt(params.hbar / np.imag(evolve_alpha(params, t)))


def state(params: PacketParams, t: float) -> PacketState:
    alpha_t = complex(evolve_alpha(params, t))
    return PacketState(
        t=t,
        x_t=center(params, t),
        alpha_t=alpha_t,
        gamma_t=complex(evolve_gamma(params, t)),
        spread=0.5 * math.sqrt(params.hbar / alpha_t.imag),
    )


def psi(params: PacketParams, x, t, *, include_kinetic_phase: bool = True):
    """Wave function value(s); vectorised over ``x``."""
    x = np.asarray(x, dtype=float)
    alpha_t = evolve_alpha(params, t)
    gamma_t = evolve_gamma(params, t, include_kinetic_phase=include_kinetic_phase)
    u = x - center(params, t)
    phase = alpha_t * u**2 + params.p0 * u + gamma_t
    return np.exp(1j * phase / params.hbar)


def density(params: PacketParams, x, t):
    return np.abs(psi(params, x, t)) ** 2


def classical_arrival_time(params: PacketParams) -> float:
    """t_cl = m (q - x0) / p0. Negative when the packet moves away from q."""
    if params.p0 == 0:
        raise UndefinedArrival("p0 = 0: the packet centre never reaches the detector")
    return params.mass * (params.q - params.x0) / params.p0


def moving_away(params: PacketParams) -> bool:
    return classical_arrival_time(params) < 0


def tdse_residual(params: PacketParams, x: float, t: float, h_x: float = 1e-4, h_t: float = 1e-4,
                  *, include_kinetic_phase: bool = True) -> float:
    """|i hbar d_t psi + hbar^2/(2m) d_xx psi| / |psi| by central differences.

    Truncation error is O(h^2); below h ~ 1e-4 the second difference is
    dominated by rounding (~eps / h^2).
    """
    if not (h_x > 0 and h_t > 0):
        raise ConfigurationError("finite-difference steps must be positive")

    def wave(xx, tt):
        return complex(psi(params, xx, tt, include_kinetic_phase=include_kinetic_phase))

    centre_value = wave(x, t)
    d_t = (wave(x, t + h_t) - wave(x, t - h_t)) / (2.0 * h_t)
    d_xx = (wave(x + h_x, t) - 2.0 * centre_value + wave(x - h_x, t)) / h_x**2
    lhs = 1j * params.hbar * d_t + params.hbar**2 / (2.0 * params.mass) * d_xx
    return abs(lhs) / abs(centre_value)
