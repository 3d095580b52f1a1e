"""Orientation of the Wigner level-set ellipses and the angle form of the
negative-flow condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain, UndefinedAngle
from .wigner import DimensionlessPacket, PhasePoint, epsilon_tau, xi_tau


@dataclass(frozen=True)
class AngleGeometry:
    theta: float
    theta_bar: float
    phi: float


def major_axis_angle(eps: float) -> float:
    """Angle in (0, pi) between the ellipse major axis and the xi axis."""
    if eps == 0:
        raise UndefinedAngle("eps = 0 is a minimal-uncertainty state; its contours are circles")
    half = 0.5 * math.atan(2.0 / eps)
    return half if eps > 0 else math.pi + half


def orthogonal_axis_angle(eps: float) -> float:
    """The other stationary direction of r(theta): the minor axis."""
    if eps == 0:
        raise UndefinedAngle("eps = 0 is a minimal-uncertainty state; its contours are circles")
    return 0.5 * math.pi + 0.5 * math.atan(2.0 / eps)


def contour_radius(theta, eps: float, contour_constant: float = 1.0):
    """Polar radius of the level set (xi~ - eps eta~)^2 + eta~^2 = C."""
    s = np.sin(theta)
    return np.sqrt(contour_constant / (1.0 - eps * np.sin(2.0 * theta) + eps**2 * s * s))


def _angular_distance(a: float, b: float) -> float:
    # directions are defined modulo pi
    d = (a - b) % math.pi
    return min(d, math.pi - d)


def verify_major_axis(eps: float, contour_constant: float = 1.0, grid_points: int = 100_000,
                      tol: float = 1e-4) -> bool:
    """Grid-maximise r(theta) on [0, pi) and compare with :func:`major_axis_angle`."""
    theta = np.linspace(0.0, math.pi, grid_points, endpoint=False)
    r = contour_radius(theta, eps, contour_constant)
    return _angular_distance(float(theta[np.argmax(r)]), major_axis_angle(eps)) <= tol


def verify_minor_axis(eps: float, contour_constant: float = 1.0, grid_points: int = 100_000,
                      tol: float = 1e-4) -> bool:
    theta = np.linspace(0.0, math.pi, grid_points, endpoint=False)
    r = contour_radius(theta, eps, contour_constant)
    return _angular_distance(float(theta[np.argmin(r)]), orthogonal_axis_angle(eps)) <= tol


def angle_geometry(packet: DimensionlessPacket, tau: float) -> AngleGeometry:
    """theta, its supplement theta_bar, and phi = atan(eta0 / (delta - xi_tau)).

    phi is the angle, seen from the detector point (delta, 0), up to the
    packet centre (xi_tau, eta0).
    """
    theta = major_axis_angle(epsilon_tau(packet, tau))
    phi = math.atan2(packet.eta0, packet.delta - xi_tau(packet, tau))
    return AngleGeometry(theta=theta, theta_bar=math.pi - theta, phi=phi)


def angle_condition(theta_bar: float, phi: float) -> bool:
    """tan(2 theta_bar)/2 + 2/tan(2 theta_bar) < 1/tan(phi)."""
    if not 0.0 < theta_bar < 0.25 * math.pi:
        raise OutOfDomain(f"theta_bar must lie in (0, pi/4), got {theta_bar}")
    if not 0.0 < phi < 0.5 * math.pi:
        raise OutOfDomain(f"phi must lie in (0, pi/2), got {phi}")
    t = math.tan(2.0 * theta_bar)
    return 0.5 * t + 2.0 / t < 1.0 / math.tan(phi)


def open_grid(upper: float, n: int) -> np.ndarray:
    """``n`` cell-centred points strictly inside (0, upper)."""
    return (np.arange(n) + 0.5) * (upper / n)


def region_sample(grid_theta: int, grid_phi: int):
    """Boolean matrix of :func:`angle_condition` over open theta_bar x phi grids.

    Returns ``(theta_bar_axis, phi_axis, flags)`` with ``flags[i, j]`` for
    ``theta_bar_axis[i]`` and ``phi_axis[j]``.
    """
    if grid_theta < 2 or grid_phi < 2:
        raise ValueError("region grids need at least 2 points per axis")
    theta_bar = open_grid(0.25 * math.pi, grid_theta)
    phi = open_grid(0.5 * math.pi, grid_phi)
    t = np.tan(2.0 * theta_bar)[:, None]
    flags = 0.5 * t + 2.0 / t < 1.0 / np.tan(phi)[None, :]
    return theta_bar, phi, flags


def region_boundary(theta_bar):
    """phi on the edge of the region: atan(1 / (tan(2 tb)/2 + 2/tan(2 tb)))."""
    t = np.tan(2.0 * np.asarray(theta_bar, dtype=float))
    return np.arctan(1.0 / (0.5 * t + 2.0 / t))


def contour_points(packet: DimensionlessPacket, tau: float, contour_constant: float = 1.0,
                   point_count: int = 64):
    """Uniformly parametrised points of the level set of value exp(-C)/pi.

    Returns ``(s, PhasePoint)`` with xi~ = sqrt(C)(cos s + eps sin s),
    eta~ = sqrt(C) sin s.
    """
    if contour_constant <= 0:
        raise ValueError(f"contour constant must be positive, got {contour_constant}")
    if point_count < 8:
        raise ValueError(f"need at least 8 contour points, got {point_count}")
    s = np.arange(point_count) * (2.0 * math.pi / point_count)
    root = math.sqrt(contour_constant)
    eps = epsilon_tau(packet, tau)
    xi = xi_tau(packet, tau) + root * (np.cos(s) + eps * np.sin(s))
    eta = packet.eta0 + root * np.sin(s)
    return s, PhasePoint(xi, eta)


def major_axis_segment(packet: DimensionlessPacket, tau: float, contour_constant: float = 1.0) -> PhasePoint:
    """The two ends of the major axis of the level set, as a 2-point PhasePoint."""
    eps = epsilon_tau(packet, tau)
    theta = major_axis_angle(eps)
    r = float(contour_radius(theta, eps, contour_constant))
    xc, ec = xi_tau(packet, tau), packet.eta0
    dx, de = r * math.cos(theta), r * math.sin(theta)
    return PhasePoint(np.array([xc - dx, xc + dx]), np.array([ec - de, ec + de]))
