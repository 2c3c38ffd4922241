"""Supersymmetric WKB for the angular problem, in the polar angle theta.

The sector ground state ``F0 = sin(theta)**(m + 1/2)`` gives the
superpotential ``Phi = -(m + 1/2) cot(theta)``.  The leading-order
condition ``∫_a^b sqrt(E- - Phi**2) dtheta = n_theta pi`` is exact here, and
the partner spectrum is shifted back with the ground eigenvalue ``m(m+1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureNonConvergence

CBC_TOL = 1e-9
_MIN_NODES = 16
_MAX_NODES = 4096


@dataclass(frozen=True)
class SusyContext:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m}")

    @property
    def amplitude(self) -> float:
        return self.m + 0.5

    @property
    def ground_eigen(self) -> int:
        return self.m * (self.m + 1)


@dataclass(frozen=True)
class CbcLevel:
    m: int
    n_theta: int
    e_minus: float
    lambda2: float
    turning_a: float
    turning_b: float

    @property
    def lambda2_exact(self) -> int:
        l = self.n_theta + self.m
        return l * (l + 1)


def _check_theta(theta) -> None:
    theta = np.asarray(theta)
    if np.any((theta <= 0) | (theta >= math.pi)):
        raise DomainError("theta must lie in (0, pi)")


def susy_potential(ctx: SusyContext, theta):
    _check_theta(theta)
    return -ctx.amplitude / np.tan(theta)


def susy_potential_derivative(ctx: SusyContext, theta):
    _check_theta(theta)
    return ctx.amplitude / np.sin(theta) ** 2


def partner_potentials(ctx: SusyContext, theta):
    """(V-, V+) = Phi**2 -+ Phi'."""
    phi = susy_potential(ctx, theta)
    dphi = susy_potential_derivative(ctx, theta)
    return phi * phi - dphi, phi * phi + dphi


def ground_state(ctx: SusyContext, theta):
    """Zero mode of H-: sin(theta)**(m + 1/2)."""
    return np.sin(theta) ** ctx.amplitude


def zero_mode_residual(ctx: SusyContext, theta, h: float = 1e-3):
    """``-F0'' + V- F0`` with a five-point second difference."""
    theta = np.asarray(theta, dtype=float)
    _check_theta(theta - 2 * h)
    _check_theta(theta + 2 * h)
    f = lambda t: ground_state(ctx, t)  # noqa: E731
    d2 = (-f(theta + 2 * h) + 16 * f(theta + h) - 30 * f(theta) + 16 * f(theta - h) - f(theta - 2 * h)) / (
        12 * h * h
    )
    v_minus, _ = partner_potentials(ctx, theta)
    return -d2 + v_minus * f(theta)


def cbc_turning_points(ctx: SusyContext, e_minus: float) -> tuple[float, float]:
    """Roots of ``E- = Phi(theta)**2`` in (0, pi).

    ``e_minus == 0`` is the degenerate well bottom and returns (pi/2, pi/2).
    """
    if e_minus < 0:
        raise DomainError("E- must be >= 0")
    if e_minus == 0:
        return 0.5 * math.pi, 0.5 * math.pi
    a = math.atan(ctx.amplitude / math.sqrt(e_minus))
    return a, math.pi - a


def cbc_integral(ctx: SusyContext, e_minus: float, tol: float = CBC_TOL) -> float:
    """∫_a^b sqrt(E- - Phi**2) dtheta by Gauss-Legendre after theta = mid + half sin(u).

    The substitution turns the square-root endpoints into a smooth integrand.
    Nodes are doubled until successive results agree to ``tol``.
    """
    if e_minus <= 0:
        raise DomainError("E- must be positive")
    a, b = cbc_turning_points(ctx, e_minus)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    k2 = ctx.amplitude ** 2

    def rule(n):
        u, wts = np.polynomial.legendre.leggauss(n)
        u = 0.5 * math.pi * u
        theta = mid + half * np.sin(u)
        inner = np.maximum(e_minus - k2 / np.tan(theta) ** 2, 0.0)
        return 0.5 * math.pi * half * float(np.sum(wts * np.sqrt(inner) * np.cos(u)))

    n = _MIN_NODES
    prev = rule(n)
    while n < _MAX_NODES:
        n *= 2
        cur = rule(n)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureNonConvergence(f"CBC integral not converged for E-={e_minus}")


def cbc_condition(ctx: SusyContext, e_minus: float) -> float:
    """Closed form of the CBC integral divided by pi."""
    k = ctx.amplitude
    return math.sqrt(e_minus + k * k) - k


def swkb_spectrum(ctx: SusyContext, n_theta: int) -> CbcLevel:
    if int(n_theta) != n_theta or n_theta < 0:
        raise DomainError("n_theta must be an integer >= 0")
    k = ctx.amplitude
    e_minus = (n_theta + k) ** 2 - k * k
    # (n + m + 1/2)**2 - (m + 1/2)**2 is an integer, exact in binary64
    lam2 = e_minus + ctx.ground_eigen
    a, b = cbc_turning_points(ctx, e_minus)
    return CbcLevel(ctx.m, n_theta, e_minus, lam2, a, b)
