"""Quantization from the summed WKB series for the reduced angular problem.

The reduced equation is ``-F'' + U/cos(x)**2 F = E F`` with
``U = m**2 - 1/4`` and ``E = lambda**2 + 1/4``.  The single-valuedness
condition, with every contour integral in closed form, reads

    sqrt(E) - sqrt(U) - 1/2 + sum_{k>=1} a_k = n_theta,
    a_k = -(1/2) C(1/2, k) (4U)**((1 - 2k)/2),

and the full sum collapses to ``sqrt(E) = n_theta + 1/2 + sqrt(1 + 4U)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import binomial_half
from .errors import ConvergenceDomainError, DomainError


def reduce_parameters(m: int, lambda2: float) -> tuple[float, float]:
    """(m, lambda^2) -> (U, E)."""
    if m < 0:
        raise DomainError("m must be >= 0")
    return m * m - 0.25, lambda2 + 0.25


def expand_parameters(U: float, E: float) -> tuple[float, float]:
    """Inverse of :func:`reduce_parameters`: (U, E) -> (m, lambda^2)."""
    return math.sqrt(U + 0.25), E - 0.25


@dataclass(frozen=True)
class ProblemParams:
    m: int
    n_theta: int = 0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m}")
        if int(self.n_theta) != self.n_theta or self.n_theta < 0:
            raise DomainError(f"n_theta must be an integer >= 0, got {self.n_theta}")

    @property
    def U(self) -> float:
        return self.m * self.m - 0.25

    @property
    def l(self) -> int:
        return self.n_theta + self.m

    @property
    def lambda2_exact(self) -> int:
        return self.l * (self.l + 1)


@dataclass(frozen=True)
class QuantizationRecord:
    m: int
    n_theta: int
    order: int | None  # None marks the fully summed series
    E_N: float
    lambda2_N: float
    lambda2_exact: int

    @property
    def residual(self) -> float:
        return abs(self.lambda2_N - self.lambda2_exact)


def _check_domain(U: float) -> None:
    if not 4.0 * U > 1.0:
        raise ConvergenceDomainError(f"series needs 4U > 1, got U={U}")


def action_term(k: int, U: float) -> float:
    """Contour integral of the k-th even-order phase, divided by 2 pi."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_domain(U)
    return -0.5 * float(binomial_half(k)) * (4.0 * U) ** ((1 - 2 * k) / 2)


def partial_sum_energy(p: ProblemParams, N: int) -> QuantizationRecord:
    """Solve the quantization condition truncated after N correction terms."""
    if N < 0:
        raise ValueError("N must be >= 0")
    U = p.U
    _check_domain(U)
    corr = math.fsum(-action_term(k, U) for k in range(1, N + 1))
    root = p.n_theta + 0.5 + math.sqrt(U) + corr
    E = root * root
    return QuantizationRecord(p.m, p.n_theta, N, E, E - 0.25, p.lambda2_exact)


def summed_quantization(p: ProblemParams) -> QuantizationRecord:
    """All orders summed: sqrt(E) = n_theta + 1/2 + sqrt(1 + 4U)/2."""
    root = p.n_theta + 0.5 + 0.5 * math.sqrt(1.0 + 4.0 * p.U)
    E = root * root
    return QuantizationRecord(p.m, p.n_theta, None, E, E - 0.25, p.lambda2_exact)


def torus_limit(p: ProblemParams) -> float:
    """Leading-order torus value (l + 1/2)**2."""
    return (p.l + 0.5) ** 2
