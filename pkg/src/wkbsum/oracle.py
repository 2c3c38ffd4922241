"""Brute-force eigenvalues of ``-F'' + U/cos(x)**2 F = E F`` on (-pi/2, pi/2).

Shooting from both singular edges with Numerov, started from the regular
Frobenius branch ``F ~ t**(m + 1/2) (1 + c1 t**2)``, ``t = pi/2 -+ x``.
The potential is even, so the right-edge solution is the mirror image of a
left-edge solution integrated to ``-match_point``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BracketFailure, DomainError, NodeCountMismatch, NumericalOverflow

HALF_PI = 0.5 * math.pi
MAX_EXPANSIONS = 6


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 16000
    match_point: float = 0.0
    bracket_width: float = 0.4
    tolerance: float = 1e-10
    edge_offset: float = 1e-3

    def __post_init__(self):
        if self.grid_points < 2000:
            raise ValueError("grid_points must be >= 2000")
        if not 0 < self.edge_offset < 0.1:
            raise ValueError("edge_offset must lie in (0, 0.1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        lim = HALF_PI - self.edge_offset
        if not -lim < self.match_point < lim:
            raise ValueError("match_point must be strictly inside the integration range")

    @property
    def step(self) -> float:
        return (math.pi - 2 * self.edge_offset) / (self.grid_points - 1)


@dataclass(frozen=True)
class OracleResult:
    m: int
    l: int
    E: float
    node_count: int
    converged: bool

    @property
    def lambda2(self) -> float:
        return self.E - 0.25

    @property
    def lambda2_exact(self) -> int:
        return self.l * (self.l + 1)

    @property
    def abs_error(self) -> float:
        return abs(self.lambda2 - self.lambda2_exact)


def _half(E: float, m: int, x_end: float, cfg: OracleConfig):
    """Regular solution from the left edge up to ``x_end`` (one step past)."""
    U = m * m - 0.25
    alpha = m + 0.5
    x0 = -HALF_PI + cfg.edge_offset
    n = max(2, int(round((x_end - x0) / cfg.step)))
    h = (x_end - x0) / n
    x = x0 + h * np.arange(n + 2)
    t = x + HALF_PI
    g = U / np.sin(t) ** 2 - E
    c1 = (U / 3.0 - E) / (4.0 * alpha + 2.0)
    f0 = t[0] ** alpha * (1.0 + c1 * t[0] ** 2)
    f1 = t[1] ** alpha * (1.0 + c1 * t[1] ** 2)
    f = _kernels.numerov(g, f0, f1, h)
    if not np.all(np.isfinite(f)):
        raise NumericalOverflow(f"non-finite solution at E={E}")
    # O(h^4) derivative at the end point from its two neighbours
    k = h * h / 6.0
    df = ((1.0 - k * g[n + 1]) * f[n + 1] - (1.0 - k * g[n - 1]) * f[n - 1]) / (2.0 * h)
    return x[: n + 1], f[: n + 1], f[n], df


def _both(E: float, m: int, cfg: OracleConfig):
    xm = cfg.match_point
    xl, fl, fl_m, dfl_m = _half(E, m, xm, cfg)
    xr, fr, fr_m, dfr_m = _half(E, m, -xm, cfg)
    # mirror: F_R(x) = G(-x), F_R'(x) = -G'(-x)
    return (xl, fl, fl_m, dfl_m), (-xr, fr, fr_m, -dfr_m)


def shoot_mismatch(E: float, m: int, cfg: OracleConfig | None = None) -> float:
    """Normalized Wronskian of the two edge solutions at the match point.

    Equals ``sin`` of the angle between ``(F, F')`` from the left and from the
    right, so it is bounded, continuous in E and vanishes exactly at the
    eigenvalues.
    """
    if m < 1 or int(m) != m:
        raise DomainError("m must be an integer >= 1")
    if E <= 0:
        raise DomainError("E must be positive")
    cfg = cfg or OracleConfig()
    (_, _, a, da), (_, _, b, db) = _both(E, m, cfg)
    return (da * b - a * db) / (math.hypot(a, da) * math.hypot(b, db))


def eigenfunction(E: float, m: int, cfg: OracleConfig | None = None):
    """Glued, unnormalized solution on the grid (left part, then right)."""
    cfg = cfg or OracleConfig()
    (xl, fl, a, da), (xr, fr, b, db) = _both(E, m, cfg)
    scale = (a * b + da * db) / (b * b + db * db)
    x = np.concatenate([xl, xr[-2::-1]])
    f = np.concatenate([fl, scale * fr[-2::-1]])
    return x, f


def count_nodes(f: np.ndarray) -> int:
    s = np.sign(f)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _bracket(m: int, l: int, cfg: OracleConfig):
    E0 = (l + 0.5) ** 2
    width = cfg.bracket_width
    for _ in range(MAX_EXPANSIONS + 1):
        lo, hi = max(E0 - width, 1e-6), E0 + width
        flo, fhi = shoot_mismatch(lo, m, cfg), shoot_mismatch(hi, m, cfg)
        if flo == 0:
            return lo, lo, flo, flo
        if fhi == 0:
            return hi, hi, fhi, fhi
        if flo * fhi < 0:
            return lo, hi, flo, fhi
        width *= 2
    raise BracketFailure(f"no sign change around E={E0} for m={m}, l={l}")


def solve_level(m: int, l: int, cfg: OracleConfig | None = None) -> OracleResult:
    """Eigenvalue with ``l - m`` nodes: bracket, bisect, then secant polish."""
    if m < 1 or l < m:
        raise DomainError(f"need l >= m >= 1, got m={m}, l={l}")
    cfg = cfg or OracleConfig()
    lo, hi, flo, fhi = _bracket(m, l, cfg)
    converged = lo == hi
    for _ in range(200):
        if converged or hi - lo <= cfg.tolerance:
            break
        mid = 0.5 * (lo + hi)
        fm = shoot_mismatch(mid, m, cfg)
        if fm == 0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    converged = converged or hi - lo <= cfg.tolerance
    E = 0.5 * (lo + hi)
    if lo < hi and flo != fhi:
        guess = lo - flo * (hi - lo) / (fhi - flo)
        if lo <= guess <= hi:
            E = guess
    _, f = eigenfunction(E, m, cfg)
    nodes = count_nodes(f)
    if nodes != l - m:
        raise NodeCountMismatch(f"m={m}, l={l}: found {nodes} nodes, expected {l - m}")
    return OracleResult(m, l, E, nodes, converged)
