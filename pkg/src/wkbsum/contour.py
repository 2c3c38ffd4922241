"""Numerical contour integrals of the phase derivatives around the branch cut.

The cut of ``w = sqrt(E - U/cos(z)**2)`` joins the turning points ``±x+``.
We integrate counter-clockwise on an ellipse centred at 0 that encloses the
cut and stays inside ``|Re z| < pi/2``, tracking ``w`` continuously from
``z = a`` where ``w = +i sqrt(U/cos(a)**2 - E)``.  With that branch
``w > 0`` just below the cut, which gives ``∮ w dz = 2 pi (sqrt(E) - sqrt(U))``.

The recursion in :mod:`wkbsum.algebra` omits the ``i`` of the exp(iS)
ansatz, so the physical increment of the order-n phase is ``(-i)**n`` times
the integral of the recursion output; ``order`` applies that factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .algebra import N_MAX, PhaseExpr, PhaseTerm, extract_canonical, normalize, phase_derivatives
from .errors import BranchDiscontinuity, DomainError, NonRealResult, QuadratureNonConvergence
from .series import action_term

MIN_SAMPLES = 256
MAX_SAMPLES = 1 << 18
GATE_TOL = 1e-10
NOISE_ULPS = 64
# fraction of the way from x+ to pi/2; high-order phases carry w**(1-3n),
# so staying away from the turning point matters more than from the pole
CROSSING = 0.65


@dataclass(frozen=True)
class TurningPoints:
    x_minus: float
    x_plus: float
    kappa: float


def turning_points(E: float, U: float) -> TurningPoints:
    if not (U > 0 and E > U):
        raise DomainError(f"need E > U > 0, got E={E}, U={U}")
    kappa = math.sqrt(U / E)
    xp = math.acos(kappa)
    return TurningPoints(-xp, xp, kappa)


@dataclass(frozen=True)
class ContourPath:
    """Ellipse ``z = a cos t + i b sin t``, traversed counter-clockwise."""

    a: float
    b: float
    samples: int = MIN_SAMPLES

    def __post_init__(self):
        if self.samples < MIN_SAMPLES or self.samples % 2:
            raise ValueError(f"samples must be even and >= {MIN_SAMPLES}")
        if not (0 < self.a < math.pi / 2) or self.b <= 0:
            raise ValueError("need 0 < a < pi/2 and b > 0")

    @classmethod
    def around(cls, tp: TurningPoints, b: float | None = None, samples: int = MIN_SAMPLES):
        """Crosses the real axis between the turning point and the pole."""
        a = tp.x_plus + CROSSING * (math.pi / 2 - tp.x_plus)
        if b is None:
            b = 1.0
        return cls(a, b, samples)

    def encloses(self, tp: TurningPoints) -> bool:
        return tp.x_plus < self.a < math.pi / 2

    def nodes(self, samples: int | None = None):
        n = samples or self.samples
        t = 2.0 * math.pi * np.arange(n) / n
        z = self.a * np.cos(t) + 1j * self.b * np.sin(t)
        dz = -self.a * np.sin(t) + 1j * self.b * np.cos(t)
        return z, dz


@dataclass
class BranchTracker:
    """Continuous ``w`` along a discretized closed path."""

    E: float
    U: float
    max_step: float = field(default=0.0, init=False)

    def track(self, z: np.ndarray) -> np.ndarray:
        c = np.cos(z)
        w2 = self.E - self.U / (c * c)
        w0 = np.sqrt(w2[0] + 0j)
        w0 = 1j * abs(w0) if w2[0].real < 0 else abs(w0)
        w, worst = _kernels.track_branch(w2, w0)
        # closing step back to the start must land on the same sheet
        r = np.sqrt(w2[0] + 0j)
        close = r if abs(r - w[-1]) <= abs(r + w[-1]) else -r
        if abs(close - w0) > 1e-12 * (1.0 + abs(w0)):
            raise BranchDiscontinuity("w does not return to its start value around the path")
        self.max_step = max(worst, abs(np.angle(close / w[-1])))
        return w

    @property
    def continuous(self) -> bool:
        return self.max_step < math.pi / 2


@dataclass(frozen=True)
class ContourResult:
    value: float
    imag: float
    samples_used: int
    gate_error: float


def _as_expr(expr) -> PhaseExpr:
    if isinstance(expr, PhaseTerm):
        return normalize([expr])
    return expr


def _trapezoid(expr: PhaseExpr, E: float, U: float, path: ContourPath, samples: int):
    z, dz = path.nodes(samples)
    tracker = BranchTracker(E, U)
    w = tracker.track(z)
    if not tracker.continuous:
        return None
    coeff, cpow, spow, wpow = expr.numeric_terms(U, E)
    f = _kernels.sum_terms(coeff, cpow, spow, wpow, np.cos(z), np.sin(z), w)
    # rounding floor: the terms of a raw phase cancel heavily on the contour
    size = _kernels.sum_terms(np.abs(coeff), cpow, np.zeros_like(spow), wpow,
                              np.abs(np.cos(z)), np.ones_like(z), np.abs(w)).real
    h = 2.0 * math.pi / samples
    noise = NOISE_ULPS * np.finfo(float).eps * h * float(np.sum(size * np.abs(dz)))
    return complex(np.sum(f * dz) * h), noise


def contour_integral(
    expr,
    E: float,
    U: float,
    path: ContourPath | None = None,
    order: int = 0,
    tol: float = GATE_TOL,
    full: bool = False,
):
    """∮ expr dz around the cut, times ``(-i)**order``; returns the real part.

    Samples are doubled until two successive trapezoid sums agree to
    ``tol * (1 + |I|)``, or to the rounding floor of the sum when that is
    larger; the finer one is returned.
    """
    expr = _as_expr(expr)
    tp = turning_points(E, U)
    if path is None:
        path = ContourPath.around(tp)
    if not path.encloses(tp):
        raise DomainError("contour must cross the real axis between x+ and pi/2")
    phase = (-1j) ** (order % 4)

    samples = path.samples
    prev = None
    while samples <= MAX_SAMPLES:
        out = _trapezoid(expr, E, U, path, samples)
        if out is None:
            if samples * 2 > MAX_SAMPLES:
                raise BranchDiscontinuity("phase step >= pi/2 at the finest sampling")
            samples *= 2
            prev = None
            continue
        cur, noise = out
        cur = cur * phase
        if prev is not None:
            err = abs(cur - prev)
            if err <= max(tol * (1.0 + abs(cur)), noise):
                break
        prev = cur
        samples *= 2
    else:
        raise QuadratureNonConvergence(f"no agreement up to {MAX_SAMPLES} samples")

    if abs(cur.imag) > 1e-6 * (1.0 + abs(cur.real)):
        raise NonRealResult(f"imaginary part {cur.imag:.3e} (real {cur.real:.6e})")
    if full:
        return ContourResult(cur.real, cur.imag, samples, err)
    return cur.real


def closed_form(n: int, E: float, U: float) -> float:
    """Closed-form physical ∮ d sigma_n."""
    if n == 0:
        return 2.0 * math.pi * (math.sqrt(E) - math.sqrt(U))
    if n == 1:
        return -math.pi
    if n % 2:
        return 0.0
    return 2.0 * math.pi * action_term(n // 2, U)


@dataclass(frozen=True)
class IntegralReport:
    n: int
    E: float
    U: float
    numeric: float
    closed_form: float | None
    per_term: tuple[tuple[int, float], ...]
    leading: float
    samples_used: int

    @property
    def higher_l(self) -> float:
        """Total minus the C_{n,0}-only reconstruction."""
        return self.numeric - self.leading

    @property
    def abs_error(self) -> float | None:
        if self.closed_form is None:
            return None
        return abs(self.numeric - self.closed_form)


def integral_report(
    n: int, E: float, U: float, path: ContourPath | None = None, tol: float = GATE_TOL
) -> IntegralReport:
    """Integrate sigma_n' as a whole and term by term in canonical form."""
    if not 0 <= n <= N_MAX:
        raise ValueError(f"order must be in 0..{N_MAX}")
    raw = phase_derivatives(n)[n]
    canon = extract_canonical(raw, n)
    total = contour_integral(raw, E, U, path, order=n, tol=tol, full=True)
    per_term = []
    leading = 0.0
    for l, _ in canon.coefficients:
        val = contour_integral(canon.to_expr([l]), E, U, path, order=n, tol=tol)
        per_term.append((l, val))
        if l == 0:
            leading = val
    cf = closed_form(n, E, U) if (n < 2 or 4 * U > 1) else None
    return IntegralReport(n, E, U, total.value, cf, tuple(per_term), leading, total.samples_used)
