"""Exact term algebra for the WKB phase derivatives.

Expressions are finite sums of terms ``coeff * cos(x)**a * sin(x)**b * w**p``
where ``w = sigma_0'(x) = sqrt(E - U / cos(x)**2)`` and ``coeff`` is a
polynomial in ``U`` and ``E`` with rational coefficients.  ``sin`` powers are
kept in {0, 1} by rewriting ``sin**2 -> 1 - cos**2``.  The relation
``w**2 = E - U cos**-2`` is *not* applied automatically; use :func:`lift` to
bring every term of an expression to a common ``w`` power.

All arithmetic is exact (:class:`fractions.Fraction`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, StructureViolation

N_MAX = 12


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    """Polynomial in U and E over the rationals, keyed by (deg_U, deg_E)."""

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None):
        items = {}
        for key, val in (coeffs or {}).items():
            val = _frac(val)
            if val:
                items[(int(key[0]), int(key[1]))] = val
        self._items = tuple(sorted(items.items()))
        self._hash = None

    @classmethod
    def const(cls, value) -> "Poly":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, value, u: int = 0, e: int = 0) -> "Poly":
        return cls({(u, e): value})

    @classmethod
    def from_upoly(cls, coeffs: Sequence) -> "Poly":
        """Build from a list of coefficients indexed by the power of U."""
        return cls({(i, 0): c for i, c in enumerate(coeffs)})

    def items(self):
        return self._items

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def __bool__(self):
        return bool(self._items)

    @property
    def u_degree(self) -> int:
        return max((k[0] for k, _ in self._items), default=0)

    @property
    def e_degree(self) -> int:
        return max((k[1] for k, _ in self._items), default=0)

    def upoly(self) -> list[Fraction]:
        """Coefficients by power of U, trailing zeros trimmed. Requires no E."""
        if self.e_degree:
            raise ValueError("polynomial depends on E")
        out = [Fraction(0)] * (self.u_degree + 1)
        for (i, _), c in self._items:
            out[i] = c
        return out

    def grid(self) -> list[list[Fraction]]:
        """Coefficient table ``[deg_U][deg_E]``."""
        out = [[Fraction(0)] * (self.e_degree + 1) for _ in range(self.u_degree + 1)]
        for (i, j), c in self._items:
            out[i][j] = c
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._items == other._items
        if isinstance(other, (int, Fraction)):
            return self._items == Poly.const(other)._items
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        acc = dict(self._items)
        for k, v in other._items:
            acc[k] = acc.get(k, 0) + v
        return Poly(acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self._items})

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            q = _frac(other)
            return Poly({k: v * q for k, v in self._items})
        acc: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self._items:
            for (i2, j2), b in other._items:
                key = (i1 + i2, j1 + j2)
                acc[key] = acc.get(key, 0) + a * b
        return Poly(acc)

    __rmul__ = __mul__

    def __call__(self, U, E=0.0):
        total = 0.0
        for (i, j), c in self._items:
            total = total + float(c) * U**i * E**j
        return total

    def __repr__(self):
        if not self._items:
            return "0"
        parts = []
        for (i, j), c in self._items:
            mono = "".join(
                f"*{sym}" + (f"^{d}" if d > 1 else "")
                for sym, d in (("U", i), ("E", j))
                if d
            )
            parts.append(f"({c}){mono}")
        return " + ".join(parts)


U = Poly.monomial(1, u=1)
E = Poly.monomial(1, e=1)
ONE = Poly.const(1)


@dataclass(frozen=True)
class PhaseTerm:
    coeff: Poly
    cos: int
    sin: int
    w: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.cos, self.sin, self.w)


@dataclass(frozen=True)
class PhaseExpr:
    """Collected sum of :class:`PhaseTerm`, ordered by ``(cos, sin, w)``.

    Construct through :func:`normalize` (or the helpers below) so the
    invariants hold; equality is then structural.
    """

    terms: tuple[PhaseTerm, ...] = ()

    @classmethod
    def zero(cls) -> "PhaseExpr":
        return cls(())

    @classmethod
    def atom(cls, coeff=1, cos: int = 0, sin: int = 0, w: int = 0) -> "PhaseExpr":
        c = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        return normalize([PhaseTerm(c, cos, sin, w)])

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PhaseExpr") -> "PhaseExpr":
        return normalize(self.terms + other.terms)

    def __neg__(self) -> "PhaseExpr":
        return PhaseExpr(tuple(PhaseTerm(-t.coeff, t.cos, t.sin, t.w) for t in self.terms))

    def __sub__(self, other: "PhaseExpr") -> "PhaseExpr":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PhaseExpr):
            return multiply(self, other)
        return normalize(PhaseTerm(t.coeff * other, t.cos, t.sin, t.w) for t in self.terms)

    __rmul__ = __mul__

    def w_powers(self) -> set[int]:
        return {t.w for t in self.terms}

    def depends_on_E(self) -> bool:
        return any(t.coeff.e_degree for t in self.terms)

    def numeric_terms(self, U: float, E: float):
        """Float coefficient and exponent arrays, for the numeric kernels."""
        coeff = np.array([t.coeff(U, E) for t in self.terms], dtype=np.float64)
        cos = np.array([t.cos for t in self.terms], dtype=np.int64)
        sin = np.array([t.sin for t in self.terms], dtype=np.int64)
        w = np.array([t.w for t in self.terms], dtype=np.int64)
        return coeff, cos, sin, w

    def evaluate(self, x, E: float, U: float, w=None):
        """Value at real ``x`` in the classically allowed region.

        ``w`` defaults to the positive root of ``E - U/cos(x)**2``; pass it
        explicitly (possibly complex) to evaluate on another branch.
        """
        x = np.asarray(x)
        c = np.cos(x)
        s = np.sin(x)
        if w is None:
            w = np.sqrt(E - U / c**2)
        total = np.zeros(np.broadcast(x, w).shape, dtype=np.result_type(c, w))
        for t in self.terms:
            total = total + t.coeff(U, E) * c**t.cos * s**t.sin * w ** float(t.w)
        return total

    def __repr__(self):
        if not self.terms:
            return "PhaseExpr(0)"
        body = " + ".join(
            f"[{t.coeff}]*c^{t.cos}*s^{t.sin}*w^{t.w}" for t in self.terms
        )
        return f"PhaseExpr({body})"


def normalize(terms: Iterable[PhaseTerm] | PhaseExpr) -> PhaseExpr:
    """Rewrite ``s**2 -> 1 - c**2`` exhaustively, collect like terms, drop zeros."""
    if isinstance(terms, PhaseExpr):
        terms = terms.terms
    acc: dict[tuple[int, int, int], Poly] = {}
    stack = list(terms)
    while stack:
        t = stack.pop()
        if t.sin < 0:
            raise ValueError("negative sin power is outside the algebra")
        if t.sin >= 2:
            stack.append(PhaseTerm(t.coeff, t.cos, t.sin - 2, t.w))
            stack.append(PhaseTerm(-t.coeff, t.cos + 2, t.sin - 2, t.w))
            continue
        k = t.key
        acc[k] = acc[k] + t.coeff if k in acc else t.coeff
    out = tuple(
        PhaseTerm(c, *k) for k, c in sorted(acc.items()) if not c.is_zero()
    )
    return PhaseExpr(out)


def differentiate(expr: PhaseExpr) -> PhaseExpr:
    """d/dx with dc = -s dx, ds = c dx and dw = -U s c**-3 w**-1 dx."""
    out = []
    for t in expr.terms:
        a, b, p = t.cos, t.sin, t.w
        if a:
            out.append(PhaseTerm(t.coeff * (-a), a - 1, b + 1, p))
        if b:
            out.append(PhaseTerm(t.coeff * b, a + 1, b - 1, p))
        if p:
            out.append(PhaseTerm(t.coeff * U * (-p), a - 3, b + 1, p - 2))
    return normalize(out)


def multiply(a: PhaseExpr, b: PhaseExpr) -> PhaseExpr:
    out = [
        PhaseTerm(x.coeff * y.coeff, x.cos + y.cos, x.sin + y.sin, x.w + y.w)
        for x in a.terms
        for y in b.terms
    ]
    return normalize(out)


def shift_w(expr: PhaseExpr, dp: int) -> PhaseExpr:
    """Multiply by ``w**dp`` (exact; no branch question at this level)."""
    return PhaseExpr(tuple(PhaseTerm(t.coeff, t.cos, t.sin, t.w + dp) for t in expr.terms))


SIGMA0 = PhaseExpr.atom(1, w=1)


def wkb_recursion_step(history: Sequence[PhaseExpr]) -> PhaseExpr:
    """Next phase derivative from ``history = [sigma_0', ..., sigma_{n-1}']``.

    sigma_n' = -1/(2w) * (sum_{k=1}^{n-1} sigma_k' sigma_{n-k}' + sigma_{n-1}'')
    """
    if not history:
        raise ValueError("history must contain at least sigma_0'")
    if history[0] != SIGMA0:
        raise ValueError("history[0] must be the atom w")
    n = len(history)
    acc = differentiate(history[n - 1])
    for k in range(1, n):
        acc = acc + multiply(history[k], history[n - k])
    return shift_w(acc * Fraction(-1, 2), -1)


@lru_cache(maxsize=None)
def _phase_tuple(n_max: int) -> tuple[PhaseExpr, ...]:
    if n_max == 0:
        return (SIGMA0,)
    prev = _phase_tuple(n_max - 1)
    return prev + (wkb_recursion_step(prev),)


def phase_derivatives(n_max: int = N_MAX) -> list[PhaseExpr]:
    """``[sigma_0', ..., sigma_{n_max}']`` as raw recursion output."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return list(_phase_tuple(n_max))


def lift(expr: PhaseExpr, target_w: int) -> PhaseExpr:
    """Rewrite every term to carry ``w**target_w`` using ``w**2 = E - U c**-2``.

    Terms whose w power is below the target, or of the other parity, raise
    :class:`StructureViolation`.
    """
    factor = normalize([PhaseTerm(E, 0, 0, 0), PhaseTerm(-U, -2, 0, 0)])
    powers = [PhaseExpr.atom(1)]
    out = []
    for t in expr.terms:
        d = t.w - target_w
        if d < 0 or d % 2:
            raise StructureViolation(
                f"term w^{t.w} cannot be lifted to w^{target_w}"
            )
        j = d // 2
        while len(powers) <= j:
            powers.append(multiply(powers[-1], factor))
        for f in powers[j].terms:
            out.append(PhaseTerm(t.coeff * f.coeff, t.cos + f.cos, t.sin + f.sin, target_w))
    return normalize(out)


def sin_parity(n: int) -> int:
    return n % 2


def max_l(n: int) -> int:
    if n == 0:
        return 0
    return (3 * n - 2) // 2 if n % 2 == 0 else (3 * n - 3) // 2


def physical_sign(n: int) -> int:
    """Sign relating the recursion output to the physical phase.

    The recursion is written without the factor ``i`` of the exp(i S)
    ansatz; the physical phase is ``(-i)**n`` times it.  For even n that is
    ``(-1)**(n/2)``; for odd n it is ``-i * (-1)**((n-1)/2)``, and the real
    part of the convention is the same sign ``(-1)**(n // 2)``.
    """
    return -1 if (n // 2) % 2 else 1


@dataclass(frozen=True)
class CanonicalPhase:
    """``sigma_n' = w**(1-3n) sin**f(n) sum_l C[l] cos**(2l-3n)``.

    ``coefficients`` hold the physical-convention C_{n,l} (see
    :func:`physical_sign`); odd orders carry an extra overall factor ``-i``
    that is not stored.
    """

    n: int
    w_pow: int
    sin_parity: int
    coefficients: tuple[tuple[int, Poly], ...]

    def C(self, l: int) -> Poly:
        for ll, p in self.coefficients:
            if ll == l:
                return p
        return Poly()

    def to_expr(self, only_l: Iterable[int] | None = None) -> PhaseExpr:
        """Back to an expression in the recursion's convention."""
        sign = physical_sign(self.n)
        keep = None if only_l is None else set(only_l)
        return normalize(
            PhaseTerm(p * sign, 2 * l - 3 * self.n, self.sin_parity, self.w_pow)
            for l, p in self.coefficients
            if keep is None or l in keep
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "wPow": self.w_pow,
            "sinParity": self.sin_parity,
            "C": [
                {"l": l, "poly": [[_fmt_frac(c) for c in row] for row in p.grid()]}
                for l, p in self.coefficients
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CanonicalPhase":
        coeffs = []
        for entry in obj["C"]:
            grid = entry["poly"]
            poly = Poly(
                {(i, j): Fraction(c) for i, row in enumerate(grid) for j, c in enumerate(row)}
            )
            coeffs.append((int(entry["l"]), poly))
        return cls(int(obj["n"]), int(obj["wPow"]), int(obj["sinParity"]), tuple(coeffs))


def _fmt_frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def extract_canonical(expr: PhaseExpr, n: int) -> CanonicalPhase:
    """Certify the canonical shape of ``sigma_n'`` and read off C_{n,l}."""
    if n < 0:
        raise ValueError("order must be >= 0")
    target = 1 - 3 * n
    f = sin_parity(n)
    g = max_l(n)
    lifted = lift(expr, target)
    sign = physical_sign(n)
    coeffs = []
    for t in lifted.terms:
        if t.sin != f:
            raise StructureViolation(f"order {n}: sin power {t.sin}, expected {f}")
        twice_l = t.cos + 3 * n
        if twice_l % 2:
            raise StructureViolation(f"order {n}: cos power {t.cos} has wrong parity")
        l = twice_l // 2
        if not 0 <= l <= g:
            raise StructureViolation(f"order {n}: l={l} outside 0..{g}")
        coeffs.append((l, t.coeff * sign))
    coeffs.sort(key=lambda item: item[0])
    return CanonicalPhase(n, target, f, tuple(coeffs))


@lru_cache(maxsize=None)
def binomial_half(k: int) -> Fraction:
    """Generalized binomial coefficient C(1/2, k), exact."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)
    return binomial_half(k - 1) * (Fraction(1, 2) - (k - 1)) / k


def closed_form_C0(n: int) -> Poly:
    """(-1)**k (U/2)**(2k) C(1/2, k) for n = 2k."""
    if n % 2 or n < 2:
        raise DomainError(f"closed form holds for even n >= 2, got {n}")
    k = n // 2
    value = (-1) ** k * binomial_half(k) / Fraction(2) ** (2 * k)
    return Poly.monomial(value, u=2 * k)


def canonical_table(n_max: int = N_MAX) -> list[CanonicalPhase]:
    phases = phase_derivatives(n_max)
    return [extract_canonical(p, n) for n, p in enumerate(phases)]


def dump_coefficients(table: Sequence[CanonicalPhase], **json_kw) -> str:
    return json.dumps([c.to_json() for c in table], **json_kw)


def load_coefficients(text: str) -> list[CanonicalPhase]:
    return [CanonicalPhase.from_json(obj) for obj in json.loads(text)]
