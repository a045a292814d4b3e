"""Ehrhart pseudo-polynomials of transportation polytopes and exact volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .counting import MarginSpec, count_constant_margins

__all__ = [
    "EhrhartPolynomial",
    "ScaledVolume",
    "period",
    "degree",
    "ehrhart_value",
    "grid_points",
    "dilation_spec",
    "interpolate_ehrhart",
    "newton_to_monomial",
    "verify_polynomial",
    "relative_volume",
    "absolute_volume",
]

Counter = Callable[[MarginSpec], int]


def period(m: int, n: int) -> int:
    """Smallest dilation ``z0 = n / gcd(m, n)`` whose dilate holds lattice points."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return n // math.gcd(m, n)


def degree(m: int, n: int) -> int:
    return (m - 1) * (n - 1)


def dilation_spec(m: int, n: int, z: int) -> MarginSpec:
    return MarginSpec(m, z, n, z * m // n)


def ehrhart_value(m: int, n: int, z: int, counter: Optional[Counter] = None) -> int:
    """Number of lattice points in ``z * T(m, n)``; zero off the period lattice."""
    if z < 0:
        raise ValueError("z must be non-negative")
    if z % period(m, n):
        return 0
    return (counter or count_constant_margins)(dilation_spec(m, n, z))


@dataclass(frozen=True)
class EhrhartPolynomial:
    """``H(z) = sum_i coeffs[i] * z**(d - i)`` for ``z`` a multiple of ``z0``.

    ``coeffs[0]`` is the leading coefficient (the relative volume) and
    ``coeffs[d]`` the constant term.
    """

    m: int
    n: int
    d: int
    z0: int
    coeffs: tuple

    def __call__(self, z) -> Fraction:
        if z % self.z0:
            return Fraction(0)
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def normalized_volume(self) -> Fraction:
        """``d! * z0**d * c0``; an integer for an integral polytope."""
        return math.factorial(self.d) * Fraction(self.z0) ** self.d * self.coeffs[0]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "degree": self.d,
            "period": self.z0,
            "coefficients": [str(c) for c in self.coeffs],
        }


def grid_points(m: int, n: int) -> list:
    """The interpolation nodes ``0, z0, ..., d*z0``."""
    z0 = period(m, n)
    return [j * z0 for j in range(degree(m, n) + 1)]


def newton_to_monomial(values: Sequence[int], step: int) -> list:
    """Coefficients (highest degree first) of the polynomial through
    ``(j * step, values[j])`` for ``j = 0..len(values)-1``.

    Uses forward differences: ``H(z) = sum_k D^k H(0) * C(z/step, k)``.
    """
    deg = len(values) - 1
    diffs = [Fraction(v) for v in values]
    leading = []
    for k in range(deg + 1):
        leading.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]

    # ascending coefficients in z
    poly = [Fraction(0)] * (deg + 1)
    basis = [Fraction(1)]  # C(z/step, k) expanded in z, ascending
    for k in range(deg + 1):
        if leading[k]:
            for i, b in enumerate(basis):
                poly[i] += leading[k] * b
        # basis *= (z/step - k) / (k + 1)
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b / step / (k + 1)
            nxt[i] -= b * k / (k + 1)
        basis = nxt
    return poly[::-1]


def interpolate_ehrhart(
    m: int,
    n: int,
    counter: Optional[Counter] = None,
    values: Optional[Sequence[int]] = None,
) -> EhrhartPolynomial:
    """Interpolate ``H`` exactly from its values on ``d + 1`` grid points.

    ``values`` may carry precomputed counts at :func:`grid_points`; otherwise
    each point is counted with ``counter``.
    """
    d = degree(m, n)
    z0 = period(m, n)
    if values is None:
        values = [ehrhart_value(m, n, z, counter) for z in grid_points(m, n)]
    if len(values) != d + 1:
        raise ValueError(f"expected {d + 1} grid values, got {len(values)}")
    coeffs = tuple(newton_to_monomial(values, z0))
    poly = EhrhartPolynomial(m, n, d, z0, coeffs)
    for z, v in zip(grid_points(m, n), values):
        if poly(z) != v:
            raise ArithmeticError(f"interpolant misses grid point z={z}")
    return poly


def verify_polynomial(poly: EhrhartPolynomial, counter: Optional[Counter] = None) -> bool:
    """Compare the polynomial at the held-out point ``(d + 1) * z0`` with a fresh count."""
    z = (poly.d + 1) * poly.z0
    return poly(z) == ehrhart_value(poly.m, poly.n, z, counter)


def relative_volume(poly: EhrhartPolynomial) -> Fraction:
    return poly.coeffs[0]


def _squarefree_split(k: int) -> tuple:
    """Write ``k = a**2 * b`` with ``b`` squarefree; return ``(a, b)``."""
    a, b, p = 1, 1, 2
    while p * p <= k:
        while k % (p * p) == 0:
            k //= p * p
            a *= p
        if k % p == 0:
            k //= p
            b *= p
        p += 1
    return a, b * k


@dataclass(frozen=True)
class ScaledVolume:
    """Exact value ``coeff * m**(m_exp2/2) * n**(n_exp2/2)``."""

    coeff: Fraction
    m_exp2: int
    n_exp2: int
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff <= 0:
            raise ValueError("volume must be positive")

    def squared(self) -> Fraction:
        """The square of the value, always rational."""
        return (
            self.coeff**2
            * Fraction(self.m) ** self.m_exp2
            * Fraction(self.n) ** self.n_exp2
        )

    def radical_form(self) -> tuple:
        """``(q, r)`` with value ``q * sqrt(r)``, ``q`` rational and ``r`` a squarefree integer."""
        # only the odd exponents leave anything under the root
        q = (
            self.coeff
            * Fraction(self.m) ** (self.m_exp2 // 2)
            * Fraction(self.n) ** (self.n_exp2 // 2)
        )
        outside, radicand = _squarefree_split(self.m ** (self.m_exp2 % 2) * self.n ** (self.n_exp2 % 2))
        return q * outside, radicand

    def exact(self) -> Optional[Fraction]:
        """The value as a rational, or None if it is irrational."""
        q, r = self.radical_form()
        return q if r == 1 else None

    def log(self) -> float:
        return (
            math.log(self.coeff.numerator)
            - math.log(self.coeff.denominator)
            + self.m_exp2 * math.log(self.m) / 2
            + self.n_exp2 * math.log(self.n) / 2
        )

    def __float__(self) -> float:
        return math.exp(self.log())

    def scale(self, factor: Fraction) -> "ScaledVolume":
        return ScaledVolume(self.coeff * factor, self.m_exp2, self.n_exp2, self.m, self.n)

    def __eq__(self, other):
        if isinstance(other, ScaledVolume):
            return self.squared() == other.squared()
        if isinstance(other, (int, Fraction)):
            return other > 0 and self.squared() == Fraction(other) ** 2
        return NotImplemented

    def __hash__(self):
        return hash(self.squared())

    def __str__(self):
        q, r = self.radical_form()
        if r == 1:
            return str(q)
        return f"{q}*sqrt({r})"

    def to_dict(self) -> dict:
        return {
            "coeff": str(self.coeff),
            "m_exp2": self.m_exp2,
            "n_exp2": self.n_exp2,
            "m": self.m,
            "n": self.n,
            "display": str(self),
            "log": self.log(),
        }


def absolute_volume(m: int, n: int, nu) -> ScaledVolume:
    """Lebesgue volume of T(m, n) from its relative volume ``nu``.

    For ``m, n >= 2`` this is ``m**((n-1)/2) * n**((m-1)/2) * nu``; a
    transportation polytope with a single row or column is a point of volume 1.
    """
    nu = Fraction(nu)
    if nu <= 0:
        raise ValueError("relative volume must be positive")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if m == 1 or n == 1:
        return ScaledVolume(Fraction(1), 0, 0, m, n)
    return ScaledVolume(nu, n - 1, m - 1, m, n)
