"""Closed-form asymptotic estimates, evaluated in log space.

Counts of matrices and volumes of transportation polytopes run over hundreds
of orders of magnitude, so everything here returns a :class:`LogReal`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .counting import MarginSpec
from .ehrhart import degree, period

__all__ = [
    "LogReal",
    "HypReport",
    "log_binomial",
    "estimate_count_log",
    "estimate_rel_volume_proxy_log",
    "estimate_volume_log",
    "estimate_birkhoff_volume_log",
    "hyp_margin",
    "DEFAULT_A",
    "DEFAULT_B",
]

DEFAULT_A = 0.3
DEFAULT_B = 0.1

LOG_2PI = math.log(2 * math.pi)

# below this size binomials are formed exactly before taking the log
_EXACT_BINOMIAL_LIMIT = 4096


@dataclass(frozen=True, order=True)
class LogReal:
    """A positive real stored as its natural logarithm."""

    log_value: float

    def __post_init__(self):
        if not math.isfinite(self.log_value):
            raise ValueError(f"log value must be finite, got {self.log_value}")

    @classmethod
    def from_value(cls, x) -> "LogReal":
        if x <= 0:
            raise ValueError("LogReal holds positive quantities only")
        if isinstance(x, Fraction):
            return cls(math.log(x.numerator) - math.log(x.denominator))
        return cls(math.log(x))

    def __mul__(self, other: "LogReal") -> "LogReal":
        return LogReal(self.log_value + other.log_value)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        return LogReal(self.log_value - other.log_value)

    def __pow__(self, k: float) -> "LogReal":
        return LogReal(self.log_value * k)

    def value(self) -> float:
        """The raw value; ``inf`` or ``0.0`` when outside float range."""
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    def log10(self) -> float:
        return self.log_value / math.log(10)

    def format(self, digits: int = 6) -> str:
        """Scientific notation that works far beyond float range."""
        l10 = self.log10()
        exponent = math.floor(l10)
        mantissa = 10 ** (l10 - exponent)
        text = f"{mantissa:.{digits - 1}f}"
        if float(text) >= 10:
            exponent += 1
            text = f"{mantissa / 10:.{digits - 1}f}"
        return f"{text}e{exponent:+d}"


@dataclass(frozen=True)
class HypReport:
    lhs: float
    rhs: float
    satisfied: bool
    a: float
    density_factor: float
    aspect_factor: float

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "a": self.a,
            "density_factor": self.density_factor,
            "aspect_factor": self.aspect_factor,
        }


def log_binomial(p: int, q: int) -> LogReal:
    if not 0 <= q <= p:
        raise ValueError(f"log_binomial needs 0 <= q <= p, got p={p}, q={q}")
    if q == 0 or q == p:
        return LogReal(0.0)
    if p <= _EXACT_BINOMIAL_LIMIT:
        return LogReal(math.log(math.comb(p, q)))
    return LogReal(math.lgamma(p + 1) - math.lgamma(q + 1) - math.lgamma(p - q + 1))


def estimate_count_log(spec: MarginSpec) -> LogReal:
    """Point estimate of log M(m, s; n, t), with the vanishing error term dropped.

    binom(n+s-1, n-1)^m * binom(m+t-1, m-1)^n / binom(mn + ms - 1, mn - 1) * e^(1/2)
    """
    m, s, n, t = spec.m, spec.s, spec.n, spec.t
    if s < 1 or t < 1:
        raise ValueError("the estimate needs positive row and column sums")
    total = spec.lam * m * n
    assert total.denominator == 1 and total == m * s
    rows = log_binomial(n + s - 1, n - 1).log_value * m
    cols = log_binomial(m + t - 1, m - 1).log_value * n
    whole = log_binomial(m * n + m * s - 1, m * n - 1).log_value
    return LogReal(rows + cols - whole + 0.5)


def estimate_rel_volume_proxy_log(m: int, n: int, lambda_mult: int) -> LogReal:
    """Finite-dilation proxy for log nu(T(m, n)): log(M / z**d) at z = lambda_mult * z0."""
    if lambda_mult < 1:
        raise ValueError("lambda_mult must be positive")
    z = lambda_mult * period(m, n)
    spec = MarginSpec(m, z, n, z * m // n)
    return LogReal(estimate_count_log(spec).log_value - degree(m, n) * math.log(z))


def estimate_volume_log(m: int, n: int) -> LogReal:
    """Asymptotic log volume of T(m, n) with its error term dropped."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return LogReal(
        -(m + n - 1) / 2 * LOG_2PI
        - (m - 1) * (n - 1) * math.log(n)
        + 1 / 3
        + m * n
        - (m - n) ** 2 / (12 * m * n)
    )


def estimate_birkhoff_volume_log(n: int) -> LogReal:
    if n < 1:
        raise ValueError("n must be positive")
    return LogReal(-(n - 0.5) * LOG_2PI - (n - 1) ** 2 * math.log(n) + 1 / 3 + n * n)


def hyp_margin(m: int, n: int, lam, a: float = DEFAULT_A) -> HypReport:
    """Check the growth hypothesis of the count estimate at density ``lam``.

    Informational only; estimates are never refused because of it.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if a <= 0:
        raise ValueError("a must be positive")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if isinstance(lam, (int, Fraction)):
        lam = Fraction(lam)
        density = (1 + 2 * lam) ** 2 / (4 * lam * (1 + lam))
        aspect = 1 + Fraction(5 * m, 6 * n) + Fraction(5 * n, 6 * m)
    else:
        lam = float(lam)
        density = (1 + 2 * lam) ** 2 / (4 * lam * (1 + lam))
        aspect = 1 + 5 * m / (6 * n) + 5 * n / (6 * m)
    lhs = density * aspect
    rhs = a * math.log(n)
    return HypReport(
        lhs=float(lhs),
        rhs=rhs,
        satisfied=float(lhs) <= rhs,
        a=a,
        density_factor=float(density),
        aspect_factor=float(aspect),
    )
