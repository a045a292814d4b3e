"""Accuracy table for the Birkhoff volume estimate: estimate / exact volume."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .asymptotics import LogReal, estimate_birkhoff_volume_log
from .cache import CachedCounter
from .counting import BudgetExceeded
from .ehrhart import (
    ScaledVolume,
    dilation_spec,
    absolute_volume,
    grid_points,
    interpolate_ehrhart,
    relative_volume,
    verify_polynomial,
)

__all__ = ["TableRow", "birkhoff_exact_volume", "build_table1", "read_actual_file"]

log = logging.getLogger(__name__)


@dataclass
class TableRow:
    n: int
    estimate_log: LogReal
    exact_volume: Optional[ScaledVolume] = None
    ratio: Optional[float] = None
    source: Optional[str] = None  # "ehrhart" or "file"
    status: str = "ok"  # "ok", "no exact value", "budget exceeded"

    def __post_init__(self):
        if (self.exact_volume is None) != (self.ratio is None):
            raise ValueError("ratio is present exactly when the exact volume is")
        if self.ratio is not None and self.ratio <= 0:
            raise ValueError("ratio must be positive")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "estimate_log": self.estimate_log.log_value,
            "exact_volume": None if self.exact_volume is None else self.exact_volume.to_dict(),
            "ratio": self.ratio,
            "source": self.source,
            "status": self.status,
        }


def birkhoff_exact_volume(n: int, counter: CachedCounter, verify: bool = True) -> ScaledVolume:
    """vol(B_n) from the interpolated Ehrhart polynomial of B_n."""
    if n == 1:
        return absolute_volume(1, 1, 1)
    values = counter.many(dilation_spec(n, n, z) for z in grid_points(n, n))
    poly = interpolate_ehrhart(n, n, values=values)
    if verify and not verify_polynomial(poly, counter):
        raise ArithmeticError(f"Ehrhart polynomial of B_{n} fails its held-out point")
    return absolute_volume(n, n, relative_volume(poly))


def read_actual_file(path) -> dict:
    """Parse ``n,volume`` lines; volumes are exact rationals or decimals."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, tail = line.partition(",")
            if lineno == 1 and not head.strip().isdigit():
                continue  # header
            try:
                n = int(head)
                vol = Fraction(tail.strip())
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            if vol <= 0:
                raise ValueError(f"{path}: line {lineno}: volume must be positive")
            out[n] = vol
    return out


def build_table1(
    max_n: int,
    counter: CachedCounter,
    max_exact_n: int = 5,
    actual: Optional[dict] = None,
) -> list:
    """One row per ``n = 1..max_n``.

    Exact volumes come from Ehrhart interpolation for ``n <= max_exact_n`` and
    otherwise from ``actual``; a row whose count runs out of time is marked
    and the remaining rows still run.
    """
    actual = actual or {}
    rows = []
    for n in range(1, max_n + 1):
        est = estimate_birkhoff_volume_log(n)
        row = TableRow(n, est, status="no exact value")
        if n <= max_exact_n:
            try:
                vol = birkhoff_exact_volume(n, counter)
                row = _with_exact(n, est, vol, "ehrhart")
            except BudgetExceeded as exc:
                log.warning("n=%d: %s", n, exc)
                row.status = "budget exceeded"
        elif n in actual:
            vol = ScaledVolume(actual[n], 0, 0, n, n)
            row = _with_exact(n, est, vol, "file")
        rows.append(row)
    return rows


def _with_exact(n, est, vol, source) -> TableRow:
    ratio = math.exp(est.log_value - vol.log())
    return TableRow(n, est, vol, ratio, source)
