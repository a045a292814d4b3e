"""Exact enumeration of non-negative integer matrices with prescribed margins.

The engine fills the matrix one column at a time.  The state between columns
is the multiset of remaining row sums, kept as a sorted tuple with zeros
dropped, so rows that have reached the same remaining value are merged into a
single symmetric group.  A column is split among the rows group by group: for
a group of ``k`` rows sharing remaining value ``v`` only the non-increasing
allocations are generated, each weighted by its number of distinct
rearrangements.  The group-by-group split is memoized as well, which is where
most of the sharing happens.  The last two columns are closed form.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

__all__ = [
    "MarginError",
    "BudgetExceeded",
    "MarginSpec",
    "GeneralMargins",
    "count_margins_general",
    "count_constant_margins",
    "brute_force_count",
    "DEFAULT_ORACLE_BUDGET",
]

DEFAULT_ORACLE_BUDGET = 10**7


class MarginError(ValueError):
    """Raised for malformed or unbalanced margins."""


class BudgetExceeded(RuntimeError):
    """Raised when a computation runs past its time or enumeration budget."""


@dataclass(frozen=True)
class MarginSpec:
    """Constant margins: ``m`` rows summing to ``s``, ``n`` columns summing to ``t``."""

    m: int
    s: int
    n: int
    t: int
    lam: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("m", "s", "n", "t"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise MarginError(f"{name} must be an integer, got {value!r}")
        if self.m < 1 or self.n < 1:
            raise MarginError("m and n must be at least 1")
        if self.s < 0 or self.t < 0:
            raise MarginError("row and column sums must be non-negative")
        if self.m * self.s != self.n * self.t:
            raise MarginError(
                f"unbalanced margins: m*s = {self.m * self.s} but n*t = {self.n * self.t}"
            )
        object.__setattr__(self, "lam", Fraction(self.s, self.n))

    @property
    def total(self) -> int:
        return self.m * self.s

    def transpose(self) -> "MarginSpec":
        return MarginSpec(self.n, self.t, self.m, self.s)

    def general(self) -> "GeneralMargins":
        return GeneralMargins((self.s,) * self.m, (self.t,) * self.n)


@dataclass(frozen=True)
class GeneralMargins:
    row_sums: tuple
    col_sums: tuple

    def __init__(self, row_sums: Sequence[int], col_sums: Sequence[int]):
        rows = tuple(int(r) for r in row_sums)
        cols = tuple(int(c) for c in col_sums)
        if not rows or not cols:
            raise MarginError("at least one row and one column are required")
        if min(rows) < 0 or min(cols) < 0:
            raise MarginError("margins must be non-negative")
        if sum(rows) != sum(cols):
            raise MarginError(
                f"unbalanced margins: rows total {sum(rows)}, columns total {sum(cols)}"
            )
        object.__setattr__(self, "row_sums", rows)
        object.__setattr__(self, "col_sums", cols)

    @property
    def shape(self) -> tuple:
        return len(self.row_sums), len(self.col_sums)

    def transpose(self) -> "GeneralMargins":
        return GeneralMargins(self.col_sums, self.row_sums)


@lru_cache(maxsize=None)
def _group_allocations(value: int, k: int, amount: int) -> tuple:
    """Ways to take ``amount`` from ``k`` rows that each have ``value`` left.

    Returns ``(leftovers, weight)`` pairs where ``leftovers`` lists the
    remaining values (non-increasing takes, hence non-decreasing leftovers)
    and ``weight`` is the number of ordered takes with that multiset.
    """
    out = []

    def rec(i, remaining, cap, taken):
        if i == k:
            if remaining == 0:
                weight = math.factorial(k)
                for _, grp in itertools.groupby(taken):
                    weight //= math.factorial(len(list(grp)))
                out.append((tuple(value - x for x in taken), weight))
            return
        slots = k - i
        lo = -(-remaining // slots)  # largest take must cover the average
        for x in range(min(cap, remaining), lo - 1, -1):
            taken.append(x)
            rec(i + 1, remaining - x, x, taken)
            taken.pop()

    if 0 <= amount <= value * k:
        rec(0, amount, value, [])
    return tuple(out)


def _bounded_compositions(caps: tuple, total: int) -> int:
    """Number of vectors ``0 <= x_i <= caps[i]`` with ``sum(x) == total``."""
    ways = [1] + [0] * total
    for cap in caps:
        # multiply by (1 + q + ... + q^cap) using a running window sum
        nxt = [0] * (total + 1)
        window = 0
        for j in range(total + 1):
            window += ways[j]
            if j - cap - 1 >= 0:
                window -= ways[j - cap - 1]
            nxt[j] = window
        ways = nxt
    return ways[total]


class _ColumnDP:
    """Memoized column-by-column count for a fixed column-sum sequence.

    ``full(state, j)`` counts completions of columns ``j..`` from the sorted
    remaining row sums ``state``.  The split of column ``j`` is itself a
    memoized recursion ``part(done, todo, amount, j)`` that hands the column
    out to the groups of ``todo`` smallest value first; ``done`` holds the
    (sorted, non-zero) leftovers of rows already served.  Partial splits
    reached from different parent states are shared.
    """

    _CHECK_EVERY = 4096

    def __init__(self, cols: tuple, deadline: Optional[float]):
        self.cols = cols
        self.deadline = deadline
        self.memo: dict = {}
        self.partial: dict = {}
        self._ticks = 0

    def _tick(self):
        self._ticks += 1
        if self.deadline is not None and self._ticks % self._CHECK_EVERY == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded("time budget exceeded while counting")

    def full(self, state: tuple, j: int) -> int:
        left = len(self.cols) - j
        if left <= 1:
            return 1
        key = (state, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if left == 2:
            hit = _bounded_compositions(state, self.cols[j])
        else:
            hit = self.part((), state, self.cols[j], j)
        self.memo[key] = hit
        return hit

    def part(self, done: tuple, todo: tuple, amount: int, j: int) -> int:
        if amount == 0:
            return self.full(tuple(sorted(done + todo)), j + 1)
        if not todo:
            return 0
        key = (done, todo, amount, j)
        hit = self.partial.get(key)
        if hit is not None:
            return hit
        self._tick()
        v = todo[0]
        k = 1
        while k < len(todo) and todo[k] == v:
            k += 1
        rest = todo[k:]
        capacity = sum(rest)
        total = 0
        for take in range(max(0, amount - capacity), min(v * k, amount) + 1):
            for leftovers, weight in _group_allocations(v, k, take):
                merged = tuple(sorted(done + tuple(x for x in leftovers if x)))
                total += weight * self.part(merged, rest, amount - take, j)
        self.partial[key] = total
        return total


def count_margins_general(
    margins: GeneralMargins, time_budget: Optional[float] = None
) -> int:
    """Exact number of non-negative integer matrices with the given margins.

    ``time_budget`` is a wall-clock limit in seconds; :class:`BudgetExceeded`
    is raised when it runs out.
    """
    rows = sorted(r for r in margins.row_sums if r)
    cols = sorted((c for c in margins.col_sums if c), reverse=True)
    if not rows:
        return 1
    # the state vector is indexed by rows, so keep the short side there
    if len(rows) > len(cols):
        rows, cols = sorted(cols), sorted(rows, reverse=True)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    return _ColumnDP(tuple(cols), deadline).full(tuple(rows), 0)


def count_constant_margins(spec: MarginSpec, time_budget: Optional[float] = None) -> int:
    """M(m, s; n, t): matrices with every row summing to s and every column to t."""
    return count_margins_general(spec.general(), time_budget=time_budget)


def brute_force_count(
    margins: GeneralMargins, budget: int = DEFAULT_ORACLE_BUDGET
) -> int:
    """Naive test oracle: enumerate every candidate matrix and check its margins.

    Each row is drawn from ``range(r + 1) ** n`` filtered on its row sum; the
    full product of rows is walked and kept when every column sum matches.
    """
    rows, cols = margins.row_sums, margins.col_sums
    n = len(cols)
    size = 1
    for r in rows:
        size *= (r + 1) ** n
    if size > budget:
        raise BudgetExceeded(
            f"oracle budget exceeded: {size} candidate rows-products > {budget}"
        )
    per_row = [
        [cand for cand in itertools.product(range(r + 1), repeat=n) if sum(cand) == r]
        for r in rows
    ]
    found = 0
    for matrix in itertools.product(*per_row):
        if all(sum(col) == c for col, c in zip(zip(*matrix), cols)):
            found += 1
    return found
