"""Persistent, append-only cache of exact matrix counts.

One record per line, ``m,s,n,t,count`` under a one-line header.  Keys are
stored in canonical orientation: a spec and its transpose have the same count,
so ``(m, s)`` is kept lexicographically no larger than ``(n, t)``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional

from .counting import MarginError, MarginSpec, count_constant_margins

try:
    import fcntl
except ImportError:  # pragma: no cover - non-POSIX
    fcntl = None

__all__ = [
    "CacheError",
    "CacheCorruption",
    "CacheContradiction",
    "CacheLocked",
    "HEADER",
    "canonical_key",
    "CountCache",
    "CachedCounter",
]

log = logging.getLogger(__name__)

HEADER = "m,s,n,t,count"


class CacheError(RuntimeError):
    pass


class CacheCorruption(CacheError):
    def __init__(self, path, lineno: int, reason: str):
        super().__init__(f"{path}: line {lineno}: {reason}")
        self.lineno = lineno


class CacheContradiction(CacheError):
    pass


class CacheLocked(CacheError):
    pass


def canonical_key(m: int, s: int, n: int, t: int) -> tuple:
    if (m, s) <= (n, t):
        return (m, s, n, t)
    return (n, t, m, s)


def _parse_count(text: str) -> int:
    if not text.isdigit():
        raise ValueError(f"count {text!r} is not a non-negative decimal integer")
    return int(text)


class CountCache:
    """Count cache, in memory only when ``path`` is None.

    Opening a file takes an advisory exclusive lock for the lifetime of the
    object; a second process opening the same file gets :class:`CacheLocked`.
    """

    def __init__(self, path: Optional[os.PathLike] = None):
        self.path = path
        self._entries: dict = {}
        self._fh = None
        if path is not None:
            self._open(path)

    def _open(self, path):
        exists = os.path.exists(path) and os.path.getsize(path) > 0
        self._fh = open(path, "a+", encoding="ascii")
        if fcntl is not None:
            try:
                fcntl.flock(self._fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
            except OSError:
                self._fh.close()
                self._fh = None
                raise CacheLocked(f"{path} is in use by another process")
        if exists:
            self._fh.seek(0)
            self._load(self._fh.read().splitlines())
        else:
            self._fh.write(HEADER + "\n")
            self._fh.flush()

    def _load(self, lines):
        if not lines or lines[0].strip() != HEADER:
            raise CacheCorruption(self.path, 1, f"expected header {HEADER!r}")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            fields = line.strip().split(",")
            if len(fields) != 5:
                raise CacheCorruption(self.path, lineno, "expected 5 comma-separated fields")
            try:
                m, s, n, t = (int(f) for f in fields[:4])
                count = _parse_count(fields[4])
                MarginSpec(m, s, n, t)
            except (ValueError, MarginError) as exc:
                raise CacheCorruption(self.path, lineno, str(exc)) from None
            key = canonical_key(m, s, n, t)
            if self._entries.get(key, count) != count:
                raise CacheCorruption(self.path, lineno, f"conflicting count for {key}")
            self._entries[key] = count

    def __len__(self):
        return len(self._entries)

    def __contains__(self, spec: MarginSpec):
        return self.lookup(spec.m, spec.s, spec.n, spec.t) is not None

    def lookup(self, m: int, s: int, n: int, t: int) -> Optional[int]:
        MarginSpec(m, s, n, t)
        return self._entries.get(canonical_key(m, s, n, t))

    def store(self, m: int, s: int, n: int, t: int, count: int) -> None:
        MarginSpec(m, s, n, t)
        if count < 0:
            raise ValueError("counts are non-negative")
        key = canonical_key(m, s, n, t)
        old = self._entries.get(key)
        if old is not None:
            if old != count:
                raise CacheContradiction(
                    f"cache contradiction for {key}: stored {old}, new {count}"
                )
            return
        self._entries[key] = count
        if self._fh is not None:
            self._fh.write(",".join(map(str, key)) + f",{count}\n")
            self._fh.flush()

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _count_worker(args):
    spec, budget = args
    return count_constant_margins(spec, time_budget=budget)


class CachedCounter:
    """Callable ``MarginSpec -> int`` that consults a cache before counting."""

    def __init__(self, cache: Optional[CountCache] = None, time_budget: Optional[float] = None,
                 threads: int = 1):
        self.cache = cache if cache is not None else CountCache()
        self.time_budget = time_budget
        self.threads = max(1, threads)
        self.computed = 0

    def __call__(self, spec: MarginSpec) -> int:
        hit = self.cache.lookup(spec.m, spec.s, spec.n, spec.t)
        if hit is not None:
            return hit
        value = count_constant_margins(spec, time_budget=self.time_budget)
        self.computed += 1
        self.cache.store(spec.m, spec.s, spec.n, spec.t, value)
        return value

    def many(self, specs: Iterable[MarginSpec]) -> list:
        """Counts for several specs; misses go to a worker pool when ``threads > 1``.

        Cache writes happen here, in the calling process, one at a time.
        """
        specs = list(specs)
        missing = [sp for sp in dict.fromkeys(specs) if sp not in self.cache]
        if self.threads > 1 and len(missing) > 1:
            log.info("counting %d specs on %d workers", len(missing), self.threads)
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                jobs = [(sp, self.time_budget) for sp in missing]
                for sp, value in zip(missing, pool.map(_count_worker, jobs)):
                    self.computed += 1
                    self.cache.store(sp.m, sp.s, sp.n, sp.t, value)
        return [self(sp) for sp in specs]
