"""Orbit iteration: burn-in, collection, cycle detection, seeded initial points.

The hot loops here replicate the exact expression order of maps.step so
that burning in with the specialized kernel is bitwise identical to
composing step() n times.  This is load-bearing: the engine's orbits are
compared bitwise against independent 1-D iterations in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .maps import Family, Point, Scheme, SystemConfig

DEFAULT_N_BURN = 1_000_000
DEFAULT_M_COLLECT = 100_000
DEFAULT_EPSILON = 1e-9
DEFAULT_MAX_PERIOD = 4096
DEFAULT_CONFIRMATIONS = 3


@dataclass(frozen=True)
class OrbitSpec:
    """Burn-in length, collection length, and the starting point."""

    initial: Point
    n_burn: int = DEFAULT_N_BURN
    m_collect: int = DEFAULT_M_COLLECT


@dataclass(frozen=True)
class CycleReport:
    """A detected finite periodic attractor.

    points holds one full loop starting at the post-burn-in reference
    point; period is minimal for the given tolerance because candidate
    periods are scanned in increasing order.
    """

    period: int
    points: tuple[Point, ...]
    epsilon: float
    confirmed_loops: int


def _advancer(config: SystemConfig) -> Callable[[float, float, int], tuple[float, float]]:
    """Build advance(x, y, n): n steps with the same arithmetic as maps.step."""
    f_logistic = config.family_f is Family.LOGISTIC
    g_logistic = config.family_g is Family.LOGISTIC
    sequential = config.scheme is Scheme.SEQUENTIAL
    b = config.coupler_c.base
    r = config.coupler_c.rate
    bp = config.coupler_d.base
    rp = config.coupler_d.rate

    def advance(x: float, y: float, n: int) -> tuple[float, float]:
        for _ in range(n):
            p = b + r * y
            if f_logistic:
                x2 = 4.0 * p * x * (1.0 - x)
            else:
                x2 = p * (1.0 - abs(2.0 * x - 1.0))
            if x2 < 0.0:
                x2 = 0.0
            elif x2 > 1.0:
                x2 = 1.0
            q = bp + rp * (x2 if sequential else x)
            if g_logistic:
                y2 = 4.0 * q * y * (1.0 - y)
            else:
                y2 = q * (1.0 - abs(2.0 * y - 1.0))
            if y2 < 0.0:
                y2 = 0.0
            elif y2 > 1.0:
                y2 = 1.0
            x = x2
            y = y2
        return x, y

    return advance


def iterate_burn(config: SystemConfig, initial: Point, n: int) -> Point:
    """Return the n-th orbit point of `initial` (exact n-fold composition of step)."""
    if n < 0:
        raise ValueError("burn-in length must be >= 0")
    x, y = _advancer(config)(initial[0], initial[1], n)
    return Point(x, y)


def iterate_burn_chunked(
    config: SystemConfig,
    initial: Point,
    n: int,
    progress: Callable[[int, int], None] | None = None,
    chunk: int | None = None,
) -> Point:
    """iterate_burn with a progress callback (done, total) every `chunk` steps.

    The default chunk is n // 10, giving one callback per 10% of the burn.
    Chunking changes no arithmetic: the result is bitwise identical to
    iterate_burn.
    """
    if n < 0:
        raise ValueError("burn-in length must be >= 0")
    if chunk is None:
        chunk = max(1, n // 10)
    advance = _advancer(config)
    x, y = initial[0], initial[1]
    done = 0
    while done < n:
        take = min(chunk, n - done)
        x, y = advance(x, y, take)
        done += take
        if progress is not None:
            progress(done, n)
    return Point(x, y)


def collect_orbit(config: SystemConfig, start: Point, m: int) -> Iterator[Point]:
    """Yield the next m orbit points after `start` (step^1 .. step^m), streaming."""
    if m < 0:
        raise ValueError("collection length must be >= 0")
    advance = _advancer(config)
    x, y = start[0], start[1]
    for _ in range(m):
        x, y = advance(x, y, 1)
        yield Point(x, y)


def detect_cycle(
    config: SystemConfig,
    initial: Point,
    n_burn: int,
    epsilon: float = DEFAULT_EPSILON,
    max_period: int = DEFAULT_MAX_PERIOD,
    confirmations: int = DEFAULT_CONFIRMATIONS,
) -> CycleReport | None:
    """Detect a finite periodic cycle after burn-in, or return None.

    Scans periods k = 1..max_period for the first one whose k-th iterate
    returns within epsilon (max-norm) of the post-burn-in reference point,
    then re-checks the recurrence over `confirmations` further loops.
    Scanning in increasing order makes the reported period minimal.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    if confirmations < 1:
        raise ValueError("confirmations must be >= 1")

    advance = _advancer(config)
    zx, zy = advance(initial[0], initial[1], n_burn)
    loop: list[Point] = [Point(zx, zy)]
    x, y = zx, zy
    period = 0
    for k in range(1, max_period + 1):
        x, y = advance(x, y, 1)
        if max(abs(x - zx), abs(y - zy)) < epsilon:
            period = k
            break
        loop.append(Point(x, y))
    if period == 0:
        return None

    for _ in range(confirmations):
        x, y = advance(x, y, period)
        if max(abs(x - zx), abs(y - zy)) >= epsilon:
            return None
    return CycleReport(
        period=period,
        points=tuple(loop[:period]),
        epsilon=epsilon,
        confirmed_loops=confirmations,
    )


def random_initial(seed: int) -> Point:
    """Deterministic 'typical' initial point, uniform on (0.01, 0.99)^2.

    Backed by numpy's Philox counter-based generator keyed by `seed`, so
    the same seed reproduces the same point bit-for-bit across runs and
    platforms.  The margin keeps the boundary (and the fixed point at the
    origin) out of the sample.
    """
    gen = np.random.Generator(np.random.Philox(seed))
    while True:
        u, v = gen.random(2)
        x = 0.01 + 0.98 * float(u)
        y = 0.01 + 0.98 * float(v)
        if 0.01 < x < 0.99 and 0.01 < y < 0.99:
            return Point(x, y)
