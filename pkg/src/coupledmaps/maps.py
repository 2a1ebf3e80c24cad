"""Map families, couplers, and one-step dynamics on the unit square.

The state space is the closed unit square: points (x, y) with both
coordinates in [0, 1].  A system couples two parametric families of
self-maps of [0, 1] (logistic or tent) through two linear couplers,
p = base + rate * v, and advances the state one step at a time:

    simultaneous:  x' = f(c(y), x)   y' = g(d(x), y)
    sequential:    x' = f(c(y), x)   y' = g(d(x'), y)

All arithmetic is 64-bit floating point with a fixed expression order,
so independent runs agree bitwise.  Family outputs are clamped into
[0, 1] to absorb rounding at the boundary (the computed value of
4*p*x*(1-x) can land one ulp above 1 at the parabola peak).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple


class Family(str, enum.Enum):
    """Closed enumeration of the supported map families."""

    LOGISTIC = "logistic"
    TENT = "tent"


class Scheme(str, enum.Enum):
    """How the second coordinate's coupler reads the first coordinate."""

    SIMULTANEOUS = "simultaneous"
    SEQUENTIAL = "sequential"


class Point(NamedTuple):
    """A state in the closed unit square."""

    x: float
    y: float


@dataclass(frozen=True)
class Coupler:
    """Linear coupler v -> base + rate * v.

    Valid couplers have base >= 0, rate >= 0 and base + rate <= 1, so the
    output is always a valid family parameter in [0, 1].
    """

    base: float
    rate: float


@dataclass(frozen=True)
class SystemConfig:
    """Full specification of one coupled system."""

    scheme: Scheme
    family_f: Family
    family_g: Family
    coupler_c: Coupler
    coupler_d: Coupler


def eval_family(family: Family, p: float, x: float) -> float:
    """Evaluate one family member at parameter p.

    logistic: 4*p*x*(1-x);  tent: p*(1-|2x-1|).  The result is clamped
    into [0, 1].
    """
    if family is Family.LOGISTIC:
        v = 4.0 * p * x * (1.0 - x)
    elif family is Family.TENT:
        v = p * (1.0 - abs(2.0 * x - 1.0))
    else:
        raise ValueError(f"unknown family {family!r}")
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def eval_coupler(coupler: Coupler, x: float) -> float:
    """base + rate * x; lies in [0, base + rate] for x in [0, 1]."""
    return coupler.base + coupler.rate * x


def step(config: SystemConfig, point: Point) -> Point:
    """Advance the coupled system one step."""
    x, y = point
    x2 = eval_family(config.family_f, eval_coupler(config.coupler_c, y), x)
    if config.scheme is Scheme.SEQUENTIAL:
        q = eval_coupler(config.coupler_d, x2)
    else:
        q = eval_coupler(config.coupler_d, x)
    y2 = eval_family(config.family_g, q, y)
    return Point(x2, y2)


def validate_config(config: SystemConfig) -> list[str]:
    """Return every violated constraint; an empty list means the config is valid."""
    problems: list[str] = []
    try:
        Scheme(config.scheme)
    except ValueError:
        problems.append(f"unknown scheme {config.scheme!r}")
    for label, fam in (("f", config.family_f), ("g", config.family_g)):
        try:
            Family(fam)
        except ValueError:
            problems.append(f"family {label}: unknown family {fam!r}")
    for label, c in (("c", config.coupler_c), ("d", config.coupler_d)):
        if not c.base >= 0.0:
            problems.append(f"coupler {label}: base >= 0 failed (base={c.base!r})")
        if not c.rate >= 0.0:
            problems.append(f"coupler {label}: rate >= 0 failed (rate={c.rate!r})")
        if not c.base + c.rate <= 1.0:
            problems.append(
                f"coupler {label}: base + rate <= 1 failed (base+rate={c.base + c.rate!r})"
            )
    return problems


class ConfigError(ValueError):
    """A system configuration violates its constraints."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def require_valid(config: SystemConfig) -> SystemConfig:
    """Raise ConfigError listing all violations, or return the config unchanged."""
    problems = validate_config(config)
    if problems:
        raise ConfigError(problems)
    return config
