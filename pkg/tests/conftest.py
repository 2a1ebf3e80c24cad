import numpy as np

from coupledmaps.maps import Coupler, Family, Point, Scheme, SystemConfig

FAMILIES = (Family.LOGISTIC, Family.TENT)
SCHEMES = (Scheme.SIMULTANEOUS, Scheme.SEQUENTIAL)


def random_coupler(rng: np.random.Generator) -> Coupler:
    # b = u*v, r = u*(1-v) keeps b, r >= 0 and b + r = u <= 1
    u = float(rng.random())
    v = float(rng.random())
    return Coupler(u * v, u * (1.0 - v))


def random_config(
    rng: np.random.Generator,
    scheme: Scheme | None = None,
    family_f: Family | None = None,
    family_g: Family | None = None,
    rate_c: float | None = None,
    rate_d: float | None = None,
) -> SystemConfig:
    c = random_coupler(rng)
    d = random_coupler(rng)
    if rate_c is not None:
        c = Coupler(float(rng.random()), rate_c)
    if rate_d is not None:
        d = Coupler(float(rng.random()), rate_d)
    return SystemConfig(
        scheme=scheme if scheme is not None else SCHEMES[int(rng.integers(2))],
        family_f=family_f if family_f is not None else FAMILIES[int(rng.integers(2))],
        family_g=family_g if family_g is not None else FAMILIES[int(rng.integers(2))],
        coupler_c=c,
        coupler_d=d,
    )


def random_point(rng: np.random.Generator) -> Point:
    return Point(float(rng.random()), float(rng.random()))
