"""Parameter-curve sweeps: sample a curve in (b, r, b', r') space and render frames.

A sweep samples grid_count points s_i = i/(grid_count-1) along a curve,
renders the limit set at each sample into frame_{index:05}.pgm, and
writes a manifest describing every frame.  Frames are independent of one
another, so they can run in any order or in parallel and still produce
byte-identical artifacts; each frame derives its initial point from
seed XOR index.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from . import io_export
from .maps import Coupler, Family, Scheme, SystemConfig
from .orbit import (
    DEFAULT_CONFIRMATIONS,
    DEFAULT_EPSILON,
    DEFAULT_MAX_PERIOD,
    CycleReport,
    collect_orbit,
    detect_cycle,
    iterate_burn,
    random_initial,
)
from .raster import (
    DEFAULT_DILATION,
    DEFAULT_ENLARGEMENT,
    DEFAULT_EXPLORER_SIZE,
    DEFAULT_THRESHOLD,
    Raster,
    accumulate,
    render_image,
    stability_check,
)

DEFAULT_GALLERY_GRID = 21
DEFAULT_FINE_GRID = 1000


@dataclass(frozen=True)
class ParamVector:
    """One point in the four-dimensional coupler parameter space."""

    b: float
    r: float
    b_prime: float
    r_prime: float

    def violations(self) -> list[str]:
        problems = []
        for name, base, rate in (("", self.b, self.r), ("'", self.b_prime, self.r_prime)):
            if not base >= 0.0:
                problems.append(f"b{name} >= 0 failed ({base!r})")
            if not rate >= 0.0:
                problems.append(f"r{name} >= 0 failed ({rate!r})")
            if not base + rate <= 1.0:
                problems.append(f"b{name} + r{name} <= 1 failed ({base + rate!r})")
        return problems


@dataclass(frozen=True)
class ParameterCurve:
    """A curve in parameter space: a line segment, or the canonical family
    s -> (s, 1-s, b', r') with the primed pair held fixed."""

    kind: str  # "segment" | "canonical"
    p0: ParamVector | None = None
    p1: ParamVector | None = None
    b_prime: float = 0.4
    r_prime: float = 0.6

    @classmethod
    def segment(cls, p0: ParamVector, p1: ParamVector) -> "ParameterCurve":
        for which, p in (("p0", p0), ("p1", p1)):
            problems = p.violations()
            if problems:
                raise ValueError(f"segment endpoint {which}: " + "; ".join(problems))
        return cls(kind="segment", p0=p0, p1=p1)

    @classmethod
    def canonical(cls, b_prime: float, r_prime: float) -> "ParameterCurve":
        problems = ParamVector(0.0, 1.0, b_prime, r_prime).violations()
        if problems:
            raise ValueError("; ".join(problems))
        return cls(kind="canonical", b_prime=b_prime, r_prime=r_prime)

    def at(self, s: float) -> ParamVector:
        if self.kind == "canonical":
            return ParamVector(s, 1.0 - s, self.b_prime, self.r_prime)
        if self.kind == "segment":
            assert self.p0 is not None and self.p1 is not None
            return ParamVector(
                self.p0.b + s * (self.p1.b - self.p0.b),
                self.p0.r + s * (self.p1.r - self.p0.r),
                self.p0.b_prime + s * (self.p1.b_prime - self.p0.b_prime),
                self.p0.r_prime + s * (self.p1.r_prime - self.p0.r_prime),
            )
        raise ValueError(f"unknown curve kind {self.kind!r}")


def sample_curve(curve: ParameterCurve, grid_count: int) -> list[tuple[float, ParamVector]]:
    """Uniform samples s_i = i/(grid_count-1) along the curve."""
    if grid_count < 2:
        raise ValueError("grid_count must be >= 2")
    samples = []
    for i in range(grid_count):
        s = i / (grid_count - 1)
        pv = curve.at(s)
        problems = pv.violations()
        if problems:
            raise ValueError(f"sample s={s!r}: " + "; ".join(problems))
        samples.append((s, pv))
    return samples


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to reproduce a sweep bit-for-bit."""

    curve: ParameterCurve
    grid_count: int = DEFAULT_GALLERY_GRID
    scheme: str = "simultaneous"
    fx: str = "logistic"
    gy: str = "logistic"
    n_burn: int = 100_000
    m_collect: int = 100_000
    seed: int = 0
    width: int = DEFAULT_EXPLORER_SIZE
    height: int = DEFAULT_EXPLORER_SIZE
    eps: float = DEFAULT_EPSILON
    max_period: int = DEFAULT_MAX_PERIOD
    confirmations: int = DEFAULT_CONFIRMATIONS
    enlargement: int = DEFAULT_ENLARGEMENT
    png: bool = False
    stability_trials: int = 0  # 0 disables the per-frame stability check
    stability_threshold: float = DEFAULT_THRESHOLD
    stability_dilation: int = DEFAULT_DILATION

    def to_jsonable(self) -> dict[str, Any]:
        meta: dict[str, Any] = {
            "grid_count": self.grid_count,
            "scheme": self.scheme,
            "fx": self.fx,
            "gy": self.gy,
            "n_burn": self.n_burn,
            "m_collect": self.m_collect,
            "seed": self.seed,
            "width": self.width,
            "height": self.height,
            "eps": self.eps,
            "max_period": self.max_period,
            "confirmations": self.confirmations,
            "enlargement": self.enlargement,
            "png": self.png,
            "stability_trials": self.stability_trials,
            "stability_threshold": self.stability_threshold,
            "stability_dilation": self.stability_dilation,
        }
        if self.curve.kind == "canonical":
            meta["curve"] = {
                "kind": "canonical",
                "b_prime": self.curve.b_prime,
                "r_prime": self.curve.r_prime,
            }
        else:
            assert self.curve.p0 is not None and self.curve.p1 is not None
            meta["curve"] = {
                "kind": "segment",
                "p0": [self.curve.p0.b, self.curve.p0.r, self.curve.p0.b_prime, self.curve.p0.r_prime],
                "p1": [self.curve.p1.b, self.curve.p1.r, self.curve.p1.b_prime, self.curve.p1.r_prime],
            }
        return meta


@dataclass(frozen=True)
class FrameRecord:
    """Manifest entry for one rendered frame."""

    index: int
    s: float
    params: ParamVector
    image: str | None
    density_image: str | None = None
    cycle: CycleReport | None = None
    stability: str | None = None
    error: str | None = None


@dataclass
class FrameManifest:
    """Ordered record of a sweep's frames plus the sweep settings."""

    sweep: dict[str, Any] = field(default_factory=dict)
    frames: list[FrameRecord] = field(default_factory=list)

    def violations(self) -> list[str]:
        problems = []
        for n, fr in enumerate(self.frames):
            if fr.index != n:
                problems.append(f"frame record {n}: index {fr.index} breaks contiguity")
        ss = [fr.s for fr in self.frames]
        if any(b <= a for a, b in zip(ss, ss[1:])):
            problems.append("s values are not strictly increasing")
        return problems


def frame_filename(index: int) -> str:
    return f"frame_{index:05}.pgm"


def _render_frame(args: tuple[SweepSpec, str, int, float, ParamVector]) -> FrameRecord:
    spec, out_dir, index, s, pv = args
    record = FrameRecord(index=index, s=s, params=pv, image=None)
    try:
        config = SystemConfig(
            scheme=Scheme(spec.scheme),
            family_f=Family(spec.fx),
            family_g=Family(spec.gy),
            coupler_c=Coupler(pv.b, pv.r),
            coupler_d=Coupler(pv.b_prime, pv.r_prime),
        )
        settled = iterate_burn(config, random_initial(spec.seed ^ index), spec.n_burn)
        cycle = detect_cycle(
            config, settled, 0, spec.eps, spec.max_period, spec.confirmations
        )
        raster = accumulate(
            Raster.empty(spec.width, spec.height),
            collect_orbit(config, settled, spec.m_collect),
        )
        name = frame_filename(index)
        image = render_image(raster, cycle, spec.enlargement)
        io_export.write_pgm(image, Path(out_dir) / name)
        density_name = None
        if cycle is not None:
            # keep the plain density variant alongside the enlarged-cycle frame
            density_name = f"frame_{index:05}_density.pgm"
            io_export.write_pgm(render_image(raster, None), Path(out_dir) / density_name)
        if spec.png:
            io_export.write_png(image, (Path(out_dir) / name).with_suffix(".png"))
        verdict = None
        if spec.stability_trials >= 2:
            seeds = [spec.seed ^ index ^ (1000 + t) for t in range(spec.stability_trials)]
            verdict = stability_check(
                config,
                spec.n_burn,
                spec.m_collect,
                spec.width,
                spec.height,
                spec.stability_trials,
                seeds,
                spec.stability_dilation,
                spec.stability_threshold,
            ).verdict
        record = replace(
            record, image=name, density_image=density_name, cycle=cycle, stability=verdict
        )
    except Exception as exc:  # per-frame failure: record, keep sweeping
        record = replace(record, error=f"{type(exc).__name__}: {exc}")
    return record


def run_sweep(spec: SweepSpec, out_dir: str | Path, jobs: int = 1) -> FrameManifest:
    """Render every frame of the sweep into out_dir and write manifest.json.

    Per-frame failures are recorded in the manifest and do not abort the
    remaining frames.  The manifest is assembled and written once, after
    all frames finish, ordered by index.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    samples = sample_curve(spec.curve, spec.grid_count)
    tasks = [(spec, str(out), i, s, pv) for i, (s, pv) in enumerate(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            frames = list(pool.map(_render_frame, tasks))
    else:
        frames = [_render_frame(t) for t in tasks]
    frames.sort(key=lambda fr: fr.index)
    manifest = FrameManifest(sweep=spec.to_jsonable(), frames=frames)
    io_export.write_manifest(manifest, out / "manifest.json")
    return manifest
