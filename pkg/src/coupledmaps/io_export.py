"""Bit-exact serialization: PGM/PNG images, run configuration, sweep manifests.

PGM is the golden image format: the byte stream is a pure function of the
pixels, so identical runs produce identical files on every platform.  PNG
is a convenience export that must decode to the same pixels but whose
byte stream depends on the encoder.

Configuration and manifests are JSON with sorted keys and a fixed indent;
unknown keys are errors, not warnings, because a silently ignored typo in
a parameter name would corrupt an experiment.  Floats serialize at full
precision (shortest round-trip decimal).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Mapping

import numpy as np
from PIL import Image

from .maps import (
    ConfigError,
    Coupler,
    Family,
    Point,
    Scheme,
    SystemConfig,
    validate_config,
)
from .orbit import (
    DEFAULT_CONFIRMATIONS,
    DEFAULT_EPSILON,
    DEFAULT_M_COLLECT,
    DEFAULT_MAX_PERIOD,
    DEFAULT_N_BURN,
    CycleReport,
    random_initial,
)
from .raster import DEFAULT_STILL_SIZE

if TYPE_CHECKING:  # imported lazily at runtime to avoid a module cycle
    from .sweep import FrameManifest


# ---------------------------------------------------------------------------
# images


def write_pgm(image: np.ndarray, destination: str | Path) -> int:
    """Write an 8-bit grayscale image as binary PGM (P5); returns bytes written.

    Header is `P5\\n{width} {height}\\n255\\n`, followed by exactly
    width*height raw bytes in row-major order, row 0 first.
    """
    data = pgm_bytes(image)
    Path(destination).write_bytes(data)
    return len(data)


def pgm_bytes(image: np.ndarray) -> bytes:
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("image must be a 2-D uint8 array")
    h, w = image.shape
    if w < 1 or h < 1:
        raise ValueError("image dimensions must be >= 1")
    return b"P5\n%d %d\n255\n" % (w, h) + image.tobytes()


def read_pgm(source: str | Path) -> np.ndarray:
    """Parse a binary PGM file written by write_pgm."""
    raw = Path(source).read_bytes()
    parts = raw.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise ValueError(f"{source}: not a maxval-255 binary PGM file")
    try:
        w, h = (int(t) for t in parts[1].split())
    except ValueError as exc:
        raise ValueError(f"{source}: bad PGM dimension line {parts[1]!r}") from exc
    pixels = parts[3]
    if len(pixels) != w * h:
        raise ValueError(f"{source}: expected {w * h} pixel bytes, found {len(pixels)}")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w)


def write_png(image: np.ndarray, destination: str | Path) -> int:
    """Write an 8-bit grayscale PNG; decodes pixel-exact to the PGM content."""
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("image must be a 2-D uint8 array")
    Image.fromarray(image, mode="L").save(destination, format="PNG")
    return Path(destination).stat().st_size


def read_png(source: str | Path) -> np.ndarray:
    with Image.open(source) as img:
        return np.asarray(img.convert("L"), dtype=np.uint8)


# ---------------------------------------------------------------------------
# run configuration documents


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one render/cycle/stability run.

    Field names match the CLI flags one-to-one.  The initial point is
    either seeded (`seed`) or explicit (`x0`, `y0`) but never both.
    """

    scheme: str = "simultaneous"
    fx: str = "logistic"
    gy: str = "logistic"
    b: float = 0.4
    r: float = 0.6
    bp: float = 0.4
    rp: float = 0.6
    burn: int = DEFAULT_N_BURN
    plot: int = DEFAULT_M_COLLECT
    seed: int | None = 0
    x0: float | None = None
    y0: float | None = None
    width: int = DEFAULT_STILL_SIZE
    height: int = DEFAULT_STILL_SIZE
    eps: float = DEFAULT_EPSILON
    max_period: int = DEFAULT_MAX_PERIOD
    confirmations: int = DEFAULT_CONFIRMATIONS

    def to_system_config(self) -> SystemConfig:
        return SystemConfig(
            scheme=Scheme(self.scheme),
            family_f=Family(self.fx),
            family_g=Family(self.gy),
            coupler_c=Coupler(self.b, self.r),
            coupler_d=Coupler(self.bp, self.rp),
        )

    def initial_point(self) -> Point:
        if self.x0 is not None and self.y0 is not None:
            return Point(self.x0, self.y0)
        assert self.seed is not None
        return random_initial(self.seed)

    def to_mapping(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def violations(self) -> list[str]:
        problems: list[str] = []
        if self.scheme not in tuple(Scheme):
            problems.append(f"unknown scheme {self.scheme!r}")
        for key, fam in (("fx", self.fx), ("gy", self.gy)):
            if fam not in tuple(Family):
                problems.append(f"{key}: unknown family {fam!r}")
        if not problems:
            problems.extend(validate_config(self.to_system_config()))
        if self.burn < 0:
            problems.append(f"burn >= 0 failed ({self.burn})")
        if self.plot < 0:
            problems.append(f"plot >= 0 failed ({self.plot})")
        if self.width < 1 or self.height < 1:
            problems.append(f"width/height >= 1 failed ({self.width}x{self.height})")
        if not self.eps > 0.0:
            problems.append(f"eps > 0 failed ({self.eps!r})")
        if self.max_period < 1:
            problems.append(f"max_period >= 1 failed ({self.max_period})")
        if self.confirmations < 1:
            problems.append(f"confirmations >= 1 failed ({self.confirmations})")
        if (self.x0 is None) != (self.y0 is None):
            problems.append("x0 and y0 must be given together")
        if self.x0 is not None and self.seed is not None:
            problems.append("seed and explicit initial point are mutually exclusive")
        if self.x0 is None and self.seed is None:
            problems.append("one of seed or x0/y0 is required")
        if self.seed is not None and self.seed < 0:
            problems.append(f"seed >= 0 failed ({self.seed})")
        for key, v in (("x0", self.x0), ("y0", self.y0)):
            if v is not None and not 0.0 <= v <= 1.0:
                problems.append(f"{key} in [0,1] failed ({v!r})")
        return problems

    def validated(self) -> "RunConfig":
        problems = self.violations()
        if problems:
            raise ConfigError(problems)
        return self


_RUN_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_INT_FIELDS = {"burn", "plot", "seed", "width", "height", "max_period", "confirmations"}
_FLOAT_FIELDS = {"b", "r", "bp", "rp", "x0", "y0", "eps"}
_OPTIONAL_FIELDS = {"seed", "x0", "y0"}


def merge_run_config(base: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Overlay `overrides` (a partial mapping) onto `base`, strictly.

    Unknown keys and wrongly typed values raise ConfigError listing every
    problem.  Supplying an explicit initial point clears a seed inherited
    from `base` and vice versa, so override layers (config file, then
    flags) keep the two ways of choosing the initial point exclusive.
    """
    problems: list[str] = []
    unknown = sorted(set(overrides) - set(_RUN_FIELDS))
    if unknown:
        problems.append("unknown keys: " + ", ".join(repr(k) for k in unknown))
    values: dict[str, Any] = {}
    for key, value in overrides.items():
        if key not in _RUN_FIELDS:
            continue
        if value is None:
            if key in _OPTIONAL_FIELDS:
                values[key] = None
            else:
                problems.append(f"{key}: null is not allowed")
            continue
        if key in _INT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                problems.append(f"{key}: expected an integer, got {value!r}")
                continue
            values[key] = value
        elif key in _FLOAT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                problems.append(f"{key}: expected a number, got {value!r}")
                continue
            values[key] = float(value)
        else:  # string fields
            if not isinstance(value, str):
                problems.append(f"{key}: expected a string, got {value!r}")
                continue
            values[key] = value
    if problems:
        raise ConfigError(problems)
    if ("x0" in values or "y0" in values) and "seed" not in values:
        values.setdefault("seed", None)
    if "seed" in values and values["seed"] is not None and "x0" not in values:
        values.setdefault("x0", None)
        values.setdefault("y0", None)
    return dataclasses.replace(base, **values)


def canonical_json(payload: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_config(doc: RunConfig, destination: str | Path) -> int:
    data = canonical_json(doc.to_mapping()).encode()
    Path(destination).write_bytes(data)
    return len(data)


def read_config(source: str | Path) -> RunConfig:
    """Parse a (possibly partial) run configuration file into a full RunConfig.

    Missing keys take the documented defaults; unknown keys and constraint
    violations are all reported at once.
    """
    text = Path(source).read_text()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc
    if not isinstance(payload, dict):
        raise ConfigError([f"{source}: expected a JSON object at top level"])
    doc = merge_run_config(RunConfig(), payload)
    return doc.validated()


# ---------------------------------------------------------------------------
# sweep manifests


class ManifestError(ValueError):
    pass


def _cycle_to_jsonable(cycle: CycleReport | None) -> dict[str, Any] | None:
    if cycle is None:
        return None
    return {
        "period": cycle.period,
        "epsilon": cycle.epsilon,
        "confirmed_loops": cycle.confirmed_loops,
        "points": [[p.x, p.y] for p in cycle.points],
    }


def _cycle_from_jsonable(payload: Any, where: str) -> CycleReport | None:
    if payload is None:
        return None
    try:
        return CycleReport(
            period=int(payload["period"]),
            points=tuple(Point(float(x), float(y)) for x, y in payload["points"]),
            epsilon=float(payload["epsilon"]),
            confirmed_loops=int(payload["confirmed_loops"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"{where}: bad cycle record: {exc}") from exc


def manifest_to_jsonable(manifest: "FrameManifest") -> dict[str, Any]:
    return {
        "sweep": dict(manifest.sweep),
        "frames": [
            {
                "index": fr.index,
                "s": fr.s,
                "params": {
                    "b": fr.params.b,
                    "r": fr.params.r,
                    "b_prime": fr.params.b_prime,
                    "r_prime": fr.params.r_prime,
                },
                "image": fr.image,
                "density_image": fr.density_image,
                "cycle": _cycle_to_jsonable(fr.cycle),
                "stability": fr.stability,
                "error": fr.error,
            }
            for fr in manifest.frames
        ],
    }


def write_manifest(manifest: "FrameManifest", destination: str | Path) -> int:
    data = canonical_json(manifest_to_jsonable(manifest)).encode()
    Path(destination).write_bytes(data)
    return len(data)


def read_manifest(source: str | Path) -> "FrameManifest":
    from .sweep import FrameManifest, FrameRecord, ParamVector

    text = Path(source).read_text()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(payload, dict) or "frames" not in payload:
        raise ManifestError(f"{source}: expected an object with a 'frames' list")
    sweep_meta = payload.get("sweep", {})
    if not isinstance(sweep_meta, dict):
        raise ManifestError(f"{source}: 'sweep' must be an object")
    frames = []
    for n, rec in enumerate(payload["frames"]):
        where = f"{source}: frame record {n}"
        if not isinstance(rec, dict):
            raise ManifestError(f"{where}: expected an object")
        try:
            params = rec["params"]
            frame = FrameRecord(
                index=int(rec["index"]),
                s=float(rec["s"]),
                params=ParamVector(
                    b=float(params["b"]),
                    r=float(params["r"]),
                    b_prime=float(params["b_prime"]),
                    r_prime=float(params["r_prime"]),
                ),
                image=rec["image"],
                density_image=rec.get("density_image"),
                cycle=_cycle_from_jsonable(rec.get("cycle"), where),
                stability=rec.get("stability"),
                error=rec.get("error"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{where}: {exc!r}") from exc
        frames.append(frame)
    manifest = FrameManifest(sweep=sweep_meta, frames=frames)
    problems = manifest.violations()
    if problems:
        raise ManifestError(f"{source}: " + "; ".join(problems))
    return manifest
