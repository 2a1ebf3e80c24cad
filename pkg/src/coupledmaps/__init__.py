"""Coupled one-dimensional maps on the unit square: engine, service, CLI."""

from .maps import (
    ConfigError,
    Coupler,
    Family,
    Point,
    Scheme,
    SystemConfig,
    eval_coupler,
    eval_family,
    step,
    validate_config,
)
from .orbit import (
    CycleReport,
    OrbitSpec,
    collect_orbit,
    detect_cycle,
    iterate_burn,
    random_initial,
)
from .raster import (
    ComparisonReport,
    OccupancyBitmap,
    Raster,
    StabilityReport,
    accumulate,
    compare,
    occupancy,
    render_image,
    stability_check,
    to_pixel,
)
from .sweep import (
    FrameManifest,
    FrameRecord,
    ParameterCurve,
    ParamVector,
    SweepSpec,
    run_sweep,
    sample_curve,
)
from .io_export import (
    RunConfig,
    read_config,
    read_manifest,
    read_pgm,
    read_png,
    write_config,
    write_manifest,
    write_pgm,
    write_png,
)
from .runs import RunResult, execute_run

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Coupler",
    "Family",
    "Point",
    "Scheme",
    "SystemConfig",
    "eval_coupler",
    "eval_family",
    "step",
    "validate_config",
    "CycleReport",
    "OrbitSpec",
    "collect_orbit",
    "detect_cycle",
    "iterate_burn",
    "random_initial",
    "ComparisonReport",
    "OccupancyBitmap",
    "Raster",
    "StabilityReport",
    "accumulate",
    "compare",
    "occupancy",
    "render_image",
    "stability_check",
    "to_pixel",
    "FrameManifest",
    "FrameRecord",
    "ParameterCurve",
    "ParamVector",
    "SweepSpec",
    "run_sweep",
    "sample_curve",
    "RunConfig",
    "read_config",
    "read_manifest",
    "read_pgm",
    "read_png",
    "write_config",
    "write_manifest",
    "write_pgm",
    "write_png",
    "RunResult",
    "execute_run",
]
