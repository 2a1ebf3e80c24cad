"""Single-run pipeline shared by the CLI, the HTTP service, and tests.

One run = resolve the initial point, burn in N steps, detect a periodic
cycle if any, accumulate the next M orbit points into a raster, and
render the grayscale limit-set image.  Both entry points (CLI render and
the /render endpoint) call execute_run, which is what makes their pixel
output byte-identical for identical parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .io_export import RunConfig
from .maps import Point, SystemConfig
from .orbit import CycleReport, collect_orbit, detect_cycle, iterate_burn_chunked
from .raster import DEFAULT_ENLARGEMENT, Raster, accumulate, render_image


@dataclass
class RunResult:
    resolved: RunConfig
    config: SystemConfig
    initial: Point
    settled: Point
    cycle: CycleReport | None
    raster: Raster
    image: np.ndarray


def execute_run(
    doc: RunConfig,
    progress: Callable[[int, int], None] | None = None,
    enlargement: int = DEFAULT_ENLARGEMENT,
    scale: str = "log",
) -> RunResult:
    """Run one fully resolved configuration end to end."""
    doc = doc.validated()
    config = doc.to_system_config()
    initial = doc.initial_point()
    settled = iterate_burn_chunked(config, initial, doc.burn, progress)
    cycle = detect_cycle(config, settled, 0, doc.eps, doc.max_period, doc.confirmations)
    raster = accumulate(
        Raster.empty(doc.width, doc.height), collect_orbit(config, settled, doc.plot)
    )
    image = render_image(raster, cycle, enlargement, scale)
    return RunResult(
        resolved=doc,
        config=config,
        initial=initial,
        settled=settled,
        cycle=cycle,
        raster=raster,
        image=image,
    )
