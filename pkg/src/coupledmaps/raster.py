"""Rasterization of orbits, occupancy comparison, and limit-set images.

Rasters count orbit visits per pixel on a width x height grid laid over
the unit square; row 0 is the top of the image, so the mathematical
y-axis points up.  Occupancy bitmaps reduce a raster to visited/not
visited, which is what all image comparisons operate on: the reference
figures are effectively binary scatter plots, while per-pixel counts
only drive the grayscale rendering.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from .maps import Point, SystemConfig
from .orbit import CycleReport, collect_orbit, iterate_burn, random_initial

DEFAULT_EXPLORER_SIZE = 400
DEFAULT_STILL_SIZE = 800
DEFAULT_ENLARGEMENT = 5
DEFAULT_DILATION = 1
DEFAULT_THRESHOLD = 0.95

_ACCUMULATE_CHUNK = 65536


@dataclass
class Raster:
    """Per-pixel visit counts; counts.shape == (height, width)."""

    width: int
    height: int
    counts: np.ndarray

    @classmethod
    def empty(cls, width: int, height: int) -> "Raster":
        if width < 1 or height < 1:
            raise ValueError("raster dimensions must be >= 1")
        return cls(width, height, np.zeros((height, width), dtype=np.uint64))

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class OccupancyBitmap:
    """Boolean grid marking pixels visited at least once."""

    width: int
    height: int
    bits: np.ndarray

    def population(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class ComparisonReport:
    """Overlap scores between two occupancy bitmaps.

    jaccard ignores sub-pixel jitter entirely; dilated_jaccard thickens
    each bitmap by a square structuring element first, tolerating
    boundary pixels that shift by up to `dilation`; pixel_hausdorff is
    the symmetrized worst-case Chebyshev distance between set bits.
    """

    jaccard: float
    dilated_jaccard: float
    pixel_hausdorff: int


def to_pixel(point: Point, width: int, height: int) -> tuple[int, int]:
    """Map a unit-square point to (column, row); x=1 and y=1 clamp to the last index."""
    col = min(int(point[0] * width), width - 1)
    row = (height - 1) - min(int(point[1] * height), height - 1)
    return col, row


def accumulate(raster: Raster, points: Iterable[Point]) -> Raster:
    """Increment the visit count of every point's pixel; returns the same raster."""
    w = raster.width
    h = raster.height
    xs: list[float] = []
    ys: list[float] = []

    def flush() -> None:
        if not xs:
            return
        cols = np.minimum((np.asarray(xs) * w).astype(np.int64), w - 1)
        rows = (h - 1) - np.minimum((np.asarray(ys) * h).astype(np.int64), h - 1)
        np.add.at(raster.counts, (rows, cols), 1)
        xs.clear()
        ys.clear()

    for p in points:
        xs.append(p[0])
        ys.append(p[1])
        if len(xs) >= _ACCUMULATE_CHUNK:
            flush()
    flush()
    return raster


def occupancy(raster: Raster) -> OccupancyBitmap:
    return OccupancyBitmap(raster.width, raster.height, raster.counts > 0)


def compare(a: OccupancyBitmap, b: OccupancyBitmap, dilation: int = DEFAULT_DILATION) -> ComparisonReport:
    """Score how alike two equally-sized occupancy bitmaps are.

    Empty-vs-empty compares as identical (jaccard 1.0, distance 0) by
    convention.  Exactly one empty bitmap yields the worst representable
    distance, max(width, height).
    """
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"bitmap dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    if dilation < 0:
        raise ValueError("dilation must be >= 0")
    bits_a = a.bits
    bits_b = b.bits
    n_a = int(bits_a.sum())
    n_b = int(bits_b.sum())
    union = int((bits_a | bits_b).sum())
    inter = int((bits_a & bits_b).sum())
    jaccard = 1.0 if union == 0 else inter / union

    if n_a == 0 and n_b == 0:
        return ComparisonReport(1.0, 1.0, 0)
    if n_a == 0 or n_b == 0:
        return ComparisonReport(jaccard, 0.0, max(a.width, a.height))

    side = 2 * dilation + 1
    structure = np.ones((side, side), dtype=bool)
    dil_a = ndimage.binary_dilation(bits_a, structure=structure)
    dil_b = ndimage.binary_dilation(bits_b, structure=structure)
    dilated = (int((bits_a & dil_b).sum()) + int((bits_b & dil_a).sum())) / (n_a + n_b)

    # distance_transform_cdt: distance of each foreground pixel to the
    # nearest background pixel, so invert to measure "to nearest set bit".
    dist_to_a = ndimage.distance_transform_cdt(~bits_a, metric="chessboard")
    dist_to_b = ndimage.distance_transform_cdt(~bits_b, metric="chessboard")
    hausdorff = int(max(dist_to_b[bits_a].max(), dist_to_a[bits_b].max()))
    return ComparisonReport(jaccard, dilated, hausdorff)


def render_image(
    raster: Raster,
    cycle: CycleReport | None = None,
    enlargement: int = DEFAULT_ENLARGEMENT,
    scale: str = "log",
) -> np.ndarray:
    """Render the raster as an 8-bit grayscale image (uint8, shape (height, width)).

    Background is white; occupied pixels darken with log-scaled density:
    gray = 255 - floor(255 * log(1+count) / log(1+max_count)).  scale="linear"
    substitutes count/max_count for the log ratio.  Cycle points, when given,
    are stamped as filled black squares of side `enlargement` (odd), clipped
    at the image borders.
    """
    if enlargement < 1 or enlargement % 2 == 0:
        raise ValueError("enlargement must be an odd integer >= 1")
    if scale not in ("log", "linear"):
        raise ValueError(f"unknown density scale {scale!r}")
    h, w = raster.height, raster.width
    image = np.full((h, w), 255, dtype=np.uint8)
    max_count = int(raster.counts.max())
    if max_count > 0:
        occ = raster.counts > 0
        vals = raster.counts[occ].astype(np.float64)
        if scale == "log":
            ratio = np.log1p(vals) / math.log1p(max_count)
        else:
            ratio = vals / max_count
        image[occ] = (255 - np.floor(255.0 * ratio)).astype(np.uint8)
    if cycle is not None:
        half = enlargement // 2
        for pt in cycle.points:
            col, row = to_pixel(pt, w, h)
            image[max(0, row - half) : row + half + 1, max(0, col - half) : col + half + 1] = 0
    return image


@dataclass(frozen=True)
class StabilityRun:
    """One rendered trial inside a stability check."""

    seed: int
    n_burn: int
    m_collect: int
    initial: Point
    population: int


@dataclass(frozen=True)
class StabilityPair:
    first: int
    second: int
    report: ComparisonReport


@dataclass(frozen=True)
class StabilityReport:
    verdict: str  # "stable" | "unstable"
    threshold: float
    dilation: int
    runs: tuple[StabilityRun, ...]
    pairs: tuple[StabilityPair, ...]

    def stable(self) -> bool:
        return self.verdict == "stable"


def _occupancy_for_run(args: tuple[SystemConfig, int, int, int, int, int]) -> tuple[StabilityRun, np.ndarray]:
    config, seed, n_burn, m_collect, width, height = args
    initial = random_initial(seed)
    settled = iterate_burn(config, initial, n_burn)
    raster = accumulate(Raster.empty(width, height), collect_orbit(config, settled, m_collect))
    bitmap = occupancy(raster)
    run = StabilityRun(seed, n_burn, m_collect, initial, bitmap.population())
    return run, bitmap.bits


def stability_check(
    config: SystemConfig,
    n_burn: int,
    m_collect: int,
    width: int,
    height: int,
    trials: int,
    seeds: Sequence[int],
    dilation: int = DEFAULT_DILATION,
    threshold: float = DEFAULT_THRESHOLD,
    jobs: int = 1,
) -> StabilityReport:
    """Evidence procedure for limit-set existence.

    Renders occupancy bitmaps from `trials` seeded initial points plus one
    extra run at doubled burn-in, then demands every pairwise
    dilated_jaccard >= threshold for a "stable" verdict.  All trial runs
    and pairwise reports are returned for inspection either way.
    """
    if trials < 2:
        raise ValueError("stability check needs at least 2 trials")
    if len(seeds) < trials:
        raise ValueError(f"need at least {trials} seeds, got {len(seeds)}")
    tasks = [(config, int(seeds[i]), n_burn, m_collect, width, height) for i in range(trials)]
    tasks.append((config, int(seeds[0]), 2 * n_burn, m_collect, width, height))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_occupancy_for_run, tasks))
    else:
        results = [_occupancy_for_run(t) for t in tasks]

    runs = tuple(run for run, _ in results)
    bitmaps = [OccupancyBitmap(width, height, bits) for _, bits in results]
    pairs = []
    stable = True
    for i in range(len(bitmaps)):
        for j in range(i + 1, len(bitmaps)):
            report = compare(bitmaps[i], bitmaps[j], dilation)
            pairs.append(StabilityPair(i, j, report))
            if report.dilated_jaccard < threshold:
                stable = False
    return StabilityReport(
        verdict="stable" if stable else "unstable",
        threshold=threshold,
        dilation=dilation,
        runs=runs,
        pairs=tuple(pairs),
    )
