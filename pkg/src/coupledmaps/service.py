"""HTTP boundary for the engine: render, cycle, stability, and frame files.

The service is stateless between requests except for a small cache of
render responses keyed by the full request body, so identical requests
return identical bytes without recomputing.  Pixel payloads travel as
base64-encoded raw row-major bytes with width/height in the envelope.
"""

from __future__ import annotations

import base64
from collections import OrderedDict
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from pydantic import BaseModel, ConfigDict

from .io_export import RunConfig, merge_run_config
from .maps import ConfigError
from .orbit import (
    DEFAULT_CONFIRMATIONS,
    DEFAULT_EPSILON,
    DEFAULT_MAX_PERIOD,
    DEFAULT_M_COLLECT,
    DEFAULT_N_BURN,
)
from .raster import (
    DEFAULT_DILATION,
    DEFAULT_EXPLORER_SIZE,
    DEFAULT_THRESHOLD,
    stability_check,
)
from .runs import execute_run

_RENDER_CACHE_SIZE = 32


class StrictModel(BaseModel):
    """Request models reject unknown fields: a typo must not silently
    fall back to a default and corrupt an experiment."""

    model_config = ConfigDict(extra="forbid")


class RunParams(StrictModel):
    scheme: str = "simultaneous"
    fx: str = "logistic"
    gy: str = "logistic"
    b: float = 0.4
    r: float = 0.6
    bp: float = 0.4
    rp: float = 0.6
    burn: int = DEFAULT_N_BURN
    plot: int = DEFAULT_M_COLLECT
    seed: int | None = None
    x0: float | None = None
    y0: float | None = None
    width: int = DEFAULT_EXPLORER_SIZE
    height: int = DEFAULT_EXPLORER_SIZE
    eps: float = DEFAULT_EPSILON
    max_period: int = DEFAULT_MAX_PERIOD
    confirmations: int = DEFAULT_CONFIRMATIONS

    def to_run_config(self) -> RunConfig:
        # dump only the shared run fields; subclasses add endpoint-specific ones
        overrides = self.model_dump(exclude_none=True, include=set(RunParams.model_fields))
        if "seed" not in overrides and "x0" not in overrides:
            overrides["seed"] = 0
        try:
            return merge_run_config(RunConfig(), overrides).validated()
        except ConfigError as exc:
            raise HTTPException(
                status_code=400,
                detail={"message": "invalid configuration", "violations": exc.violations},
            ) from exc


class RenderRequest(RunParams):
    scale: str = "log"


class CycleModel(BaseModel):
    period: int
    points: list[tuple[float, float]]
    epsilon: float
    confirmed_loops: int


class RenderResponse(BaseModel):
    width: int
    height: int
    pixels: str  # base64 of width*height raw grayscale bytes, row-major, row 0 top
    params: dict[str, Any]
    cycle: CycleModel | None


class CycleResponse(BaseModel):
    found: bool
    cycle: CycleModel | None
    params: dict[str, Any]


class StabilityRequest(RunParams):
    trials: int = 5
    seeds: list[int] | None = None
    dilation: int = DEFAULT_DILATION
    threshold: float = DEFAULT_THRESHOLD


class StabilityPairModel(BaseModel):
    first: int
    second: int
    jaccard: float
    dilated_jaccard: float
    pixel_hausdorff: int


class StabilityRunModel(BaseModel):
    seed: int
    n_burn: int
    m_collect: int
    initial: tuple[float, float]
    population: int


class StabilityResponse(BaseModel):
    verdict: str
    threshold: float
    dilation: int
    runs: list[StabilityRunModel]
    pairs: list[StabilityPairModel]
    params: dict[str, Any]


def _cycle_model(cycle) -> CycleModel | None:
    if cycle is None:
        return None
    return CycleModel(
        period=cycle.period,
        points=[(p.x, p.y) for p in cycle.points],
        epsilon=cycle.epsilon,
        confirmed_loops=cycle.confirmed_loops,
    )


def create_app(frames_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="coupledmaps", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    frames_root = Path(frames_dir).resolve() if frames_dir is not None else None
    render_cache: OrderedDict[str, RenderResponse] = OrderedDict()

    @app.get("/")
    def root() -> dict[str, Any]:
        return {
            "name": "coupledmaps",
            "endpoints": ["/render", "/cycle", "/stability", "/frames/{path}"],
            "frames_dir": str(frames_root) if frames_root else None,
        }

    @app.post("/render")
    def render(request: RenderRequest) -> RenderResponse:
        key = request.model_dump_json()
        hit = render_cache.get(key)
        if hit is not None:
            render_cache.move_to_end(key)
            return hit
        doc = request.to_run_config()
        result = execute_run(doc, scale=request.scale)
        response = RenderResponse(
            width=doc.width,
            height=doc.height,
            pixels=base64.b64encode(result.image.tobytes()).decode("ascii"),
            params=doc.to_mapping(),
            cycle=_cycle_model(result.cycle),
        )
        render_cache[key] = response
        if len(render_cache) > _RENDER_CACHE_SIZE:
            render_cache.popitem(last=False)
        return response

    @app.post("/cycle")
    def cycle(request: RunParams) -> CycleResponse:
        doc = request.to_run_config()
        result = execute_run(doc)
        model = _cycle_model(result.cycle)
        return CycleResponse(found=model is not None, cycle=model, params=doc.to_mapping())

    @app.post("/stability")
    def stability(request: StabilityRequest) -> StabilityResponse:
        doc = request.to_run_config()
        if request.trials < 2:
            raise HTTPException(
                status_code=400,
                detail={"message": "invalid configuration", "violations": ["trials >= 2 failed"]},
            )
        base_seed = doc.seed if doc.seed is not None else 0
        seeds = request.seeds or [base_seed + t for t in range(request.trials)]
        report = stability_check(
            doc.to_system_config(),
            doc.burn,
            doc.plot,
            doc.width,
            doc.height,
            request.trials,
            seeds,
            request.dilation,
            request.threshold,
        )
        return StabilityResponse(
            verdict=report.verdict,
            threshold=report.threshold,
            dilation=report.dilation,
            runs=[
                StabilityRunModel(
                    seed=run.seed,
                    n_burn=run.n_burn,
                    m_collect=run.m_collect,
                    initial=(run.initial.x, run.initial.y),
                    population=run.population,
                )
                for run in report.runs
            ],
            pairs=[
                StabilityPairModel(
                    first=pair.first,
                    second=pair.second,
                    jaccard=pair.report.jaccard,
                    dilated_jaccard=pair.report.dilated_jaccard,
                    pixel_hausdorff=pair.report.pixel_hausdorff,
                )
                for pair in report.pairs
            ],
            params=doc.to_mapping(),
        )

    @app.get("/frames/{path:path}")
    def frames(path: str) -> FileResponse:
        if frames_root is None:
            raise HTTPException(status_code=404, detail="no frames directory configured")
        target = (frames_root / path).resolve()
        if frames_root not in target.parents and target != frames_root:
            raise HTTPException(status_code=403, detail="path escapes the frames directory")
        if not target.is_file():
            raise HTTPException(status_code=404, detail=f"no such file: {path}")
        return FileResponse(target)

    return app


app = create_app()
