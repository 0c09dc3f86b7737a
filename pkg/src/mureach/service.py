"""HTTP service exposing the library's computations.

The CLI talks to this app in process by default; `mureach serve` runs it
under uvicorn for remote use.  All endpoints are stateless and pure, so the
app is safe to serve with multiple workers.
"""
from __future__ import annotations

import io
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .calpha import CAlphaParams, sweep_csv
from .critical import (CriticalBin, CriticalCurve, EstimatorConfig,
                       critical_csv, critical_function, fit_power_law,
                       mu_reach)
from .geometry import GeometryError, OnShapePoint
from .gradient import generalized_gradient
from .shapes import default_symmetry_axis, shape_from_spec


class ShapeSpec(BaseModel):
    spec: str
    cloud_points: Optional[list[list[float]]] = None

    def build(self):
        return shape_from_spec(self.spec, cloud_points=self.cloud_points)


class GradientRequest(BaseModel):
    shape: ShapeSpec
    point: list[float]


class GradientResponse(BaseModel):
    distance: float
    grad: list[float]
    grad_norm: float
    omega: list[float]
    radius: float
    projections: list[list[float]]


class CriticalRequest(BaseModel):
    shape: ShapeSpec
    d_min: float
    d_max: float
    n_bins: int = Field(ge=2)
    strategy: str = "grid"
    resolution: Optional[float] = None
    window: Optional[list[list[float]]] = None
    symmetry_axis: Optional[list[list[float]]] = None


class CsvResponse(BaseModel):
    csv: str


class MuReachRequest(CriticalRequest):
    mu: float = Field(ge=0.0, le=1.0)


class MuReachResponse(BaseModel):
    mu_reach: float
    censored: bool


class FitRequest(BaseModel):
    csv: str
    d_lo: float
    d_hi: float


class FitResponse(BaseModel):
    exponent: float
    log_constant: float
    constant: float
    r2: float
    d_lo: float
    d_hi: float


class OracleRequest(BaseModel):
    alpha: float
    t_min: float
    t_max: float
    n: int = Field(ge=2)


def _estimator_config(req: CriticalRequest) -> EstimatorConfig:
    axis = None
    if req.symmetry_axis is not None:
        axis = (tuple(req.symmetry_axis[0]), tuple(req.symmetry_axis[1]))
    elif req.strategy == "axis":
        axis = default_symmetry_axis(req.shape.spec)
    window = None
    if req.window is not None:
        window = (tuple(req.window[0]), tuple(req.window[1]))
    return EstimatorConfig(d_min=req.d_min, d_max=req.d_max,
                           n_bins=req.n_bins, strategy=req.strategy,
                           grid_resolution=req.resolution,
                           symmetry_axis=axis, window=window)


def _curve_from_csv(text: str) -> CriticalCurve:
    rows = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    if rows.shape[1] < 3:
        raise GeometryError("critical CSV needs d,chi,one_minus_chi_sq")
    bins = tuple(
        CriticalBin(d=float(r[0]), chi=float(r[1]),
                    one_minus_chi_sq=float(r[2]),
                    n_samples=int(r[3]) if rows.shape[1] > 3 else 1,
                    min_point=np.zeros(2))
        for r in rows)
    ds = np.array([b.d for b in bins])
    return CriticalCurve(bins=bins, edges=ds, estimator=None)


def create_app() -> FastAPI:
    app = FastAPI(title="mureach", version="0.1.0")

    @app.exception_handler(OnShapePoint)
    async def _on_shape(request, exc):
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(GeometryError)
    async def _geom(request, exc):
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/gradient", response_model=GradientResponse)
    def gradient(req: GradientRequest):
        info = generalized_gradient(req.shape.build(), req.point)
        return GradientResponse(
            distance=info.distance, grad=list(info.grad),
            grad_norm=info.grad_norm, omega=list(info.omega),
            radius=info.small_ball_radius,
            projections=[list(q) for q in info.projections.points])

    @app.post("/critical", response_model=CsvResponse)
    def critical(req: CriticalRequest):
        curve = critical_function(req.shape.build(), _estimator_config(req))
        return CsvResponse(csv=critical_csv(curve))

    @app.post("/mu-reach", response_model=MuReachResponse)
    def mu_reach_ep(req: MuReachRequest):
        curve = critical_function(req.shape.build(), _estimator_config(req))
        res = mu_reach(curve, req.mu)
        return MuReachResponse(mu_reach=res.value, censored=res.censored)

    @app.post("/fit", response_model=FitResponse)
    def fit(req: FitRequest):
        try:
            curve = _curve_from_csv(req.csv)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return FitResponse(**fit_power_law(curve, req.d_lo, req.d_hi))

    @app.post("/oracle", response_model=CsvResponse)
    def oracle(req: OracleRequest):
        params = CAlphaParams(alpha=req.alpha)
        return CsvResponse(csv=sweep_csv(params, req.t_min, req.t_max, req.n))

    return app


app = create_app()
