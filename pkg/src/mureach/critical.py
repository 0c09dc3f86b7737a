"""Critical-function estimation, mu-reach, power-law fits, Hölder checks.

Two estimators for chi(d) = inf of the gradient norm over the level set
{distance = d}:

* grid: rasterize the shape, take a Euclidean distance transform of the
  window, and evaluate the exact gradient only at "suspect" nodes where the
  nearest-feature map jumps (the signature of the medial axis).  Everywhere
  else the projection is unique and the norm is exactly 1.
* axis: for shapes whose medial axis is a declared symmetry axis, reduce to
  a 1-d solve.  On a symmetric graph y = f(x) the axis point with symmetric
  projections at +-t sits at height v = f(t) + t/f'(t), with distance
  d = hypot(t, t/f'(t)) and squared-norm gap (t/d)^2; d is increasing in t,
  so bin targets are reached by scalar root-finding.

The gap 1 - chi^2 is always carried as (radius/distance)^2; forming
1 - chi^2 by subtraction would lose it to rounding near chi = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.ndimage import distance_transform_edt
from scipy.optimize import brentq

from .geometry import GeometryError, GraphCurve, OnShapePoint, Shape, densify
from .gradient import generalized_gradient

_BAND_MARGIN = 0.02
_T_FLOOR = 1e-280


@dataclass(frozen=True)
class EstimatorConfig:
    d_min: float
    d_max: float
    n_bins: int
    strategy: str = "grid"
    grid_resolution: Optional[float] = None
    band_margin: float = _BAND_MARGIN
    symmetry_axis: Optional[tuple] = None     # ((x, y), (dx, dy))
    window: Optional[tuple] = None            # ((xlo, xhi), (ylo, yhi))

    def __post_init__(self):
        if not (0 < self.d_min < self.d_max):
            raise GeometryError("need 0 < d_min < d_max")
        if self.n_bins < 2:
            raise GeometryError("need at least 2 bins")
        if self.strategy not in ("grid", "axis"):
            raise GeometryError("strategy must be 'grid' or 'axis'")

    @property
    def h(self) -> float:
        if self.grid_resolution is not None:
            return self.grid_resolution
        return (self.d_max - self.d_min) / 400.0

    @property
    def log_bins(self) -> bool:
        return self.d_max / self.d_min >= 10.0

    def edges(self) -> np.ndarray:
        if self.log_bins:
            return np.geomspace(self.d_min, self.d_max, self.n_bins + 1)
        return np.linspace(self.d_min, self.d_max, self.n_bins + 1)

    def centers(self) -> np.ndarray:
        e = self.edges()
        if self.log_bins:
            return np.sqrt(e[:-1] * e[1:])
        return 0.5 * (e[:-1] + e[1:])


@dataclass(frozen=True)
class CriticalBin:
    d: float
    chi: float
    one_minus_chi_sq: float
    n_samples: int
    min_point: np.ndarray


@dataclass(frozen=True)
class CriticalCurve:
    bins: tuple
    edges: np.ndarray
    estimator: EstimatorConfig


@dataclass(frozen=True)
class MuReachResult:
    value: float
    censored: bool


# ---------------------------------------------------------------------------
# axis strategy
# ---------------------------------------------------------------------------

def _axis_vertical(cfg: EstimatorConfig):
    if cfg.symmetry_axis is None:
        raise GeometryError("axis strategy requires symmetry_axis")
    (x0, y0), (dx, dy) = cfg.symmetry_axis
    direction = np.asarray([dx, dy], float)
    direction = direction / np.linalg.norm(direction)
    return float(x0), float(y0), direction


def _axis_d_of_t(shape: GraphCurve, x0: float, t: float) -> float:
    fp = float(shape.fprime(np.asarray(x0 + t)))
    return math.hypot(t, t / fp)


def _axis_sample_graph(shape: GraphCurve, x0: float, d_target: float,
                       t_hi: float):
    """Level-set minimum on the axis of a symmetric graph: (chi, gap, point).

    Returns gap = 0 when the target distance lies below the medial-axis
    onset (unique projection, chi = 1).
    """
    lo = t_hi
    if _axis_d_of_t(shape, x0, lo) < d_target:
        raise GeometryError("scan range exceeds the truncated domain")
    while _axis_d_of_t(shape, x0, lo) > d_target:
        lo *= 0.5
        if lo < _T_FLOOR:
            # distance floor not reached: the level set misses the axis'
            # medial part, so the infimum there is the off-axis value 1
            v = y0_of(shape, x0) + d_target
            return 1.0, 0.0, np.array([x0, v]), None
    t = brentq(lambda u: _axis_d_of_t(shape, x0, u) - d_target,
               lo, 2.0 * lo, rtol=4 * np.finfo(float).eps, xtol=1e-300)
    fp = float(shape.fprime(np.asarray(x0 + t)))
    d = math.hypot(t, t / fp)
    v = float(shape.f(np.asarray(x0 + t))) + t / fp
    gap = (t / d) ** 2
    chi = math.sqrt(max(0.0, 1.0 - gap))
    return chi, gap, np.array([x0, v]), t


def y0_of(shape: GraphCurve, x0: float) -> float:
    return float(shape.f(np.asarray(x0)))


def _axis_guard(shape: GraphCurve, point: np.ndarray, d: float) -> bool:
    """Cheap check that no far-away part of the graph comes closer than d."""
    t0, t1 = shape.domain
    ts = np.linspace(t0, t1, 257)
    pts = shape.point(ts)
    g = np.min(np.sum((pts - point) ** 2, axis=1))
    return g >= d * d * (1.0 - 1e-6)


def _axis_sample_generic(shape: Shape, x0: float, y0: float,
                         direction: np.ndarray, d_target: float):
    """Axis sample through the first-principles gradient (non-graph shapes)."""
    base = np.array([x0, y0])

    def dist_of(v):
        from .geometry import eval_distance
        return eval_distance(shape, base + v * direction) - d_target

    v_lo = v_hi = d_target
    while dist_of(v_lo) > 0:
        v_lo *= 0.5
    while dist_of(v_hi) < 0:
        v_hi *= 2.0
    v = brentq(dist_of, v_lo, v_hi, rtol=1e-13)
    p = base + v * direction
    info = generalized_gradient(shape, p)
    return info.grad_norm, info.one_minus_norm_sq, p, None


def _critical_axis(shape: Shape, cfg: EstimatorConfig) -> CriticalCurve:
    x0, y0, direction = _axis_vertical(cfg)
    fast = isinstance(shape, GraphCurve) and abs(direction[0]) < 1e-12
    edges = cfg.edges()
    centers = cfg.centers()
    t_hi = (shape.domain[1] - x0) if fast else None
    bins = []
    for k in range(cfg.n_bins):
        # one exact sample per bin, at the bin center: the level set there
        # is resolved completely, and edge samples would only smear in the
        # neighboring levels' values
        d_t = float(centers[k])
        if fast:
            chi, gap, point, _ = _axis_sample_graph(shape, x0, d_t, t_hi)
            if gap > 0 and not _axis_guard(shape, point, d_t):
                chi, gap, point, _ = _axis_sample_generic(
                    shape, x0, y0, direction, d_t)
        else:
            chi, gap, point, _ = _axis_sample_generic(
                shape, x0, y0, direction, d_t)
        bins.append(CriticalBin(d=d_t, chi=chi, one_minus_chi_sq=gap,
                                n_samples=1, min_point=point))
    return CriticalCurve(bins=tuple(bins), edges=edges, estimator=cfg)


# ---------------------------------------------------------------------------
# grid strategy
# ---------------------------------------------------------------------------

def _critical_grid(shape: Shape, cfg: EstimatorConfig) -> CriticalCurve:
    if getattr(shape, "dim", 2) != 2:
        raise GeometryError("grid strategy requires a planar shape")
    from .geometry import PointCloud, densify_params
    h = cfg.h
    pad = cfg.d_max * (1.0 + cfg.band_margin) + 2 * h
    is_curve = not isinstance(shape, PointCloud)
    if is_curve:
        ts_samples, pts = densify_params(shape, h / 2.0)
    else:
        ts_samples, pts = None, densify(shape, h / 2.0)
    if cfg.window is not None:
        (wx0, wx1), (wy0, wy1) = cfg.window
    else:
        wx0, wx1 = pts[:, 0].min(), pts[:, 0].max()
        wy0, wy1 = pts[:, 1].min(), pts[:, 1].max()
    x_lo, y_lo = wx0 - pad, wy0 - pad
    nx = int(math.ceil((wx1 + pad - x_lo) / h)) + 1
    ny = int(math.ceil((wy1 + pad - y_lo) / h)) + 1

    keep = ((pts[:, 0] >= x_lo) & (pts[:, 0] <= x_lo + (nx - 1) * h) &
            (pts[:, 1] >= y_lo) & (pts[:, 1] <= y_lo + (ny - 1) * h))
    pts = pts[keep]
    if ts_samples is not None:
        ts_samples = ts_samples[keep]
    if len(pts) == 0:
        raise GeometryError("shape does not intersect the grid window")
    background = np.ones((ny, nx), dtype=bool)
    jdx = np.clip(np.round((pts[:, 0] - x_lo) / h).astype(int), 0, nx - 1)
    idx = np.clip(np.round((pts[:, 1] - y_lo) / h).astype(int), 0, ny - 1)
    background[idx, jdx] = False
    if is_curve:
        param_img = np.zeros((ny, nx))
        param_img[idx, jdx] = ts_samples

    dist, (fi, fj) = distance_transform_edt(
        background, sampling=h, return_indices=True)
    lo = cfg.d_min * (1.0 - cfg.band_margin)
    hi = cfg.d_max * (1.0 + cfg.band_margin)
    band = (dist >= lo) & (dist <= hi)

    # Medial suspects.  A nearest-feature jump between adjacent nodes is
    # necessary near the medial axis but far from sufficient: tangential
    # ties on rasterization flats hop by many pixels too.  The exact test:
    # for feature parameters tA, tB of the pair, the curve point midway in
    # parameter is farther than the mean feature distance only when the
    # features lie on different branches (the distance along one branch is
    # locally convex, so same-branch midpoints fall at or below the mean).
    suspect = np.zeros_like(band)
    for axis in (0, 1):
        di = np.diff(fi.astype(np.int32), axis=axis)
        dj = np.diff(fj.astype(np.int32), axis=axis)
        jump2 = di * di + dj * dj
        if axis == 0:
            cand = (jump2 >= 4) & (band[1:, :] | band[:-1, :])
        else:
            cand = (jump2 >= 4) & (band[:, 1:] | band[:, :-1])
        del di, dj, jump2
        ia, ja = np.nonzero(cand)
        del cand
        if len(ia) == 0:
            continue
        ib = ia + (1 if axis == 0 else 0)
        jb = ja + (1 if axis == 1 else 0)
        if is_curve:
            t_a = param_img[fi[ia, ja], fj[ia, ja]]
            t_b = param_img[fi[ib, jb], fj[ib, jb]]
            t0, t1 = shape.domain
            span = t1 - t0
            if getattr(shape, "closed", False):
                # midpoint through the shorter way around
                delta = t_b - t_a
                wrap = np.abs(delta) > span / 2
                t_m = 0.5 * (t_a + t_b)
                t_m[wrap] = t0 + np.mod(t_m[wrap] - t0 + span / 2, span)
            else:
                t_m = 0.5 * (t_a + t_b)
            p_mid = np.stack([x_lo + 0.5 * (ja + jb) * h,
                              y_lo + 0.5 * (ia + ib) * h], axis=-1)
            d_a = np.linalg.norm(shape.point(t_a) - p_mid, axis=-1)
            d_b = np.linalg.norm(shape.point(t_b) - p_mid, axis=-1)
            d_m = np.linalg.norm(shape.point(t_m) - p_mid, axis=-1)
            medial = d_m > 0.5 * (d_a + d_b) + 1e-9
            ia, ja, ib, jb = ia[medial], ja[medial], ib[medial], jb[medial]
        suspect[ia, ja] = True
        suspect[ib, jb] = True
    suspect &= band
    del fi, fj

    edges = cfg.edges()
    n_bins = cfg.n_bins
    d_band = dist[band]
    which = np.searchsorted(edges, d_band, side="right") - 1
    ok = (which >= 0) & (which < n_bins)
    which = which[ok]
    counts = np.bincount(which, minlength=n_bins)

    # a representative node per bin (any node does when the bin min is 1)
    bi, bj = np.nonzero(band)
    bi, bj = bi[ok], bj[ok]
    ub, ui = np.unique(which, return_index=True)
    rep = {int(b): np.array([x_lo + bj[i] * h, y_lo + bi[i] * h])
           for b, i in zip(ub, ui)}

    gap_bin = np.zeros(n_bins)
    min_pt = {}
    si, sj = np.nonzero(suspect)
    for i, j in zip(si, sj):
        p = np.array([x_lo + j * h, y_lo + i * h])
        d_est = dist[i, j]
        try:
            info = generalized_gradient(shape, p, cluster_tol=2.0 * h / d_est)
        except OnShapePoint:
            continue
        b = int(np.searchsorted(edges, info.distance, side="right") - 1)
        if not (0 <= b < n_bins):
            continue
        gap = info.one_minus_norm_sq
        if gap > gap_bin[b]:
            gap_bin[b] = gap
            min_pt[b] = p
        if counts[b] == 0:
            counts[b] = 1
            rep[b] = p
    centers = cfg.centers()
    bins = []
    for b in range(n_bins):
        if counts[b] == 0:
            continue
        gap = float(gap_bin[b])
        point = min_pt.get(b, rep[b])
        bins.append(CriticalBin(
            d=float(centers[b]), chi=math.sqrt(max(0.0, 1.0 - gap)),
            one_minus_chi_sq=gap, n_samples=int(counts[b]), min_point=point))
    return CriticalCurve(bins=tuple(bins), edges=edges, estimator=cfg)


def critical_function(shape: Shape, cfg: EstimatorConfig) -> CriticalCurve:
    """Estimate chi over [d_min, d_max] with the configured strategy."""
    if getattr(shape, "dim", 2) != 2:
        raise GeometryError("critical-function estimation requires E^2")
    if cfg.strategy == "axis":
        return _critical_axis(shape, cfg)
    return _critical_grid(shape, cfg)


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def mu_reach(curve: CriticalCurve, mu: float) -> MuReachResult:
    """Largest scanned offset radius below which chi stays >= mu."""
    if not curve.bins:
        raise GeometryError("empty critical curve")
    if not (0.0 <= mu <= 1.0):
        raise GeometryError("mu must lie in [0, 1]")
    edges = curve.edges
    for b in curve.bins:
        if b.chi < mu:
            k = int(np.searchsorted(edges, b.d, side="right") - 1)
            return MuReachResult(value=float(edges[max(k, 0)]), censored=False)
    return MuReachResult(value=float(edges[-1]), censored=True)


def fit_power_law(curve: CriticalCurve, d_lo: float, d_hi: float) -> dict:
    """OLS of log(1 - chi^2) against log d over resolved bins."""
    ds = np.array([b.d for b in curve.bins])
    gaps = np.array([b.one_minus_chi_sq for b in curve.bins])
    sel = (ds >= d_lo) & (ds <= d_hi) & (gaps > 0.0)
    if np.count_nonzero(sel) < 5:
        raise GeometryError("insufficient resolved bins")
    x = np.log(ds[sel])
    y = np.log(gaps[sel])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {"exponent": float(slope), "log_constant": float(intercept),
            "constant": float(math.exp(intercept)), "r2": r2,
            "d_lo": float(d_lo), "d_hi": float(d_hi)}


def _axis_gap_at_height(shape: GraphCurve, x0: float, v: float):
    """Distance and gap at the axis point (x0, v) of a symmetric graph.

    Finds the positive stationary points of the squared distance via sign
    changes of psi(t) = t + (f(t) - v) f'(t) on a log grid; no positive
    root means a unique projection straight below (gap 0).
    """
    a = shape.domain[1] - x0
    ts = np.geomspace(max(a, 1.0) * 1e-22, a, 1200)
    f = np.asarray(shape.f(x0 + ts), dtype=float)
    fp = np.asarray(shape.fprime(x0 + ts), dtype=float)
    psi = ts + (f - v) * fp
    sign = np.sign(psi)
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    best = None

    def psi_scalar(t):
        return float(t + (float(shape.f(np.asarray(x0 + t))) - v)
                     * float(shape.fprime(np.asarray(x0 + t))))

    for k in flips:
        t = brentq(psi_scalar, ts[k], ts[k + 1],
                   rtol=4 * np.finfo(float).eps, xtol=1e-300)
        fp_t = float(shape.fprime(np.asarray(x0 + t)))
        ft = float(shape.f(np.asarray(x0 + t)))
        d2 = t * t + (ft - v) ** 2
        if best is None or d2 < best[0]:
            best = (d2, t)
    d_axis = abs(v - y0_of(shape, x0))
    if best is None or best[0] >= d_axis * d_axis:
        return d_axis, 0.0, None
    d = math.sqrt(best[0])
    return d, (best[1] / d) ** 2, best[1]


def verify_holder_bound(shape: Shape, alpha: float, samples,
                        symmetry_axis: Optional[tuple] = None) -> dict:
    """Max of (1 - norm^2) / (d^(2 alpha) (1 - norm^2)^alpha) over samples.

    The ratio is formed as gap^(1-alpha) / d^(2 alpha).  Samples with a
    unique projection carry no signal and are skipped.  With a declared
    vertical symmetry axis, on-axis samples of a graph shape are evaluated
    by the exact 1-d reduction, which resolves gaps far below what the
    ambient minimizer can separate.
    """
    max_ratio = -math.inf
    argmax = None
    rows = []
    for p in samples:
        p = np.asarray(p, dtype=float)
        if (symmetry_axis is not None and isinstance(shape, GraphCurve)
                and abs(p[0] - symmetry_axis[0][0]) < 1e-12):
            d, gap, _ = _axis_gap_at_height(shape, symmetry_axis[0][0],
                                            float(p[1]))
        else:
            try:
                info = generalized_gradient(shape, p)
            except OnShapePoint:
                continue
            if len(info.projections) < 2:
                continue
            d, gap = info.distance, info.one_minus_norm_sq
        if gap <= 0.0:
            continue
        ratio = gap ** (1.0 - alpha) / d ** (2.0 * alpha)
        rows.append((float(d), float(gap), float(ratio)))
        if ratio > max_ratio:
            max_ratio = ratio
            argmax = p
    if argmax is None:
        raise GeometryError("no sample with two projections")
    return {"max_ratio": float(max_ratio), "argmax": argmax, "samples": rows}


def critical_csv(curve: CriticalCurve) -> str:
    lines = ["d,chi,one_minus_chi_sq,n_samples"]
    for b in curve.bins:
        lines.append(f"{b.d:.17g},{b.chi:.17g},{b.one_minus_chi_sq:.17g},"
                     f"{b.n_samples}")
    return "\n".join(lines) + "\n"
