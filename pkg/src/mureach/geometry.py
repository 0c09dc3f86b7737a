"""Shape representations, distance evaluation and full projection sets.

Shapes are immutable; every operation here is a pure function and safe to
call concurrently.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

# Solver knobs.  One tolerance story for the whole library: downstream
# modules inherit these instead of growing their own knobs.
N_GRID = 2048
ON_SHAPE_TOL = 1e-10
CLUSTER_TOL = 1e-9
MERGE_TOL_FACTOR = 1e-7
TOL_T_FACTOR = 1e-12
CLOUD_INDEX_THRESHOLD = 10_000

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_DERIV_PROBE_H = 1e-5
_DERIV_PROBE_TOL = 1e-4
# deterministic, irrational-ish probe fractions (never hit a symmetric kink)
_PROBE_FRACTIONS = (0.1234567, 0.3141592, 0.4321987, 0.5877852,
                    0.7182818, 0.8660254, 0.9201233)


class GeometryError(ValueError):
    """Base class for geometric input errors."""


class DimensionMismatch(GeometryError):
    pass


class OnShapePoint(GeometryError):
    """Raised when a query point lies on the shape (gradient undefined)."""


class EndpointProjectionWarning(UserWarning):
    """A projection landed on a truncated domain endpoint; normality and
    gradient formulas are unreliable there."""


def as_point(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise GeometryError("a point must be a 1-d coordinate vector")
    if not np.all(np.isfinite(p)):
        raise GeometryError("point coordinates must be finite")
    return p


@dataclass(frozen=True)
class GraphCurve:
    """Planar curve {(t, f(t))} over a closed interval.

    ``f`` and ``fprime`` must accept numpy arrays.  The declared derivative
    is sanity-checked against central differences at a few interior probes.
    """

    f: Callable[[np.ndarray], np.ndarray]
    fprime: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]
    check_derivative: bool = True

    def __post_init__(self):
        t0, t1 = self.domain
        if not (np.isfinite(t0) and np.isfinite(t1) and t0 < t1):
            raise GeometryError("domain must be a nonempty closed interval")
        if self.check_derivative:
            ts = t0 + (t1 - t0) * np.asarray(_PROBE_FRACTIONS)
            h = _DERIV_PROBE_H * max(1.0, t1 - t0)
            fd = (np.asarray(self.f(ts + h)) - np.asarray(self.f(ts - h))) / (2 * h)
            err = np.max(np.abs(fd - np.asarray(self.fprime(ts))))
            if err > _DERIV_PROBE_TOL:
                raise GeometryError(
                    f"declared derivative disagrees with finite differences "
                    f"(max error {err:.3g})")

    @property
    def dim(self) -> int:
        return 2

    @property
    def closed(self) -> bool:
        return False

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, np.asarray(self.f(t), dtype=float)], axis=-1)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), np.asarray(self.fprime(t), dtype=float)],
                        axis=-1)


@dataclass(frozen=True)
class ParametricCurve:
    """Planar curve t -> point, t in a closed interval.

    ``map`` must be vectorized over t.  ``deriv`` is optional; when absent,
    tangents are estimated by central differences.  ``closed`` curves wrap
    their parameter modulo the domain length.
    """

    map: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]
    deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    closed: bool = False
    smoothness: Union[float, str] = "smooth"

    def __post_init__(self):
        t0, t1 = self.domain
        if not (np.isfinite(t0) and np.isfinite(t1) and t0 < t1):
            raise GeometryError("domain must be a nonempty closed interval")

    @property
    def dim(self) -> int:
        return 2

    def _wrap(self, t):
        if not self.closed:
            return t
        t0, t1 = self.domain
        return t0 + np.mod(np.asarray(t, dtype=float) - t0, t1 - t0)

    def point(self, t):
        return np.asarray(self.map(self._wrap(np.asarray(t, dtype=float))),
                          dtype=float)

    def velocity(self, t):
        t = self._wrap(np.asarray(t, dtype=float))
        if self.deriv is not None:
            return np.asarray(self.deriv(t), dtype=float)
        h = 1e-7 * (self.domain[1] - self.domain[0])
        return (self.point(t + h) - self.point(t - h)) / (2 * h)


@dataclass(frozen=True)
class PointCloud:
    """Finite point set in E^n, deduplicated at construction."""

    points: np.ndarray
    dedup_tol: float = 1e-12

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0:
            raise GeometryError("point cloud must be nonempty")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("point cloud coordinates must be finite")
        keep = _dedup_indices(pts, self.dedup_tol)
        object.__setattr__(self, "points", pts[keep])

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def closed(self) -> bool:
        return True

    @cached_property
    def _tree(self) -> cKDTree:
        # used as the fast path above CLOUD_INDEX_THRESHOLD and for
        # radius queries; exhaustive scans stay the reference path below it
        return cKDTree(self.points)


Shape = Union[GraphCurve, ParametricCurve, PointCloud]


def _dedup_indices(pts: np.ndarray, tol: float) -> np.ndarray:
    if len(pts) == 1:
        return np.array([0])
    tree = cKDTree(pts)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    drop = set(int(j) for _, j in pairs)
    return np.array([i for i in range(len(pts)) if i not in drop])


@dataclass(frozen=True)
class ProjectionSet:
    """All nearest points of a shape to a query point."""

    points: np.ndarray            # (k, n)
    distance: float
    cluster_tol: float
    params: Optional[np.ndarray] = None   # (k,) for parametric shapes

    def __len__(self) -> int:
        return len(self.points)


def _check_query(shape: Shape, p: np.ndarray) -> np.ndarray:
    p = as_point(p)
    if p.size != shape.dim:
        raise DimensionMismatch(
            f"point has dimension {p.size}, shape has dimension {shape.dim}")
    return p


# ---------------------------------------------------------------------------
# 1-d global minimization of g(t) = |p - gamma(t)|^2
#
# Coarse grid of N_GRID samples, then recursive grid zoom on every candidate
# basin (a plain bracket refinement can silently merge twin minima separated
# by less than the grid spacing, which is exactly what happens near a cusp),
# finished with golden-section and, when a tangent is available, a bracketed
# root polish of the normal equation <gamma(t)-p, gamma'(t)> = 0.
# ---------------------------------------------------------------------------

def _minima_runs(gs: np.ndarray, closed: bool):
    """Index brackets (lo, hi) around every local-minimum run of gs."""
    n = len(gs)
    if closed:
        left = np.roll(gs, 1)
        right = np.roll(gs, -1)
    else:
        left = np.empty(n)
        right = np.empty(n)
        left[1:] = gs[:-1]
        right[:-1] = gs[1:]
        left[0] = np.inf
        right[-1] = np.inf
    is_min = (gs <= left) & (gs <= right)
    idx = np.flatnonzero(is_min)
    brackets = []
    run_start = None
    prev = None
    for i in idx:
        if run_start is None:
            run_start = prev = i
        elif i == prev + 1:
            prev = i
        else:
            brackets.append((run_start - 1, prev + 1))
            run_start = prev = i
    if run_start is not None:
        brackets.append((run_start - 1, prev + 1))
    return brackets


def _golden(g, a: float, b: float, tol: float) -> float:
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = g(x1)
    f2 = g(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = g(x2)
    return 0.5 * (a + b)


def _zoom_minima(g, a: float, b: float, tol: float, depth: int = 0):
    """All local minimizers of g inside [a, b], resolved down to tol."""
    if b - a <= 4 * tol or depth > 80:
        return [_golden(g, a, b, tol)]
    m = 48
    ts = np.linspace(a, b, m)
    gs = g(ts)
    span = np.max(gs) - np.min(gs)
    if span <= 1e-14 * max(1.0, abs(float(np.min(gs)))):
        # flat plateau (e.g. an arc seen from its center)
        return [0.5 * (a + b)]
    out = []
    for lo, hi in _minima_runs(gs, closed=False):
        lo = max(lo, 0)
        hi = min(hi, m - 1)
        out.extend(_zoom_minima(g, ts[lo], ts[hi], tol, depth + 1))
    return out or [_golden(g, a, b, tol)]


def _polish_normal(shape, p: np.ndarray, t: float, halfwidth: float,
                   t_lo: float, t_hi: float) -> float:
    """Sharpen a minimizer by solving <gamma(t)-p, gamma'(t)> = 0.

    Value-based refinement stalls about sqrt(eps) away from a quadratic
    minimum, so the bracket is grown from the requested width until it
    straddles the root (it stays far below the spacing of distinct minima).
    """
    from scipy.optimize import brentq

    def psi(u):
        return float(np.dot(shape.point(u) - p, shape.velocity(u)))

    closed = getattr(shape, "closed", False)
    cap = 1e-5 * (t_hi - t_lo)
    hw = max(halfwidth, 1e-15 * (t_hi - t_lo))
    try:
        while hw <= cap:
            a, b = t - hw, t + hw
            if not closed:
                a = max(a, t_lo)
                b = min(b, t_hi)
                if b <= a:
                    return t
            fa, fb = psi(a), psi(b)
            if fa == 0.0:
                return a
            if fb == 0.0:
                return b
            if fa * fb < 0:
                return brentq(psi, a, b, xtol=1e-15, rtol=8.9e-16)
            hw *= 4.0
    except Exception:
        pass
    return t


def _curve_minima(shape, p: np.ndarray, n_grid: int = N_GRID):
    """Parameters and squared distances of all local minima of g."""
    t0, t1 = shape.domain
    closed = getattr(shape, "closed", False)

    def g(ts):
        pts = shape.point(np.asarray(ts, dtype=float))
        diff = pts - p
        return np.einsum("...i,...i->...", diff, diff)

    if closed:
        ts = np.linspace(t0, t1, n_grid, endpoint=False)
    else:
        ts = np.linspace(t0, t1, n_grid)
    gs = g(ts)
    tol = TOL_T_FACTOR * (t1 - t0)
    spacing = ts[1] - ts[0]
    cands = []
    for lo, hi in _minima_runs(gs, closed):
        if closed:
            a = ts[0] + lo * spacing      # lo/hi may wrap past the ends
            b = ts[0] + hi * spacing
        else:
            a, b = ts[max(lo, 0)], ts[min(hi, n_grid - 1)]
        cands.extend(_zoom_minima(lambda u: g(u), a, b, tol))
    polished = []
    for t in cands:
        t = _polish_normal(shape, p, t, 2 * max(tol, 1e-13 * (t1 - t0)) * 8,
                           t0, t1)
        polished.append(t)
    ts_out = np.asarray(polished)
    if closed:
        ts_out = t0 + np.mod(ts_out - t0, t1 - t0)
    return ts_out, g(ts_out)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def eval_distance(shape: Shape, p) -> float:
    """Euclidean distance from p to the shape (global minimum)."""
    p = _check_query(shape, p)
    if isinstance(shape, PointCloud):
        if len(shape.points) > CLOUD_INDEX_THRESHOLD:
            d, _ = shape._tree.query(p)
            return float(d)
        return float(np.min(np.linalg.norm(shape.points - p, axis=1)))
    _, g2 = _curve_minima(shape, p)
    return float(math.sqrt(max(0.0, float(np.min(g2)))))


def projection_set(shape: Shape, p, cluster_tol: float = CLUSTER_TOL,
                   on_shape_tol: float = ON_SHAPE_TOL) -> ProjectionSet:
    """The set of all projections of p on the shape.

    Every local minimizer whose squared distance is within
    (1+cluster_tol)^2 of the global minimum is kept; minimizers closer than
    merge_tol in parameter collapse to their best representative.
    """
    p = _check_query(shape, p)
    if isinstance(shape, PointCloud):
        dists = np.linalg.norm(shape.points - p, axis=1)
        d = float(np.min(dists))
        if d <= on_shape_tol:
            raise OnShapePoint("on-shape point, gradient undefined")
        keep = dists <= (1.0 + cluster_tol) * d
        return ProjectionSet(points=shape.points[keep], distance=d,
                             cluster_tol=cluster_tol)

    ts, g2 = _curve_minima(shape, p)
    d2 = float(np.min(g2))
    d = math.sqrt(max(0.0, d2))
    if d <= on_shape_tol:
        raise OnShapePoint("on-shape point, gradient undefined")
    keep = g2 <= (1.0 + cluster_tol) ** 2 * d2
    ts, g2 = ts[keep], g2[keep]

    t0, t1 = shape.domain
    merge_tol = MERGE_TOL_FACTOR * (t1 - t0)
    order = np.argsort(ts)
    ts, g2 = ts[order], g2[order]
    groups = [[0]]
    for i in range(1, len(ts)):
        if ts[i] - ts[groups[-1][-1]] <= merge_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    if getattr(shape, "closed", False) and len(groups) > 1:
        if (ts[groups[-1][-1]] - (t1 - t0)) >= ts[groups[0][0]] - merge_tol:
            groups[0].extend(groups.pop())
    reps = np.array([grp[int(np.argmin(g2[grp]))] for grp in groups])
    ts = ts[reps]

    if not getattr(shape, "closed", False):
        edge = max(merge_tol, 1e-9 * (t1 - t0))
        if np.any(ts <= t0 + edge) or np.any(ts >= t1 - edge):
            warnings.warn(
                "projection falls on a domain endpoint; move the query point "
                "further inside the truncated region", EndpointProjectionWarning)
    return ProjectionSet(points=np.atleast_2d(shape.point(ts)), distance=d,
                         cluster_tol=cluster_tol, params=ts)


def sample_shape(shape: Shape, n: int) -> np.ndarray:
    """n representative points on the shape.

    Parametric shapes start from a uniform parameter grid and insert
    midpoints until adjacent chord gaps are at most twice the median gap.
    Clouds return themselves when n covers them.
    """
    if n < 2:
        raise GeometryError("n must be at least 2")
    if isinstance(shape, PointCloud):
        if n >= len(shape.points):
            return shape.points.copy()
        idx = np.linspace(0, len(shape.points) - 1, n).round().astype(int)
        return shape.points[np.unique(idx)]
    t0, t1 = shape.domain
    ts = np.linspace(t0, t1, n)
    for _ in range(24):
        pts = shape.point(ts)
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        med = np.median(gaps)
        bad = np.flatnonzero(gaps > 2 * med)
        if bad.size == 0:
            break
        mids = 0.5 * (ts[bad] + ts[bad + 1])
        ts = np.sort(np.concatenate([ts, mids]))
    return shape.point(ts)


def densify(shape: Shape, max_gap: float) -> np.ndarray:
    """Points along the shape with adjacent chord gaps at most max_gap.

    Plumbing for rasterized distance fields; clouds return their points.
    """
    if isinstance(shape, PointCloud):
        return shape.points
    return densify_params(shape, max_gap)[1]


def densify_params(shape, max_gap: float):
    """(params, points) along a curve with chord gaps at most max_gap."""
    t0, t1 = shape.domain
    ts = np.linspace(t0, t1, 1025)
    for _ in range(40):
        pts = shape.point(ts)
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        bad = np.flatnonzero(gaps > max_gap)
        if bad.size == 0:
            break
        mids = 0.5 * (ts[bad] + ts[bad + 1])
        ts = np.sort(np.concatenate([ts, mids]))
    return ts, shape.point(ts)
