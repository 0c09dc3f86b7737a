"""Constructors for the named example shapes.

make_parabola       graph of t^2 on [-a, a]
make_calpha_compact the power curve |t|^(1+alpha) on [-a, a] closed by a cap
                    of three circular arcs with first-order tangency, so that
                    queries near the origin never see the cap
make_triangle_wave  a sawtooth of amplitude 1 whose sides have slope
                    +-sqrt(1/mu^2 - 1), with vertices rounded by a decreasing
                    radius schedule; on the medial segment above each valley
                    the gradient norm equals mu
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calpha import CAlphaParams, graph_curve
from .geometry import (GeometryError, GraphCurve, ParametricCurve,
                       PointCloud, Shape)


def make_parabola(a: float) -> GraphCurve:
    if a <= 0:
        raise GeometryError("half-width must be positive")
    return GraphCurve(f=lambda t: np.asarray(t) ** 2,
                      fprime=lambda t: 2.0 * np.asarray(t),
                      domain=(-a, a))


# ---------------------------------------------------------------------------
# piecewise paths (segments, arcs, graph pieces) glued into one curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Piece:
    length: float
    fn: Callable[[np.ndarray], np.ndarray]   # s in [0,1] -> (m, 2) points


def _seg(a, b) -> _Piece:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return _Piece(length=float(np.linalg.norm(b - a)),
                  fn=lambda s: a + s[:, None] * (b - a))


def _arc(center, r: float, th0: float, th1: float) -> _Piece:
    center = np.asarray(center, float)
    return _Piece(
        length=abs(th1 - th0) * r,
        fn=lambda s: center + r * np.stack(
            [np.cos(th0 + s * (th1 - th0)), np.sin(th0 + s * (th1 - th0))],
            axis=-1))


def _path_curve(pieces: list[_Piece], closed: bool) -> ParametricCurve:
    bounds = np.concatenate([[0.0], np.cumsum([p.length for p in pieces])])
    total = float(bounds[-1])

    def pmap(u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        idx = np.clip(np.searchsorted(bounds, u, side="right") - 1,
                      0, len(pieces) - 1)
        out = np.empty((len(u), 2))
        for k, pc in enumerate(pieces):
            m = idx == k
            if not np.any(m):
                continue
            s = np.clip((u[m] - bounds[k]) / pc.length, 0.0, 1.0)
            out[m] = pc.fn(s)
        return out[0] if scalar else out

    return ParametricCurve(map=pmap, domain=(0.0, total), closed=closed)


def _graph_piece(params: CAlphaParams) -> _Piece:
    a = params.a
    ts = np.linspace(-a, a, 4097)
    pts = np.stack([ts, params.f(ts)], axis=-1)
    length = float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))

    def fn(s):
        t = -a + 2.0 * a * s
        return np.stack([t, params.f(t)], axis=-1)

    return _Piece(length=length, fn=fn)


def make_calpha_compact(alpha: float, a: float) -> ParametricCurve:
    """Closed curve: the power graph on [-a, a] plus a circular cap.

    The cap stays inside {|x| >= a} union {y >= f(a)}, so any query point
    with distance below a/4 taken near the origin projects onto the graph
    part only.
    """
    params = CAlphaParams(alpha=alpha, a=a)
    s = (1.0 + alpha) * a ** alpha          # slope at the right endpoint
    nrm = math.sqrt(1.0 + s * s)
    fa = float(params.f(a))
    r1 = a / 2.0

    # turn-to-vertical arc at the right endpoint, tangent to the graph
    c1 = np.array([a - r1 * s / nrm, fa + r1 / nrm])
    th0 = math.atan2(-1.0, s)               # direction of (endpoint - c1)
    e1 = c1 + np.array([r1, 0.0])           # arc end, tangent (0, 1)
    # top arc over the whole shape, centered on the symmetry axis
    r2 = float(e1[0])
    o2 = np.array([0.0, e1[1]])

    pieces = [
        _graph_piece(params),
        _arc(c1, r1, th0, 0.0),
        _arc(o2, r2, 0.0, math.pi),
        # mirror of the first arc, traversed back down to (-a, f(a))
        _Piece(length=abs(th0) * r1,
               fn=lambda u: np.stack(
                   [-(c1[0] + r1 * np.cos(u * th0)),
                    c1[1] + r1 * np.sin(u * th0)], axis=-1)),
    ]
    return _path_curve(pieces, closed=True)


# ---------------------------------------------------------------------------
# triangle wave
# ---------------------------------------------------------------------------

def triangle_wave_layout(mu: float, n_periods: int,
                         radius_schedule) -> dict:
    """Geometry of the rounded wave: slope, period, vertices, radii.

    Vertices sit at x_j = j/s, alternating height 0 and 1; the two vertices
    of period k (peak 2k+1, valley 2k+2) share radius_schedule[k].
    """
    if not (0.0 < mu < 1.0):
        raise GeometryError("mu must lie in (0, 1)")
    radii = [float(r) for r in radius_schedule]
    if len(radii) != n_periods or n_periods < 1:
        raise GeometryError("radius schedule must have one entry per period")
    if any(r <= 0 for r in radii) or any(
            b >= a for a, b in zip(radii, radii[1:])):
        raise GeometryError("radii must be positive and strictly decreasing")
    s = math.sqrt(1.0 / (mu * mu) - 1.0)
    half = 1.0 / s                          # horizontal run of one side
    side_len = math.sqrt(1.0 + s * s) / s   # length of one straight side
    n_vert = 2 * n_periods + 1
    xs = np.arange(n_vert) * half
    ys = np.arange(n_vert) % 2.0
    vert_r = [0.0] * n_vert                 # boundary vertices stay sharp
    for j in range(1, n_vert - 1):
        vert_r[j] = radii[(j - 1) // 2]
    for j in range(n_vert - 1):
        if s * (vert_r[j] + vert_r[j + 1]) >= side_len:
            raise GeometryError(
                "radii too large for rounding to fit within a half-period")
    return {"mu": mu, "s": s, "period": 2.0 * half, "side_len": side_len,
            "xs": xs, "ys": ys, "vert_r": vert_r,
            "interior_valley_x": [float(xs[j])
                                  for j in range(2, n_vert - 1, 2)],
            "interior_valley_r": [vert_r[j]
                                  for j in range(2, n_vert - 1, 2)]}


def make_triangle_wave(mu: float, n_periods: int,
                       radius_schedule) -> ParametricCurve:
    lay = triangle_wave_layout(mu, n_periods, radius_schedule)
    s = lay["s"]
    xs, ys, vert_r = lay["xs"], lay["ys"], lay["vert_r"]
    nrm = math.sqrt(1.0 + s * s)
    verts = np.stack([xs, ys], axis=-1)
    pieces: list[_Piece] = []
    for j in range(len(verts) - 1):
        u = (verts[j + 1] - verts[j]) / lay["side_len"]
        a = verts[j] + vert_r[j] * s * u
        b = verts[j + 1] - vert_r[j + 1] * s * u
        pieces.append(_seg(a, b))
        jj = j + 1
        if jj < len(verts) - 1 and vert_r[jj] > 0:
            r = vert_r[jj]
            u_out = (verts[jj + 1] - verts[jj]) / lay["side_len"]
            bis = np.array([0.0, 1.0 if ys[jj] == 0.0 else -1.0])
            center = verts[jj] + r * nrm * bis
            p_in = verts[jj] - r * s * u
            p_out = verts[jj] + r * s * u_out
            th_in = math.atan2(*reversed(p_in - center))
            th_out = math.atan2(*reversed(p_out - center))
            delta = (th_out - th_in + math.pi) % (2 * math.pi) - math.pi
            pieces.append(_arc(center, r, th_in, th_in + delta))
    return _path_curve(pieces, closed=False)


def triangle_wave_probes(mu: float, n_periods: int, radius_schedule,
                         v: float = 0.5) -> list[np.ndarray]:
    """Points on the medial segment above each interior valley.

    Probe height v must clear the rounding (v > r * sqrt(1+s^2)) and keep
    the projection feet on the straight sides; the default 0.5 does both for
    small radii and the mus exercised here.
    """
    lay = triangle_wave_layout(mu, n_periods, radius_schedule)
    s, nrm = lay["s"], math.sqrt(1.0 + lay["s"] ** 2)
    out = []
    for x, r in zip(lay["interior_valley_x"], lay["interior_valley_r"]):
        if not (r * nrm < v and v * s / nrm < lay["side_len"] - r * s):
            raise GeometryError("probe height outside the medial segment")
        out.append(np.array([x, v]))
    return out


# ---------------------------------------------------------------------------
# spec-string mini-grammar
# ---------------------------------------------------------------------------

def shape_from_spec(spec: str, cloud_points=None) -> Shape:
    """Build a gallery shape from its colon-separated spec string.

    parabola:a             graph of t^2 on [-a, a]
    calpha:alpha:a         graph of |t|^(1+alpha) on [-a, a]
    calphacompact:alpha:a  the same curve closed by the circular cap
    trianglewave:mu:n:r0,r1,...
    cloud:path.csv         point cloud (or inline points via cloud_points)
    """
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "parabola":
            return make_parabola(float(parts[1]))
        if kind == "calpha":
            return graph_curve(CAlphaParams(alpha=float(parts[1]),
                                            a=float(parts[2])))
        if kind == "calphacompact":
            return make_calpha_compact(float(parts[1]), float(parts[2]))
        if kind == "trianglewave":
            radii = [float(r) for r in parts[3].split(",")]
            return make_triangle_wave(float(parts[1]), int(parts[2]), radii)
        if kind == "cloud":
            if cloud_points is not None:
                return PointCloud(points=np.asarray(cloud_points, float))
            pts = np.loadtxt(parts[1], delimiter=",", ndmin=2)
            return PointCloud(points=pts)
    except (IndexError, ValueError) as exc:
        raise GeometryError(f"malformed shape spec {spec!r}: {exc}") from exc
    raise GeometryError(f"unknown shape kind {kind!r}")


def default_symmetry_axis(spec: str):
    """Vertical axis through the origin for the symmetric gallery shapes."""
    if spec.split(":")[0] in ("parabola", "calpha", "calphacompact"):
        return ((0.0, 0.0), (0.0, 1.0))
    return None
