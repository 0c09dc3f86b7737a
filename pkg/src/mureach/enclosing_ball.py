"""Minimum enclosing balls, diameters and Jung's inequality.

Projection sets are tiny (a handful of points), so the move-to-front Welzl
recursion and the exhaustive pairwise diameter are both exact and cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError

# fixed shuffle seed: deterministic CI
_WELZL_SEED = 20260824
_CONTAIN_SLACK = 1e-10


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def contains(self, q, slack: float = _CONTAIN_SLACK) -> bool:
        return float(np.linalg.norm(np.asarray(q, float) - self.center)) \
            <= self.radius + slack


@dataclass(frozen=True)
class DiameterPair:
    q1: np.ndarray
    q2: np.ndarray
    length: float


def _circumsphere(S: np.ndarray) -> Ball:
    """Smallest ball with every point of S on its boundary.

    Rank-deficient systems (collinear or duplicated support points) are
    solved by least squares, which drops the singular directions.
    """
    if len(S) == 1:
        return Ball(center=S[0].copy(), radius=0.0)
    U = S[1:] - S[0]
    # center = S[0] + U^T w with U U^T w = |U|^2 / 2
    G = U @ U.T
    b = 0.5 * np.einsum("ij,ij->i", U, U)
    w, *_ = np.linalg.lstsq(G, b, rcond=None)
    c = S[0] + U.T @ w
    r = float(np.max(np.linalg.norm(S - c, axis=1)))
    return Ball(center=c, radius=r)


def _mb(pts: np.ndarray, end: int, boundary: list) -> Ball:
    """Welzl recursion: MEB of pts[:end] with `boundary` forced on the sphere."""
    n = pts.shape[1]
    if end == 0 or len(boundary) == n + 1:
        if not boundary:
            return Ball(center=np.zeros(n), radius=-1.0)
        return _circumsphere(np.asarray(boundary))
    ball = _mb(pts, end - 1, boundary)
    p = pts[end - 1].copy()
    if ball.radius >= 0 and ball.contains(p):
        return ball
    ball = _mb(pts, end - 1, boundary + [p])
    # move-to-front keeps the support near the head on later calls
    pts[1:end] = pts[: end - 1].copy()
    pts[0] = p
    return ball


def min_enclosing_ball(points, seed: int = _WELZL_SEED) -> Ball:
    """Smallest ball containing all the points (exact, Welzl's algorithm)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise GeometryError("minimum enclosing ball of an empty set")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("points must be finite")
    if len(pts) == 1:
        return Ball(center=pts[0].copy(), radius=0.0)
    rng = np.random.default_rng(seed)
    work = pts[rng.permutation(len(pts))].copy()
    ball = _mb(work, len(work), [])
    # the radius from the support set can undershoot by rounding; report the
    # radius that actually covers the input
    r = float(np.max(np.linalg.norm(pts - ball.center, axis=1)))
    return Ball(center=ball.center, radius=r)


def diameter(points) -> DiameterPair:
    """A pair of points realizing the diameter (first found in scan order)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise GeometryError("diameter of an empty set")
    if len(pts) == 1:
        return DiameterPair(q1=pts[0].copy(), q2=pts[0].copy(), length=0.0)
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    iu = np.triu_indices(len(pts), k=1)
    flat = d2[iu]
    k = int(np.argmax(flat))
    i, j = iu[0][k], iu[1][k]
    return DiameterPair(q1=pts[i].copy(), q2=pts[j].copy(),
                        length=float(math.sqrt(flat[k])))


def jung_slack(points, n: int) -> float:
    """Diam(X) - sqrt(2(1+1/n)) * Radius(X); nonnegative for sets in E^n."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 2:
        return 0.0
    diam = diameter(pts).length
    rad = min_enclosing_ball(pts).radius
    return diam - math.sqrt(2.0 * (1.0 + 1.0 / n)) * rad
