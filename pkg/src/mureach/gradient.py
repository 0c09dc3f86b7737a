"""Generalized gradient of the distance function.

For a query point p off the shape, the gradient is (p - omega) / d where
omega is the center of the smallest ball enclosing the projection set.  Its
norm obeys norm^2 = 1 - (radius/d)^2, so the squared gap (radius/d)^2 is
carried as the primary quantity: near the shape the gap underflows long
before the norm visibly departs from 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enclosing_ball import Ball, DiameterPair, diameter, min_enclosing_ball
from .geometry import (CLUSTER_TOL, GeometryError, ProjectionSet, Shape,
                       _check_query, projection_set)


@dataclass(frozen=True)
class GradientInfo:
    p: np.ndarray
    distance: float
    omega: np.ndarray
    small_ball_radius: float
    grad: np.ndarray
    grad_norm: float
    diameter_pair: DiameterPair
    projections: ProjectionSet

    @property
    def one_minus_norm_sq(self) -> float:
        """(radius/d)^2, computed without cancellation."""
        return (self.small_ball_radius / self.distance) ** 2


def gradient_norm_from_radius(radius: float, distance: float) -> float:
    if distance <= 0:
        raise GeometryError("distance must be positive")
    if radius < 0:
        raise GeometryError("radius must be nonnegative")
    if radius > distance * (1 + 1e-12):
        raise GeometryError("projection set larger than its distance sphere")
    ratio = min(radius / distance, 1.0)
    return math.sqrt(max(0.0, 1.0 - ratio * ratio))


def generalized_gradient(shape: Shape, p,
                         cluster_tol: float = CLUSTER_TOL) -> GradientInfo:
    """Distance, projections, enclosing ball and gradient at p."""
    p = _check_query(shape, p)
    proj = projection_set(shape, p, cluster_tol=cluster_tol)
    d = proj.distance
    ball: Ball = min_enclosing_ball(proj.points)
    grad = (p - ball.center) / d
    norm = gradient_norm_from_radius(min(ball.radius, d), d)
    return GradientInfo(p=p, distance=d, omega=ball.center,
                        small_ball_radius=ball.radius, grad=grad,
                        grad_norm=norm, diameter_pair=diameter(proj.points),
                        projections=proj)


def jung_lower_bound(info: GradientInfo, n: int) -> float:
    """Lower bound on grad_norm^2 from the diameter pair's unit directions."""
    if len(info.projections) < 2:
        raise GeometryError("bound requires two projections")
    q1, q2 = info.diameter_pair.q1, info.diameter_pair.q2
    n1 = (info.p - q1) / np.linalg.norm(info.p - q1)
    n2 = (info.p - q2) / np.linalg.norm(info.p - q2)
    return 1.0 - (1.0 - float(np.dot(n1, n2))) / (1.0 + 1.0 / n)


def semi_angle(info: GradientInfo) -> float:
    """Half-angle of the projection cone; 0 at singletons by convention."""
    if len(info.projections) < 2:
        return 0.0
    ratio = min(info.small_ball_radius / info.distance, 1.0)
    beta = math.asin(ratio)
    return min(beta, math.pi / 2 - 1e-18)
