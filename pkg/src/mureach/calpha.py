"""Closed-form oracle for the curve family {(t, |t|^(1+alpha))}.

For alpha in (0,1) the medial axis of this curve is the open positive
vertical axis.  The axis point (0, v) with v = h(t) has exactly the two
projections (+-t, t^(1+alpha)), distance dt(t) = t*sqrt(1 + 1/f'(t)^2) and
gradient norm chi = (f'(t)^2 + 1)^(-1/2), where f'(t) = (1+alpha) t^alpha.
Both dt and h are strictly increasing, so everything here reduces to
monotone 1-d inversions.

Numerics: 1 - chi^2 = f'^2/(1+f'^2) underflows relative to 1 for small t and
large alpha, so the gap is always computed in that form, never as 1 - chi^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import GeometryError, GraphCurve

_REL_TOL = 1e-12


@dataclass(frozen=True)
class CAlphaParams:
    """Exponent alpha in [0,1) and graph half-width a."""

    alpha: float
    a: float = 8.0

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise GeometryError("alpha must lie in [0, 1)")
        if self.a <= 0:
            raise GeometryError("half-width must be positive")

    def f(self, t):
        return np.abs(t) ** (1.0 + self.alpha)

    def fprime(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 + self.alpha) * np.abs(t) ** self.alpha * np.sign(t)


@dataclass(frozen=True)
class CriticalSample:
    t: float
    d: float
    chi: float
    v: float
    one_minus_chi_sq: float


def graph_curve(params: CAlphaParams) -> GraphCurve:
    """The curve as a GraphCurve on [-a, a]."""
    return GraphCurve(f=params.f, fprime=params.fprime,
                      domain=(-params.a, params.a))


def calpha_h(params: CAlphaParams, t: float) -> float:
    """Axis height of the medial-axis point whose projections sit at +-t."""
    if t <= 0:
        raise GeometryError("t must be positive")
    al = params.alpha
    return t ** (1.0 - al) / (1.0 + al) + t ** (1.0 + al)


def _h_prime(al: float, t: float) -> float:
    return (1.0 - al) / (1.0 + al) * t ** (-al) + (1.0 + al) * t ** al


def calpha_h_inv(params: CAlphaParams, v: float) -> float:
    """The unique t > 0 with calpha_h(t) = v (bisection + Newton polish)."""
    if v <= 0:
        raise GeometryError("v must be positive")
    al = params.alpha
    lo = min(v, 1.0) * 1e-9
    hi = max(v, 1.0) / 1e-9
    # the fixed bracket can miss the root when v is tiny and alpha is large
    # (h(t) ~ t^(1-alpha)/(1+alpha), so t ~ v^(1/(1-alpha)) << v)
    while calpha_h(params, lo) > v:
        lo *= 1e-3
    while calpha_h(params, hi) < v:
        hi *= 1e3
    t = brentq(lambda u: calpha_h(params, u) - v, lo, hi,
               rtol=4 * np.finfo(float).eps, xtol=1e-300)
    for _ in range(3):
        step = (calpha_h(params, t) - v) / _h_prime(al, t)
        if t - step > 0:
            t -= step
    return t


def _gap_from_t(params: CAlphaParams, t: float) -> float:
    fp = (1.0 + params.alpha) * t ** params.alpha
    return fp * fp / (1.0 + fp * fp)


def calpha_critical_param(params: CAlphaParams, t: float) -> CriticalSample:
    """Exact (d, chi) sample at parameter t > 0."""
    if t <= 0:
        raise GeometryError("t must be positive")
    fp = (1.0 + params.alpha) * t ** params.alpha
    d = t * math.sqrt(1.0 + 1.0 / (fp * fp))
    chi = 1.0 / math.sqrt(fp * fp + 1.0)
    return CriticalSample(t=t, d=d, chi=chi, v=calpha_h(params, t),
                          one_minus_chi_sq=_gap_from_t(params, t))


def _d_of_t(params: CAlphaParams, t: float) -> float:
    fp = (1.0 + params.alpha) * t ** params.alpha
    return t * math.sqrt(1.0 + 1.0 / (fp * fp))


def calpha_t_of_d(params: CAlphaParams, d: float) -> float:
    """Invert the strictly increasing map t -> d(t)."""
    if d <= 0:
        raise GeometryError("d must be positive")
    al = params.alpha
    if al == 0.0:
        return d / math.sqrt(2.0)
    # small-t asymptote d ~ t^(1-alpha)/(1+alpha) gives the initial scale
    guess = ((1.0 + al) * d) ** (1.0 / (1.0 - al))
    lo = hi = min(guess, d)
    while _d_of_t(params, lo) > d:
        lo *= 0.5
    while _d_of_t(params, hi) < d:
        hi *= 2.0
    if lo == hi:
        return lo
    return brentq(lambda u: _d_of_t(params, u) - d, lo, hi,
                  rtol=4 * np.finfo(float).eps, xtol=1e-300)


def calpha_chi_exact(params: CAlphaParams, d: float) -> float:
    """chi at distance d, via inversion of d(t)."""
    t = calpha_t_of_d(params, d)
    fp = (1.0 + params.alpha) * t ** params.alpha
    return 1.0 / math.sqrt(fp * fp + 1.0)


def calpha_gap_exact(params: CAlphaParams, d: float) -> float:
    """1 - chi(d)^2, computed stably as f'^2/(1+f'^2)."""
    t = calpha_t_of_d(params, d)
    return _gap_from_t(params, t)


def calpha_asymptotic_gap(params: CAlphaParams, d: float) -> float:
    """Leading term of 1 - chi(d)^2 as d -> 0."""
    if params.alpha == 0.0:
        raise GeometryError("asymptotic form requires alpha > 0")
    if d <= 0:
        raise GeometryError("d must be positive")
    al = params.alpha
    return (1.0 + al) ** (2.0 / (1.0 - al)) * d ** (2.0 * al / (1.0 - al))


def calpha_chi_derivative_asymptotic(params: CAlphaParams, d: float) -> float:
    """Leading term of chi'(d) as d -> 0 (constant when alpha = 1/3)."""
    if params.alpha == 0.0:
        raise GeometryError("asymptotic form requires alpha > 0")
    if d <= 0:
        raise GeometryError("d must be positive")
    al = params.alpha
    coeff = -al * (1.0 + al) ** (2.0 / (1.0 - al)) / (1.0 - al)
    return coeff * d ** ((3.0 * al - 1.0) / (1.0 - al))


def calpha_sweep(params: CAlphaParams, t_min: float, t_max: float,
                 n: int) -> list[CriticalSample]:
    """n exact samples on a log-uniform t grid."""
    if not (0 < t_min < t_max):
        raise GeometryError("need 0 < t_min < t_max")
    if n < 2:
        raise GeometryError("need at least 2 samples")
    ts = np.geomspace(t_min, t_max, n)
    return [calpha_critical_param(params, float(t)) for t in ts]


def sweep_csv(params: CAlphaParams, t_min: float, t_max: float,
              n: int) -> str:
    """Oracle sweep as CSV; the asymptotic column is nan when alpha = 0."""
    lines = ["t,d,chi,v,one_minus_chi_sq,asymptotic_gap"]
    for s in calpha_sweep(params, t_min, t_max, n):
        if params.alpha > 0:
            asym = calpha_asymptotic_gap(params, s.d)
        else:
            asym = float("nan")
        lines.append(f"{s.t:.17g},{s.d:.17g},{s.chi:.17g},{s.v:.17g},"
                     f"{s.one_minus_chi_sq:.17g},{asym:.17g}")
    return "\n".join(lines) + "\n"
