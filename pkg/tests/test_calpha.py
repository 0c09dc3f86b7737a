"""Exact analytic oracle for the |t|^(1+alpha) curve family."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mureach import (CAlphaParams, calpha_asymptotic_gap,
                     calpha_chi_derivative_asymptotic, calpha_chi_exact,
                     calpha_critical_param, calpha_gap_exact, calpha_h,
                     calpha_h_inv, calpha_sweep, calpha_t_of_d,
                     eval_distance, generalized_gradient, graph_curve)
from mureach.calpha import sweep_csv

HALF = CAlphaParams(alpha=0.5, a=8.0)


def test_axis_height_closed_form():
    # h(t) = t^(1-alpha)/(1+alpha) + t^(1+alpha)
    assert calpha_h(HALF, 1.0) == pytest.approx(5.0 / 3.0, abs=1e-15)
    assert calpha_h(HALF, 4.0) == pytest.approx(28.0 / 3.0, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(1e-6, 7.5))
def test_axis_height_round_trip(alpha, t):
    params = CAlphaParams(alpha=alpha, a=8.0)
    v = calpha_h(params, t)
    assert calpha_h_inv(params, v) == pytest.approx(t, rel=1e-12)


def test_critical_sample_at_unit_param():
    # f' = 3/2 at t = 1: d = sqrt(13)/3, chi = 2/sqrt(13)
    s = calpha_critical_param(HALF, 1.0)
    assert s.d == pytest.approx(math.sqrt(13.0) / 3.0, abs=1e-15)
    assert s.chi == pytest.approx(2.0 / math.sqrt(13.0), abs=1e-15)
    assert s.one_minus_chi_sq == pytest.approx(9.0 / 13.0, abs=1e-15)
    assert s.v == pytest.approx(calpha_h(HALF, 1.0), abs=1e-15)


def test_critical_sample_alpha_three_quarters():
    params = CAlphaParams(alpha=0.75, a=8.0)
    s = calpha_critical_param(params, 1.0)
    assert s.d == pytest.approx(math.sqrt(65.0) / 7.0, abs=1e-15)
    assert s.chi == pytest.approx(4.0 / math.sqrt(65.0), abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(1e-5, 7.5))
def test_t_of_d_round_trip(alpha, t):
    params = CAlphaParams(alpha=alpha, a=8.0)
    d = calpha_critical_param(params, t).d
    assert calpha_t_of_d(params, d) == pytest.approx(t, rel=1e-11)


def test_chi_exact_decreasing_in_d():
    ds = np.geomspace(1e-4, 1.0, 50)
    chis = [calpha_chi_exact(HALF, d) for d in ds]
    assert all(a > b for a, b in zip(chis, chis[1:]))
    assert all(0.0 < c < 1.0 for c in chis)


def test_gap_asymptotics_small_d():
    # 1 - chi^2 ~ (1+alpha)^(2/(1-alpha)) d^(2 alpha/(1-alpha))
    for alpha in (0.25, 0.5, 0.75):
        params = CAlphaParams(alpha=alpha, a=8.0)
        d = 1e-10
        ratio = calpha_gap_exact(params, d) / calpha_asymptotic_gap(params, d)
        assert ratio == pytest.approx(1.0, rel=1e-4)


def test_asymptotic_gap_closed_form():
    # alpha = 1/2: (3/2)^4 d^2
    assert calpha_asymptotic_gap(HALF, 0.01) == pytest.approx(
        (1.5 ** 4) * 1e-4, rel=1e-14)


def test_chi_derivative_constant_at_alpha_one_third():
    # exponent (3a-1)/(1-a) vanishes: chi' -> -(1/2)(4/3)^3 for all d
    params = CAlphaParams(alpha=1.0 / 3.0, a=8.0)
    expect = -0.5 * (4.0 / 3.0) ** 3
    for d in (1e-6, 1e-3, 1e-1):
        assert calpha_chi_derivative_asymptotic(params, d) == pytest.approx(
            expect, rel=1e-12)


def test_chi_derivative_regimes():
    lo = CAlphaParams(alpha=0.25, a=8.0)
    hi = CAlphaParams(alpha=0.75, a=8.0)
    # blows up below the 1/3 threshold, vanishes above it
    assert abs(calpha_chi_derivative_asymptotic(lo, 1e-8)) > 1e2
    assert abs(calpha_chi_derivative_asymptotic(hi, 1e-8)) < 1e-8


def test_oracle_matches_ambient_solver():
    shape = graph_curve(HALF)
    for t in (0.01, 0.3, 1.0, 3.0):
        s = calpha_critical_param(HALF, t)
        p = (0.0, s.v)
        assert eval_distance(shape, p) == pytest.approx(s.d, rel=1e-12)
        info = generalized_gradient(shape, p)
        assert info.grad_norm == pytest.approx(s.chi, abs=1e-12)
        assert len(info.projections) == 2


def test_sweep_csv_format():
    text = sweep_csv(HALF, 0.5, 1.0, 3)
    lines = text.strip().split("\n")
    assert lines[0] == "t,d,chi,v,one_minus_chi_sq,asymptotic_gap"
    assert len(lines) == 4
    last = [float(x) for x in lines[-1].split(",")]
    assert last[0] == 1.0
    assert last[1] == pytest.approx(math.sqrt(13.0) / 3.0, rel=1e-15)
    assert last[2] == pytest.approx(2.0 / math.sqrt(13.0), rel=1e-15)


def test_sweep_alpha_zero_has_no_asymptotic_column():
    params = CAlphaParams(alpha=0.0, a=8.0)
    lines = sweep_csv(params, 0.1, 1.0, 5).strip().split("\n")[1:]
    rows = [[float(x) for x in line.split(",")] for line in lines]
    assert all(math.isnan(r[5]) for r in rows)
    # the corner t |t|: chi = 1/sqrt(2) at every axis point
    assert all(r[2] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
               for r in rows)


def test_invalid_alpha_rejected():
    from mureach import GeometryError
    with pytest.raises(GeometryError):
        CAlphaParams(alpha=1.0, a=8.0)
    with pytest.raises(GeometryError):
        CAlphaParams(alpha=-0.1, a=8.0)
