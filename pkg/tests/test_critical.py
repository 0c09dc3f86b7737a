"""Critical-function estimators, mu-reach, fits and the Hölder check."""
import math

import numpy as np
import pytest

from mureach import (CAlphaParams, CriticalBin, CriticalCurve,
                     EstimatorConfig, GeometryError, calpha_chi_exact,
                     critical_csv, critical_function, fit_power_law,
                     graph_curve, make_parabola, mu_reach,
                     verify_holder_bound)

AXIS = ((0.0, 0.0), (0.0, 1.0))


def test_config_defaults_and_validation():
    cfg = EstimatorConfig(d_min=0.1, d_max=0.5, n_bins=10)
    assert cfg.h == pytest.approx(0.4 / 400.0)
    assert not cfg.log_bins
    assert EstimatorConfig(d_min=0.01, d_max=0.5, n_bins=10).log_bins
    assert len(cfg.edges()) == 11
    assert len(cfg.centers()) == 10
    with pytest.raises(GeometryError):
        EstimatorConfig(d_min=0.5, d_max=0.1, n_bins=10)
    with pytest.raises(GeometryError):
        EstimatorConfig(d_min=0.1, d_max=0.5, n_bins=1)
    with pytest.raises(GeometryError):
        EstimatorConfig(d_min=0.1, d_max=0.5, n_bins=10, strategy="magic")


def test_axis_estimator_matches_exact_oracle():
    params = CAlphaParams(alpha=0.5, a=8.0)
    shape = graph_curve(params)
    cfg = EstimatorConfig(d_min=0.01, d_max=0.5, n_bins=12, strategy="axis",
                          symmetry_axis=AXIS)
    curve = critical_function(shape, cfg)
    assert len(curve.bins) == 12
    for b in curve.bins:
        assert b.chi == pytest.approx(calpha_chi_exact(params, b.d),
                                      abs=1e-10)


def test_axis_estimator_requires_axis():
    with pytest.raises(GeometryError):
        critical_function(make_parabola(2.0), EstimatorConfig(
            d_min=0.1, d_max=0.4, n_bins=5, strategy="axis"))


def test_grid_estimator_parabola_all_regular():
    # below the focus-height transition every level set has chi = 1
    shape = make_parabola(2.0)
    cfg = EstimatorConfig(d_min=0.05, d_max=0.3, n_bins=10, strategy="grid",
                          grid_resolution=2e-3,
                          window=((-1.5, 1.5), (-0.5, 0.45)))
    curve = critical_function(shape, cfg)
    for b in curve.bins:
        assert b.chi == 1.0
        assert b.one_minus_chi_sq == 0.0
        assert b.n_samples > 0


def test_grid_estimator_sees_medial_axis():
    # above v = 1/2 the parabola's axis carries two projections
    shape = make_parabola(2.0)
    cfg = EstimatorConfig(d_min=0.55, d_max=0.95, n_bins=8, strategy="grid",
                          grid_resolution=2e-3,
                          window=((-2.0, 2.0), (-0.7, 1.3)))
    curve = critical_function(shape, cfg)
    axis_cfg = EstimatorConfig(d_min=0.55, d_max=0.95, n_bins=8,
                               strategy="axis", symmetry_axis=AXIS)
    axis_curve = critical_function(shape, axis_cfg)
    for bg, ba in zip(curve.bins, axis_curve.bins):
        assert bg.chi < 1.0
        # grid takes the bin minimum (upper edge); axis samples the center
        assert bg.chi <= ba.chi + 1e-6
        # half a bin of 0.05 at slope |chi'| ~ 1.4 allows ~0.035
        assert bg.chi == pytest.approx(ba.chi, abs=0.06)


def _synthetic_curve(ds, chis):
    ds = np.asarray(ds, float)
    bins = tuple(
        CriticalBin(d=float(d), chi=float(c),
                    one_minus_chi_sq=float(max(0.0, 1.0 - c * c)),
                    n_samples=1, min_point=np.zeros(2))
        for d, c in zip(ds, chis))
    edges = np.concatenate([[ds[0] - (ds[1] - ds[0]) / 2],
                            (ds[:-1] + ds[1:]) / 2,
                            [ds[-1] + (ds[-1] - ds[-2]) / 2]])
    return CriticalCurve(bins=bins, edges=edges, estimator=None)


def test_mu_reach_first_violation():
    curve = _synthetic_curve([0.1, 0.2, 0.3, 0.4],
                             [0.95, 0.92, 0.60, 0.99])
    res = mu_reach(curve, 0.9)
    assert not res.censored
    assert res.value == pytest.approx(0.25)  # lower edge of the 0.3 bin


def test_mu_reach_censored():
    curve = _synthetic_curve([0.1, 0.2, 0.3], [0.99, 0.98, 0.97])
    res = mu_reach(curve, 0.9)
    assert res.censored
    assert res.value == pytest.approx(0.35)  # upper edge of the scan


def test_mu_reach_validates_mu():
    curve = _synthetic_curve([0.1, 0.2, 0.3], [1.0, 1.0, 1.0])
    with pytest.raises(GeometryError):
        mu_reach(curve, 1.5)


def test_fit_power_law_recovers_exact_law():
    ds = np.geomspace(0.01, 0.1, 20)
    gaps = 5.0625 * ds ** 2
    chis = np.sqrt(1.0 - np.clip(gaps, 0.0, 1.0))
    curve = _synthetic_curve(ds, chis)
    # overwrite the gap column with the exact values (no cancellation)
    bins = tuple(
        CriticalBin(d=b.d, chi=b.chi, one_minus_chi_sq=float(g),
                    n_samples=1, min_point=b.min_point)
        for b, g in zip(curve.bins, gaps))
    curve = CriticalCurve(bins=bins, edges=curve.edges, estimator=None)
    fit = fit_power_law(curve, 0.01, 0.1)
    assert fit["exponent"] == pytest.approx(2.0, abs=1e-12)
    assert fit["constant"] == pytest.approx(5.0625, rel=1e-12)
    assert fit["r2"] == pytest.approx(1.0, abs=1e-12)


def test_fit_power_law_needs_resolved_bins():
    curve = _synthetic_curve([0.1, 0.2, 0.3], [1.0, 1.0, 1.0])
    with pytest.raises(GeometryError):
        fit_power_law(curve, 0.05, 0.35)


def test_holder_check_on_half_power_curve():
    # gap^(1/2) / d -> (3/2)^2 = 2.25 as d -> 0; bounded on the axis
    params = CAlphaParams(alpha=0.5, a=8.0)
    shape = graph_curve(params)
    from mureach.calpha import calpha_h, calpha_t_of_d
    ds = np.geomspace(1e-4, 0.5, 25)
    samples = [(0.0, calpha_h(params, calpha_t_of_d(params, d)))
               for d in ds]
    out = verify_holder_bound(shape, 0.5, samples, symmetry_axis=AXIS)
    assert out["max_ratio"] <= 2.26
    assert out["max_ratio"] == pytest.approx(2.25, rel=0.01)
    assert len(out["samples"]) == len(ds)


def test_holder_check_requires_signal():
    shape = make_parabola(2.0)
    with pytest.raises(GeometryError):
        verify_holder_bound(shape, 0.5, [(0.0, 0.1), (0.0, 0.2)])


def test_critical_csv_round_trip():
    curve = _synthetic_curve([0.1, 0.2], [0.9, 0.8])
    text = critical_csv(curve)
    lines = text.strip().split("\n")
    assert lines[0] == "d,chi,one_minus_chi_sq,n_samples"
    row = lines[1].split(",")
    assert float(row[0]) == 0.1
    assert float(row[1]) == 0.9
    assert int(row[3]) == 1
