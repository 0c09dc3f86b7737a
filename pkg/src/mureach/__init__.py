"""Generalized gradients of distance functions, critical functions and
mu-reach for planar shapes, with an exact oracle for the |t|^(1+alpha)
curve family."""

from .calpha import (CAlphaParams, CriticalSample, calpha_asymptotic_gap,
                     calpha_chi_derivative_asymptotic, calpha_chi_exact,
                     calpha_critical_param, calpha_gap_exact, calpha_h,
                     calpha_h_inv, calpha_sweep, calpha_t_of_d, graph_curve)
from .critical import (CriticalBin, CriticalCurve, EstimatorConfig,
                       MuReachResult, critical_csv, critical_function,
                       fit_power_law, mu_reach, verify_holder_bound)
from .enclosing_ball import (Ball, DiameterPair, diameter, jung_slack,
                             min_enclosing_ball)
from .geometry import (DimensionMismatch, EndpointProjectionWarning,
                       GeometryError, GraphCurve, OnShapePoint,
                       ParametricCurve, PointCloud, ProjectionSet, Shape,
                       densify, eval_distance, projection_set, sample_shape)
from .gradient import (GradientInfo, generalized_gradient,
                       gradient_norm_from_radius, jung_lower_bound,
                       semi_angle)
from .shapes import (make_calpha_compact, make_parabola, make_triangle_wave,
                     shape_from_spec, triangle_wave_layout,
                     triangle_wave_probes)

__version__ = "0.1.0"
