"""helixwarp: trajectory-geometry diagnostics for axisymmetric swirling flows
with an oscillating through-flow.

The package evaluates closed-form axisymmetric velocity fields on a truncated
cylinder, integrates particle trajectories and frozen-time streamlines,
reparameterizes curves by axial and arc length, builds Frenet-Serret frames
and moving-frame charts, and checks the pressure-curvature identities and
scaling ratios that tie the flow geometry to the through-flow profile.
"""

from .errors import (AxisTouchError, ChartDomainError, ConfigError,
                     DomainError, EmptyWindowError, HelixwarpError,
                     InvertibilityError, PreconditionError, StagnationError,
                     UnilateralViolationError)
from .flux import (FluxProfile, FluxWindow, OscillatingFlux, PowerLawFlux,
                   UniformFlux, eval_flux, find_flux_windows,
                   verify_flux_derivatives, window_condition)
from .field import (AxisymmetricField, ComponentJet, CylinderDomain,
                    FieldJet, FieldResidual, GaussianSwirl, LinearSwirl,
                    StreamFunctionField, SwirlColumnField, UniformAxialField,
                    divergence_residual, eval_field, euler_residual,
                    swirl_transport_residual)
from .trajectory import (Curve, CurveParam, CurveSample, Deformation2D,
                         Deformation2DSeries, Seed, axis_length_rates,
                         deformation_2d, integrate_2d, integrate_time,
                         reparam_arc_length, reparam_axis_length)
from .geometry import (FrenetFrame, MovingFrameChart, frenet_analytic_column,
                       frenet_from_curve, moving_frame_chart,
                       theta_derivatives)
from .streamline import (InflowPropagation, ProfileReport, ProfileThresholds,
                         StreamlineMap, build_streamline_map,
                         inflow_propagation, profile_report,
                         reconstruct_velocity, trace_streamline)
from .diagnostics import (FdSpec, FrameDerivativeCheck, RotationResidualReport,
                          ScalingSeries, SignConvention, SwirlAlignmentSeries,
                          TangentialRateCheck, ThetaScalingSeries,
                          dominance_table, frame_derivative_check,
                          offset_rate_derivative, rotation_residual,
                          scaling_series, speed_rate, speed_rate_via_relaunch,
                          swirl_alignment_series, tangential_rate_check,
                          theta_scaling_check)

__version__ = "0.1.0"
