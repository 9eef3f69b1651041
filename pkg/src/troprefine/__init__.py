"""Rigid tropical plane curves, Block-Göttsche refined counts and their higher-genus series."""
from .algebra import HalfLaurent, TruncatedSeries, laurent_eval, laurent_to_series, series_divide, sine_numerator_series
from .enumeration import (
    EnumerationResult,
    FixedEndData,
    enumerate_curves,
    enumerate_curves_fixed_ends,
    enumerate_types,
    generate_point_config,
    realize_type,
)
from .errors import *  # noqa: F401,F403
from .fan import CountingProblem, IntVec2, dual_polygon, projective_plane, target_genus, validate_balanced
from .gw import (
    GWSeries,
    QuadrilateralInstance,
    extract_invariant,
    gw_generating_series,
    gw_series_fixed_ends,
    quad_identity_check,
    recursion_closure_check,
    series_from_refined_count,
    vertex_contribution,
)
from .oracles import OracleReport, appendix_relation_check, kontsevich_rational_count
from .tropical import CombinatorialType, PointConfiguration, RealizedCurve, bg_multiplicity, curve_multiplicity

__version__ = "0.1.0"
