"""Exact-arithmetic toolkit for sublattice-free convex lattice polygons."""

from .core import (
    E1,
    E2,
    ORIGIN,
    AffineMap,
    LatticeError,
    Mat2,
    StepMeasures,
    Sublattice,
    Vec,
    invariant_factors,
    primitive_to,
    smith_normal_form,
    steps,
)
from .polygon import (
    BoundingStats,
    DegenerateHullError,
    GeometryError,
    Line,
    PickResult,
    Polygon,
    Segment,
    apply_affine,
    bounding_stats,
    convex_hull,
    lattice_points_in,
    line_splits,
    pick_identity,
    polygon_free_of,
    segment_splits,
)
from .reduction import (
    ClassificationError,
    DiameterWitness,
    NormalizationResult,
    NotLatticeFreeError,
    TypeTag,
    check_diameter_slab_bound,
    check_split_exclusion,
    classify_type,
    lattice_diameter,
    satisfies_type,
    slab_normalize,
)
from .slopes import (
    CheckReport,
    Frame,
    MaximalSlopes,
    Slope,
    SlopeProfile,
    check_profile_ledger,
    check_projection_bound,
    check_step_bounds,
    check_sublattice_projection_bound,
    check_width_bound,
    forms_small_angle,
    frame_splits,
    frame_splits_maximal,
    maximal_slopes,
    slope_profile,
    validate_slope,
)
from .verify import (
    SearchBox,
    VerificationReport,
    check_pentagon_parity,
    check_type_vertex_bound,
    construct_extremal,
    critical_vertex_count,
    enumerate_free_polygons,
    type_ii_bound_pipeline,
    verify_vertex_threshold,
)

__version__ = "0.1.0"
