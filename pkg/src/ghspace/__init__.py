"""Exact Gromov-Hausdorff distance, realizations and geodesics for finite metric spaces."""

from .correspondence import (
    CapExceeded,
    Correspondence,
    Relation,
    distortion,
    enumerate_correspondences,
    gh_oracle,
    is_correspondence,
    relation_distance,
)
from .hausdorff import hausdorff, hausdorff_between_parts, one_sided, point_to_set
from .metric_core import (
    FiniteMetricSpace,
    FinitePseudoMetricSpace,
    MetricError,
    Subset,
    diameter,
    find_isometry,
    is_isometric,
    quotient,
    subspace,
    validate_metric,
    validate_pseudometric,
)
from .solver import GHResult, NotExact, gh_bounds, gh_exact

__version__ = "0.1.0"
