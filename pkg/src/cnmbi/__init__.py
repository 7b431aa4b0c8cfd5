"""Estimate the number of clusters by matching density peaks to K-means centroids.

Low-confidence boundary points are filtered first; then, for every candidate
``k``, the ``k`` strongest density peaks are paired one-to-one with the ``k``
K-means centroids and the mean squared pair distance is recorded. The
estimate is the ``k`` with the smallest loss.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .boundary import BoundaryProfile, boundary_degree, core_subset, verify_projection_identity
from .datasets import Dataset, generate_blobs, generate_scenario, load_csv, save_csv
from .density import (
    CenterSet,
    DensityProfile,
    DistanceIndex,
    build_distance_index,
    density_centers,
    density_profile,
)
from .errors import ConfigError, DataError, DegenerateDataError
from .matching import CostMatrix, MatchingResult, build_cost_matrix, min_cost_matching
from .partition import kmeans_centers
from .sweep import SweepConfig, SweepReport, TrialsResult, estimate, run_trials

__all__ = [
    "BACKEND",
    "BoundaryProfile",
    "CenterSet",
    "ConfigError",
    "CostMatrix",
    "DataError",
    "Dataset",
    "DegenerateDataError",
    "DensityProfile",
    "DistanceIndex",
    "MatchingResult",
    "SweepConfig",
    "SweepReport",
    "TrialsResult",
    "boundary_degree",
    "build_cost_matrix",
    "build_distance_index",
    "core_subset",
    "density_centers",
    "density_profile",
    "estimate",
    "generate_blobs",
    "generate_scenario",
    "kmeans_centers",
    "load_csv",
    "min_cost_matching",
    "run_trials",
    "save_csv",
    "verify_projection_identity",
]
