"""Minkowski arrangements of homothets: predicates, certificates, bounds and search oracles."""
from .arrangement import (
    Arrangement,
    Homothet,
    is_boundary_sequence,
    is_minkowski,
    is_pairwise_intersecting,
)
from .bodies import HPolytope, LinearFunctional, PBall, cube, norm, supporting_functional
from .bounds import (
    auto_N,
    bound_halpha,
    bound_minkowski,
    bound_sequence,
    pipeline_theorem1,
    pipeline_theorem2,
)
from .equivalence import (
    SlabSystem,
    TranslatePacking,
    packing_to_points,
    points_to_packing,
    verify_hull_exclusion,
)
from .errors import ArrangementError
from .extremal_search import (
    CandidatePool,
    cube_arrangement,
    direction_search_2d,
    max_clique_arrangement,
    pentagon_counterexample,
    sharpness_config,
)
from .lifting import build_pair_certificate, build_sequence_certificate, lift_arrangement
from .numeric import NumericMode, get_mode, numeric_mode, set_mode
from .report import VerificationReport, Violation
from .volumetrics import TranslateConfig, check_lemma_monotonicity, check_volume_identities, slice_volume

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "Homothet",
    "is_boundary_sequence",
    "is_minkowski",
    "is_pairwise_intersecting",
    "HPolytope",
    "LinearFunctional",
    "PBall",
    "cube",
    "norm",
    "supporting_functional",
    "auto_N",
    "bound_halpha",
    "bound_minkowski",
    "bound_sequence",
    "pipeline_theorem1",
    "pipeline_theorem2",
    "SlabSystem",
    "TranslatePacking",
    "packing_to_points",
    "points_to_packing",
    "verify_hull_exclusion",
    "ArrangementError",
    "CandidatePool",
    "cube_arrangement",
    "direction_search_2d",
    "max_clique_arrangement",
    "pentagon_counterexample",
    "sharpness_config",
    "build_pair_certificate",
    "build_sequence_certificate",
    "lift_arrangement",
    "NumericMode",
    "get_mode",
    "numeric_mode",
    "set_mode",
    "VerificationReport",
    "Violation",
    "TranslateConfig",
    "check_lemma_monotonicity",
    "check_volume_identities",
    "slice_volume",
]
