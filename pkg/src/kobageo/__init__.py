"""Numerical laboratory for Kobayashi distances on bounded domains in C^d."""

__version__ = "0.1.0"

from .domain import (  # noqa: E402
    Domain, boundary_distance, contains, convexity_probe, domain_from_spec, line_radius,
    make_builtin, nearest_boundary_point,
)
from .errors import KobageoError, NumericalError, ValidationError  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .metric import estimate_M_shell, metric_bounds  # noqa: E402
from .paths import (  # noqa: E402
    PathBudget, SampledPath, almost_geodesic_between, estimate_distance, exact_model_geodesic,
    kobayashi_length, verify_almost_geodesic,
)
from .visibility import (  # noqa: E402
    GraphMap, boundary_pair_divergence_probe, gromov_limsup_probe, graph_subspace_geodesic,
    visibility_probe,
)
from .criteria import (  # noqa: E402
    GrowthFunction, evl_check, example_claims_check, goldilocks_check,
)
from .dynamics import (  # noqa: E402
    HoloMap, classify_wolff_denjoy, iterate_orbit, limit_constancy_probe,
)

__all__ = [
    "BACKEND", "Domain", "GraphMap", "GrowthFunction", "HoloMap", "KobageoError",
    "NumericalError", "PathBudget", "SampledPath", "ValidationError",
    "almost_geodesic_between", "boundary_distance", "boundary_pair_divergence_probe",
    "classify_wolff_denjoy", "contains", "convexity_probe", "domain_from_spec",
    "estimate_M_shell", "estimate_distance", "evl_check", "exact_model_geodesic",
    "example_claims_check", "goldilocks_check", "graph_subspace_geodesic",
    "gromov_limsup_probe", "iterate_orbit", "kobayashi_length", "limit_constancy_probe",
    "line_radius", "make_builtin", "metric_bounds", "nearest_boundary_point",
    "verify_almost_geodesic", "visibility_probe",
]
