"""Majorization, barycenters, and convexity inequalities on spaces of
nonpositive curvature and the 1-D Wasserstein space."""

from .barycenter import (
    BarycenterResult,
    DiscreteMeasure,
    barycenter,
    discrete_measure,
    mean_contraction_check,
    objective,
    variance_inequality_check,
)
from .geometry import (
    Euclidean,
    HalfPlane,
    Point,
    Product,
    Space,
    Spd,
    TangentVector,
    Wasserstein1D,
    distance,
    exp_map,
    geodesic_point,
    log_map,
    midpoint,
    point,
    validate_point,
)
from .inequalities import (
    CheckReport,
    ConvexFunctional,
    builtin_registry,
    check_dispersion,
    check_distance_weak_majorization,
    check_entropy_product,
    check_gauge,
    check_geodesic_convexity,
    check_jensen,
    check_schur,
    check_convex_order,
    fuzz_suite,
)
from .kernels import NUMBA_ENABLED
from .lpcore import LinearProgram, LpOutcome, feasibility, lp_solve, positive_support_matching
from .measures1d import DiscreteMeasure1D, make_measure
from .stochastic import (
    BirkhoffDecomposition,
    MajorizationCertificate,
    RadoProbeResult,
    birkhoff_decompose,
    decide_majorization_euclidean,
    hlp_majorizes,
    pushforward_weights,
    rado_probe,
    synthesize_majorized,
    verify_majorization,
    weakly_majorizes,
)
from .wasserstein import (
    Coupling,
    barycenter_1d,
    w2_lp,
    w2_quantile,
    w_functional_registry,
    w_majorization,
)

__version__ = "0.1.0"
