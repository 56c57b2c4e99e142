"""Toric Bezier patches: blending functions, linear precision through
iterative proportional fitting, injectivity certificates, regular
triangulations and toric degenerations."""
from .blending import WeightVector, bernstein_weights, blend, patch_eval, toric_basis
from .configs import cube_config, curve_config, pinwheel_config, square_config, triangle_config
from .degeneration import (
    DegenerationSchedule,
    DistanceReport,
    converse_check,
    curve_bound_t0,
    curve_weights,
    degenerate_weights,
    patch_complex_distance,
)
from .errors import DomainError, ParseError, ToricPatchError
from .geometry import PointConfig, Polytope, convex_hull
from .injectivity import (
    CompatibilityVerdict,
    Status,
    certify_all_weights_injective,
    compatibility,
    jacobian_cb,
    projected_injectivity,
    sign_constancy_check,
)
from .ipf import IpfResult, homogenize, ipf_solve, preferred_blending
from .triangulation import (
    LiftingFunction,
    SimplicialComplexEmbedding,
    Triangulation,
    control_polytope,
    is_regular,
    perturb_lifting,
    realization_in_simplex,
    regular_triangulation,
)
from .variety import membership_test, phi_A, tautological_projection, weight_action

__version__ = "0.1.0"
