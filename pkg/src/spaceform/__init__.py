"""Verification engine for space-form curvature identities under
modified connections on almost contact metric structures."""

from .pointwise import (
    MODIFIED_KINDS,
    AmbientSpace,
    ConnectionKind,
    FormCoefficients,
    StructureValidation,
    curvature,
    frame_structure,
    nabla_phi_rhs,
    nabla_xi_rhs,
    sasakian_coeffs,
    standard_structure,
    validate_structure,
)
from .subspaces import (
    Subspace,
    SubspaceClass,
    anti_invariant_closed_forms,
    check_anti_invariant_split,
    check_normal_curvature,
    check_normality_RXYV,
    check_tangency_RXYZ,
    classify_subspace,
    decompose_phi,
    make_anti_invariant_subspace,
    make_invariant_subspace,
    make_mixed_subspace,
    normal_basis,
    normal_curvature_closed_form,
    normal_curvature_on_tangent,
    normal_slot_form,
    normal_bundle_witness_search,
    subspace_from_vectors,
    tangent_normal_split,
    theorem_suite,
    witness_search,
)
from .symbolic import (
    TensorExpr,
    covariant_differentiate,
    curvature_formula,
    curvature_from_difference,
    difference_tensor,
    evaluate,
    evaluate_scalar,
    expr_equal,
    normalize,
    serialize,
)
from .parser import ParseError, parse_expr, parse_scalar_expr, parse_vector_expr
from .harness import (
    ConfigError,
    RunConfig,
    emit_report,
    parse_config,
    run_all,
)

__version__ = "0.1.0"
