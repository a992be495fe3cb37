"""Weighted composition operators on Fock spaces.

Classification (unbounded / bounded / compact), exact Gaussian and
quadrature norms, closed-form operator iterates, and numerical evidence
reports for the dynamics of these operators.
"""

from ._core import (  # noqa: F401
    AffineSymbol,
    ExpQuadratic,
    FockContext,
    FockError,
    IterateCoeffs,
    PolyTimesExpQuad,
    TaylorSeries,
    TaylorTail,
    WeightedCompOp,
    __version__,
    adjoint_on_kernel,
    angle_criterion_ratio,
    apply,
    classify,
    decay_profile,
    eval,
    expm1_quadratic_over_z,
    fock_norm,
    isometry_report,
    iterate_apply_closed,
    iterate_apply_product,
    iterate_coeffs,
    kernel_norm,
    limit_function,
    load_operator,
    log_abs_eval,
    m_z,
    max_modulus,
    membership,
    mz_scan,
    operator_to_json,
    order_type,
    phi_n,
    run_acceptance,
    scaled_iterate_norms,
    square,
    supercyclicity_report,
)
