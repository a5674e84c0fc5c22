"""Entropy-energy functional over stochastic matrices and its numerical verification."""
from .functionals import (
    NEG_XLOGX,
    BoundResult,
    HFunction,
    b_rho,
    check_stochastic,
    energy,
    entropy,
    eta,
    f_of_r,
    f_prime,
    g_c,
    g_c_gradient,
    g_c_uniform,
    require_hypotheses,
    hypothesis_flags,
    psi_of,
    q_rho,
    remark_y,
    row_h_total,
    s_star,
    squared_norm,
    theorem8_bound,
    uniform_matrix,
    zeta,
)
from .optimize import RowMaximum, maximize_row, polish_g_c, sample_birkhoff, sample_row_stochastic
from .verify import (
    INEQ_TOL,
    Psi,
    counterexample_check,
    counterexample_matrix,
    expo_gap_scan,
    expo_gap_slack,
    lemma11_bound,
    neveruse_report,
    remark_matrix,
    richardson_third_derivative,
    eta_zeta_identities,
    remark_optimality,
    row_decomposition_check,
    verify_expo_gap,
    verify_f_third_derivative,
    verify_lemma11,
    verify_lemma12,
    verify_neveruse,
    verify_theorem7,
)
