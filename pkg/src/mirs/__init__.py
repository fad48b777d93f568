"""Marginal instability rate sequences of matrix sets with joint spectral radius one."""

from .analysis import (
    CouplingResult,
    GrowthFit,
    JsrBounds,
    RegularityReport,
    coupling_sequence,
    envelope_constant,
    extremal_norm_estimate,
    fit_exponent,
    irreducibility_margin,
    jsr_bounds,
    regularity_report,
    sandwich_check,
)
from .constructions import (
    BlockCombineSpec,
    PairLift,
    block_combine,
    gz_family,
    harvey_pair,
    kron_power_set,
    kron_product_set,
    pair_lift,
    pj_gamma,
    pj_matrices,
    pj_triangular_split,
)
from .diophantine import (
    CFTheta,
    badness_check,
    bend_inequality_check,
    build_theta,
    pj_subsequence,
    pj_witness_indices,
    pj_witness_norm,
)
from .engine import (
    Certificate,
    EngineConfig,
    Frontier,
    MirsResult,
    compute_mirs,
    compute_mirs_pj,
    evaluate_witness,
    iterate_frontiers,
    mirs_upper_bound,
)
from .errors import *  # noqa: F401,F403
from .linalg import (
    MatrixSet,
    block_upper,
    jordan_block,
    kron,
    op_norm,
    rotation,
    spectral_radius,
)

__version__ = "0.1.0"
