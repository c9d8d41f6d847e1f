"""Entropic uncertainty and irreality measures for bipartite quantum states.

The library builds finite-dimensional bipartite density matrices, applies
dephasing and monitoring channels, evaluates entropic uncertainty and
irreality quantities, and checks the identities and inequalities relating
them, with campaign and slack-minimization tooling on top.
"""

__version__ = "0.1.0"

from .channels import DephasedDecomposition, dephase, dephased_decomposition, monitor, monitor_n
from .entropies import (
    EntropyProfile,
    cond_entropy,
    irreality,
    profile,
    relative_entropy,
    shannon,
    uncertainty,
    vn_entropy,
)
from .errors import (
    BadDimension,
    ConfigError,
    DimensionMismatch,
    InvariantViolation,
    NoConvergence,
    NotDistribution,
    NotHermitian,
    NotNormalized,
    OutOfRange,
    QirError,
    TheoremViolation,
)
from .explore import (
    CampaignConfig,
    CampaignResult,
    MinimizeResult,
    SweepTrace,
    minimize_slack,
    monitoring_sweep,
    run_campaign,
    run_campaign_records,
)
from .linalg import EigenDecomposition, dagger, herm_eig, kron, matmul, partial_trace_a, partial_trace_b
from .relations import (
    IdentityReport,
    InequalityReport,
    RELATIONS,
    check_combined_ur,
    check_constraint1,
    check_constraint2,
    check_irreality_ur,
    check_memory_ur,
    check_mixed_ur,
    check_monitor_bound,
    evaluate_relations,
    mu_bound,
    mu_overlap,
    reality_change,
)
from .states import (
    BipartiteState,
    ObservableBasis,
    computational_basis,
    fourier_basis,
    haar_random_pure,
    max_entangled,
    max_mixed,
    pure_from_schmidt,
    random_basis,
    random_mixed,
    werner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
