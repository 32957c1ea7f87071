"""Exact Graev quasi-prenorms and quasi-pseudometrics on free and free
Abelian group words over finite quasi-pseudometric spaces, with the
accompanying quasi-uniform machinery and extension operator."""

from .words import (
    NEUTRAL,
    AbelianWord,
    Point,
    Word,
    abelianize,
    conjugate,
    enumerate_paddings,
    invert,
    is_almost_irreducible,
    multiply,
    parse_word,
    reduce,
)
from .qpspace import (
    QPM,
    LetterMetric,
    NegativeEntry,
    NonpositiveRadius,
    NonzeroDiagonal,
    TriangleViolation,
    UnboundedInput,
    ball_relation,
    extend_metric,
    frink_metrize,
    min_plus_closure,
    sandwich_holds,
    scale_clip,
    validate_qpm,
)
from .quniform import (
    Entourage,
    EntourageChain,
    FiniteTopology,
    GroundMismatch,
    InvalidChain,
    InvalidTopology,
    NotAnEmbedding,
    NotASubset,
    NotInFilter,
    PreconditionViolation,
    QuasiUniformity,
    chain_from,
    chain_product_check,
    compose,
    diagonal,
    discrete_topology,
    fine_quniformity,
    full_relation,
    indiscrete_topology,
    induced_topology,
    inverse,
    is_quasi_uniform_wrt,
    restrict,
    subspace_check,
    subspace_topology,
    topology_from_opens,
)
from .graev import (
    AbelianScheme,
    NeutralInput,
    NormResult,
    NotReduced,
    OddLength,
    PairDecomposition,
    Scheme,
    abelian_norm_matching,
    abelian_norm_oracle,
    ball_membership,
    decompose_abelian,
    enumerate_abelian_schemes,
    enumerate_schemes,
    graev_dist,
    graev_dist_abelian,
    norm_dp,
    norm_dp_result,
    norm_oracle,
    scheme_cost,
    scheme_factorization,
)
from .extend import (
    EmbeddingInstance,
    ExtensionResult,
    NotEmbedded,
    NotQuasiUniform,
    embedding_suite,
    extend_qpm,
    non_extendability_witness,
    series_metric,
)

__version__ = "0.1.0"
