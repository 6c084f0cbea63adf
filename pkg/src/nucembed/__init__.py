"""Norms, nuclear norms and embedding verdicts for mixed-norm sequence spaces."""
from .exponents import INF, ONE, TWO, Exponent, ExponentError, conjugate, parse_exponent, star_exponent, tong_exponent
from .spaces import BlockVector, GrowthFamily, MixedSpaceSpec, SpecError, dual_spec, holder_extremizer, holder_pairing, mixed_norm
from .diagonal import (
    DenseOperator,
    DiagonalOperator,
    EmbeddingNorm,
    NuclearCertificate,
    diag_nuclear_exact,
    diag_op_norm_exact,
    diagonal_part,
    embedding_nuclear_norm,
    factorized_nuclear_upper,
    nuclear_from_sup_source,
    rank_one_upper,
    tong_diag_nuclear,
)
from .oracles import dense_op_norm_oracle, diag_nuclear_oracle

from .geometry import (
    BExponentEstimate,
    BoxPackProfile,
    DomainSpec,
    GeometryError,
    box,
    boxpack_profile,
    comb_domain,
    count_inner_cubes,
    cube_contained,
    estimate_b,
    estimate_b_via_measure,
    log_cusp,
    power_cusp,
)
from .classify import (
    ClassifierError,
    DomainInfo,
    EmbeddingVerdict,
    FunctionSpaceParams,
    classify_bounded_domain,
    classify_quasi_bounded,
    classify_sequence_embedding,
    delta,
    verdict_report,
)

__version__ = "0.1.0"
