"""jetfields: exact calculus of truncated power series, formal maps, and vector fields.

Everything is computed over the rationals with per-object precision
tracking: a jet of order N is a series known exactly through total
degree N, and each operation reports the largest order its result can
honestly claim.  On top of the series ring sit continuous formal maps
(with composition, inversion, and the Jacobian cocycles), formal vector
fields (with bracket, divergence, and pushforward), and a seeded
verification suite that exercises the structural identities tying them
together.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    JetfieldsError,
    NonConstantDivergence,
    NotAUnit,
    NotContinuous,
    NotNilpotent,
    OrderMismatch,
    ParseError,
    PrecisionExhausted,
    SingularMatrix,
)
from .fields import (
    Derivation,
    DivergenceClass,
    FieldGenParams,
    apply_derivation,
    bracket,
    centralizes_partials,
    classify_divergence,
    coordinate_frame,
    decompose_const_div,
    divergence,
    euler_field,
    partial_field,
    pushforward,
    random_divergence_free,
    random_field,
    zero_field,
)
from .jets import Jet, JetMatrix, Monomial, grlex_key
from .maps import (
    FormalMap,
    LinearPart,
    MapGenParams,
    apply,
    compose,
    exp_flow,
    identity_map,
    invert,
    is_automorphism,
    is_constant_jacobian,
    jacobian_det,
    jacobian_matrix,
    linear_map,
    matrix_inverse,
    random_automorphism,
    random_const_jacobian,
    random_shear,
    shear,
)
from .rationals import BACKEND, Q, as_rational
from .suite import (
    CHECK_IDS,
    CHECKS,
    CellResult,
    ControlResult,
    IdentityCheck,
    Outcome,
    SuiteConfig,
    TrialResult,
    VerificationReport,
    negative_control_map,
    rerun_payload,
    run_check,
    run_suite,
    trial_seed,
)
from .syntax import (
    format_field,
    format_map,
    format_matrix,
    format_series,
    parse_field,
    parse_map,
    parse_series,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CHECKS",
    "CHECK_IDS",
    "CellResult",
    "ConfigError",
    "ControlResult",
    "Derivation",
    "DimensionMismatch",
    "DivergenceClass",
    "FieldGenParams",
    "FormalMap",
    "IdentityCheck",
    "Jet",
    "JetMatrix",
    "JetfieldsError",
    "LinearPart",
    "MapGenParams",
    "Monomial",
    "NonConstantDivergence",
    "NotAUnit",
    "NotContinuous",
    "NotNilpotent",
    "OrderMismatch",
    "Outcome",
    "ParseError",
    "PrecisionExhausted",
    "Q",
    "SingularMatrix",
    "SuiteConfig",
    "TrialResult",
    "VerificationReport",
    "apply",
    "apply_derivation",
    "as_rational",
    "bracket",
    "centralizes_partials",
    "classify_divergence",
    "compose",
    "coordinate_frame",
    "decompose_const_div",
    "divergence",
    "euler_field",
    "exp_flow",
    "format_field",
    "format_map",
    "format_matrix",
    "format_series",
    "grlex_key",
    "identity_map",
    "invert",
    "is_automorphism",
    "is_constant_jacobian",
    "jacobian_det",
    "jacobian_matrix",
    "linear_map",
    "matrix_inverse",
    "negative_control_map",
    "parse_field",
    "parse_map",
    "parse_series",
    "partial_field",
    "pushforward",
    "random_automorphism",
    "random_const_jacobian",
    "random_divergence_free",
    "random_field",
    "random_shear",
    "rerun_payload",
    "run_check",
    "run_suite",
    "shear",
    "trial_seed",
    "zero_field",
    "__version__",
]
