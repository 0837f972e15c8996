"""Generalized two-mode squeezing: exact symplectic algebra and truncated Fock-space checks."""

from .errors import (
    DeterminantViolation,
    EmptySequence,
    EnvelopeExceeded,
    LogDomain,
    NonpositiveDiagonal,
    NotHermitian,
    TruncationError,
    ZeroState,
)
from .fock import ResidualReport, TruncationConfig
from .symplectic import (
    AbcdParams,
    FactorKind,
    FactorSequence,
    Form,
    GaussianFactor,
    SqueezeParam,
    compose,
    decompose,
    factor_symplectic,
    log_identity_residual,
    symplectic_residual,
    target_symplectic,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "AbcdParams",
    "DeterminantViolation",
    "EmptySequence",
    "EnvelopeExceeded",
    "FactorKind",
    "FactorSequence",
    "Form",
    "GaussianFactor",
    "LogDomain",
    "NonpositiveDiagonal",
    "NotHermitian",
    "ResidualReport",
    "SqueezeParam",
    "TruncationConfig",
    "TruncationError",
    "ZeroState",
    "compose",
    "decompose",
    "factor_symplectic",
    "log_identity_residual",
    "symplectic_residual",
    "target_symplectic",
    "validate_params",
]
