"""Recursive orientation estimation on the circle with the 2D Bingham distribution."""

from .bingham import (
    BinghamParams,
    CovMat2,
    UnitVec2,
    covariance,
    mle_from_covariance,
    mode,
    multiply,
    normalization_constant,
    pdf,
    sample,
)
from .errors import BinghamError, ConcentrationOverflowError, DomainError
from .filter import Convention, FilterState, Stage, predict, update
from .s1group import compose, compose_cov, compose_dist, conjugate

__all__ = [
    "BinghamParams",
    "CovMat2",
    "UnitVec2",
    "covariance",
    "mle_from_covariance",
    "mode",
    "multiply",
    "normalization_constant",
    "pdf",
    "sample",
    "BinghamError",
    "ConcentrationOverflowError",
    "DomainError",
    "Convention",
    "FilterState",
    "Stage",
    "predict",
    "update",
    "compose",
    "compose_cov",
    "compose_dist",
    "conjugate",
]

__version__ = "0.1.0"
