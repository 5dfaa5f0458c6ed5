"""Composition on the circle as complex multiplication modulo sign.

Composing two orientations adds their angles. Composing two Bingham
distributions is approximated by composing their second-moment matrices
and refitting a Bingham distribution to the result.
"""

from __future__ import annotations

import numpy as np

from .bingham import (
    BinghamParams,
    CovMat2,
    UnitVec2,
    covariance,
    mle_from_covariance,
)
from .errors import DomainError

__all__ = [
    "compose",
    "conjugate",
    "compose_arrays",
    "conjugate_arrays",
    "compose_cov",
    "compose_dist",
]

_TRACE_TOL = 1e-6


def compose(x: UnitVec2, y: UnitVec2) -> UnitVec2:
    """Complex product ``x * y``, renormalized to unit length."""
    return UnitVec2(x.c1 * y.c1 - x.c2 * y.c2, x.c1 * y.c2 + x.c2 * y.c1)


def conjugate(x: UnitVec2) -> UnitVec2:
    """Inverse element: ``(x1, -x2)``."""
    return UnitVec2(x.c1, -x.c2)


def compose_arrays(x, y) -> np.ndarray:
    """Batched :func:`compose` over arrays of shape (..., 2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.stack(
        [
            x[..., 0] * y[..., 0] - x[..., 1] * y[..., 1],
            x[..., 0] * y[..., 1] + x[..., 1] * y[..., 0],
        ],
        axis=-1,
    )
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def conjugate_arrays(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x * np.array([1.0, -1.0])


def compose_cov(a: CovMat2, b: CovMat2) -> CovMat2:
    """Second moment of ``x (+) y`` for independent ``x ~ a``, ``y ~ b``."""
    for name, s in (("a", a), ("b", b)):
        if abs(s.trace - 1.0) > _TRACE_TOL:
            raise DomainError(f"trace of {name} must be 1, got {s.trace!r}")
    c11, c12, c22 = _compose_cov(a.s11, a.s12, a.s22, b.s11, b.s12, b.s22)
    return CovMat2(float(c11), float(c12), float(c22))


def compose_dist(p1: BinghamParams, p2: BinghamParams) -> BinghamParams:
    """Bingham approximation to the distribution of ``x (+) y``.

    Raises ConcentrationOverflowError when both inputs are so sharp that the
    composed second moment is numerically a point mass.
    """
    return mle_from_covariance(compose_cov(covariance(p1), covariance(p2)))


def _compose_cov(a11, a12, a22, b11, b12, b22):
    c11 = a11 * b11 - 2.0 * a12 * b12 + a22 * b22
    c12 = a11 * b12 - a12 * b22 + a12 * b11 - a22 * b12
    c22 = a11 * b22 + 2.0 * a12 * b12 + a22 * b11
    return c11, c12, c22
