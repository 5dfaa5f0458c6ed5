"""Recursive Bingham filter for 180-degree-symmetric orientations on the circle.

System model ``x[k+1] = x[k] (+) w[k]`` and measurement model
``z[k] = x[k] (+) v[k]``, with Bingham noises ``w`` and ``v`` passed per call.
Prediction composes the estimate with ``w``; the update multiplies the
prediction by the measurement likelihood, which is ``v``'s density with its
axes rotated by the measurement.

Rotation convention
-------------------
For the measurement model above the likelihood of ``x`` given ``z_hat`` is
``f_v(conj(x) (+) z_hat)``, a Bingham density whose axes are
``z_hat (+) conj(m_i)``. This is ``Convention.MODEL``, the default. The
published update step writes the axes as ``conj(z_hat) (+) m_i``; that
variant is kept as ``Convention.LITERAL``. The two agree only when the angle
between ``z_hat`` and the noise axes is a multiple of 90 degrees, and the
literal form does not reproduce the Bayes posterior otherwise (see
``tests/test_filter.py::test_literal_convention_mismatch``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bingham import BinghamParams, UnitVec2, _covariance, _mle, _multiply, multiply
from .errors import DomainError
from .s1group import _compose_cov, compose, compose_arrays, compose_dist, conjugate, conjugate_arrays

__all__ = [
    "Stage",
    "Convention",
    "FilterState",
    "predict",
    "update",
    "rotated_noise",
    "predict_batch",
    "update_batch",
]


class Stage(enum.Enum):
    PREDICTED = "predicted"
    ESTIMATED = "estimated"


class Convention(enum.Enum):
    MODEL = "model"
    LITERAL = "literal"


@dataclass(frozen=True)
class FilterState:
    params: BinghamParams
    stage: Stage
    step: int = 0

    @classmethod
    def prior(cls, params: BinghamParams) -> FilterState:
        """Initial belief, ready for the first measurement update."""
        return cls(params, Stage.PREDICTED, 0)


def predict(estimate: FilterState, system_noise: BinghamParams) -> FilterState:
    """Disturb the estimate with system noise by composition."""
    if estimate.stage is not Stage.ESTIMATED:
        raise DomainError("predict expects an estimated state")
    params = compose_dist(estimate.params, system_noise)
    return FilterState(params, Stage.PREDICTED, estimate.step + 1)


def rotated_noise(
    meas_noise: BinghamParams, z_hat: UnitVec2, convention: Convention = Convention.MODEL
) -> BinghamParams:
    """Measurement likelihood as a Bingham density over the state."""
    cols = [UnitVec2(*meas_noise.m[:, i]) for i in range(2)]
    if Convention(convention) is Convention.MODEL:
        cols = [compose(z_hat, conjugate(c)) for c in cols]
    else:
        cols = [compose(conjugate(z_hat), c) for c in cols]
    m = _orthonormalize(np.array([[cols[0].c1, cols[1].c1], [cols[0].c2, cols[1].c2]]))
    return BinghamParams(m, meas_noise.z1)


def update(
    prediction: FilterState,
    meas_noise: BinghamParams,
    z_hat: UnitVec2,
    convention: Convention = Convention.MODEL,
) -> FilterState:
    """Bayes update: multiply the prediction by the rotated noise density."""
    if prediction.stage is not Stage.PREDICTED:
        raise DomainError("update expects a predicted state")
    likelihood = rotated_noise(meas_noise, z_hat, convention)
    params = multiply(likelihood, prediction.params)
    return FilterState(params, Stage.ESTIMATED, prediction.step)


def predict_batch(m, z1, system_noise: BinghamParams):
    """:func:`predict` over a batch: ``m`` is (n, 2, 2), ``z1`` is (n,)."""
    a = _covariance(m, z1)
    b = _covariance(system_noise.m, system_noise.z1)
    return _mle(*_compose_cov(*a, *b))


def update_batch(m, z1, meas_noise: BinghamParams, z_hat, convention=Convention.MODEL):
    """:func:`update` over a batch; ``z_hat`` is an (n, 2) array of measurements."""
    z_hat = np.asarray(z_hat, dtype=float)
    cols = meas_noise.m.T[:, None, :]
    if Convention(convention) is Convention.MODEL:
        rot = compose_arrays(z_hat[None], conjugate_arrays(cols))
    else:
        rot = compose_arrays(conjugate_arrays(z_hat)[None], cols)
    rm = _orthonormalize(np.stack([rot[0], rot[1]], axis=-1))
    return _multiply(rm, meas_noise.z1, m, z1)


def _orthonormalize(m):
    """Gram-Schmidt on the columns of (..., 2, 2) matrices."""
    a = m[..., :, 0] / np.linalg.norm(m[..., :, 0], axis=-1, keepdims=True)
    b = m[..., :, 1] - np.sum(a * m[..., :, 1], axis=-1, keepdims=True) * a
    b = b / np.linalg.norm(b, axis=-1, keepdims=True)
    return np.stack([a, b], axis=-1)
