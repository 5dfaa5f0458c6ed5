"""The Bingham distribution on the unit circle.

A distribution is stored as an orthogonal matrix ``m`` and one concentration
``z1 <= 0``. The density is ``exp(z1 * (m[:, 0] . x)**2) / F`` with
``F = 2 pi 1F1(1/2, 1, z1)``; the second concentration is pinned to zero, so
the mode is the second column of ``m``.

The array kernels at the bottom of this module (names starting with an
underscore) work on arbitrary leading batch dimensions. The public scalar
API and the batched filter in :mod:`bingham_filter.filter` both go through
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .errors import ConcentrationOverflowError, DomainError
from .specfun import kummer_half_one, kummer_ratio

__all__ = [
    "UnitVec2",
    "BinghamParams",
    "CovMat2",
    "Z1_MIN",
    "normalization_constant",
    "pdf",
    "pdf_angle",
    "mode",
    "multiply",
    "covariance",
    "mle_from_covariance",
    "sample",
    "eigh2",
]

#: Most concentrated representable distribution.
Z1_MIN = -1.0e6
_BISECT_TOL = 1e-10
_TIE_TOL = 1e-13
_ORTHO_TOL = 1e-10
_TRACE_TOL = 1e-6
_SAMPLER_NODES = 4096


@dataclass(frozen=True)
class UnitVec2:
    """A unit vector in the plane, read as the complex number ``c1 + i c2``.

    ``v`` and ``-v`` denote the same orientation. Components are renormalized
    on construction.
    """

    c1: float
    c2: float

    def __post_init__(self):
        n = np.hypot(self.c1, self.c2)
        if not np.isfinite(n) or n == 0.0:
            raise DomainError(f"cannot normalize ({self.c1}, {self.c2})")
        object.__setattr__(self, "c1", float(self.c1 / n))
        object.__setattr__(self, "c2", float(self.c2 / n))

    @classmethod
    def from_angle(cls, theta: float) -> UnitVec2:
        return cls(np.cos(theta), np.sin(theta))

    @classmethod
    def from_array(cls, a) -> UnitVec2:
        return cls(float(a[0]), float(a[1]))

    @property
    def angle(self) -> float:
        return float(np.arctan2(self.c2, self.c1))

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2])

    def canonical(self) -> UnitVec2:
        """Representative with c2 > 0, or c2 == 0 and c1 > 0."""
        if self.c2 > 0 or (self.c2 == 0 and self.c1 > 0):
            return self
        return -self

    def __neg__(self) -> UnitVec2:
        return UnitVec2(-self.c1, -self.c2)


@dataclass(frozen=True, eq=False)
class BinghamParams:
    """Orientation matrix ``m`` (columns are principal axes) and ``z1 <= 0``."""

    m: np.ndarray
    z1: float

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise DomainError("m must be a finite 2x2 matrix")
        if np.max(np.abs(m.T @ m - np.eye(2))) > _ORTHO_TOL:
            raise DomainError("m must be orthogonal")
        z1 = float(self.z1)
        if not np.isfinite(z1) or z1 > 0.0:
            raise DomainError(f"z1 must be finite and <= 0, got {self.z1}")
        if z1 < Z1_MIN:
            raise ConcentrationOverflowError(f"z1 = {z1} is below {Z1_MIN}")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "z1", z1)

    @classmethod
    def from_mode(cls, mode_vec, z1: float) -> BinghamParams:
        """Distribution with the given mode (UnitVec2 or angle in radians)."""
        if not isinstance(mode_vec, UnitVec2):
            mode_vec = UnitVec2.from_angle(mode_vec)
        c, s = mode_vec.c1, mode_vec.c2
        m = np.array([[-s, c], [c, s]])
        return cls(_fix_sign(m), z1)

    @classmethod
    def uniform(cls) -> BinghamParams:
        return cls(np.eye(2), 0.0)

    @classmethod
    def from_row(cls, values) -> BinghamParams:
        """Inverse of :meth:`to_row`: ``m11 m12 m21 m22 z1``."""
        values = [float(v) for v in values]
        if len(values) != 5:
            raise DomainError("expected five numbers: m11 m12 m21 m22 z1")
        return cls(np.reshape(values[:4], (2, 2)), values[4])

    def to_row(self) -> list[float]:
        return [*map(float, self.m.ravel()), self.z1]

    def to_text(self) -> str:
        # + 0.0 turns -0.0 into 0.0
        return " ".join(f"{v + 0.0:.17g}" for v in self.to_row())

    def __repr__(self):
        return f"BinghamParams(m={self.m.tolist()}, z1={self.z1!r})"


@dataclass(frozen=True)
class CovMat2:
    """Symmetric second-moment matrix E[x x^T] of a unit random vector."""

    s11: float
    s12: float
    s22: float

    @classmethod
    def from_matrix(cls, s) -> CovMat2:
        s = np.asarray(s, dtype=float)
        return cls(float(s[0, 0]), 0.5 * float(s[0, 1] + s[1, 0]), float(s[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])

    @property
    def trace(self) -> float:
        return self.s11 + self.s22

    def eigh(self):
        """(omega1, omega2, m): ascending eigenvalues and eigenvector columns."""
        w1, w2, m = eigh2(self.s11, self.s12, self.s22)
        return float(w1), float(w2), m


def normalization_constant(z1: float) -> float:
    """F = 2 pi 1F1(1/2, 1, z1)."""
    _check_z1(z1)
    return 2.0 * pi * kummer_half_one(z1)


def pdf(p: BinghamParams, x) -> float | np.ndarray:
    """Density at ``x``: a UnitVec2 or an array of unit vectors of shape (..., 2)."""
    if isinstance(x, UnitVec2):
        proj = p.m[0, 0] * x.c1 + p.m[1, 0] * x.c2
        return float(np.exp(p.z1 * proj * proj) / normalization_constant(p.z1))
    x = np.asarray(x, dtype=float)
    proj = x @ p.m[:, 0]
    return np.exp(p.z1 * proj * proj) / normalization_constant(p.z1)


def pdf_angle(p: BinghamParams, theta) -> np.ndarray:
    """Density at ``(cos theta, sin theta)``, vectorized over ``theta``."""
    theta = np.asarray(theta, dtype=float)
    return pdf(p, np.stack([np.cos(theta), np.sin(theta)], axis=-1))


def mode(p: BinghamParams) -> UnitVec2:
    """Second column of ``m``. For z1 = 0 every direction is modal; still column 2."""
    return UnitVec2(p.m[0, 1], p.m[1, 1])


def multiply(p1: BinghamParams, p2: BinghamParams) -> BinghamParams:
    """Renormalized pointwise product of two Bingham densities."""
    m, z1 = _multiply(p1.m, p1.z1, p2.m, p2.z1)
    return BinghamParams(m, z1)


def covariance(p: BinghamParams) -> CovMat2:
    """E[x x^T] under ``p``; eigenvectors are the columns of ``m``."""
    s11, s12, s22 = _covariance(p.m, p.z1)
    return CovMat2(float(s11), float(s12), float(s22))


def mle_from_covariance(s: CovMat2) -> BinghamParams:
    """The unique Bingham distribution whose second moment is ``s``.

    ``m`` holds the eigenvectors of ``s`` (smaller eigenvalue first) and
    ``z1`` solves ``0.5 * 1F1(3/2,2,z1) / 1F1(1/2,1,z1) = omega1`` by bisection.

    Raises
    ------
    DomainError
        If ``s`` is not finite, its trace is off by more than 1e-6 or it is
        not positive semidefinite.
    ConcentrationOverflowError
        If the smaller eigenvalue is so small that ``z1 < -1e6``.
    """
    vals = np.array([s.s11, s.s12, s.s22])
    if not np.all(np.isfinite(vals)):
        raise DomainError("covariance entries must be finite")
    if abs(s.trace - 1.0) > _TRACE_TOL:
        raise DomainError(f"covariance trace must be 1, got {s.trace!r}")
    m, z1 = _mle(s.s11, s.s12, s.s22)
    return BinghamParams(m, float(z1))


def sample(p: BinghamParams, seed, n: int) -> np.ndarray:
    """Draw ``n`` unit vectors from ``p``, returned as rows of an (n, 2) array.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, including
    a ``Generator`` (which is then advanced). Angles relative to the mode are
    drawn by inverting a tabulated CDF over half a period; a fair coin picks
    between the two antipodes.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.default_rng(seed)
    grid, cdf = _angle_cdf(p.z1)
    phi = np.interp(rng.random(n), cdf, grid)
    flip = rng.random(n) < 0.5
    theta = mode(p).angle + phi + np.where(flip, pi, 0.0)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def eigh2(s11, s12, s22):
    """Closed-form eigendecomposition of symmetric 2x2 matrices.

    Returns ``(w1, w2, m)`` with ``w1 <= w2`` and ``m[..., :, i]`` the unit
    eigenvector of the i-th eigenvalue. Each eigenvector's largest-magnitude
    component is positive. Repeated eigenvalues give the identity.
    """
    s11, s12, s22 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (s11, s12, s22)))
    half_gap = 0.5 * (s11 - s22)
    mean = 0.5 * (s11 + s22)
    r = np.hypot(half_gap, s12)
    phi = 0.5 * np.arctan2(s12, half_gap)
    c, s = np.cos(phi), np.sin(phi)
    tie = r <= _TIE_TOL * np.maximum(1.0, np.abs(mean))
    c = np.where(tie, 0.0, c)
    s = np.where(tie, 1.0, s)
    # columns: eigenvector of the smaller eigenvalue, then of the larger
    m = np.stack([np.stack([-s, c], axis=-1), np.stack([c, s], axis=-1)], axis=-1)
    return mean - r, mean + r, _fix_sign(m)


def _check_z1(z1):
    if not np.isfinite(z1) or z1 > 0.0:
        raise DomainError(f"z1 must be finite and <= 0, got {z1}")


def _fix_sign(m):
    """Flip each column so its largest-magnitude component is positive.

    Components equal in magnitude up to rounding count as a tie, won by the first.
    """
    first, second = m[..., 0, :], m[..., 1, :]
    lead = np.where(np.abs(first) >= np.abs(second) - 1e-12, first, second)
    return m * np.where(lead < 0, -1.0, 1.0)[..., None, :]


def _omega1(z1):
    """Smaller eigenvalue of the second moment for concentration z1."""
    return 0.5 * kummer_ratio(z1)


_OMEGA1_MIN = _omega1(Z1_MIN)


def _solve_z1(omega1):
    """Invert :func:`_omega1` by bisection on [Z1_MIN, 0]."""
    omega1 = np.asarray(omega1, dtype=float)
    if np.any(omega1 < _OMEGA1_MIN):
        raise ConcentrationOverflowError(
            f"smallest eigenvalue {float(np.min(omega1))!r} needs z1 below {Z1_MIN}"
        )
    lo = np.full(omega1.shape, Z1_MIN)
    hi = np.zeros(omega1.shape)
    # fixed iteration count keeps results independent of batch composition
    width = -Z1_MIN
    while width >= _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        below = _omega1(mid) < omega1
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        width *= 0.5
    z1 = 0.5 * (lo + hi)
    return np.where(omega1 >= 0.5, 0.0, z1)


def _covariance(m, z1):
    """Entries (s11, s12, s22) of E[x x^T] for batched parameters."""
    w1 = _omega1(z1)
    w2 = 1.0 - w1
    a, b = m[..., :, 0], m[..., :, 1]
    s11 = w1 * a[..., 0] ** 2 + w2 * b[..., 0] ** 2
    s12 = w1 * a[..., 0] * a[..., 1] + w2 * b[..., 0] * b[..., 1]
    s22 = w1 * a[..., 1] ** 2 + w2 * b[..., 1] ** 2
    return s11, s12, s22


def _mle(s11, s12, s22):
    w1, _, m = eigh2(s11, s12, s22)
    if np.any(w1 < -_TIE_TOL):
        raise DomainError("covariance must be positive semidefinite")
    return m, _solve_z1(np.maximum(w1, 0.0))


def _multiply(m_a, z_a, m_b, z_b):
    """Sum the exponent matrices z * a a^T and re-canonicalize."""
    a, b = m_a[..., :, 0], m_b[..., :, 0]
    c11 = z_a * a[..., 0] ** 2 + z_b * b[..., 0] ** 2
    c12 = z_a * a[..., 0] * a[..., 1] + z_b * b[..., 0] * b[..., 1]
    c22 = z_a * a[..., 1] ** 2 + z_b * b[..., 1] ** 2
    d1, d2, m = eigh2(c11, c12, c22)
    return m, np.minimum(d1 - d2, 0.0)


def _angle_cdf(z1):
    """Tabulated CDF of the angle offset from the mode over half a period."""
    half = pi / 2
    if z1 < 0:
        # for concentrated distributions cover +-12 standard deviations only
        half = min(half, 12.0 / np.sqrt(-2.0 * z1))
    grid = np.linspace(-half, half, _SAMPLER_NODES)
    dens = np.exp(z1 * np.sin(grid) ** 2)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    return grid, cdf / cdf[-1]
