"""Confluent hypergeometric functions needed by the 2D Bingham distribution.

Only two members of the Kummer family are required, and both reduce to
exponentially scaled modified Bessel functions of the first kind:

    1F1(1/2, 1, z) = exp(z/2) I0(z/2)
    1F1(3/2, 2, z) = exp(z/2) (I0(z/2) + I1(z/2))

With ``x = -z/2 >= 0`` and the parity of I0/I1 these become
``e^{-x} I0(x)`` and ``e^{-x} (I0(x) - I1(x))``, which never overflow.
I0 and I1 are summed from their power series for ``x <= 20`` and from the
large-argument asymptotic expansion beyond that. In the asymptotic branch
the difference ``I0 - I1`` is summed term by term, so the leading terms
cancel exactly instead of in floating point.

All functions accept a float or an ndarray and return the same kind.
"""

from fractions import Fraction
from math import factorial, pi

import numpy as np

from .errors import DomainError

__all__ = ["kummer_half_one", "kummer_threehalves_two", "kummer_ratio"]

_SWITCH = 20.0
_MAX_SERIES_TERMS = 48
_ASYMP_TERMS = 30
# evaluation for slightly positive z is allowed so finite differences at 0 work
_Z_MAX = 1.0


def _series_coefficients(n):
    c0 = [1.0 / factorial(k) ** 2 for k in range(n)]
    c1 = [1.0 / (factorial(k) * factorial(k + 1)) for k in range(n)]
    return tuple(c0), tuple(c1)


def _asymptotic_coefficients(n):
    """Coefficients of x**-k in e^{-x} I_nu(x) sqrt(2 pi x), nu = 0 and 1."""
    p0, p1 = [], []
    a0 = a1 = Fraction(1)
    for k in range(n):
        if k > 0:
            odd_sq = (2 * k - 1) ** 2
            a0 *= Fraction(-odd_sq, 8 * k)
            a1 *= Fraction(4 - odd_sq, 8 * k)
        sign = -1 if k % 2 else 1
        p0.append(sign * a0)
        p1.append(sign * a1)
    diff = [float(u - v) for u, v in zip(p0, p1)]
    return tuple(float(u) for u in p0), tuple(diff)


_C0, _C1 = _series_coefficients(_MAX_SERIES_TERMS)
_P0, _PD = _asymptotic_coefficients(_ASYMP_TERMS)


def _horner(coeffs, t):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def _series_terms(x):
    # arrays always use every term so an element's value never depends on its batch
    if np.ndim(x):
        return _MAX_SERIES_TERMS
    return min(_MAX_SERIES_TERMS, int(1.5 * abs(x)) + 14)


def _series(x):
    """(e^-x I0(x), e^-x (I0(x) - I1(x))) by power series."""
    n = _series_terms(x)
    y = 0.25 * x * x
    i0 = _horner(_C0[:n], y)
    i1 = 0.5 * x * _horner(_C1[:n], y)
    scale = np.exp(-x)
    return scale * i0, scale * (i0 - i1)


def _asymptotic(x):
    """(e^-x I0(x), e^-x (I0(x) - I1(x))) by the large-argument expansion."""
    t = 1.0 / x
    lead = 1.0 / np.sqrt(2.0 * pi * x)
    return lead * _horner(_P0, t), lead * t * _horner(_PD[1:], t)


def _scaled_pair(x):
    if np.ndim(x) == 0:
        x = float(x)
        return _series(x) if x <= _SWITCH else _asymptotic(x)
    low = x <= _SWITCH
    i0 = np.empty_like(x)
    d = np.empty_like(x)
    if low.any():
        i0[low], d[low] = _series(x[low])
    if not low.all():
        i0[~low], d[~low] = _asymptotic(x[~low])
    return i0, d


def _as_argument(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Kummer function argument must be finite")
    if np.any(arr > _Z_MAX):
        raise DomainError(f"Kummer function argument must be <= {_Z_MAX}")
    return -0.5 * arr


def _result(value, z):
    return float(value) if np.ndim(z) == 0 else np.asarray(value)


def kummer_half_one(z):
    """1F1(1/2, 1, z) for z <= 0 (values up to z = 1 are accepted)."""
    i0, _ = _scaled_pair(_as_argument(z))
    return _result(i0, z)


def kummer_threehalves_two(z):
    """1F1(3/2, 2, z) for z <= 0 (values up to z = 1 are accepted).

    This is twice the derivative of :func:`kummer_half_one`.
    """
    _, d = _scaled_pair(_as_argument(z))
    return _result(d, z)


def kummer_ratio(z):
    """1F1(3/2, 2, z) / 1F1(1/2, 1, z), computed from one shared evaluation."""
    i0, d = _scaled_pair(_as_argument(z))
    return _result(d / i0, z)
