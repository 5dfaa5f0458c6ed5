"""Independent reference computations used by the self-check battery and tests.

Nothing here calls into the evaluation paths it is meant to check: Kummer
values come from plain power series in pure Python, densities from explicit
grids and quadrature.
"""

from math import exp, fsum, pi

import numpy as np
from scipy.integrate import simpson

from .s1group import compose_arrays, conjugate_arrays


def kummer_transformed_series(a: float, b: float, z: float) -> float:
    """1F1(a, b, z) for z <= 0 as e^z 1F1(b - a, b, -z), summed directly.

    All terms of the transformed series are positive, so there is no
    cancellation.
    """
    y = -z
    term, k, terms, acc = 1.0, 0, [1.0], 1.0
    while True:
        term *= (b - a + k) / (b + k) * y / (k + 1)
        k += 1
        terms.append(term)
        acc += term
        if k > y and term < 1e-18 * acc:
            break
    return exp(z) * fsum(terms)


def _bessel_series(x: float):
    """(I0(x), I1(x)) by their power series, x >= 0."""
    q = 0.25 * x * x
    t0, t1 = 1.0, 0.5 * x
    s0, s1 = [t0], [t1]
    acc, k = t0, 0
    while True:
        k += 1
        t0 *= q / (k * k)
        t1 *= q / (k * (k + 1))
        s0.append(t0)
        s1.append(t1)
        acc += t0
        if k > x and t0 < 1e-18 * acc:
            break
    return fsum(s0), fsum(s1)


def bessel_half_one(z: float) -> float:
    """1F1(1/2, 1, z) = e^{z/2} I0(z/2), I0 by its power series."""
    x = -0.5 * z
    i0, _ = _bessel_series(abs(x))
    return exp(-x) * i0


def bessel_threehalves_two(z: float) -> float:
    """1F1(3/2, 2, z) = e^{z/2} (I0(z/2) + I1(z/2)), by power series."""
    x = -0.5 * z
    i0, i1 = _bessel_series(abs(x))
    return exp(-x) * (i0 - np.sign(x) * i1)


def simpson_circle(f, n: int = 10_000) -> float:
    """Composite Simpson rule for a function of the angle over [0, 2 pi]."""
    theta = np.linspace(0.0, 2.0 * pi, n + 1)
    return float(simpson(f(theta), x=theta))


def unit_grid(n: int):
    theta = np.arange(n) * (2.0 * pi / n)
    return theta, np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def unnormalized_bingham(m, z1, x):
    """exp(x^T m diag(z1, 0) m^T x) evaluated with the full matrix product."""
    a = np.asarray(m) @ np.diag([z1, 0.0]) @ np.asarray(m).T
    return np.exp(np.einsum("...i,ij,...j->...", x, a, x))


def grid_bayes_posterior(prior_m, prior_z1, noise_m, noise_z1, z_hat, n: int = 720):
    """Posterior on an n-point grid for z = x (+) v, v ~ Bingham(noise).

    Returns ``(x_grid, posterior)`` with the posterior normalized to sum 1.
    """
    _, x = unit_grid(n)
    v = compose_arrays(conjugate_arrays(x), np.asarray(z_hat)[None, :])
    post = unnormalized_bingham(prior_m, prior_z1, x) * unnormalized_bingham(noise_m, noise_z1, v)
    return x, post / post.sum()


def relative_spread(ratio) -> float:
    """(max - min) / mean of a positive array; zero for a constant array."""
    ratio = np.asarray(ratio, dtype=float)
    return float((ratio.max() - ratio.min()) / ratio.mean())


def empirical_second_moment(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x.T @ x / len(x)
