"""Numeric self-check battery run by ``bingham-filter selftest``.

Every check compares the library against an independent reference from
:mod:`bingham_filter.oracles` and reports one line. All randomness is seeded,
so the report is identical across invocations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import degrees, pi

import numpy as np

from . import bingham as bd
from .evalsuite import angular_std, figure_kld_data
from .filter import FilterState, update
from .oracles import (
    bessel_half_one,
    bessel_threehalves_two,
    empirical_second_moment,
    grid_bayes_posterior,
    kummer_transformed_series,
    relative_spread,
    simpson_circle,
    unit_grid,
)
from .s1group import compose_arrays, compose_cov
from .specfun import kummer_half_one, kummer_threehalves_two

_SEED = 20130315


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_params(rng, z_low=-100.0, z_high=-0.1) -> bd.BinghamParams:
    return bd.BinghamParams.from_mode(rng.uniform(0, 2 * pi), rng.uniform(z_low, z_high))


def check_special_functions() -> CheckResult:
    zs = np.linspace(-200.0, 0.0, 500)
    a, b = kummer_half_one(zs), kummer_threehalves_two(zs)
    err = 0.0
    for z, va, vb in zip(zs, a, b):
        for ref_a, ref_b in (
            (bessel_half_one(z), bessel_threehalves_two(z)),
            (kummer_transformed_series(0.5, 1.0, z), kummer_transformed_series(1.5, 2.0, z)),
        ):
            err = max(err, abs(va / ref_a - 1), abs(vb / ref_b - 1))
    return CheckResult("special functions vs series oracles", err <= 1e-10, f"max rel err {err:.2e}")


def check_normalization() -> CheckResult:
    worst = 0.0
    for z1 in (0.0, -1.0, -8.0, -50.0, -200.0):
        p = bd.BinghamParams(np.eye(2), z1)
        worst = max(worst, abs(simpson_circle(lambda t: bd.pdf_angle(p, t)) - 1.0))
    return CheckResult("pdf integrates to 1", worst <= 1e-8, f"max |integral - 1| {worst:.2e}")


def check_figure1_std() -> CheckResult:
    std = degrees(angular_std(-8.0))
    return CheckResult("z1 = -8 angular std near 16 deg", abs(std - 16.0) <= 1.5, f"{std:.3f} deg")


def check_kld_monotone() -> CheckResult:
    z1s = [-1.0, -2.0, -5.0, -15.0, -50.0]
    klds = [k for _, k in figure_kld_data(z1s)]
    ok = all(x > y for x, y in zip(klds, klds[1:])) and klds[3] < klds[0] / 10
    return CheckResult("KL to matched Gaussian shrinks with z1", ok, f"KLD(-1) {klds[0]:.3e}, KLD(-15) {klds[3]:.3e}")


def check_multiplication(rng) -> CheckResult:
    _, x = unit_grid(360)
    worst = 0.0
    for _ in range(100):
        p1, p2 = random_params(rng), random_params(rng)
        ratio = bd.pdf(p1, x) * bd.pdf(p2, x) / bd.pdf(bd.multiply(p1, p2), x)
        worst = max(worst, relative_spread(ratio))
    return CheckResult("product density is Bingham", worst <= 1e-9, f"max ratio spread {worst:.2e}")


def check_mle_roundtrip() -> CheckResult:
    z_err = cov_err = 0.0
    for z1 in np.linspace(-100.0, -0.1, 200):
        p = bd.BinghamParams.from_mode(0.3 + z1, z1)
        s = bd.covariance(p)
        q = bd.mle_from_covariance(s)
        z_err = max(z_err, abs(q.z1 - z1))
        cov_err = max(cov_err, float(np.max(np.abs(bd.covariance(q).matrix - s.matrix))))
    ok = z_err <= 1e-6 and cov_err <= 1e-8
    return CheckResult("covariance <-> parameter round trip", ok, f"z1 err {z_err:.2e}, cov err {cov_err:.2e}")


def check_composition_monte_carlo(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        p1, p2 = random_params(rng, -50.0, -0.5), random_params(rng, -50.0, -0.5)
        x = bd.sample(p1, rng, 100_000)
        y = bd.sample(p2, rng, 100_000)
        emp = empirical_second_moment(compose_arrays(x, y))
        ana = compose_cov(bd.covariance(p1), bd.covariance(p2)).matrix
        worst = max(worst, float(np.max(np.abs(emp - ana))))
    return CheckResult("composed covariance vs Monte Carlo", worst <= 0.01, f"max entry err {worst:.2e}")


def check_update_bayes(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        prior = random_params(rng)
        noise = bd.BinghamParams(np.eye(2), rng.uniform(-50.0, -0.5))
        z_hat = bd.UnitVec2.from_angle(rng.uniform(0, 2 * pi))
        post = update(FilterState.prior(prior), noise, z_hat).params
        x, ref = grid_bayes_posterior(prior.m, prior.z1, noise.m, noise.z1, z_hat.as_array())
        worst = max(worst, relative_spread(bd.pdf(post, x) / ref))
    return CheckResult("update equals grid Bayes posterior", worst <= 1e-6, f"max ratio spread {worst:.2e}")


def run_all() -> list[CheckResult]:
    rng = np.random.default_rng(_SEED)
    return [
        check_special_functions(),
        check_normalization(),
        check_figure1_std(),
        check_kld_monotone(),
        check_multiplication(rng),
        check_mle_roundtrip(),
        check_composition_monte_carlo(rng),
        check_update_bayes(rng),
    ]
