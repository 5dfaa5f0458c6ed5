"""Acceptance criteria. Each test records one PASS/FAIL line for the summary."""

import math
import time

import numpy as np
import pytest

from bingham_filter import bingham as bd
from bingham_filter.bingham import BinghamParams, UnitVec2
from bingham_filter.cli import run
from bingham_filter.evalsuite import ScenarioConfig, angular_std, figure_kld_data, simulate
from bingham_filter.filter import FilterState, update
from bingham_filter.oracles import (
    bessel_half_one,
    bessel_threehalves_two,
    empirical_second_moment,
    grid_bayes_posterior,
    kummer_transformed_series,
    relative_spread,
    simpson_circle,
    unit_grid,
)
from bingham_filter.s1group import compose_arrays, compose_cov
from bingham_filter.specfun import kummer_half_one, kummer_threehalves_two

from conftest import random_params


@pytest.fixture
def check(acceptance_report):
    def _check(number, name, passed, detail):
        acceptance_report.append(f"[{number:02d}] {'PASS' if passed else 'FAIL'} {name}: {detail}")
        assert passed, detail

    return _check


def test_01_special_function_fidelity(check):
    zs = np.linspace(-200.0, 0.0, 500)
    start = time.perf_counter()
    a, b = kummer_half_one(zs), kummer_threehalves_two(zs)
    elapsed = time.perf_counter() - start
    err = 0.0
    for z, va, vb in zip(zs, a, b):
        err = max(
            err,
            abs(va / bessel_half_one(z) - 1),
            abs(vb / bessel_threehalves_two(z) - 1),
            abs(va / kummer_transformed_series(0.5, 1.0, z) - 1),
            abs(vb / kummer_transformed_series(1.5, 2.0, z) - 1),
        )
    check(1, "special functions", err <= 1e-10 and elapsed < 1.0, f"max rel err {err:.2e}, {elapsed * 1e3:.1f} ms")


def test_02_normalization(check):
    worst = 0.0
    for z1 in (0.0, -1.0, -8.0, -50.0, -200.0):
        p = BinghamParams.from_mode(0.9, z1)
        worst = max(worst, abs(simpson_circle(lambda t: bd.pdf_angle(p, t)) - 1.0))
    check(2, "pdf normalization", worst <= 1e-8, f"max |integral - 1| {worst:.2e}")


def test_03_angular_std_anchor(check):
    std = math.degrees(angular_std(-8.0))
    check(3, "z1=-8 angular std", abs(std - 16.0) <= 1.5, f"{std:.3f} deg")


def test_04_gaussian_kld_anchor(check):
    z1s = [-1.0, -2.0, -5.0, -15.0, -50.0]
    kld = [k for _, k in figure_kld_data(z1s)]
    monotone = all(x > y for x, y in zip(kld, kld[1:]))
    ok = monotone and kld[3] < kld[0] / 10
    detail = ", ".join(f"{z:g}:{k:.2e}" for z, k in zip(z1s, kld))
    check(4, "KL to matched Gaussian", ok, detail)


def test_05_multiplication_closure(check):
    rng = np.random.default_rng(5)
    _, x = unit_grid(360)
    worst = 0.0
    for _ in range(100):
        p1, p2 = random_params(rng), random_params(rng)
        ratio = bd.pdf(p1, x) * bd.pdf(p2, x) / bd.pdf(bd.multiply(p1, p2), x)
        worst = max(worst, relative_spread(ratio))
    check(5, "multiplication closure", worst <= 1e-9, f"max ratio spread {worst:.2e}")


def test_06_mle_bijection(check):
    z_err = cov_err = 0.0
    for i, z1 in enumerate(np.linspace(-100.0, -0.1, 500)):
        p = BinghamParams.from_mode(0.37 * i, z1)
        s = bd.covariance(p)
        q = bd.mle_from_covariance(s)
        z_err = max(z_err, abs(q.z1 - z1))
        cov_err = max(cov_err, float(np.max(np.abs(bd.covariance(q).matrix - s.matrix))))
    check(6, "MLE bijection", z_err <= 1e-6 and cov_err <= 1e-8, f"z1 err {z_err:.2e}, cov err {cov_err:.2e}")


def test_07_composition_monte_carlo(check):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        p1, p2 = random_params(rng, -50.0, -0.5), random_params(rng, -50.0, -0.5)
        x, y = bd.sample(p1, rng, 100_000), bd.sample(p2, rng, 100_000)
        emp = empirical_second_moment(compose_arrays(x, y))
        ana = compose_cov(bd.covariance(p1), bd.covariance(p2)).matrix
        worst = max(worst, float(np.max(np.abs(emp - ana))))
    elapsed = time.perf_counter() - start
    check(7, "composition covariance", worst <= 0.01 and elapsed < 30, f"max err {worst:.2e}, {elapsed:.2f} s")


def test_08_update_is_bayes(check):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(20):
        prior = random_params(rng)
        noise = BinghamParams(np.eye(2), rng.uniform(-50.0, -0.5))
        z_hat = UnitVec2.from_angle(rng.uniform(0, 2 * math.pi))
        post = update(FilterState.prior(prior), noise, z_hat).params
        x, ref = grid_bayes_posterior(prior.m, prior.z1, noise.m, noise.z1, z_hat.as_array(), n=720)
        worst = max(worst, relative_spread(bd.pdf(post, x) / ref))
    check(8, "update equals Bayes posterior", worst <= 1e-6, f"max ratio spread {worst:.2e}")


def _scenario(meas_z1, sys_z1, runs=1000, steps=100):
    return ScenarioConfig(
        steps=steps,
        runs=runs,
        seed=2013,
        system_noise=BinghamParams.from_mode(0.0, sys_z1),
        meas_noise=BinghamParams.from_mode(0.0, meas_z1),
    )


def test_09_filter_comparison(check):
    high = simulate(_scenario(-1.0, -8.0))
    low = simulate(_scenario(-200.0, -200.0))
    rel_gap = abs(low.mean_err_bingham - low.mean_err_kalman) / low.mean_err_kalman
    ok = high.wallclock < 60 and high.mean_err_bingham <= high.mean_err_kalman and rel_gap <= 0.10
    detail = (
        f"high noise {high.mean_err_bingham:.4f} vs {high.mean_err_kalman:.4f} rad in {high.wallclock:.1f} s; "
        f"low noise {low.mean_err_bingham:.5f} vs {low.mean_err_kalman:.5f} rad (gap {rel_gap:.2%})"
    )
    check(9, "Bingham vs Kalman", ok, detail)


def test_10_determinism(check, tmp_path, capsys):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(_scenario(-1.0, -8.0, runs=50, steps=30).to_text())
    outs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.csv"
        assert run(["simulate", "--config", str(cfg), "--out", str(out), "-q"]) == 0
        outs.append(out.read_bytes())
    reports = []
    for _ in range(2):
        assert run(["selftest"]) == 0
        reports.append(capsys.readouterr().out)
    ok = outs[0] == outs[1] and reports[0] == reports[1] and len(outs[0]) > 0
    check(10, "determinism", ok, f"simulate {len(outs[0])} bytes, selftest {len(reports[0])} bytes identical")
