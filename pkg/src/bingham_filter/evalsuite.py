"""Evaluation harness: Kalman baseline, Monte-Carlo scenarios and figure data."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from math import pi

import numpy as np
from scipy.integrate import quad

from .bingham import BinghamParams, UnitVec2, mode, normalization_constant, pdf_angle, sample
from .errors import DomainError
from .filter import Convention, predict_batch, update_batch
from .s1group import compose_arrays

__all__ = [
    "angular_error",
    "wrap_half",
    "KalmanState",
    "kalman_predict",
    "kalman_update",
    "angular_variance",
    "angular_std",
    "ScenarioConfig",
    "RunMetrics",
    "simulate",
    "write_errors_csv",
    "figure_pdf_data",
    "figure_kld_data",
    "write_rows_csv",
]

# runs are processed in fixed-size chunks so results do not depend on thread count
_CHUNK = 256


def angular_error(a, b):
    """``arccos(|a . b|)`` in [0, pi/2]; accepts UnitVec2 or (..., 2) arrays."""
    if isinstance(a, UnitVec2) and isinstance(b, UnitVec2):
        dot = abs(a.c1 * b.c1 + a.c2 * b.c2)
        return float(np.arccos(min(dot, 1.0)))
    a = np.asarray(a.as_array() if isinstance(a, UnitVec2) else a, dtype=float)
    b = np.asarray(b.as_array() if isinstance(b, UnitVec2) else b, dtype=float)
    dot = np.abs(np.sum(a * b, axis=-1))
    return np.arccos(np.minimum(dot, 1.0))


def wrap_half(angle):
    """Map an angle difference into [-pi/2, pi/2)."""
    return np.mod(np.asarray(angle) + pi / 2, pi) - pi / 2


@dataclass(frozen=True)
class KalmanState:
    """Scalar Kalman belief over an axial angle; fields may also be arrays."""

    angle_mean: float
    variance: float

    def __post_init__(self):
        if not np.all(np.asarray(self.variance) > 0):
            raise DomainError("Kalman variance must be positive")
        object.__setattr__(self, "angle_mean", np.mod(self.angle_mean, pi))


def kalman_predict(s: KalmanState, q: float, offset: float = 0.0) -> KalmanState:
    return KalmanState(s.angle_mean + offset, s.variance + q)


def kalman_update(s: KalmanState, r: float, meas_angle: float) -> KalmanState:
    innovation = wrap_half(meas_angle - s.angle_mean)
    gain = s.variance / (s.variance + r)
    return KalmanState(s.angle_mean + gain * innovation, (1.0 - gain) * s.variance)


def _half_period_moment(z1, power):
    # integral of phi**power * exp(z1 sin^2 phi) over (-pi/2, pi/2), via symmetry
    upper = pi / 2
    points = None
    if z1 < 0:
        sigma = 1.0 / np.sqrt(-2.0 * z1)
        points = [p for p in (sigma, 5 * sigma, 20 * sigma) if p < upper] or None
    val, _ = quad(
        lambda t: t**power * np.exp(z1 * np.sin(t) ** 2),
        0.0,
        upper,
        points=points,
        limit=200,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return 2.0 * val


def angular_variance(z1: float) -> float:
    """Variance of the angle offset from the mode, over the half period around it."""
    if z1 > 0:
        raise DomainError("z1 must be <= 0")
    return _half_period_moment(z1, 2) / (0.5 * normalization_constant(z1))


def angular_std(z1: float) -> float:
    return float(np.sqrt(angular_variance(z1)))


@dataclass(frozen=True)
class ScenarioConfig:
    """Inputs of a Monte-Carlo comparison.

    ``kalman_q`` and ``kalman_r`` default to the angular variances of the
    corresponding Bingham noises.
    """

    steps: int
    runs: int
    seed: int
    system_noise: BinghamParams
    meas_noise: BinghamParams
    initial_state: UnitVec2 = field(default_factory=lambda: UnitVec2(1.0, 0.0))
    initial_estimate: BinghamParams = field(default_factory=BinghamParams.uniform)
    kalman_q: float | None = None
    kalman_r: float | None = None

    def __post_init__(self):
        if self.steps < 1 or self.runs < 1:
            raise DomainError("steps and runs must be positive")
        for name in ("kalman_q", "kalman_r"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive")

    @classmethod
    def from_text(cls, text: str) -> ScenarioConfig:
        """Parse ``key = value`` lines; ``#`` starts a comment.

        Noise and estimate parameters are five numbers ``m11 m12 m21 m22 z1``;
        ``initial_state`` is two numbers ``c1 c2``.
        """
        known = {f.name for f in fields(cls)}
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"line {lineno}: expected '<key> = <value>' with a known key")
            if key in raw:
                raise ValueError(f"line {lineno}: duplicate key {key!r}")
            raw[key] = value.split()
        missing = {"steps", "runs", "seed", "system_noise", "meas_noise"} - raw.keys()
        if missing:
            raise ValueError(f"missing keys: {', '.join(sorted(missing))}")

        kwargs = {}
        for key, vals in raw.items():
            if key in ("steps", "runs", "seed"):
                (kwargs[key],) = map(int, vals)
            elif key in ("kalman_q", "kalman_r"):
                (kwargs[key],) = map(float, vals)
            elif key == "initial_state":
                kwargs[key] = UnitVec2(*map(float, vals))
            else:
                kwargs[key] = BinghamParams.from_row(vals)
        return cls(**kwargs)

    def to_text(self) -> str:
        lines = [f"steps = {self.steps}", f"runs = {self.runs}", f"seed = {self.seed}"]
        for key in ("system_noise", "meas_noise", "initial_estimate"):
            lines.append(f"{key} = {getattr(self, key).to_text()}")
        lines.append(f"initial_state = {self.initial_state.c1:.17g} {self.initial_state.c2:.17g}")
        for key in ("kalman_q", "kalman_r"):
            if getattr(self, key) is not None:
                lines.append(f"{key} = {getattr(self, key):.17g}")
        return "\n".join(lines) + "\n"


@dataclass
class RunMetrics:
    """Aggregate errors in radians.

    ``per_step_err[k]`` is ``(bingham, kalman)`` averaged over runs;
    ``errors`` keeps the raw (runs, steps, 2) array.
    """

    mean_err_bingham: float
    mean_err_kalman: float
    per_step_err: list
    wallclock: float
    errors: np.ndarray = field(repr=False)


def _mode_angle(p: BinghamParams) -> float:
    return mode(p).angle


def _simulate_chunk(cfg: ScenarioConfig, run_ids, q, r, convention):
    n, steps = len(run_ids), cfg.steps
    w = np.empty((n, steps, 2))
    v = np.empty((n, steps, 2))
    for i, run in enumerate(run_ids):
        rng = np.random.default_rng([cfg.seed, run])
        w[i] = sample(cfg.system_noise, rng, steps)
        v[i] = sample(cfg.meas_noise, rng, steps)

    x = np.tile(cfg.initial_state.as_array(), (n, 1))
    m = np.tile(cfg.initial_estimate.m, (n, 1, 1))
    z1 = np.full(n, cfg.initial_estimate.z1)
    kf = KalmanState(
        np.full(n, _mode_angle(cfg.initial_estimate)),
        np.full(n, angular_variance(cfg.initial_estimate.z1)),
    )
    meas_offset = _mode_angle(cfg.meas_noise)
    sys_offset = _mode_angle(cfg.system_noise)

    err = np.empty((n, steps, 2))
    for k in range(steps):
        z_hat = compose_arrays(x, v[:, k])
        m, z1 = update_batch(m, z1, cfg.meas_noise, z_hat, convention)
        kf = kalman_update(kf, r, np.arctan2(z_hat[:, 1], z_hat[:, 0]) - meas_offset)
        err[:, k, 0] = angular_error(m[:, :, 1], x)
        kf_vec = np.stack([np.cos(kf.angle_mean), np.sin(kf.angle_mean)], axis=-1)
        err[:, k, 1] = angular_error(kf_vec, x)
        if k + 1 < steps:
            m, z1 = predict_batch(m, z1, cfg.system_noise)
            kf = kalman_predict(kf, q, sys_offset)
            x = compose_arrays(x, w[:, k])
    return err


def simulate(
    cfg: ScenarioConfig, threads: int = 1, convention: Convention = Convention.MODEL
) -> RunMetrics:
    """Run both filters on ``cfg.runs`` independent trajectories.

    Each run ``i`` draws from its own stream seeded with ``(cfg.seed, i)``,
    so the output is the same for any ``threads``.
    """
    start = time.perf_counter()
    q = cfg.kalman_q if cfg.kalman_q is not None else angular_variance(cfg.system_noise.z1)
    r = cfg.kalman_r if cfg.kalman_r is not None else angular_variance(cfg.meas_noise.z1)
    chunks = [range(i, min(i + _CHUNK, cfg.runs)) for i in range(0, cfg.runs, _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _simulate_chunk(cfg, c, q, r, convention), chunks))
    else:
        parts = [_simulate_chunk(cfg, c, q, r, convention) for c in chunks]
    errors = np.concatenate(parts, axis=0)
    per_step = errors.mean(axis=0)
    return RunMetrics(
        mean_err_bingham=float(errors[..., 0].mean()),
        mean_err_kalman=float(errors[..., 1].mean()),
        per_step_err=[(float(b), float(k)) for b, k in per_step],
        wallclock=time.perf_counter() - start,
        errors=errors,
    )


def _fmt(v) -> str:
    return f"{v:.15g}"


def write_rows_csv(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def write_errors_csv(metrics: RunMetrics, fh):
    """Per-step errors: one row per (step, run)."""
    errs = metrics.errors
    runs, steps, _ = errs.shape
    rows = ((k, i, errs[i, k, 0], errs[i, k, 1]) for k in range(steps) for i in range(runs))
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["step", "run", "err_bingham_rad", "err_kalman_rad"])
    for k, i, b, kk in rows:
        writer.writerow([str(k), str(i), _fmt(b), _fmt(kk)])


def figure_pdf_data(z1_list, resolution: int = 720):
    """Rows ``(theta, z1, pdf)`` over ``theta`` in [0, 2 pi), with m = identity."""
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    theta = np.arange(resolution) * (2.0 * pi / resolution)
    rows = []
    for z1 in z1_list:
        dens = pdf_angle(BinghamParams(np.eye(2), z1), theta)
        rows.extend((float(t), float(z1), float(d)) for t, d in zip(theta, dens))
    return rows


def _kld(z1):
    sigma = angular_std(z1)
    log_norm = np.log(0.5 * normalization_constant(z1))
    log_gauss_norm = np.log(sigma * np.sqrt(2.0 * pi))

    def integrand(t):
        log_p = z1 * np.sin(t) ** 2 - log_norm
        log_q = -0.5 * (t / sigma) ** 2 - log_gauss_norm
        return np.exp(log_p) * (log_p - log_q)

    s = 1.0 / np.sqrt(-2.0 * z1)
    points = [p for p in (s, 5 * s, 20 * s) if p < pi / 2] or None
    val, _ = quad(integrand, 0.0, pi / 2, points=points, limit=200, epsabs=1e-15, epsrel=1e-11)
    return 2.0 * val


def figure_kld_data(z1_list):
    """Rows ``(z1, kld)``: KL divergence of the Bingham angle density on a
    half period from a Gaussian with the same mode and standard deviation."""
    rows = []
    for z1 in z1_list:
        if not z1 < 0:
            raise DomainError("KL data needs z1 < 0")
        rows.append((float(z1), float(_kld(z1))))
    return rows


def errors_csv_text(metrics: RunMetrics) -> str:
    buf = io.StringIO()
    write_errors_csv(metrics, buf)
    return buf.getvalue()


def with_seed(cfg: ScenarioConfig, seed: int) -> ScenarioConfig:
    return replace(cfg, seed=seed)
