"""
Episode loop and Monte Carlo aggregation.

Each slot: the true channel takes a random-walk step, the base station
receives the pilot through the combiner chosen in the previous slot, the
particle filter updates, and the beamwidth rule picks the next active count.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from beamtrack.array import receive_snr
from beamtrack.beamwidth import select_beamwidth
from beamtrack.channel import (
    PHI_MAX,
    PHI_MIN,
    ChannelState,
    ProcessNoise,
    evolve_state,
    make_pilot,
    synthesize_measurement,
)
from beamtrack.tracker import init_particles, track_step

MODES = ("adaptive", "fixed")


@dataclass(frozen=True)
class SimConfig:
    """Experiment parameters; defaults are the high-mobility scenario (64 antennas, 20 dB)."""

    m0: int = 64
    s: int = 1000
    d: int = 5
    k_steps: int = 100
    runs: int = 200
    x0: ChannelState = ChannelState(1 / math.sqrt(2), 1 / math.sqrt(2), math.pi / 2)
    process_noise: ProcessNoise = ProcessNoise(0.1, 0.1, math.radians(1.0))
    snr0_db: float = 20.0
    seed: int = 0
    mode: str = "adaptive"
    # synthesize measurements without noise; the filter still assumes n0
    noiseless: bool = False

    def __post_init__(self):
        for name in ("m0", "s", "d", "k_steps", "runs"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not math.isfinite(self.snr0_db):
            raise ValueError(f"snr0_db must be finite, got {self.snr0_db!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not PHI_MIN <= self.x0.phi <= PHI_MAX:
            raise ValueError("initial AoA must lie within [1, 179] degrees")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed!r}")

    @property
    def n0(self) -> float:
        return noise_power_from_snr(self.snr0_db, self.x0.alpha, self.m0)

    def replace(self, **changes) -> SimConfig:
        return dataclasses.replace(self, **changes)


@dataclass
class EpisodeTrace:
    """Per-slot record of one episode; angles in radians, SNR linear."""

    phi_true: np.ndarray
    phi_hat: np.ndarray
    e_k: np.ndarray
    m_k: np.ndarray
    snr: np.ndarray

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, len(self.phi_true) + 1)

    @property
    def abs_err(self) -> np.ndarray:
        return np.abs(self.phi_true - self.phi_hat)

    def __len__(self) -> int:
        return len(self.phi_true)


@dataclass
class AggregateMetrics:
    rmse_per_step: np.ndarray
    mean_m_per_step: np.ndarray
    mean_snr_per_step: np.ndarray
    pearson_e_vs_abs_err: float
    traces: list[EpisodeTrace] = field(default_factory=list, repr=False)

    @property
    def mean_rmse(self) -> float:
        """RMSE averaged over time slots."""
        return float(np.mean(self.rmse_per_step))


def noise_power_from_snr(snr0_db: float, alpha0: complex, m0: int) -> float:
    """Per-element noise power giving ``snr0_db`` with ``m0`` perfectly aligned antennas."""
    if m0 < 1:
        raise ValueError(f"m0 must be >= 1, got {m0!r}")
    return m0 * abs(alpha0) ** 2 / 10 ** (snr0_db / 10)


def _clip_angle(phi: float) -> float:
    return min(max(phi, PHI_MIN), PHI_MAX)


def run_episode(cfg: SimConfig, rng: np.random.Generator) -> EpisodeTrace:
    """
    Simulate ``cfg.k_steps`` slots of tracking.

    ``rng`` is split into independent streams for the true channel, the
    receiver noise and the filter, so two modes run from the same seed see
    the same channel trajectory.
    """
    truth_rng, meas_rng, filt_rng = rng.spawn(3)
    n0 = cfg.n0
    meas_n0 = 0.0 if cfg.noiseless else n0
    pilot = make_pilot(cfg.d)
    noise = cfg.process_noise

    x = cfg.x0
    phi_hat, m = cfg.x0.phi, cfg.m0
    ps = init_particles(cfg.x0, cfg.s, noise, filt_rng)

    rows = np.empty((cfg.k_steps, 5))
    for k in range(cfg.k_steps):
        x = evolve_state(x, noise, truth_rng)
        z = synthesize_measurement(x, phi_hat, m, pilot, meas_n0, meas_rng)
        ps, est = track_step(ps, z, pilot, n0, noise, filt_rng)
        # a diverged filter may wander past endfire; the beam cannot
        phi_hat = _clip_angle(est.state_hat.phi)
        if cfg.mode == "adaptive":
            m = select_beamwidth(phi_hat, est.aoa_rmse, cfg.m0).m_k
        else:
            m = cfg.m0
        snr = receive_snr(x.alpha, n0, phi_hat, x.phi, m)
        rows[k] = (x.phi, phi_hat, est.aoa_rmse, m, snr)

    return EpisodeTrace(
        phi_true=rows[:, 0],
        phi_hat=rows[:, 1],
        e_k=rows[:, 2],
        m_k=rows[:, 3].astype(int),
        snr=rows[:, 4],
    )


def episode_rng(seed: int, run_index: int) -> np.random.Generator:
    """Independent, individually reproducible generator for one episode."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run_index,)))


def _run_indexed(args) -> EpisodeTrace:
    cfg, i = args
    return run_episode(cfg, episode_rng(cfg.seed, i))


def aggregate(traces: list[EpisodeTrace]) -> AggregateMetrics:
    """Per-step RMSE, mean active count and mean SNR across episodes."""
    if not traces:
        raise ValueError("no traces to aggregate")
    sq_err = np.stack([(t.phi_true - t.phi_hat) ** 2 for t in traces])
    try:
        rho = correlation(traces)
    except ValueError:
        rho = math.nan
    return AggregateMetrics(
        rmse_per_step=np.sqrt(sq_err.mean(axis=0)),
        mean_m_per_step=np.stack([t.m_k for t in traces]).mean(axis=0),
        mean_snr_per_step=np.stack([t.snr for t in traces]).mean(axis=0),
        pearson_e_vs_abs_err=rho,
        traces=list(traces),
    )


def run_monte_carlo(cfg: SimConfig, workers: int = 1) -> AggregateMetrics:
    """
    Run ``cfg.runs`` independent episodes and aggregate them.

    Episode ``i`` is seeded from ``(cfg.seed, i)``, so results do not depend
    on ``workers``.
    """
    jobs = [(cfg, i) for i in range(cfg.runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_run_indexed, jobs, chunksize=max(1, cfg.runs // (4 * workers))))
    else:
        traces = [_run_indexed(job) for job in jobs]
    return aggregate(traces)


def _pool(traces) -> tuple[np.ndarray, np.ndarray]:
    e = np.concatenate([t.e_k for t in traces])
    err = np.concatenate([t.abs_err for t in traces])
    return e, err


def pearson(x, y) -> float:
    """Pearson correlation; raises ValueError when either variance vanishes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.size != y.size:
        raise ValueError("need at least two paired points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = dx @ dx, dy @ dy
    if sxx <= 0 or syy <= 0:
        raise ValueError("correlation undefined for zero-variance data")
    return float(np.clip(dx @ dy / math.sqrt(sxx * syy), -1.0, 1.0))


def correlation(traces) -> float:
    """Pooled Pearson correlation between ``e_k`` and ``|phi - phi_hat|``."""
    return pearson(*_pool(traces))


def mean_m_by_error_quantile(traces, n_bins: int = 5) -> np.ndarray:
    """Mean active count within each ``e_k`` quantile bin (lowest error first)."""
    e = np.concatenate([t.e_k for t in traces])
    m = np.concatenate([t.m_k for t in traces])
    order = np.argsort(e, kind="stable")
    return np.array([m[chunk].mean() for chunk in np.array_split(order, n_bins)])
