"""
Particle filter over the channel state ``[alpha_re, alpha_im, phi]``.

Particles are stored as an (S, 3) array with a matching weight vector.
Weighting uses the exact complex-Gaussian likelihood of the combined pilot
samples, evaluated in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from beamtrack.array import array_inner_product
from beamtrack.channel import ChannelState, Measurement, ProcessNoise

ALPHA_RE, ALPHA_IM, PHI = 0, 1, 2


@dataclass
class ParticleSet:
    states: np.ndarray
    weights: np.ndarray
    # set when weight_update had to fall back to uniform weights
    degenerate: bool = field(default=False)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.states.ndim != 2 or self.states.shape[1] != 3 or len(self.states) < 1:
            raise ValueError(f"states must have shape (S, 3) with S >= 1, got {self.states.shape}")
        if self.weights.shape != (len(self.states),):
            raise ValueError("one weight per particle required")

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class TrackerEstimate:
    state_hat: ChannelState
    aoa_rmse: float


def init_particles(
    x0: ChannelState, s: int, spread: ProcessNoise, rng: np.random.Generator
) -> ParticleSet:
    """Draw ``s`` particles from N(x0, diag(spread^2)) with equal weights."""
    if isinstance(s, bool) or int(s) != s or s < 1:
        raise ValueError(f"particle count must be a positive integer, got {s!r}")
    s = int(s)
    states = x0.as_array() + rng.standard_normal((s, 3)) * spread.as_array()
    return ParticleSet(states, np.full(s, 1.0 / s))


def propagate(ps: ParticleSet, noise: ProcessNoise, rng: np.random.Generator) -> ParticleSet:
    """Random-walk every particle by N(0, diag(sigma^2)); weights are kept."""
    states = ps.states + rng.standard_normal(ps.states.shape) * noise.as_array()
    return ParticleSet(states, ps.weights.copy())


def _check_n0(n0: float) -> None:
    if not n0 > 0:
        raise ValueError(f"noise power must be positive, got {n0!r}")


def log_likelihoods(states: np.ndarray, z: Measurement, pilot: np.ndarray, n0: float) -> np.ndarray:
    """Vectorized log-likelihood (up to a constant) for an (S, 3) state array."""
    _check_n0(n0)
    states = np.atleast_2d(states)
    alpha = states[:, ALPHA_RE] + 1j * states[:, ALPHA_IM]
    gain = array_inner_product(z.phi_hat_used, states[:, PHI], z.m_used)
    predicted = (alpha * gain)[:, None] * np.asarray(pilot)[None, :]
    resid = np.asarray(z.samples)[None, :] - predicted
    sq = resid.real**2 + resid.imag**2
    return -sq.sum(axis=1) / (n0 * z.m_used)


def log_likelihood(particle_state: ChannelState, z: Measurement, pilot: np.ndarray, n0: float) -> float:
    """
    Gaussian residual log-likelihood of one particle, up to an additive constant.

    Returns ``-sum_d |z_d - zhat_d|^2 / (n0 * m)`` where
    ``zhat_d = alpha * a(phi_hat_used, m)^H a(phi, m) * q_d``.
    """
    return float(log_likelihoods(particle_state.as_array(), z, pilot, n0)[0])


def weight_update(ps: ParticleSet, z: Measurement, pilot: np.ndarray, n0: float) -> ParticleSet:
    """Multiply weights by the likelihood and renormalize (log domain)."""
    with np.errstate(divide="ignore"):
        logw = np.log(ps.weights) + log_likelihoods(ps.states, z, pilot, n0)
    peak = np.max(logw)
    degenerate = not np.isfinite(peak)
    if not degenerate:
        w = np.exp(logw - peak)
        total = w.sum()
        degenerate = not (np.isfinite(total) and total > 0)
    if degenerate:
        w = np.full(len(ps), 1.0 / len(ps))
    else:
        w = w / total
    return ParticleSet(ps.states.copy(), w, degenerate=degenerate)


def resample(ps: ParticleSet, rng: np.random.Generator) -> ParticleSet:
    """Systematic resampling with one uniform offset; output weights are 1/S."""
    s = len(ps)
    positions = (rng.random() + np.arange(s)) / s
    cumulative = np.cumsum(ps.weights)
    idx = np.minimum(np.searchsorted(cumulative, positions, side="right"), s - 1)
    return ParticleSet(ps.states[idx].copy(), np.full(s, 1.0 / s), degenerate=ps.degenerate)


def estimate(ps: ParticleSet) -> TrackerEstimate:
    """Weighted posterior mean and the weighted RMS spread of particle AoAs about it."""
    w = ps.weights
    mean = w @ ps.states
    dev = ps.states[:, PHI] - mean[PHI]
    return TrackerEstimate(
        state_hat=ChannelState(float(mean[0]), float(mean[1]), float(mean[2])),
        aoa_rmse=math.sqrt(max(float(w @ (dev * dev)), 0.0)),
    )


def track_step(
    ps: ParticleSet,
    z: Measurement,
    pilot: np.ndarray,
    n0: float,
    noise: ProcessNoise,
    rng: np.random.Generator,
) -> tuple[ParticleSet, TrackerEstimate]:
    """
    One filter cycle: propagate, weight, estimate, then resample.

    The estimate is taken from the normalized weights before resampling
    resets them to uniform.
    """
    ps = propagate(ps, noise, rng)
    ps = weight_update(ps, z, pilot, n0)
    est = estimate(ps)
    return resample(ps, rng), est
