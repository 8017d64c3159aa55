"""
Ground-truth channel evolution and uplink pilot measurements.

The channel state is the LOS gain (real and imaginary parts) and the AoA.
It evolves as a Gaussian random walk; the base station observes the pilot
through the analog combiner steered at the previous estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from beamtrack.array import _check_count, check_angle, steering_vector

PHI_MIN = math.radians(1.0)
PHI_MAX = math.radians(179.0)


@dataclass(frozen=True)
class ChannelState:
    alpha_re: float
    alpha_im: float
    phi: float

    @property
    def alpha(self) -> complex:
        return complex(self.alpha_re, self.alpha_im)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha_re, self.alpha_im, self.phi])


@dataclass(frozen=True)
class ProcessNoise:
    """Per-slot standard deviations of the random-walk increments."""

    sigma_alpha_re: float
    sigma_alpha_im: float
    sigma_phi: float

    def __post_init__(self):
        for name in ("sigma_alpha_re", "sigma_alpha_im", "sigma_phi"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma_alpha_re, self.sigma_alpha_im, self.sigma_phi])


@dataclass(frozen=True)
class Measurement:
    """Combined pilot samples plus the combiner that produced them."""

    samples: np.ndarray
    phi_hat_used: float
    m_used: int


def evolve_state(x: ChannelState, noise: ProcessNoise, rng: np.random.Generator) -> ChannelState:
    """One random-walk step ``x + u``; the AoA is clamped to [1, 179] degrees."""
    u = rng.standard_normal(3) * noise.as_array()
    phi = min(max(x.phi + u[2], PHI_MIN), PHI_MAX)
    return ChannelState(x.alpha_re + u[0], x.alpha_im + u[1], phi)


def make_pilot(d: int) -> np.ndarray:
    """Constant unit-energy pilot of ``d`` samples, each ``1/sqrt(d)``."""
    d = _check_count(d)
    return np.full(d, 1.0 / math.sqrt(d), dtype=complex)


def synthesize_measurement(
    x: ChannelState,
    phi_hat_prev: float,
    m_prev: int,
    pilot: np.ndarray,
    n0: float,
    rng: np.random.Generator,
    nlos_paths: Sequence[tuple[complex, float]] = (),
) -> Measurement:
    """
    Received row ``w^H h q + w^H N`` for one time slot.

    Parameters
    ----------
    x : ChannelState
        True LOS gain and AoA.
    phi_hat_prev, m_prev : float, int
        Steering angle and active element count of the combiner.
    pilot : np.ndarray
        Pilot row ``q`` of length D.
    n0 : float
        Per-element noise power. ``N`` has i.i.d. CN(0, n0) entries, so each
        combined sample carries noise of power ``n0 * m_prev``.
    rng : np.random.Generator
    nlos_paths : sequence of (gain, angle)
        Extra propagation paths added to the channel vector.
    """
    if n0 < 0:
        raise ValueError(f"noise power must be nonnegative, got {n0!r}")
    pilot = np.asarray(pilot, dtype=complex)
    if pilot.ndim != 1 or pilot.size < 1:
        raise ValueError("pilot must be a non-empty 1-D row")
    w = steering_vector(phi_hat_prev, m_prev)
    h = x.alpha * steering_vector(x.phi, m_prev)
    for gain, angle in nlos_paths:
        h = h + gain * steering_vector(check_angle(angle), m_prev)
    z = (w.conj() @ h) * pilot
    if n0 > 0:
        shape = (m_prev, pilot.size)
        noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(n0 / 2)
        z = z + w.conj() @ noise
    return Measurement(samples=z, phi_hat_used=float(phi_hat_prev), m_used=int(m_prev))
