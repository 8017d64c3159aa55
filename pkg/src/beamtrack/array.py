"""
Half-wavelength uniform linear array: steering vectors, analog combining,
array-factor gain and receive SNR.

Angles are radians measured from the array axis. Only the first ``m``
elements of the array are active, so every quantity takes the active
element count ``m`` as an explicit argument.
"""

from __future__ import annotations

import math

import numpy as np

# below this |sin(pi*delta/2)| the Dirichlet ratio is replaced by its limit
_DENOM_TOL = 1e-12


def check_angle(phi: float) -> float:
    """Validate a physical steering angle and return it as a float."""
    phi = float(phi)
    if not math.isfinite(phi) or phi < 0.0 or phi > math.pi:
        raise ValueError(f"steering angle must lie in [0, pi] rad, got {phi!r}")
    return phi


def _check_count(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ValueError(f"active antenna count must be a positive integer, got {m!r}")
    return int(m)


def steering_vector(phi: float, m: int) -> np.ndarray:
    """
    Steering vector ``[1, e^{j pi cos(phi)}, ..., e^{j pi (m-1) cos(phi)}]``.

    Parameters
    ----------
    phi : float
        Angle of arrival in radians, within [0, pi].
    m : int
        Number of active elements.

    Returns
    -------
    np.ndarray
        Complex vector of shape (m,). The first entry is exactly 1.
    """
    phi = check_angle(phi)
    m = _check_count(m)
    v = np.exp(1j * math.pi * np.arange(m) * math.cos(phi))
    v[0] = 1.0
    return v


def combine(w: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Apply the analog combiner: returns ``w^H @ samples`` as a 1-D row."""
    w = np.asarray(w, dtype=complex)
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim == 1:
        samples = samples[:, None]
    if w.ndim != 1 or samples.ndim != 2 or samples.shape[0] != w.shape[0]:
        raise ValueError(
            f"combiner of length {w.shape} does not match samples of shape {samples.shape}"
        )
    return w.conj() @ samples


def array_inner_product(phi_hat: float, phi, m: int):
    """
    Direct-sum ``a(phi_hat, m)^H a(phi, m)``.

    ``phi`` may be an array (e.g. one angle per particle); the result then has
    the same shape. No range check is applied to ``phi`` so that propagated
    particles outside (0, pi) can still be scored.
    """
    phi = np.asarray(phi, dtype=float)
    n = np.arange(m)
    delta = np.cos(phi)[..., None] - math.cos(phi_hat)
    return np.exp(1j * math.pi * n * delta).sum(axis=-1)


def normalized_gain(phi_hat: float, phi: float, m: int) -> float:
    """``|a(phi_hat, m)^H a(phi, m)| / sqrt(m)`` by direct inner product."""
    phi_hat = check_angle(phi_hat)
    phi = check_angle(phi)
    m = _check_count(m)
    return float(abs(array_inner_product(phi_hat, phi, m)) / math.sqrt(m))


def closed_form_gain(delta_cos: float, m: int) -> float:
    """
    Dirichlet-kernel form of the normalized gain.

    Evaluates ``|sin(pi m d / 2) / (sqrt(m) sin(pi d / 2))|`` with
    ``d = cos(phi_hat) - cos(phi)``. At the shared zeros ``d = 0, +-2`` the
    analytic limit ``sqrt(m)`` is returned.
    """
    m = _check_count(m)
    half = math.pi * float(delta_cos) / 2.0
    den = math.sin(half)
    if abs(den) < _DENOM_TOL:
        return math.sqrt(m)
    return abs(math.sin(m * half) / (math.sqrt(m) * den))


def receive_snr(alpha: complex, n0: float, phi_hat: float, phi: float, m: int) -> float:
    """
    Linear post-combining SNR ``|alpha|^2 / n0 * |w^H a|^2 / m``.

    Raises
    ------
    ValueError
        If ``n0`` is not positive.
    """
    if not n0 > 0:
        raise ValueError(f"noise power must be positive, got {n0!r}")
    return abs(alpha) ** 2 / n0 * normalized_gain(phi_hat, phi, m) ** 2
