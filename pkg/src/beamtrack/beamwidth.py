"""
SNR-maximizing choice of the number of active antennas.

The normalized array gain ``|sin(M x)/(sqrt(M) sin x)|`` with
``x = pi * dcos / 2`` peaks where ``tan(M x) = 2 M x``. Its first positive
root ``x_star`` fixes the optimum ``M = 2 x_star / (pi |dcos|)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from beamtrack.array import check_angle

_GAP_TOL = 1e-12
_E_TOL = 1e-9


@dataclass(frozen=True)
class BeamDecision:
    m_k: int
    clamped: bool


def newton(f, fprime, x0: float, tol: float = 1e-12, bounds=(-math.inf, math.inf), max_iter: int = 100) -> float:
    """Newton-Raphson iteration until ``|f(x)| < tol``; raises if it leaves ``bounds``."""
    lo, hi = bounds
    x = x0
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) < tol:
            return x
        x = x - fx / fprime(x)
        if not lo < x < hi:
            raise RuntimeError(f"Newton iteration left the interval ({lo}, {hi}) at x={x}")
    raise RuntimeError(f"Newton iteration did not converge in {max_iter} steps")


@functools.cache
def solve_root() -> float:
    """First positive root of ``tan x = 2x`` (about 1.165561)."""
    return newton(
        lambda x: math.tan(x) - 2.0 * x,
        lambda x: 1.0 / math.cos(x) ** 2 - 2.0,
        x0=1.2,
        bounds=(0.0, math.pi / 2),
    )


def ideal_m(phi_hat: float, phi: float) -> float:
    """Real-valued gain-maximizing active count for a known true AoA."""
    gap = abs(math.cos(check_angle(phi_hat)) - math.cos(check_angle(phi)))
    if gap < _GAP_TOL:
        raise ValueError("cosine gap is zero: every array size is optimal at perfect alignment")
    return 2.0 * solve_root() / (math.pi * gap)


def _round_half_away(v: float) -> int:
    return int(math.copysign(math.floor(abs(v) + 0.5), v))


def select_beamwidth(phi_hat: float, e_k: float, m0: int) -> BeamDecision:
    """
    Active antenna count for an estimate ``phi_hat`` with RMS error ``e_k``.

    Sums the optimal counts for the two hypotheses ``phi_hat +- e_k``, rounds
    half away from zero and clamps to ``[1, m0]``. A vanishing error or
    cosine gap yields the full array.
    """
    phi_hat = check_angle(phi_hat)
    if m0 < 1:
        raise ValueError(f"m0 must be >= 1, got {m0!r}")
    if not e_k >= 0:
        raise ValueError(f"e_k must be nonnegative, got {e_k!r}")
    if e_k < _E_TOL:
        return BeamDecision(m0, True)
    c = math.cos(phi_hat)
    gaps = (abs(c - math.cos(phi_hat + e_k)), abs(c - math.cos(phi_hat - e_k)))
    if min(gaps) < _GAP_TOL:
        return BeamDecision(m0, True)
    k = solve_root() / math.pi
    m = _round_half_away(k / gaps[0] + k / gaps[1])
    if m > m0:
        return BeamDecision(m0, True)
    return BeamDecision(max(m, 1), False)
