import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from beamtrack.array import closed_form_gain
from beamtrack.beamwidth import BeamDecision, ideal_m, newton, select_beamwidth, solve_root

deg = math.radians


def bisect_root(lo=1.0, hi=1.5, tol=1e-15):
    f = lambda x: math.tan(x) - 2 * x  # noqa: E731
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def argmax_m(delta, m_max=500):
    gains = [closed_form_gain(delta, m) for m in range(1, m_max + 1)]
    return int(np.argmax(gains)) + 1


class TestRoot:
    def test_value(self):
        x = solve_root()
        assert f"{x:.4g}" == "1.166"
        assert 1.1 < x < 1.2
        # 1.165 is the 3-decimal truncation
        assert math.floor(x * 1000) / 1000 == 1.165

    def test_defining_equation(self):
        x = solve_root()
        assert abs(math.tan(x) - 2 * x) < 1e-9

    def test_bisection_agrees(self):
        assert solve_root() == pytest.approx(bisect_root(), abs=1e-9)

    def test_newton_leaving_bracket_raises(self):
        with pytest.raises(RuntimeError):
            newton(lambda x: math.tan(x) - 2 * x, lambda x: 1 / math.cos(x) ** 2 - 2, x0=0.6, bounds=(0, math.pi / 2))


class TestIdealM:
    def test_ninety_vs_ninety_two(self):
        gap = abs(math.cos(deg(92)))
        expected = 2 * bisect_root() / (math.pi * gap)
        assert ideal_m(deg(90), deg(92)) == pytest.approx(expected, rel=1e-12)
        assert round(ideal_m(deg(90), deg(92)), 2) == 21.26

    @pytest.mark.parametrize("phi_hat, phi", [(1.0, 1.3), (1.6, 1.4), (0.5, 2.5)])
    def test_inverts_stationarity(self, phi_hat, phi):
        m = ideal_m(phi_hat, phi)
        assert math.pi * m * abs(math.cos(phi_hat) - math.cos(phi)) / 2 == pytest.approx(solve_root(), rel=1e-12)

    def test_degenerate_gap(self):
        with pytest.raises(ValueError):
            ideal_m(1.0, 1.0)

    def test_integer_scan_within_one(self):
        rng = np.random.default_rng(2024)
        for delta in rng.uniform(0.01, 0.5, 100):
            ideal = 2 * solve_root() / (math.pi * delta)
            assert abs(argmax_m(delta) - ideal) <= 1

    def test_first_lobe_beats_distant_integers(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            phi_hat = rng.uniform(deg(20), deg(160))
            delta = rng.uniform(0.02, 0.5) * rng.choice([-1, 1])
            c = math.cos(phi_hat) - delta
            if not -1 <= c <= 1:
                continue
            phi = math.acos(c)
            best = round(ideal_m(phi_hat, phi))
            g_best = closed_form_gain(delta, best)
            for m in range(1, 501):
                if abs(m - best) > 1:
                    assert g_best >= closed_form_gain(delta, m) - 1e-9


class TestSelect:
    def test_zero_error(self):
        assert select_beamwidth(deg(90), 0.0, 64) == BeamDecision(64, True)

    def test_one_degree_broadside(self):
        # direct evaluation with the converged root: 2 * (x*/pi) / sin(1 deg) = 42.517
        term = bisect_root() / math.pi / math.sin(deg(1))
        assert 2 * term == pytest.approx(42.517, abs=1e-3)
        assert select_beamwidth(deg(90), deg(1), 64) == BeamDecision(43, False)

    def test_half_degree_clamps(self):
        assert select_beamwidth(deg(90), deg(0.5), 64) == BeamDecision(64, True)

    def test_large_error_floors_at_one(self):
        assert select_beamwidth(deg(90), deg(89), 64) == BeamDecision(1, False)

    def test_asymmetric_terms(self):
        phi_hat, e = deg(60), deg(2)
        k = solve_root() / math.pi
        expected = math.floor(
            k / abs(math.cos(phi_hat) - math.cos(phi_hat + e)) + k / abs(math.cos(phi_hat) - math.cos(phi_hat - e)) + 0.5
        )
        assert select_beamwidth(phi_hat, e, 64).m_k == expected

    def test_broadside_equals_twice_one_term(self):
        for e_deg in (0.8, 1.7, 3.0, 11.0):
            term = solve_root() / math.pi / math.sin(deg(e_deg))
            assert select_beamwidth(deg(90), deg(e_deg), 10_000).m_k == math.floor(2 * term + 0.5)

    def test_monotone_at_broadside(self):
        ms = [select_beamwidth(deg(90), deg(e), 64).m_k for e in np.linspace(0.01, 20, 2000)]
        assert all(a >= b for a, b in zip(ms, ms[1:]))

    @given(
        phi_hat=st.floats(min_value=deg(1), max_value=deg(179)),
        e=st.floats(min_value=0, max_value=deg(45)),
        m0=st.integers(1, 256),
    )
    def test_bounds(self, phi_hat, e, m0):
        d = select_beamwidth(phi_hat, e, m0)
        assert 1 <= d.m_k <= m0
