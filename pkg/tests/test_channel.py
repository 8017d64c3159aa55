import math

import numpy as np
import pytest

from beamtrack.array import normalized_gain
from beamtrack.channel import (
    ChannelState,
    ProcessNoise,
    evolve_state,
    make_pilot,
    synthesize_measurement,
)

deg = math.radians
ALPHA0 = (1 + 1j) / math.sqrt(2)
X0 = ChannelState(ALPHA0.real, ALPHA0.imag, deg(90))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestEvolve:
    def test_zero_noise_is_identity(self, rng):
        assert evolve_state(X0, ProcessNoise(0, 0, 0), rng) == X0

    def test_aoa_increment_std(self, rng):
        noise = ProcessNoise(0, 0, deg(1.0))
        steps = np.array([evolve_state(X0, noise, rng).phi - X0.phi for _ in range(100_000)])
        assert steps.std() == pytest.approx(deg(1.0), rel=0.02)

    def test_clamps_near_endfire(self):
        class Big:
            def standard_normal(self, n):
                return np.array([0.0, 0.0, 10.0])

        x = ChannelState(1.0, 0.0, deg(179.5))
        assert evolve_state(x, ProcessNoise(0, 0, deg(1)), Big()).phi == deg(179)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            ProcessNoise(0.1, -0.1, 0.0)


class TestPilot:
    def test_five_samples(self):
        q = make_pilot(5)
        np.testing.assert_allclose(q, np.full(5, 1 / math.sqrt(5)))

    def test_single_sample(self):
        assert make_pilot(1).tolist() == [1]

    @pytest.mark.parametrize("d", [1, 2, 3, 5, 17, 1000])
    def test_unit_energy(self, d):
        assert np.sum(np.abs(make_pilot(d)) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            make_pilot(0)


class TestMeasurement:
    def test_noiseless_aligned(self, rng):
        z = synthesize_measurement(X0, deg(90), 64, make_pilot(5), 0.0, rng)
        expected = 64 * (1 + 1j) / (math.sqrt(2) * math.sqrt(5))
        np.testing.assert_allclose(z.samples, np.full(5, expected), atol=1e-12)
        assert (z.phi_hat_used, z.m_used) == (deg(90), 64)

    def test_zero_gain_zero_noise(self, rng):
        z = synthesize_measurement(ChannelState(0, 0, 1.0), 1.2, 16, make_pilot(3), 0.0, rng)
        assert np.all(z.samples == 0)

    @pytest.mark.parametrize("phi_hat_deg, m", [(90, 64), (93, 64), (85, 10), (60, 3)])
    def test_noiseless_magnitude(self, rng, phi_hat_deg, m):
        q = make_pilot(4)
        z = synthesize_measurement(X0, deg(phi_hat_deg), m, q, 0.0, rng)
        expected = abs(X0.alpha) * normalized_gain(deg(phi_hat_deg), X0.phi, m) * math.sqrt(m) * abs(q[0])
        np.testing.assert_allclose(np.abs(z.samples), expected, rtol=1e-10, atol=1e-12)

    def test_nlos_path_adds_linearly(self, rng):
        q = make_pilot(2)
        los = synthesize_measurement(X0, deg(90), 8, q, 0.0, rng).samples
        nlos_only = synthesize_measurement(ChannelState(0, 0, X0.phi), deg(90), 8, q, 0.0, rng, [(0.3j, deg(70))])
        both = synthesize_measurement(X0, deg(90), 8, q, 0.0, rng, [(0.3j, deg(70))])
        np.testing.assert_allclose(both.samples, los + nlos_only.samples, atol=1e-12)

    def test_per_sample_snr(self, rng):
        n0, m, d = 0.64, 64, 5
        q = make_pilot(d)
        clean = synthesize_measurement(X0, deg(90), m, q, 0.0, rng).samples
        noise = np.array(
            [synthesize_measurement(X0, deg(90), m, q, n0, rng).samples - clean for _ in range(10_000)]
        )
        noise_var = np.mean(np.abs(noise) ** 2)
        assert noise_var == pytest.approx(n0 * m, rel=0.05)
        per_sample_snr = np.abs(clean[0]) ** 2 / noise_var
        assert per_sample_snr == pytest.approx(100 / d, rel=0.05)
