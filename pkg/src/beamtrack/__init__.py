"""Particle-filter mmWave beam tracking with adaptive beamwidth control."""

from beamtrack.array import (
    check_angle,
    closed_form_gain,
    combine,
    normalized_gain,
    receive_snr,
    steering_vector,
)
from beamtrack.beamwidth import BeamDecision, ideal_m, select_beamwidth, solve_root
from beamtrack.channel import (
    ChannelState,
    Measurement,
    ProcessNoise,
    evolve_state,
    make_pilot,
    synthesize_measurement,
)
from beamtrack.sim import (
    AggregateMetrics,
    EpisodeTrace,
    SimConfig,
    correlation,
    noise_power_from_snr,
    run_episode,
    run_monte_carlo,
)
from beamtrack.tracker import (
    ParticleSet,
    TrackerEstimate,
    estimate,
    init_particles,
    log_likelihood,
    propagate,
    resample,
    track_step,
    weight_update,
)

__version__ = "0.1.0"
