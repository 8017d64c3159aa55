"""
Flat ``key = value`` experiment files.

Angles are given in degrees here and converted to radians for SimConfig.
Blank lines and ``#`` comments are ignored; unknown keys are rejected.
"""

from __future__ import annotations

import math
from pathlib import Path

from beamtrack.channel import ChannelState, ProcessNoise
from beamtrack.sim import SimConfig


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


KEYS = {
    "m0": int,
    "s": int,
    "d": int,
    "k_steps": int,
    "runs": int,
    "seed": int,
    "alpha0_re": float,
    "alpha0_im": float,
    "phi0_deg": float,
    "sigma_alpha": float,
    "sigma_phi_deg": float,
    "snr0_db": float,
    "mode": str,
    "noiseless": _parse_bool,
}


def defaults() -> dict:
    """Flat view of the default SimConfig."""
    return to_flat(SimConfig())


def to_flat(cfg: SimConfig) -> dict:
    return {
        "m0": cfg.m0,
        "s": cfg.s,
        "d": cfg.d,
        "k_steps": cfg.k_steps,
        "runs": cfg.runs,
        "seed": cfg.seed,
        "alpha0_re": cfg.x0.alpha_re,
        "alpha0_im": cfg.x0.alpha_im,
        "phi0_deg": math.degrees(cfg.x0.phi),
        "sigma_alpha": cfg.process_noise.sigma_alpha_re,
        "sigma_phi_deg": math.degrees(cfg.process_noise.sigma_phi),
        "snr0_db": cfg.snr0_db,
        "mode": cfg.mode,
        "noiseless": cfg.noiseless,
    }


def from_flat(flat: dict) -> SimConfig:
    try:
        return SimConfig(
            m0=flat["m0"],
            s=flat["s"],
            d=flat["d"],
            k_steps=flat["k_steps"],
            runs=flat["runs"],
            seed=flat["seed"],
            x0=ChannelState(flat["alpha0_re"], flat["alpha0_im"], math.radians(flat["phi0_deg"])),
            process_noise=ProcessNoise(
                flat["sigma_alpha"], flat["sigma_alpha"], math.radians(flat["sigma_phi_deg"])
            ),
            snr0_db=flat["snr0_db"],
            mode=flat["mode"],
            noiseless=flat["noiseless"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_assignment(text: str, where: str = "") -> tuple[str, object]:
    if "=" not in text:
        raise ConfigError(f"{where}expected key=value, got {text!r}")
    key, _, raw = text.partition("=")
    key, raw = key.strip(), raw.strip()
    if key not in KEYS:
        raise ConfigError(f"{where}unknown key {key!r}; valid keys: {', '.join(KEYS)}")
    try:
        return key, KEYS[key](raw)
    except ValueError as exc:
        raise ConfigError(f"{where}bad value for {key}: {exc}") from exc


def load(path=None, overrides=()) -> SimConfig:
    """Build a SimConfig from defaults, an optional file and ``key=value`` overrides."""
    flat = defaults()
    if path is not None:
        path = Path(path)
        try:
            lines = path.read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for lineno, line in enumerate(lines, 1):
            line = line.split("#", 1)[0].strip()
            if line:
                key, value = parse_assignment(line, f"{path}:{lineno}: ")
                flat[key] = value
    for item in overrides:
        key, value = parse_assignment(item, "--set: ")
        flat[key] = value
    return from_flat(flat)


def dumps(cfg: SimConfig) -> str:
    return "".join(f"{key} = {value}\n" for key, value in to_flat(cfg).items())
