"""Chest-wall displacement synthesis.

The chest is modelled as two superposed sinusoids, one for respiration
and one for the heartbeat.  Everything downstream (the oscillator
frequency modulation, the receiver, the spectral estimator) consumes the
``TimeSeries`` produced here.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ParameterError


@dataclass(frozen=True)
class VitalSignProfile:
    """Respiration and heartbeat components of the chest motion.

    Rates are in Hz, displacement amplitudes in metres, phases in
    radians.  Rates and amplitudes must be finite and non-negative.
    """

    respiration_rate_hz: float
    respiration_amp_m: float
    respiration_phase_rad: float
    heartbeat_rate_hz: float
    heartbeat_amp_m: float
    heartbeat_phase_rad: float

    def __post_init__(self):
        for name in ("respiration_rate_hz", "respiration_amp_m",
                     "heartbeat_rate_hz", "heartbeat_amp_m"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {v!r}")
        for name in ("respiration_phase_rad", "heartbeat_phase_rad"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")

    @property
    def max_rate_hz(self):
        return max(self.respiration_rate_hz, self.heartbeat_rate_hz)


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal.

    ``samples[n]`` is the value at ``t0_s + n / sample_rate_hz``; the
    duration is exactly ``(len(samples) - 1) / sample_rate_hz``.
    """

    sample_rate_hz: float
    samples: np.ndarray
    t0_s: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise ParameterError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz!r}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise ParameterError("samples must be a 1-D array with at least one value")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.size

    @property
    def times_s(self):
        """Sample instants, exactly t0 + n/fs."""
        return self.t0_s + np.arange(self.samples.size) / self.sample_rate_hz

    @property
    def duration_s(self):
        return (self.samples.size - 1) / self.sample_rate_hz


def synthesize_chest_motion(profile, duration_s, fs):
    """Generate the chest displacement x(t) over ``duration_s`` seconds.

    x[n] = a_r sin(2*pi*f_r*t_n + phi_r) + a_h sin(2*pi*f_h*t_n + phi_h)
    with t_n = n/fs and N = round(duration_s * fs) samples, so a 10 s
    request at 100 Hz yields exactly 1000 samples.

    Parameters
    ----------
    profile : VitalSignProfile
    duration_s : float
        Requested record length in seconds, > 0.
    fs : float
        Sample rate in Hz; must exceed twice the faster vital rate.

    Returns
    -------
    TimeSeries
        The displacement record in metres, starting at t = 0.

    Raises
    ------
    ParameterError
        Non-finite or non-positive duration / sample rate.
    ConfigurationError
        ``fs`` at or below the Nyquist rate of either vital component.
    """
    if not (math.isfinite(duration_s) and duration_s > 0):
        raise ParameterError(f"duration_s must be finite and > 0, got {duration_s!r}")
    if not (math.isfinite(fs) and fs > 0):
        raise ParameterError(f"fs must be finite and > 0, got {fs!r}")
    if fs <= 2.0 * profile.max_rate_hz:
        raise ConfigurationError(
            f"sample rate {fs} Hz is not above twice the fastest vital rate "
            f"({profile.max_rate_hz} Hz)")

    n = int(round(duration_s * fs))
    if n < 1:
        raise ParameterError("duration_s too short for one sample at this rate")
    t = np.arange(n) / fs
    x = (profile.respiration_amp_m
         * np.sin(2.0 * np.pi * profile.respiration_rate_hz * t
                  + profile.respiration_phase_rad)
         + profile.heartbeat_amp_m
         * np.sin(2.0 * np.pi * profile.heartbeat_rate_hz * t
                  + profile.heartbeat_phase_rad))
    return TimeSeries(sample_rate_hz=fs, samples=x, t0_s=0.0)
