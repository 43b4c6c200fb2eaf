"""Self-injection-locked oscillator model.

The reflected wave pulls the oscillator's instantaneous frequency by

    dw(t) = -w_LR * sin(4*pi*(R + x(t)) / lambda)

where w_LR is the locking range (rad/s), R the nominal antenna-to-chest
distance and x(t) the chest displacement.  This steady-state law is
applied quasi-statically; lock-acquisition transients are out of scope.
The modulated oscillator output is rendered at complex baseband by
integrating the deviation (trapezoidal rule, zero initial phase).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ParameterError
from .physio import TimeSeries

SPEED_OF_LIGHT_M_S = 299_792_458.0


@dataclass(frozen=True)
class SiloConfig:
    """Oscillator constants: carrier f0 (Hz), locking range (rad/s),
    nominal range R (m).  The wavelength is always derived from f0."""

    carrier_freq_hz: float
    locking_range_rad_s: float
    nominal_range_m: float

    def __post_init__(self):
        for name in ("carrier_freq_hz", "locking_range_rad_s", "nominal_range_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def wavelength_m(self):
        return wavelength(self.carrier_freq_hz)


@dataclass(frozen=True)
class ComplexBaseband:
    """Uniformly sampled complex signal stored as parallel I/Q arrays."""

    sample_rate_hz: float
    i_samples: np.ndarray
    q_samples: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise ParameterError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz!r}")
        i = np.asarray(self.i_samples, dtype=float)
        q = np.asarray(self.q_samples, dtype=float)
        if i.ndim != 1 or q.ndim != 1 or i.size != q.size or i.size < 1:
            raise ParameterError("i_samples and q_samples must be equal-length 1-D arrays")
        object.__setattr__(self, "i_samples", i)
        object.__setattr__(self, "q_samples", q)

    def __len__(self):
        return self.i_samples.size

    @property
    def complex_samples(self):
        return self.i_samples + 1j * self.q_samples

    @property
    def times_s(self):
        return np.arange(self.i_samples.size) / self.sample_rate_hz


def wavelength(f0):
    """Free-space wavelength c/f0 in metres (c = 299 792 458 m/s)."""
    if not (math.isfinite(f0) and f0 > 0):
        raise ParameterError(f"carrier frequency must be finite and > 0, got {f0!r}")
    return SPEED_OF_LIGHT_M_S / f0


def instantaneous_freq_deviation(x, cfg):
    """Instantaneous frequency deviation of the locked oscillator.

    Applies dw[n] = -w_LR * sin(4*pi*(R + x[n]) / lambda) sample by
    sample.  The output has the same sample rate, length and start time
    as ``x`` and is bounded by the locking range: |dw[n]| <= w_LR.

    Parameters
    ----------
    x : TimeSeries
        Chest displacement in metres.
    cfg : SiloConfig

    Returns
    -------
    TimeSeries
        Frequency deviation in rad/s.
    """
    if not np.all(np.isfinite(x.samples)):
        raise ParameterError("displacement series contains non-finite samples")
    lam = cfg.wavelength_m
    dev = -cfg.locking_range_rad_s * np.sin(
        4.0 * np.pi * (cfg.nominal_range_m + x.samples) / lam)
    return TimeSeries(sample_rate_hz=x.sample_rate_hz, samples=dev, t0_s=x.t0_s)


def synthesize_silo_output(dev, fs):
    """Render the frequency-modulated oscillator at complex baseband.

    The phase is the running trapezoidal integral of the deviation with
    theta[0] = 0, and s[n] = exp(j*theta[n]), so every output sample has
    unit modulus.

    Parameters
    ----------
    dev : TimeSeries
        Frequency deviation in rad/s, sampled at ``fs``.
    fs : float
        Baseband sample rate in Hz; must satisfy fs > max|dev|/pi so the
        deviation is representable without aliasing.

    Returns
    -------
    ComplexBaseband

    Raises
    ------
    ParameterError
        ``dev`` not sampled at ``fs``.
    ConfigurationError
        Peak deviation at or above the representable limit pi*fs.
    """
    if dev.sample_rate_hz != fs:
        raise ParameterError(
            f"deviation series sampled at {dev.sample_rate_hz} Hz, expected {fs} Hz")
    peak = float(np.max(np.abs(dev.samples))) if len(dev) else 0.0
    if peak >= math.pi * fs:
        raise ConfigurationError(
            f"peak deviation {peak:.6g} rad/s exceeds the representable limit "
            f"pi*fs = {math.pi * fs:.6g} rad/s")
    dt = 1.0 / fs
    d = dev.samples
    theta = np.concatenate(([0.0], np.cumsum(0.5 * (d[1:] + d[:-1]) * dt)))
    return ComplexBaseband(sample_rate_hz=fs,
                           i_samples=np.cos(theta),
                           q_samples=np.sin(theta))
