"""Receive chain: LNA scaling, frequency discrimination, phase extraction.

At complex baseband the two demodulator views collapse to a pair of pure
functions: ``discriminate`` estimates the instantaneous frequency from
consecutive-sample phase differences, ``extract_phase`` unwraps the
per-sample phase.  Both are insensitive to overall amplitude, so the LNA
is a plain scalar gain kept for link-level realism.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DemodulationError, ParameterError
from .physio import TimeSeries
from .silo import ComplexBaseband

DISCRIMINATORS = ("phase_difference",)


@dataclass(frozen=True)
class ReceiverConfig:
    """LNA gain in dB, discriminator algorithm, unwrap jump threshold."""

    lna_gain_db: float = 19.0
    discriminator: str = "phase_difference"
    unwrap_threshold_rad: float = math.pi

    def __post_init__(self):
        if not math.isfinite(self.lna_gain_db):
            raise ParameterError("lna_gain_db must be finite")
        if self.discriminator not in DISCRIMINATORS:
            raise ParameterError(
                f"discriminator must be one of {DISCRIMINATORS}, got {self.discriminator!r}")
        if not (0.0 < self.unwrap_threshold_rad <= 2.0 * math.pi):
            raise ParameterError(
                f"unwrap_threshold_rad must lie in (0, 2*pi], got {self.unwrap_threshold_rad!r}")


def lna_amplify(signal, gain_db):
    """Scale every sample by 10^(gain_db/20); phase untouched."""
    if not math.isfinite(gain_db):
        raise ParameterError("gain_db must be finite")
    a = 10.0 ** (gain_db / 20.0)
    return ComplexBaseband(sample_rate_hz=signal.sample_rate_hz,
                           i_samples=a * signal.i_samples,
                           q_samples=a * signal.q_samples)


def _check_nonzero(signal):
    mag = signal.i_samples ** 2 + signal.q_samples ** 2
    zero = np.flatnonzero(mag == 0.0)
    if zero.size:
        raise DemodulationError("zero-magnitude baseband sample", int(zero[0]))


def discriminate(signal):
    """Instantaneous frequency from consecutive-sample phase rotation.

    dw[n] = arg(s[n] * conj(s[n-1])) * fs for n >= 1; the first output
    sample replicates the second so the series keeps the input length.
    A constant-frequency input is recovered exactly up to rounding.

    Parameters
    ----------
    signal : ComplexBaseband
        At least two samples, none of zero magnitude.

    Returns
    -------
    TimeSeries
        Frequency estimate in rad/s at the input sample rate.

    Raises
    ------
    DemodulationError
        A zero-magnitude sample, reported with its index.
    """
    if len(signal) < 2:
        raise ParameterError("discriminator needs at least two samples")
    _check_nonzero(signal)
    s = signal.complex_samples
    rot = s[1:] * np.conj(s[:-1])
    dev = np.angle(rot) * signal.sample_rate_hz
    dev = np.concatenate((dev[:1], dev))
    return TimeSeries(sample_rate_hz=signal.sample_rate_hz, samples=dev)


def _unwrap(phase, threshold):
    """Correct jumps above ``threshold`` by the nearest 2*pi multiple."""
    jumps = np.diff(phase)
    wraps = np.where(np.abs(jumps) > threshold,
                     np.round(jumps / (2.0 * np.pi)), 0.0)
    return phase - np.concatenate(([0.0], np.cumsum(2.0 * np.pi * wraps)))


def extract_phase(signal, cfg):
    """Unwrapped per-sample phase of the baseband signal.

    The principal-value phase is unwrapped by removing 2*pi multiples
    from successive jumps whose magnitude exceeds the configured
    threshold.  For thresholds >= pi the result satisfies
    |theta[n] - theta[n-1]| <= threshold, and unwrapping is idempotent.

    Parameters
    ----------
    signal : ComplexBaseband
        Samples of nonzero magnitude.
    cfg : ReceiverConfig

    Returns
    -------
    TimeSeries
        Phase in radians at the input sample rate.

    Raises
    ------
    DemodulationError
        A zero-magnitude sample, reported with its index.
    """
    _check_nonzero(signal)
    raw = np.arctan2(signal.q_samples, signal.i_samples)
    return TimeSeries(sample_rate_hz=signal.sample_rate_hz,
                      samples=_unwrap(raw, cfg.unwrap_threshold_rad))
