"""Spectral estimation of the demodulated vital-sign waveform.

``compute_spectrum`` produces the normalized (0 dB peak) one-sided
magnitude spectrum; ``find_vital_peaks`` picks the respiration and
heartbeat lines with respiration-harmonic exclusion and parabolic peak
refinement; ``bandpass`` is an optional zero-phase preconditioner.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sp_signal

from .errors import EstimationError, ParameterError
from .physio import TimeSeries

WINDOWS = ("rectangular", "hann")

# Relative magnitudes below 1e-20 (-400 dB) are floored so exported
# spectra never contain -inf.
_DB_FLOOR = -400.0


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum, normalized so max(mag_db) = 0."""

    freq_bins_hz: np.ndarray
    mag_db: np.ndarray
    resolution_hz: float

    def __post_init__(self):
        f = np.asarray(self.freq_bins_hz, dtype=float)
        m = np.asarray(self.mag_db, dtype=float)
        if f.ndim != 1 or f.size != m.size or f.size < 2:
            raise ParameterError("frequency and magnitude arrays must match")
        if np.any(np.diff(f) <= 0):
            raise ParameterError("frequency bins must be strictly ascending")
        object.__setattr__(self, "freq_bins_hz", f)
        object.__setattr__(self, "mag_db", m)


@dataclass(frozen=True)
class VitalEstimate:
    """Extracted vital rates and their relative peak levels in dB."""

    respiration_hz: float
    heartbeat_hz: float
    respiration_peak_db: float
    heartbeat_peak_db: float


def _window(name, n):
    if name == "rectangular":
        return np.ones(n)
    if name == "hann":
        return np.hanning(n)
    raise ParameterError(f"window must be one of {WINDOWS}, got {name!r}")


def _windowed_dft(x, window, zero_pad_factor):
    """Demeaned, windowed one-sided DFT; shared by spectrum and tests."""
    samples = x.samples - np.mean(x.samples)
    w = _window(window, samples.size)
    xw = samples * w
    n_fft = samples.size * zero_pad_factor
    spec = np.fft.rfft(xw, n=n_fft)
    freqs = np.fft.rfftfreq(n_fft, d=1.0 / x.sample_rate_hz)
    return xw, freqs, spec


def compute_spectrum(x, window="hann", zero_pad_factor=4):
    """Normalized magnitude spectrum of a time series.

    The mean is removed, the window applied, and the DFT magnitude taken
    on N * zero_pad_factor points.  One-sided bins cover 0..fs/2 with
    resolution fs / (N * zero_pad_factor), and the magnitudes are scaled
    so the peak bin sits at exactly 0 dB.  A signal that is identically
    zero after mean removal yields an all-zero (flat 0 dB) spectrum,
    degenerate but defined.

    Parameters
    ----------
    x : TimeSeries
        At least 16 finite samples.
    window : {"rectangular", "hann"}
    zero_pad_factor : int
        >= 1.

    Returns
    -------
    Spectrum
    """
    if len(x) < 16:
        raise ParameterError(f"need at least 16 samples, got {len(x)}")
    if not np.all(np.isfinite(x.samples)):
        raise ParameterError("input contains non-finite samples")
    if int(zero_pad_factor) != zero_pad_factor or zero_pad_factor < 1:
        raise ParameterError(f"zero_pad_factor must be an integer >= 1, "
                             f"got {zero_pad_factor!r}")

    _, freqs, spec = _windowed_dft(x, window, int(zero_pad_factor))
    mag = np.abs(spec)
    peak = mag.max()
    if peak == 0.0:
        mag_db = np.zeros_like(mag)
    else:
        # Single division by the peak keeps the result invariant under
        # positive scaling of the input (bit-identical for powers of 2).
        rel = mag / peak
        with np.errstate(divide="ignore"):
            mag_db = np.maximum(20.0 * np.log10(rel), _DB_FLOOR)
    resolution = x.sample_rate_hz / (len(x) * int(zero_pad_factor))
    return Spectrum(freq_bins_hz=freqs, mag_db=mag_db, resolution_hz=resolution)


def _refine_peak(freqs, mag_db, idx):
    """Three-point parabolic interpolation on log magnitude."""
    if idx <= 0 or idx >= mag_db.size - 1:
        return freqs[idx], mag_db[idx]
    a, b, g = mag_db[idx - 1], mag_db[idx], mag_db[idx + 1]
    denom = a - 2.0 * b + g
    if denom == 0.0:
        return freqs[idx], b
    delta = 0.5 * (a - g) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    df = freqs[1] - freqs[0]
    return freqs[idx] + delta * df, b - 0.25 * (a - g) * delta


def _band_peak(s, mask, band, band_name):
    """Index of the strongest bin of the masked band.

    Two degenerate shapes are rejected as "no peak above floor": a flat
    band, and a maximum that hugs the band's low edge while the spectrum
    keeps rising just below the band (the skirt of an out-of-band
    feature, e.g. a DC trend, rather than an in-band line).  The guard
    strip below the edge is a tenth of the band width, at least two
    bins.
    """
    m = s.mag_db
    f = s.freq_bins_hz
    mags = m[mask]
    if mags.max() == mags.min():
        raise EstimationError(f"no peak above floor in the {band_name} band")
    idx = int(np.flatnonzero(mask)[np.argmax(mags)])
    local_max = (0 < idx < m.size - 1
                 and m[idx] >= m[idx - 1] and m[idx] >= m[idx + 1])
    if not local_max:
        raise EstimationError(f"no peak above floor in the {band_name} band")

    lo, hi = band
    guard_width = max(0.1 * (hi - lo), 2.0 * s.resolution_hz)
    if f[idx] - lo <= guard_width:
        guard = (f >= lo - guard_width) & (f < lo)
        if np.any(guard) and m[guard].max() >= m[idx]:
            raise EstimationError(
                f"no peak above floor in the {band_name} band")
    return idx


def find_vital_peaks(s, resp_band, heart_band, harmonic_tol_hz=0.05):
    """Locate the respiration and heartbeat lines in a spectrum.

    Respiration is the strongest bin in ``resp_band``.  Heartbeat is the
    strongest bin in ``heart_band`` after excluding bins within
    ``harmonic_tol_hz`` of the 2nd, 3rd and 4th respiration harmonics.
    A winning bin must be a genuine local maximum of the spectrum.  Both
    peaks are refined by three-point parabolic interpolation of the log
    magnitude.

    Parameters
    ----------
    s : Spectrum
    resp_band, heart_band : (float, float)
        Disjoint (low, high) frequency bands inside the spectrum range.
    harmonic_tol_hz : float
        Exclusion half-width around each respiration harmonic.

    Returns
    -------
    VitalEstimate

    Raises
    ------
    EstimationError
        No peak above the floor, or a heart band emptied by the
        harmonic exclusion.
    """
    f = s.freq_bins_hz
    for name, (lo, hi) in (("respiration", resp_band), ("heartbeat", heart_band)):
        if not (0.0 <= lo < hi <= f[-1] + 1e-12):
            raise ParameterError(f"{name} band {lo}..{hi} Hz outside spectrum range")
    if not (resp_band[1] <= heart_band[0] or heart_band[1] <= resp_band[0]):
        raise ParameterError("respiration and heartbeat bands must be disjoint")
    if not (math.isfinite(harmonic_tol_hz) and harmonic_tol_hz >= 0):
        raise ParameterError("harmonic_tol_hz must be finite and >= 0")

    resp_mask = (f >= resp_band[0]) & (f <= resp_band[1])
    if not np.any(resp_mask):
        raise ParameterError("respiration band contains no spectrum bins")
    resp_idx = _band_peak(s, resp_mask, resp_band, "respiration")
    resp_hz, resp_db = _refine_peak(f, s.mag_db, resp_idx)

    heart_mask = (f >= heart_band[0]) & (f <= heart_band[1])
    for harmonic in (2, 3, 4):
        heart_mask &= np.abs(f - harmonic * resp_hz) > harmonic_tol_hz
    if not np.any(heart_mask):
        raise EstimationError(
            "heartbeat masked by respiration harmonics: heart band empty "
            "after harmonic exclusion")
    heart_idx = _band_peak(s, heart_mask, heart_band, "heartbeat")
    heart_hz, heart_db = _refine_peak(f, s.mag_db, heart_idx)

    return VitalEstimate(respiration_hz=resp_hz, heartbeat_hz=heart_hz,
                         respiration_peak_db=resp_db, heartbeat_peak_db=heart_db)


def bandpass(x, f_lo, f_hi):
    """Zero-phase band limitation of a time series.

    A 2nd-order Butterworth band-pass (low-pass when ``f_lo`` is 0) is
    applied forward and backward (``sosfiltfilt``), so in-band tones
    pass with under 1 dB ripple and no time shift while tones an octave
    outside the band lose more than 20 dB.

    Parameters
    ----------
    x : TimeSeries
    f_lo, f_hi : float
        Band edges in Hz with 0 <= f_lo < f_hi < fs/2.

    Returns
    -------
    TimeSeries
    """
    fs = x.sample_rate_hz
    if not (0.0 <= f_lo < f_hi < fs / 2.0):
        raise ParameterError(
            f"band {f_lo}..{f_hi} Hz invalid for sample rate {fs} Hz")
    if f_lo == 0.0:
        sos = sp_signal.butter(2, f_hi, btype="lowpass", fs=fs, output="sos")
    else:
        sos = sp_signal.butter(2, [f_lo, f_hi], btype="bandpass", fs=fs, output="sos")
    filtered = sp_signal.sosfiltfilt(sos, x.samples)
    return TimeSeries(sample_rate_hz=fs, samples=filtered, t0_s=x.t0_s)
