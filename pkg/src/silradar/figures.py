"""Figure rendering for the report path.

Each delimited output has a PNG companion rendered with the Agg backend
so runs work headless and byte-identically for identical inputs.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = dict(dpi=150, bbox_inches="tight")

# Dense records are strided down for drawing only; the CSVs keep every
# sample.
_MAX_PLOT_POINTS = 20000


def _stride(n):
    return max(1, n // _MAX_PLOT_POINTS)


def save_baseband_figure(baseband, path):
    """I/Q traces of the received baseband versus time."""
    k = _stride(len(baseband))
    t = baseband.times_s[::k]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(t, baseband.i_samples[::k], linewidth=0.6, label="I")
    ax.plot(t, baseband.q_samples[::k], linewidth=0.6, alpha=0.8, label="Q")
    ax.set_xlabel("Time [s]")
    ax.set_ylabel("Amplitude")
    ax.set_title("Received complex baseband")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_phase_figure(phase, path):
    """Unwrapped baseband phase versus time."""
    k = _stride(len(phase))
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(phase.times_s[::k], phase.samples[::k], linewidth=0.8, color="#1f77b4")
    ax.set_xlabel("Time [s]")
    ax.set_ylabel("Phase [rad]")
    ax.set_title("Demodulated baseband phase")
    ax.grid(True, alpha=0.3)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_spectrum_figure(spectrum, path, estimate=None, f_max_hz=5.0):
    """Normalized spectrum with optional vital-peak markers."""
    f = spectrum.freq_bins_hz
    sel = f <= min(f_max_hz, f[-1])
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(f[sel], spectrum.mag_db[sel], linewidth=0.8, color="#2ca02c")
    if estimate is not None:
        ax.axvline(estimate.respiration_hz, color="gray", linestyle="--",
                   alpha=0.7, label=f"respiration {estimate.respiration_hz:.3f} Hz")
        ax.axvline(estimate.heartbeat_hz, color="black", linestyle=":",
                   alpha=0.7, label=f"heartbeat {estimate.heartbeat_hz:.3f} Hz")
        ax.legend(loc="upper right", fontsize=9)
    ax.set_xlabel("Frequency [Hz]")
    ax.set_ylabel("Normalized magnitude [dB]")
    ax.set_title("Normalized spectrum of the demodulated signal")
    ax.set_ylim(-100, 5)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_pattern_figure(pattern, path):
    """Principal-plane cuts of the directive gain in dB."""
    from .antenna import _principal_cut

    fig, ax = plt.subplots(figsize=(8, 5))
    for cut, style in (("e_plane", "-"), ("h_plane", "--")):
        alpha, gain = _principal_cut(pattern, cut)
        with np.errstate(divide="ignore"):
            gain_db = 10.0 * np.log10(np.maximum(gain, 1e-12))
        ax.plot(np.degrees(alpha), gain_db, style, linewidth=1.2,
                label=cut.replace("_", "-"))
    ax.set_xlabel("Angle from broadside [deg]")
    ax.set_ylabel("Directive gain [dBi]")
    ax.set_title("Array radiation pattern cuts")
    ax.set_xlim(-180, 180)
    ax.set_ylim(-40, None)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
