"""Pipeline orchestration and file outputs.

``simulate`` runs the in-memory chain chest motion -> oscillator pull ->
FM baseband -> link noise -> LNA -> demodulation -> spectrum -> peak
estimation.  ``run_pipeline`` adds the delimited outputs, figures and
the report; ``analyze_antenna`` covers the antenna-only command.  All
outputs are byte-deterministic for identical (scenario, seed).
"""

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import polars as pl

from . import antenna as ant
from .channel import add_noise, link_budget
from .dsp import compute_spectrum, find_vital_peaks
from .errors import SilRadarError
from .physio import synthesize_chest_motion
from .receiver import discriminate, extract_phase, lna_amplify
from .scenario import serialize_scenario
from .silo import instantaneous_freq_deviation, synthesize_silo_output, wavelength

# dBi floor applied when exporting directive gain so the CSV never
# contains -inf (the patch model is exactly zero behind the ground).
PATTERN_DB_FLOOR = -120.0


@dataclass(frozen=True)
class AntennaAnalysis:
    """Gain breakdown of the scenario's antenna system."""

    pattern: ant.RadiationPattern
    directivity_dbi: float
    efficiency_term_db: float
    fss_delta_db: float
    total_gain_dbi: float
    hpbw_deg: dict
    first_null_deg: dict
    prs_heights_m: tuple


@dataclass(frozen=True)
class SimulationResult:
    """Every intermediate product of one in-memory pipeline run."""

    scenario: object
    chest: object
    deviation: object
    baseband: object
    received: object
    phase: object
    vital_waveform: object
    spectrum: object
    estimate: object
    analysis: AntennaAnalysis
    link: object


class _Stage:
    """Context manager tagging module errors with pipeline position."""

    def __init__(self, index, module):
        self.index = index
        self.module = module

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, SilRadarError):
            exc.args = (f"[stage {self.index}: {self.module}] {exc}",)
        return False


def analyze_antenna_system(scenario):
    """Pattern, gain breakdown, beamwidths and resonance heights."""
    lam = wavelength(scenario.silo.carrier_freq_hz)
    pattern = ant.total_pattern(scenario.patch, scenario.array, lam,
                                scenario.grid_step_deg)
    fss_delta = ant.fss_gain_enhancement(scenario.fss)
    total = ant.system_gain(pattern, scenario.efficiency, fss_delta)
    hpbw, fnull = {}, {}
    for cut in ("e_plane", "h_plane"):
        hp, fn = ant.beamwidths(pattern, cut)
        hpbw[cut] = hp
        fnull[cut] = fn
    heights = tuple(ant.prs_resonance_height(scenario.fss, lam, n)
                    for n in range(6))
    return AntennaAnalysis(
        pattern=pattern,
        directivity_dbi=pattern.peak_directivity_dbi,
        efficiency_term_db=10.0 * math.log10(scenario.efficiency),
        fss_delta_db=fss_delta,
        total_gain_dbi=total,
        hpbw_deg=hpbw,
        first_null_deg=fnull,
        prs_heights_m=heights)


def simulate(scenario):
    """Run the full receive chain in memory.

    Stage order: chest motion (1), oscillator frequency pull (2), FM
    baseband synthesis (3), antenna gain (4), link budget (5), noise
    injection (6), LNA (7), demodulation (8), spectrum (9), peak
    estimation (10).  Any module error is re-raised with its stage tag.

    Returns
    -------
    SimulationResult
    """
    s = scenario
    with _Stage(1, "physio"):
        chest = synthesize_chest_motion(s.vitals, s.duration_s, s.sample_rate_hz)
    with _Stage(2, "silo"):
        deviation = instantaneous_freq_deviation(chest, s.silo)
    with _Stage(3, "silo"):
        baseband = synthesize_silo_output(deviation, s.sample_rate_hz)
    with _Stage(4, "antenna"):
        analysis = analyze_antenna_system(s)
    with _Stage(5, "channel"):
        link = link_budget(s.channel, analysis.total_gain_dbi,
                           s.silo.carrier_freq_hz)
    with _Stage(6, "channel"):
        noisy = add_noise(baseband, link.snr_db, s.channel.rng_seed)
    with _Stage(7, "receiver"):
        received = lna_amplify(noisy, s.receiver.lna_gain_db)
    with _Stage(8, "receiver"):
        phase = extract_phase(received, s.receiver)
        if s.demodulation == "frequency":
            vital_waveform = discriminate(received)
        else:
            vital_waveform = phase
    with _Stage(9, "dsp"):
        spectrum = compute_spectrum(vital_waveform, s.window, s.zero_pad_factor)
    with _Stage(10, "dsp"):
        estimate = find_vital_peaks(spectrum, s.resp_band, s.heart_band,
                                    s.harmonic_tol_hz)
    return SimulationResult(scenario=s, chest=chest, deviation=deviation,
                            baseband=baseband, received=received, phase=phase,
                            vital_waveform=vital_waveform, spectrum=spectrum,
                            estimate=estimate, analysis=analysis, link=link)


@dataclass(frozen=True)
class RunReport:
    """Estimates, truth, gain breakdown, link SNR, and file digests."""

    respiration_true_hz: float
    heartbeat_true_hz: float
    respiration_est_hz: float
    heartbeat_est_hz: float
    respiration_abs_err_hz: float
    heartbeat_abs_err_hz: float
    respiration_peak_db: float
    heartbeat_peak_db: float
    directivity_dbi: float
    efficiency_term_db: float
    fss_delta_db: float
    antenna_gain_dbi: float
    received_power_dbm: float
    link_snr_db: float
    spectrum_resolution_hz: float
    files: dict
    scenario: object

    def to_text(self):
        lines = [
            f"respiration_true_hz: {self.respiration_true_hz!r}",
            f"heartbeat_true_hz: {self.heartbeat_true_hz!r}",
            f"respiration_est_hz: {self.respiration_est_hz!r}",
            f"heartbeat_est_hz: {self.heartbeat_est_hz!r}",
            f"respiration_abs_err_hz: {self.respiration_abs_err_hz!r}",
            f"heartbeat_abs_err_hz: {self.heartbeat_abs_err_hz!r}",
            f"respiration_peak_db: {self.respiration_peak_db!r}",
            f"heartbeat_peak_db: {self.heartbeat_peak_db!r}",
            f"directivity_dbi: {self.directivity_dbi!r}",
            f"efficiency_term_db: {self.efficiency_term_db!r}",
            f"fss_delta_db: {self.fss_delta_db!r}",
            f"antenna_gain_dbi: {self.antenna_gain_dbi!r}",
            f"received_power_dbm: {self.received_power_dbm!r}",
            f"link_snr_db: {self.link_snr_db!r}",
            f"spectrum_resolution_hz: {self.spectrum_resolution_hz!r}",
            "note: record length, window and band defaults are desk-scale"
            " simulation choices",
        ]
        for name in sorted(self.files):
            lines.append(f"file_{name.replace('.', '_')}_sha256: {self.files[name]}")
        for line in serialize_scenario(self.scenario).splitlines():
            key, _, value = line.partition(" = ")
            lines.append(f"scenario.{key}: {value}")
        return "\n".join(lines) + "\n"


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _round_significant(a, sig=6):
    """Round to ``sig`` significant digits (vectorized)."""
    a = np.asarray(a, dtype=float)
    out = a.copy()
    nz = (a != 0) & np.isfinite(a)
    power = sig - 1 - np.floor(np.log10(np.abs(a[nz])))
    vals = a[nz]
    res = np.empty_like(vals)
    up = power >= 0
    res[up] = np.round(vals[up] * 10.0 ** power[up]) / 10.0 ** power[up]
    res[~up] = np.round(vals[~up] / 10.0 ** -power[~up]) * 10.0 ** -power[~up]
    out[nz] = res
    return out


def _write_csv(path, columns):
    """RFC-4180-style CSV, \\n line endings, 6 significant digits."""
    data = {name: _round_significant(values) for name, values in columns.items()}
    pl.DataFrame(data).write_csv(path, line_terminator="\n")


def run_pipeline(scenario, out_dir=None, render_figures=True):
    """Execute a scenario and write all outputs.

    Writes ``baseband_iq.csv``, ``phase.csv``, ``spectrum.csv``, the
    PNG companions (unless ``render_figures`` is false) and
    ``report.txt`` into ``out_dir`` (the scenario's output directory by
    default).  Identical (scenario, seed) produce byte-identical files.

    Returns
    -------
    RunReport
    """
    result = simulate(scenario)
    out = Path(out_dir if out_dir is not None else scenario.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    rx = result.received
    _write_csv(out / "baseband_iq.csv",
               {"time_s": rx.times_s, "i": rx.i_samples, "q": rx.q_samples})
    _write_csv(out / "phase.csv",
               {"time_s": result.phase.times_s, "phase_rad": result.phase.samples})
    _write_csv(out / "spectrum.csv",
               {"freq_hz": result.spectrum.freq_bins_hz,
                "mag_db": result.spectrum.mag_db})
    files = ["baseband_iq.csv", "phase.csv", "spectrum.csv"]

    if render_figures:
        from . import figures

        figures.save_baseband_figure(rx, out / "baseband_iq.png")
        figures.save_phase_figure(result.phase, out / "phase.png")
        figures.save_spectrum_figure(result.spectrum, out / "spectrum.png",
                                     estimate=result.estimate)
        files += ["baseband_iq.png", "phase.png", "spectrum.png"]

    est = result.estimate
    truth_resp = scenario.vitals.respiration_rate_hz
    truth_heart = scenario.vitals.heartbeat_rate_hz
    report = RunReport(
        respiration_true_hz=truth_resp,
        heartbeat_true_hz=truth_heart,
        respiration_est_hz=float(est.respiration_hz),
        heartbeat_est_hz=float(est.heartbeat_hz),
        respiration_abs_err_hz=abs(float(est.respiration_hz) - truth_resp),
        heartbeat_abs_err_hz=abs(float(est.heartbeat_hz) - truth_heart),
        respiration_peak_db=float(est.respiration_peak_db),
        heartbeat_peak_db=float(est.heartbeat_peak_db),
        directivity_dbi=result.analysis.directivity_dbi,
        efficiency_term_db=result.analysis.efficiency_term_db,
        fss_delta_db=result.analysis.fss_delta_db,
        antenna_gain_dbi=result.analysis.total_gain_dbi,
        received_power_dbm=result.link.received_power_dbm,
        link_snr_db=result.link.snr_db,
        spectrum_resolution_hz=result.spectrum.resolution_hz,
        files={name: _sha256(out / name) for name in files},
        scenario=scenario)
    (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    return report


def pattern_to_frame(pattern):
    """Row-major (theta outer, phi inner) table of the directive gain."""
    theta_deg = np.degrees(pattern.theta_grid_rad)
    phi_deg = np.degrees(pattern.phi_grid_rad)
    with np.errstate(divide="ignore"):
        gain_dbi = np.maximum(10.0 * np.log10(
            np.maximum(pattern.directive_gain, 10.0 ** (PATTERN_DB_FLOOR / 10.0))),
            PATTERN_DB_FLOOR)
    tt, pp = np.meshgrid(theta_deg, phi_deg, indexing="ij")
    return {"theta_deg": tt.ravel(), "phi_deg": pp.ravel(),
            "directive_gain_dbi": gain_dbi.ravel()}


def analyze_antenna(scenario, out_dir=None, render_figures=True):
    """Antenna-only analysis with pattern export.

    Writes ``pattern.csv`` (full-sphere directive gain), ``pattern.png``
    and ``report.txt``; returns the gain breakdown.

    Returns
    -------
    (AntennaAnalysis, dict)
        The analysis and the name -> sha256 manifest of written files.
    """
    analysis = analyze_antenna_system(scenario)
    out = Path(out_dir if out_dir is not None else scenario.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    _write_csv(out / "pattern.csv", pattern_to_frame(analysis.pattern))
    files = ["pattern.csv"]
    if render_figures:
        from . import figures

        figures.save_pattern_figure(analysis.pattern, out / "pattern.png")
        files.append("pattern.png")

    lines = [
        f"directivity_dbi: {analysis.directivity_dbi!r}",
        f"efficiency_term_db: {analysis.efficiency_term_db!r}",
        f"fss_delta_db: {analysis.fss_delta_db!r}",
        f"antenna_gain_dbi: {analysis.total_gain_dbi!r}",
    ]
    for cut in ("e_plane", "h_plane"):
        fn = analysis.first_null_deg[cut]
        lines.append(f"hpbw_{cut}_deg: {analysis.hpbw_deg[cut]!r}")
        lines.append(f"first_null_{cut}_deg: {'absent' if fn is None else repr(fn)}")
    for n, h in enumerate(analysis.prs_heights_m):
        lines.append(f"prs_resonance_n{n}_m: {h!r}")
    manifest = {name: _sha256(out / name) for name in files}
    for name in sorted(manifest):
        lines.append(f"file_{name.replace('.', '_')}_sha256: {manifest[name]}")
    for line in serialize_scenario(scenario).splitlines():
        key, _, value = line.partition(" = ")
        lines.append(f"scenario.{key}: {value}")
    (out / "report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return analysis, manifest
