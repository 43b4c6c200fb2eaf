"""Acceptance suite.

One test per acceptance criterion, each asserting at its stated
tolerance and printing a single summary line.  Run with

    pytest tests/test_acceptance.py -v -s
"""

import math
import time

import numpy as np
import pytest

from silradar.antenna import (_pattern_grids, array_factor, element_pattern,
                              square_lattice, total_pattern)
from silradar.channel import ChannelConfig, add_noise, link_budget
from silradar.dsp import compute_spectrum, find_vital_peaks
from silradar.errors import EstimationError
from silradar.physio import TimeSeries, synthesize_chest_motion
from silradar.pipeline import analyze_antenna_system, run_pipeline
from silradar.receiver import ReceiverConfig, discriminate, extract_phase, \
    lna_amplify
from silradar.scenario import default_scenario
from silradar.silo import (SiloConfig, instantaneous_freq_deviation,
                           synthesize_silo_output, wavelength)

LAM = wavelength(2.4e9)


def report(criterion, message):
    print(f"ACCEPTANCE {criterion}: PASS - {message}")


def test_criterion_01_vital_rate_reproduction(tmp_path):
    scenario = default_scenario()
    assert scenario.silo.nominal_range_m == 0.75
    assert scenario.silo.carrier_freq_hz == 2.4e9
    assert scenario.duration_s == 60.0

    start = time.perf_counter()
    rep = run_pipeline(scenario, out_dir=tmp_path)
    elapsed = time.perf_counter() - start

    assert rep.link_snr_db == pytest.approx(30.0, abs=1e-6)
    assert rep.respiration_abs_err_hz <= 0.02
    assert rep.heartbeat_abs_err_hz <= 0.02
    assert elapsed < 5.0
    report(1, f"resp err {rep.respiration_abs_err_hz:.2e} Hz, heart err "
              f"{rep.heartbeat_abs_err_hz:.2e} Hz (tol 0.02), "
              f"runtime {elapsed:.2f} s (< 5 s)")


def test_criterion_02_locking_range_bound():
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(1000):
        cfg = SiloConfig(carrier_freq_hz=rng.uniform(0.5e9, 20e9),
                         locking_range_rad_s=10.0 ** rng.uniform(0, 8),
                         nominal_range_m=rng.uniform(0.01, 10.0))
        x = TimeSeries(100.0, rng.uniform(-0.05, 0.05, size=64))
        dev = instantaneous_freq_deviation(x, cfg)
        peak = np.max(np.abs(dev.samples))
        assert peak <= cfg.locking_range_rad_s  # exact, no tolerance
        worst = max(worst, peak / cfg.locking_range_rad_s)

    # equality is reached when 4*pi*(R + x)/lambda = pi/2 mod 2*pi
    for k in range(5):
        cfg = SiloConfig(2.4e9, 5.0e4, LAM / 8.0 + k * LAM / 2.0)
        dev = instantaneous_freq_deviation(TimeSeries(10.0, np.zeros(8)), cfg)
        assert np.max(np.abs(dev.samples)) == cfg.locking_range_rad_s
    report(2, f"1000 random draws bounded (worst ratio {worst:.15f}), "
              f"equality reached at the quarter-phase points")


def test_criterion_03_range_periodicity():
    rng = np.random.default_rng(777)
    worst = 0.0
    for _ in range(100):
        f0 = rng.uniform(1e9, 6e9)
        lam = wavelength(f0)
        w_lr = 10.0 ** rng.uniform(1, 6)
        r = rng.uniform(0.05, 5.0)
        x = TimeSeries(200.0, rng.uniform(-0.02, 0.02, size=256))
        d1 = instantaneous_freq_deviation(x, SiloConfig(f0, w_lr, r))
        d2 = instantaneous_freq_deviation(x, SiloConfig(f0, w_lr, r + lam / 2))
        err = np.max(np.abs(d1.samples - d2.samples)) / w_lr
        assert err < 1e-12
        worst = max(worst, err)
    report(3, f"100 scenarios sample-wise identical for R vs R + lambda/2 "
              f"(worst relative gap {worst:.2e})")


def test_criterion_04_fm_round_trip():
    results = {}
    for name, make_dev in (
            ("sinusoidal", lambda t: 2 * np.pi * 80.0
             * np.sin(2 * np.pi * 1.7 * t)),
            ("constant", lambda t: np.full_like(t, 2 * np.pi * 60.0)),
            ("chirped", lambda t: 2 * np.pi * 90.0 * t / t[-1])):
        t = np.arange(int(8 * 5000)) / 5000.0
        samples = make_dev(t)
        peak = np.max(np.abs(samples))
        fs = 50.0 * peak / (2 * np.pi)  # the stated boundary rate
        n = int(8 * fs)
        t = np.arange(n) / fs
        dev = TimeSeries(fs, make_dev(t))
        recovered = discriminate(synthesize_silo_output(dev, fs))
        err = recovered.samples - dev.samples
        rel_rms = np.sqrt(np.mean(err ** 2)) / np.sqrt(np.mean(dev.samples ** 2))
        assert rel_rms < 0.01, name
        results[name] = rel_rms
    report(4, "relative RMS at fs = 50*peak/(2*pi): "
              + ", ".join(f"{k} {v:.2e}" for k, v in results.items())
              + " (all < 1e-2)")


def _quadrature_integral(arr, step_deg):
    theta, phi, step = _pattern_grids(step_deg)
    tg, pg = theta[:, None], phi[None, :]
    field = element_pattern(None, tg, pg, LAM) * array_factor(arr, tg, pg, LAM)
    return float(np.sum(np.abs(field) ** 2 * np.sin(theta)[:, None])
                 * step * step)


def test_criterion_05_antenna_internal_consistency():
    arr = square_lattice(2, 2, LAM / 2.0)
    coarse = total_pattern(None, arr, LAM, 1.0)
    fine = total_pattern(None, arr, LAM, 0.1)
    d_gap_db = abs(coarse.peak_directivity_dbi - fine.peak_directivity_dbi)
    assert d_gap_db < 0.5

    reference = _quadrature_integral(arr, 0.1)
    residuals = [abs(_quadrature_integral(arr, g) / reference - 1.0)
                 for g in (10.0, 5.0, 2.0, 1.0)]
    assert residuals[-1] < 1e-2
    assert all(a > b for a, b in zip(residuals, residuals[1:]))
    report(5, f"broadside directivity {coarse.peak_directivity_dbi:.3f} dBi, "
              f"gap to 0.1-deg oracle {d_gap_db:.2e} dB (< 0.5); residual at "
              f"1 deg {residuals[-1]:.2e} (< 1e-2), decreasing "
              f"{['%.1e' % r for r in residuals]}")


def test_criterion_06_table_gain_regression():
    base = analyze_antenna_system(default_scenario())
    assert base.total_gain_dbi == pytest.approx(15.2, abs=0.5)

    lower = analyze_antenna_system(
        default_scenario(**{"antenna.efficiency": 0.70}))
    change = lower.total_gain_dbi - base.total_gain_dbi
    assert change == pytest.approx(-0.69, abs=0.01)
    report(6, f"default spec gain {base.total_gain_dbi:.3f} dBi "
              f"(15.2 +/- 0.5); 82% -> 70% efficiency changes gain by "
              f"{change:.4f} dB (-0.69 +/- 0.01)")


def test_criterion_07_prs_resonance():
    scenario = default_scenario()
    assert scenario.fss.reflection_phase_rad == math.pi
    assert scenario.fss.ground_phase_rad == math.pi
    analysis = analyze_antenna_system(scenario)
    h3 = analysis.prs_heights_m[3]
    assert h3 == pytest.approx(0.2498, abs=5e-4)
    rel = abs(h3 - 0.265) / 0.265
    assert rel < 0.06
    report(7, f"order-3 resonance height {h3 * 1e3:.1f} mm, within "
              f"{rel * 100:.2f}% of the 265 mm air gap (< 6%, consistency "
              f"check only)")


def test_criterion_08_snr_sensitivity():
    scenario = default_scenario()
    chest = synthesize_chest_motion(scenario.vitals, 60.0, 2000.0)
    dev = instantaneous_freq_deviation(chest, scenario.silo)
    clean = synthesize_silo_output(dev, 2000.0)
    rcfg = ReceiverConfig()

    # fixed noise floor chosen so the swept SNR tops out at 10 dB
    chan = ChannelConfig(range_m=0.75, wall_loss_db=5.0,
                         body_reflectivity_db=10.0, tx_power_dbm=0.0,
                         noise_floor_dbm=-74.70646664789899, rng_seed=0)
    gains = np.linspace(9.0, 15.2, 5)
    snrs = [link_budget(chan, g, 2.4e9).snr_db for g in gains]
    for (g0, s0), (g1, s1) in zip(zip(gains, snrs), zip(gains[1:], snrs[1:])):
        assert s1 - s0 == pytest.approx(2.0 * (g1 - g0), abs=1e-9)
    assert snrs[-1] - snrs[0] == pytest.approx(12.4, abs=1e-9)
    assert max(snrs) <= 10.0 + 1e-9

    max_penalty = (scenario.resp_band[1] - scenario.resp_band[0]
                   + scenario.heart_band[1] - scenario.heart_band[0])
    mean_errors = []
    for snr in snrs:
        errors = []
        for seed in range(10):
            noisy = add_noise(clean, snr, seed)
            try:
                phase = extract_phase(lna_amplify(noisy, 19.0), rcfg)
                spectrum = compute_spectrum(phase, "hann", 4)
                est = find_vital_peaks(spectrum, scenario.resp_band,
                                       scenario.heart_band,
                                       scenario.harmonic_tol_hz)
                err = (abs(est.respiration_hz - 0.46)
                       + abs(est.heartbeat_hz - 1.56))
            except EstimationError:
                err = max_penalty
            errors.append(err)
        mean_errors.append(float(np.mean(errors)))

    assert all(a > b for a, b in zip(mean_errors, mean_errors[1:]))
    report(8, f"SNR sweep {snrs[0]:.1f}..{snrs[-1]:.1f} dB = 2x gain delta "
              f"(12.4 dB exactly); mean rate error strictly decreasing: "
              f"{['%.1e' % e for e in mean_errors]}")


def test_criterion_09_determinism_batch(tmp_path):
    rng = np.random.default_rng(2024)
    checked = 0
    for i in range(20):
        # ranges near multiples of lambda/4 keep the demodulation point
        # away from the phase nulls, and drawn rates avoid respiration
        # harmonics, so every scenario produces its full output set
        quarter_waves = int(rng.integers(13, 65))
        r = quarter_waves * LAM / 4.0 + float(rng.uniform(-1, 1)) * LAM / 400.0
        f_r = float(rng.uniform(0.25, 0.38))
        while True:
            f_h = float(rng.uniform(1.2, 2.0))
            if all(abs(f_h - k * f_r) > 0.07 for k in (2, 3, 4)):
                break
        overrides = {
            "run.duration_s": float(rng.uniform(15.0, 20.0)),
            "run.sample_rate_hz": float(rng.choice([500.0, 1000.0, 2000.0])),
            "run.seed": int(rng.integers(0, 2 ** 63)),
            "vitals.respiration_rate_hz": f_r,
            "vitals.heartbeat_rate_hz": f_h,
            "vitals.respiration_amp_m": float(rng.uniform(0.003, 0.006)),
            "vitals.heartbeat_amp_m": float(rng.uniform(0.0004, 0.0008)),
            "silo.nominal_range_m": r,
            "silo.locking_range_rad_s": float(2 * np.pi
                                              * rng.uniform(30.0, 120.0)),
            "channel.wall_loss_db": float(rng.uniform(0.0, 10.0)),
            "antenna.grid_step_deg": 5.0,
        }
        scenario = default_scenario(**overrides)
        r1 = run_pipeline(scenario, out_dir=tmp_path / f"s{i}_a",
                          render_figures=False)
        r2 = run_pipeline(scenario, out_dir=tmp_path / f"s{i}_b",
                          render_figures=False)
        csvs = [n for n in r1.files if n.endswith(".csv")]
        assert csvs, "no CSV outputs recorded"
        for name in csvs:
            assert r1.files[name] == r2.files[name], (i, name)
        checked += len(csvs)
    report(9, f"20 scenarios re-run with identical seeds: {checked} CSV "
              f"digests byte-identical")


def test_criterion_10_excluded_targets_documented():
    # Table beamwidths (8.43/4.21 deg) and S11 are NOT acceptance targets:
    # a 0.2 m aperture at 2.4 GHz cannot beam that narrowly, and S11 needs
    # full-wave modelling.  Assert the model reports aperture-consistent
    # beamwidths instead of the published values.
    analysis = analyze_antenna_system(default_scenario())
    for cut in ("e_plane", "h_plane"):
        hpbw = analysis.hpbw_deg[cut]
        assert hpbw > 20.0
        assert abs(hpbw - 8.43) > 5.0 and abs(hpbw - 4.21) > 5.0
    report(10, "published beamwidth/S11 rows excluded: computed HPBW "
               + ", ".join(f"{c} {analysis.hpbw_deg[c]:.1f} deg"
                           for c in ("e_plane", "h_plane"))
               + " (aperture-consistent, not regression targets)")
