import math

import numpy as np
import pytest

from silradar.channel import ChannelConfig, add_noise, link_budget
from silradar.errors import ParameterError
from silradar.silo import ComplexBaseband, wavelength


def make_config(**kw):
    base = dict(range_m=0.75, wall_loss_db=5.0, body_reflectivity_db=10.0,
                tx_power_dbm=0.0, noise_floor_dbm=-94.7, rng_seed=1)
    base.update(kw)
    return ChannelConfig(**base)


def tone(n=1024, fs=1000.0, f=10.0, amp=1.0):
    t = np.arange(n) / fs
    return ComplexBaseband(fs, amp * np.cos(2 * np.pi * f * t),
                           amp * np.sin(2 * np.pi * f * t))


class TestLinkBudget:
    def test_unity_loss_radius_returns_tx_power(self):
        lam = wavelength(2.4e9)
        cfg = make_config(range_m=lam / (4.0 * math.pi), wall_loss_db=0.0,
                          body_reflectivity_db=0.0, tx_power_dbm=7.0)
        lb = link_budget(cfg, 0.0, 2.4e9)
        assert lb.received_power_dbm == pytest.approx(7.0, abs=1e-9)

    def test_two_way_gain_doubles_snr_change(self):
        cfg = make_config()
        base = link_budget(cfg, 10.0, 2.4e9).snr_db
        up = link_budget(cfg, 13.0, 2.4e9).snr_db
        assert up - base == pytest.approx(6.0, abs=1e-9)

    def test_snr_delta_between_table_gains(self):
        cfg = make_config()
        hi = link_budget(cfg, 15.2, 2.4e9).snr_db
        lo = link_budget(cfg, 12.0, 2.4e9).snr_db
        assert hi - lo == pytest.approx(2.0 * (15.2 - 12.0), abs=1e-9)

    def test_doubling_range_costs_fourth_power_law(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            r = rng.uniform(0.1, 4.0)
            cfg1 = make_config(range_m=r)
            cfg2 = make_config(range_m=2.0 * r)
            drop = (link_budget(cfg1, 15.2, 2.4e9).received_power_dbm
                    - link_budget(cfg2, 15.2, 2.4e9).received_power_dbm)
            assert drop == pytest.approx(40.0 * math.log10(2.0), abs=1e-9)

    def test_monotone_in_gain_and_losses(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            cfg = make_config(range_m=rng.uniform(0.2, 3.0),
                              wall_loss_db=rng.uniform(0, 15),
                              body_reflectivity_db=rng.uniform(0, 20))
            g = rng.uniform(0, 20)
            snr = link_budget(cfg, g, 2.4e9).snr_db
            assert link_budget(cfg, g + 1.0, 2.4e9).snr_db > snr
            less_wall = make_config(range_m=cfg.range_m,
                                    wall_loss_db=max(0.0, cfg.wall_loss_db - 1),
                                    body_reflectivity_db=cfg.body_reflectivity_db)
            assert link_budget(less_wall, g, 2.4e9).snr_db >= snr

    def test_invalid_config_rejected(self):
        with pytest.raises(ParameterError):
            make_config(range_m=0.0)
        with pytest.raises(ParameterError):
            make_config(wall_loss_db=-1.0)
        with pytest.raises(ParameterError):
            make_config(rng_seed=-1)
        with pytest.raises(ParameterError):
            make_config(rng_seed=2 ** 64)


class TestAddNoise:
    def test_infinite_snr_returns_input_unchanged(self):
        sig = tone()
        out = add_noise(sig, math.inf, 42)
        assert np.array_equal(out.i_samples, sig.i_samples)
        assert np.array_equal(out.q_samples, sig.q_samples)

    def test_realized_snr_matches_target(self):
        # sample-variance oracle on a unit-power tone, 1e6 samples
        sig = tone(n=1_000_000)
        out = add_noise(sig, 20.0, 7)
        noise_i = out.i_samples - sig.i_samples
        noise_q = out.q_samples - sig.q_samples
        p_sig = np.mean(sig.i_samples ** 2 + sig.q_samples ** 2)
        p_noise = np.mean(noise_i ** 2 + noise_q ** 2)
        snr_db = 10.0 * np.log10(p_sig / p_noise)
        assert snr_db == pytest.approx(20.0, abs=0.1)

    def test_same_seed_bitwise_identical(self):
        sig = tone()
        a = add_noise(sig, 15.0, 1234)
        b = add_noise(sig, 15.0, 1234)
        assert np.array_equal(a.i_samples, b.i_samples)
        assert np.array_equal(a.q_samples, b.q_samples)

    def test_different_seeds_differ(self):
        sig = tone()
        a = add_noise(sig, 15.0, 1)
        b = add_noise(sig, 15.0, 2)
        assert not np.array_equal(a.i_samples, b.i_samples)

    def test_length_and_rate_preserved(self):
        sig = tone(n=333, fs=512.0)
        out = add_noise(sig, 5.0, 3)
        assert len(out) == 333
        assert out.sample_rate_hz == 512.0

    def test_zero_power_signal_rejected(self):
        sig = ComplexBaseband(100.0, np.zeros(16), np.zeros(16))
        with pytest.raises(ParameterError):
            add_noise(sig, 10.0, 1)

    def test_nan_snr_rejected(self):
        with pytest.raises(ParameterError):
            add_noise(tone(), math.nan, 1)
