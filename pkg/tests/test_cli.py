from silradar.cli import main

FAST_SCENARIO = """\
run.duration_s = 8.0
run.sample_rate_hz = 500.0
silo.locking_range_rad_s = 251.32741228718345
"""


def write_scenario(tmp_path, text):
    path = tmp_path / "scenario.txt"
    path.write_text(text, encoding="utf-8")
    return path


def test_validate_ok(tmp_path, capsys):
    path = write_scenario(tmp_path, FAST_SCENARIO)
    assert main(["validate", "--scenario", str(path)]) == 0
    assert "scenario OK" in capsys.readouterr().out


def test_validate_defaults_without_file(capsys):
    assert main(["validate"]) == 0


def test_unknown_key_exits_2(tmp_path, capsys):
    path = write_scenario(tmp_path, "vitals.bogus = 1\n")
    assert main(["validate", "--scenario", str(path)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_cross_field_conflict_exits_2(tmp_path, capsys):
    path = write_scenario(tmp_path,
                          "silo.nominal_range_m = 0.75\nchannel.range_m = 1.0\n")
    assert main(["validate", "--scenario", str(path)]) == 2


def test_run_writes_outputs(tmp_path, capsys):
    path = write_scenario(tmp_path, FAST_SCENARIO)
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(path), "--out", str(out),
                 "--no-figures"]) == 0
    stdout = capsys.readouterr().out
    assert "respiration_est_hz" in stdout
    for name in ("baseband_iq.csv", "phase.csv", "spectrum.csv", "report.txt"):
        assert (out / name).exists()
    assert not (out / "baseband_iq.png").exists()


def test_run_renders_figures_by_default(tmp_path):
    path = write_scenario(tmp_path, FAST_SCENARIO)
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(path), "--out", str(out)]) == 0
    assert (out / "spectrum.png").exists()


def test_estimation_failure_exits_4(tmp_path, capsys):
    text = FAST_SCENARIO + ("vitals.respiration_amp_m = 0\n"
                            "vitals.heartbeat_amp_m = 0\n"
                            "channel.noise_floor_dbm = -inf\n")
    path = write_scenario(tmp_path, text)
    assert main(["run", "--scenario", str(path), "--out",
                 str(tmp_path / "out"), "--no-figures"]) == 4
    assert "no peak above floor" in capsys.readouterr().err


def test_duration_and_seed_overrides(tmp_path):
    path = write_scenario(tmp_path, FAST_SCENARIO)
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(path), "--out", str(out),
                 "--duration", "10", "--seed", "9", "--no-figures"]) == 0
    report = (out / "report.txt").read_text()
    assert "scenario.run.duration_s: 10.0" in report
    assert "scenario.run.seed: 9" in report


def test_antenna_command(tmp_path, capsys):
    path = write_scenario(tmp_path, "antenna.grid_step_deg = 5.0\n")
    out = tmp_path / "ant"
    assert main(["antenna", "--scenario", str(path), "--out", str(out),
                 "--no-figures"]) == 0
    stdout = capsys.readouterr().out
    assert "antenna_gain_dbi" in stdout
    assert "prs_resonance_n3_m" in stdout
    assert (out / "pattern.csv").exists()
    assert (out / "report.txt").exists()


def test_missing_scenario_file_exits_3(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    assert main(["validate", "--scenario", str(missing)]) == 3
