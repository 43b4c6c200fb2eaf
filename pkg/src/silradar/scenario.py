"""Scenario file grammar, defaults, and validation.

A scenario is a UTF-8 text document of ``section.key = value`` lines
with ``#`` comments.  Values are decimal or scientific-notation numbers
(``inf``/``-inf`` accepted where a field allows it) or bare strings; no
quoting.  Every key has a default, so the empty document is the default
desk-scale run.  Unknown keys, malformed lines, invalid values and
cross-field conflicts are rejected with line numbers.
"""

import math
import re
from dataclasses import dataclass

from .antenna import ArraySpec, FssSpec, PatchSpec, square_lattice
from .channel import ChannelConfig
from .errors import (ParameterError, ScenarioCrossFieldError,
                     ScenarioSyntaxError, ScenarioUnknownKeyError,
                     ScenarioValueError)
from .physio import VitalSignProfile
from .receiver import ReceiverConfig
from .silo import SiloConfig

# Calibrated once against the default antenna model (2x2 patch array,
# half-wavelength lattice, 1-degree quadrature grid, 82% efficiency) so
# the total system gain is 15.2 dBi, then frozen.
DEFAULT_REFLECTION_MAG = 0.37623191240886483

# Default link budget received power minus the 30 dB default SNR.
DEFAULT_NOISE_FLOOR_DBM = -94.70646664789899

_TWO_PI = 2.0 * math.pi


def _finite(v):
    return math.isfinite(v)


def _positive(v):
    return math.isfinite(v) and v > 0


def _non_negative(v):
    return math.isfinite(v) and v >= 0


def _fraction(v):
    return math.isfinite(v) and 0 < v <= 1


def _reflection(v):
    return math.isfinite(v) and 0 <= v < 1


def _noise_floor(v):
    return v == -math.inf or math.isfinite(v)


def _unwrap_threshold(v):
    return math.isfinite(v) and 0 < v <= _TWO_PI


def _grid_step(v):
    return math.isfinite(v) and 0.1 - 1e-9 <= v <= 30.0


def _count(v):
    return v >= 1


def _seed(v):
    return 0 <= v < 2 ** 64


def _choice(*options):
    return lambda v: v in options


# key -> (kind, default, validator, human-readable constraint)
SCENARIO_KEYS = {
    "vitals.respiration_rate_hz": ("float", 0.46, _non_negative, ">= 0"),
    "vitals.respiration_amp_m": ("float", 0.005, _non_negative, ">= 0"),
    "vitals.respiration_phase_rad": ("float", 0.0, _finite, "finite"),
    "vitals.heartbeat_rate_hz": ("float", 1.56, _non_negative, ">= 0"),
    "vitals.heartbeat_amp_m": ("float", 0.0003, _non_negative, ">= 0"),
    "vitals.heartbeat_phase_rad": ("float", 0.0, _finite, "finite"),
    "silo.carrier_freq_hz": ("float", 2.4e9, _positive, "> 0"),
    "silo.locking_range_rad_s": ("float", _TWO_PI * 100.0, _positive, "> 0"),
    "silo.nominal_range_m": ("float", 0.75, _positive, "> 0"),
    "antenna.patch_width_m": ("float", 0.015, _positive, "> 0"),
    "antenna.patch_length_m": ("float", 0.056, _positive, "> 0"),
    "antenna.substrate_eps_r": ("float", 4.4, lambda v: math.isfinite(v) and v >= 1, ">= 1"),
    "antenna.feed_width_m": ("float", 0.0015, _positive, "> 0"),
    "antenna.feed_length_m": ("float", 0.0015, _positive, "> 0"),
    "antenna.via_diameter_m": ("float", 0.001, _positive, "> 0"),
    "antenna.element_spacing_m": ("float", 0.062456762083333336, _positive, "> 0"),
    "antenna.efficiency": ("float", 0.82, _fraction, "in (0, 1]"),
    "antenna.grid_step_deg": ("float", 1.0, _grid_step, "in [0.1, 30] degrees"),
    "fss.unit_cell_size_m": ("float", 0.017487893383333335, _positive, "> 0"),
    "fss.grid_cols": ("int", 9, _count, ">= 1"),
    "fss.grid_rows": ("int", 7, _count, ">= 1"),
    "fss.layers": ("int", 2, _count, ">= 1"),
    "fss.panel_width_m": ("float", 0.2, _positive, "> 0"),
    "fss.panel_height_m": ("float", 0.2, _positive, "> 0"),
    "fss.reflection_mag": ("float", DEFAULT_REFLECTION_MAG, _reflection, "in [0, 1)"),
    "fss.reflection_phase_rad": ("float", math.pi, _finite, "finite"),
    "fss.ground_phase_rad": ("float", math.pi, _finite, "finite"),
    "fss.air_gap_m": ("float", 0.265, _positive, "> 0"),
    "fss.layer_gap_m": ("float", 0.014, _positive, "> 0"),
    "fss.cross_w1_m": ("float", 0.0048, _positive, "> 0"),
    "fss.cross_w2_m": ("float", 0.0035, _positive, "> 0"),
    "fss.cross_w3_m": ("float", 0.0032, _positive, "> 0"),
    "fss.cross_w4_m": ("float", 0.002, _positive, "> 0"),
    "channel.range_m": ("float", 0.75, _positive, "> 0"),
    "channel.wall_loss_db": ("float", 5.0, _non_negative, ">= 0"),
    "channel.body_reflectivity_db": ("float", 10.0, _non_negative, ">= 0"),
    "channel.tx_power_dbm": ("float", 0.0, _finite, "finite"),
    "channel.noise_floor_dbm": ("float", DEFAULT_NOISE_FLOOR_DBM, _noise_floor,
                                "finite or -inf"),
    "receiver.lna_gain_db": ("float", 19.0, _finite, "finite"),
    "receiver.discriminator": ("str", "phase_difference",
                               _choice("phase_difference"), "phase_difference"),
    "receiver.unwrap_threshold_rad": ("float", math.pi, _unwrap_threshold,
                                      "in (0, 2*pi]"),
    "receiver.demodulation": ("str", "phase", _choice("phase", "frequency"),
                              "phase or frequency"),
    "dsp.window": ("str", "hann", _choice("rectangular", "hann"),
                   "rectangular or hann"),
    "dsp.zero_pad_factor": ("int", 4, _count, ">= 1"),
    "dsp.resp_band_lo_hz": ("float", 0.1, _non_negative, ">= 0"),
    "dsp.resp_band_hi_hz": ("float", 0.7, _positive, "> 0"),
    "dsp.heart_band_lo_hz": ("float", 0.8, _non_negative, ">= 0"),
    "dsp.heart_band_hi_hz": ("float", 3.0, _positive, "> 0"),
    "dsp.harmonic_tol_hz": ("float", 0.05, _non_negative, ">= 0"),
    "run.duration_s": ("float", 60.0, _positive, "> 0"),
    "run.sample_rate_hz": ("float", 2000.0, _positive, "> 0"),
    "run.output_dir": ("str", "out", lambda v: len(v) > 0, "non-empty"),
    "run.seed": ("int", 1, _seed, "a 64-bit unsigned integer"),
}

_LINE_RE = re.compile(
    r"^(?P<lead>\s*)(?P<key>[A-Za-z_][A-Za-z0-9_]*\.[A-Za-z_][A-Za-z0-9_]*)"
    r"\s*=\s*(?P<value>\S.*?)\s*$")


@dataclass(frozen=True)
class Scenario:
    """Fully resolved and validated simulation configuration.

    ``values`` is the canonical key -> value mapping (defaults merged
    with the parsed overrides); the structured fields are built from it.
    Two scenarios are equivalent when their ``values`` agree.
    """

    values: dict
    vitals: VitalSignProfile
    silo: SiloConfig
    patch: PatchSpec
    array: ArraySpec
    fss: FssSpec
    efficiency: float
    grid_step_deg: float
    channel: ChannelConfig
    receiver: ReceiverConfig
    demodulation: str
    window: str
    zero_pad_factor: int
    resp_band: tuple
    heart_band: tuple
    harmonic_tol_hz: float
    duration_s: float
    sample_rate_hz: float
    output_dir: str
    seed: int


def _convert(key, kind, token, line):
    if kind == "str":
        return token
    if kind == "int":
        try:
            return int(token, 10)
        except ValueError:
            raise ScenarioSyntaxError(
                f"value for {key} must be an integer, got {token!r}", line) from None
    try:
        v = float(token)
    except ValueError:
        raise ScenarioSyntaxError(
            f"value for {key} must be a number, got {token!r}", line) from None
    if math.isnan(v):
        raise ScenarioSyntaxError(f"value for {key} must not be NaN", line)
    return v


def _cross_checks(values, explicit):
    silo_r = values["silo.nominal_range_m"]
    chan_r = values["channel.range_m"]
    if "silo.nominal_range_m" in explicit and "channel.range_m" in explicit:
        if silo_r != chan_r:
            raise ScenarioCrossFieldError(
                f"silo.nominal_range_m = {silo_r} conflicts with "
                f"channel.range_m = {chan_r}; the physical range R is one quantity",
                keys=("silo.nominal_range_m", "channel.range_m"))
    elif "silo.nominal_range_m" in explicit:
        values["channel.range_m"] = silo_r
    elif "channel.range_m" in explicit:
        values["silo.nominal_range_m"] = chan_r

    fs = values["run.sample_rate_hz"]
    max_rate = max(values["vitals.respiration_rate_hz"],
                   values["vitals.heartbeat_rate_hz"])
    if fs <= 2.0 * max_rate:
        raise ScenarioCrossFieldError(
            f"run.sample_rate_hz = {fs} is not above twice the fastest vital "
            f"rate ({max_rate} Hz)",
            keys=("run.sample_rate_hz", "vitals.heartbeat_rate_hz"))

    w_lr = values["silo.locking_range_rad_s"]
    if w_lr >= math.pi * fs:
        raise ScenarioCrossFieldError(
            f"silo.locking_range_rad_s = {w_lr} exceeds the deviation "
            f"representable at run.sample_rate_hz = {fs} (pi*fs limit)",
            keys=("silo.locking_range_rad_s", "run.sample_rate_hz"))

    resp = (values["dsp.resp_band_lo_hz"], values["dsp.resp_band_hi_hz"])
    heart = (values["dsp.heart_band_lo_hz"], values["dsp.heart_band_hi_hz"])
    for name, (lo, hi) in (("resp", resp), ("heart", heart)):
        if not lo < hi:
            raise ScenarioCrossFieldError(
                f"dsp.{name}_band_lo_hz must be below dsp.{name}_band_hi_hz",
                keys=(f"dsp.{name}_band_lo_hz", f"dsp.{name}_band_hi_hz"))
        if hi > fs / 2.0:
            raise ScenarioCrossFieldError(
                f"dsp.{name}_band_hi_hz = {hi} exceeds the Nyquist frequency "
                f"of run.sample_rate_hz = {fs}",
                keys=(f"dsp.{name}_band_hi_hz", "run.sample_rate_hz"))
    if not (resp[1] <= heart[0] or heart[1] <= resp[0]):
        raise ScenarioCrossFieldError(
            "respiration and heartbeat bands must be disjoint",
            keys=("dsp.resp_band_hi_hz", "dsp.heart_band_lo_hz"))

    cell = values["fss.unit_cell_size_m"]
    if cell * values["fss.grid_cols"] > values["fss.panel_width_m"] + 1e-12:
        raise ScenarioCrossFieldError(
            "fss unit cells do not fit the panel width",
            keys=("fss.unit_cell_size_m", "fss.grid_cols", "fss.panel_width_m"))
    if cell * values["fss.grid_rows"] > values["fss.panel_height_m"] + 1e-12:
        raise ScenarioCrossFieldError(
            "fss unit cells do not fit the panel height",
            keys=("fss.unit_cell_size_m", "fss.grid_rows", "fss.panel_height_m"))


def _build(values):
    v = values
    try:
        vitals = VitalSignProfile(
            respiration_rate_hz=v["vitals.respiration_rate_hz"],
            respiration_amp_m=v["vitals.respiration_amp_m"],
            respiration_phase_rad=v["vitals.respiration_phase_rad"],
            heartbeat_rate_hz=v["vitals.heartbeat_rate_hz"],
            heartbeat_amp_m=v["vitals.heartbeat_amp_m"],
            heartbeat_phase_rad=v["vitals.heartbeat_phase_rad"])
        silo = SiloConfig(
            carrier_freq_hz=v["silo.carrier_freq_hz"],
            locking_range_rad_s=v["silo.locking_range_rad_s"],
            nominal_range_m=v["silo.nominal_range_m"])
        patch = PatchSpec(
            width_m=v["antenna.patch_width_m"],
            length_m=v["antenna.patch_length_m"],
            substrate_eps_r=v["antenna.substrate_eps_r"],
            feed_width_m=v["antenna.feed_width_m"],
            feed_length_m=v["antenna.feed_length_m"],
            via_diameter_m=v["antenna.via_diameter_m"])
        array = square_lattice(2, 2, v["antenna.element_spacing_m"])
        fss = FssSpec(
            unit_cell_size_m=v["fss.unit_cell_size_m"],
            grid_cols=v["fss.grid_cols"],
            grid_rows=v["fss.grid_rows"],
            layers=v["fss.layers"],
            panel_size_m=(v["fss.panel_width_m"], v["fss.panel_height_m"]),
            reflection_mag=v["fss.reflection_mag"],
            reflection_phase_rad=v["fss.reflection_phase_rad"],
            ground_phase_rad=v["fss.ground_phase_rad"],
            air_gap_m=v["fss.air_gap_m"],
            layer_gap_m=v["fss.layer_gap_m"],
            cross_geometry_m=(v["fss.cross_w1_m"], v["fss.cross_w2_m"],
                              v["fss.cross_w3_m"], v["fss.cross_w4_m"]))
        channel = ChannelConfig(
            range_m=v["channel.range_m"],
            wall_loss_db=v["channel.wall_loss_db"],
            body_reflectivity_db=v["channel.body_reflectivity_db"],
            tx_power_dbm=v["channel.tx_power_dbm"],
            noise_floor_dbm=v["channel.noise_floor_dbm"],
            rng_seed=v["run.seed"])
        receiver = ReceiverConfig(
            lna_gain_db=v["receiver.lna_gain_db"],
            discriminator=v["receiver.discriminator"],
            unwrap_threshold_rad=v["receiver.unwrap_threshold_rad"])
    except ParameterError as exc:
        raise ScenarioValueError("scenario", str(exc)) from exc

    return Scenario(
        values=dict(values),
        vitals=vitals, silo=silo, patch=patch, array=array, fss=fss,
        efficiency=v["antenna.efficiency"],
        grid_step_deg=v["antenna.grid_step_deg"],
        channel=channel, receiver=receiver,
        demodulation=v["receiver.demodulation"],
        window=v["dsp.window"],
        zero_pad_factor=v["dsp.zero_pad_factor"],
        resp_band=(v["dsp.resp_band_lo_hz"], v["dsp.resp_band_hi_hz"]),
        heart_band=(v["dsp.heart_band_lo_hz"], v["dsp.heart_band_hi_hz"]),
        harmonic_tol_hz=v["dsp.harmonic_tol_hz"],
        duration_s=v["run.duration_s"],
        sample_rate_hz=v["run.sample_rate_hz"],
        output_dir=v["run.output_dir"],
        seed=v["run.seed"])


def parse_scenario(text, overrides=None):
    """Parse a scenario document into a validated ``Scenario``.

    Parameters
    ----------
    text : str
        UTF-8 scenario document; the empty string yields pure defaults.
    overrides : dict or None
        Optional ``key -> value`` mapping applied after parsing (used by
        the CLI flags); values go through the same validation.

    Returns
    -------
    Scenario

    Raises
    ------
    ScenarioSyntaxError, ScenarioUnknownKeyError, ScenarioValueError,
    ScenarioCrossFieldError
    """
    values = {key: default for key, (_, default, _, _) in SCENARIO_KEYS.items()}
    explicit = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            continue
        m = _LINE_RE.match(stripped)
        if m is None:
            eq = stripped.find("=")
            column = (eq + 1) if eq >= 0 else len(stripped.rstrip()) + 1
            raise ScenarioSyntaxError(
                f"expected 'section.key = value', got {stripped.strip()!r}",
                lineno, column)
        key = m.group("key")
        if key not in SCENARIO_KEYS:
            raise ScenarioUnknownKeyError(key, lineno)
        if key in explicit:
            raise ScenarioSyntaxError(f"duplicate key {key!r}", lineno,
                                      len(m.group("lead")) + 1)
        kind, _, validator, constraint = SCENARIO_KEYS[key]
        value = _convert(key, kind, m.group("value"), lineno)
        if not validator(value):
            raise ScenarioValueError(key, f"value {value!r} must be {constraint}",
                                     line=lineno)
        values[key] = value
        explicit.add(key)

    if overrides:
        for key, value in overrides.items():
            if key not in SCENARIO_KEYS:
                raise ScenarioUnknownKeyError(key, 0)
            kind, _, validator, constraint = SCENARIO_KEYS[key]
            if not validator(value):
                raise ScenarioValueError(key, f"value {value!r} must be {constraint}")
            values[key] = value
            explicit.add(key)

    _cross_checks(values, explicit)
    return _build(values)


def default_scenario(**overrides):
    """The pure-defaults scenario, optionally with key overrides."""
    return parse_scenario("", overrides=overrides)


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_scenario(scenario):
    """Render a scenario back to its canonical text form.

    The output parses back to an equivalent scenario (field-wise equal
    ``values``); floats are written with full precision.
    """
    lines = [f"{key} = {_format_value(scenario.values[key])}"
             for key in SCENARIO_KEYS]
    return "\n".join(lines) + "\n"
