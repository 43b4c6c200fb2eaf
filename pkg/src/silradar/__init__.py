"""Deterministic simulator of a self-injection-locked CW radar for
through-wall vital-sign monitoring."""

from .antenna import (ArraySpec, FssSpec, PatchSpec, RadiationPattern,
                      array_factor, beamwidths, element_pattern,
                      fss_gain_enhancement, prs_resonance_height,
                      square_lattice, system_gain, total_pattern)
from .channel import ChannelConfig, LinkBudget, add_noise, link_budget
from .dsp import (Spectrum, VitalEstimate, bandpass, compute_spectrum,
                  find_vital_peaks)
from .physio import TimeSeries, VitalSignProfile, synthesize_chest_motion
from .receiver import (ReceiverConfig, discriminate, extract_phase,
                       lna_amplify)
from .silo import (SPEED_OF_LIGHT_M_S, ComplexBaseband, SiloConfig,
                   instantaneous_freq_deviation, synthesize_silo_output,
                   wavelength)

__version__ = "0.1.0"

__all__ = [
    "ArraySpec", "ChannelConfig", "ComplexBaseband", "FssSpec",
    "LinkBudget", "PatchSpec", "RadiationPattern", "ReceiverConfig",
    "SiloConfig", "SPEED_OF_LIGHT_M_S", "Spectrum", "TimeSeries",
    "VitalEstimate", "VitalSignProfile", "add_noise", "array_factor",
    "bandpass", "beamwidths", "compute_spectrum", "discriminate",
    "element_pattern", "extract_phase", "find_vital_peaks",
    "fss_gain_enhancement", "instantaneous_freq_deviation",
    "link_budget", "lna_amplify", "prs_resonance_height",
    "square_lattice", "synthesize_chest_motion", "synthesize_silo_output",
    "system_gain", "total_pattern", "wavelength",
]
