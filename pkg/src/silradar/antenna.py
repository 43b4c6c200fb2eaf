"""Radiation model of the 2x2 patch array with a partially reflective
superstrate.

The element is the classic two-slot cavity model of a rectangular patch
(length along x, width along y, infinite ground plane so the back
half-space is dark).  The array pattern is the element pattern times the
array factor, and directivity follows from midpoint-rule quadrature over
the sphere.  The superstrate is handled with the multiple-reflection ray
model: a surface of reflection magnitude G boosts broadside gain by
10*log10((1+G)/(1-G)) at resonance, and the resonant cavity heights are
H = (phi_prs + phi_gnd)*lambda/(4*pi) + N*lambda/2.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePatternError, ParameterError


@dataclass(frozen=True)
class PatchSpec:
    """Rectangular patch geometry (metres) and substrate permittivity.

    The length runs along x (E-plane = xz cut), the width along y
    (H-plane = yz cut).  Feed and via dimensions are carried for
    provenance; the closed-form pattern uses only width and length.
    """

    width_m: float
    length_m: float
    substrate_eps_r: float
    feed_width_m: float
    feed_length_m: float
    via_diameter_m: float

    def __post_init__(self):
        for name in ("width_m", "length_m", "feed_width_m",
                      "feed_length_m", "via_diameter_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")
        if not (math.isfinite(self.substrate_eps_r) and self.substrate_eps_r >= 1):
            raise ParameterError(
                f"substrate_eps_r must be >= 1, got {self.substrate_eps_r!r}")


@dataclass(frozen=True)
class ArraySpec:
    """Element lattice: (x, y) positions in metres with complex weights."""

    element_positions_m: tuple
    excitations: tuple

    def __post_init__(self):
        pos = tuple((float(x), float(y)) for x, y in self.element_positions_m)
        exc = tuple(complex(w) for w in self.excitations)
        if len(pos) < 1:
            raise ParameterError("array needs at least one element")
        if len(exc) != len(pos):
            raise ParameterError("one excitation per element required")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pos):
            raise ParameterError("element positions must be finite")
        if not any(w != 0 for w in exc):
            raise ParameterError("at least one excitation must be nonzero")
        object.__setattr__(self, "element_positions_m", pos)
        object.__setattr__(self, "excitations", exc)


def square_lattice(nx, ny, spacing_m, amplitude=1.0):
    """Uniformly excited nx-by-ny lattice centred on the origin."""
    xs = (np.arange(nx) - (nx - 1) / 2.0) * spacing_m
    ys = (np.arange(ny) - (ny - 1) / 2.0) * spacing_m
    positions = tuple((x, y) for y in ys for x in xs)
    return ArraySpec(element_positions_m=positions,
                     excitations=(amplitude,) * (nx * ny))


@dataclass(frozen=True)
class FssSpec:
    """Partially reflective superstrate above the array.

    ``reflection_mag``/``reflection_phase_rad`` describe the surface,
    ``ground_phase_rad`` the ground plane, ``air_gap_m`` the cavity
    height and ``layer_gap_m`` the spacing of the two printed layers.
    The cross geometry (w1..w4) is provenance metadata only; it does not
    enter the ray model.
    """

    unit_cell_size_m: float
    grid_cols: int
    grid_rows: int
    layers: int
    panel_size_m: tuple
    reflection_mag: float
    reflection_phase_rad: float
    ground_phase_rad: float
    air_gap_m: float
    layer_gap_m: float
    cross_geometry_m: tuple = field(default=(0.0048, 0.0035, 0.0032, 0.002))

    def __post_init__(self):
        if not (0.0 <= self.reflection_mag < 1.0):
            raise ParameterError(
                f"reflection_mag must lie in [0, 1), got {self.reflection_mag!r}")
        for name in ("unit_cell_size_m", "air_gap_m", "layer_gap_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")
        for name in ("grid_cols", "grid_rows", "layers"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1")
        w, h = self.panel_size_m
        if self.unit_cell_size_m * self.grid_cols > w + 1e-12:
            raise ParameterError(
                f"{self.grid_cols} cells of {self.unit_cell_size_m} m do not fit "
                f"the {w} m panel width")
        if self.unit_cell_size_m * self.grid_rows > h + 1e-12:
            raise ParameterError(
                f"{self.grid_rows} cells of {self.unit_cell_size_m} m do not fit "
                f"the {h} m panel height")


@dataclass(frozen=True)
class RadiationPattern:
    """Directive gain D(theta, phi) on a regular angular grid.

    ``directive_gain[i, j]`` belongs to ``(theta_grid_rad[i],
    phi_grid_rad[j])``.  The grid integrates to 4*pi steradians of unit
    mean: (1/4pi) * sum(D * sin(theta) * dtheta * dphi) = 1.
    """

    theta_grid_rad: np.ndarray
    phi_grid_rad: np.ndarray
    directive_gain: np.ndarray

    @property
    def peak_directivity(self):
        return float(self.directive_gain.max())

    @property
    def peak_directivity_dbi(self):
        return 10.0 * math.log10(self.peak_directivity)


def element_pattern(patch, theta, phi, lam):
    """Two-slot cavity-model field amplitude of one patch.

    E(theta, phi) = sinc(k*W/2 * sin(theta)sin(phi))
                    * cos(k*L/2 * sin(theta)cos(phi)) * cos(theta)
    for theta <= pi/2 and 0 behind the ground plane, normalized to 1 at
    broadside.  ``patch=None`` gives an isotropic element (always 1).

    Parameters
    ----------
    patch : PatchSpec or None
    theta, phi : float or ndarray
        Spherical angles in radians, theta in [0, pi], phi in [0, 2*pi).
    lam : float
        Operating wavelength in metres.

    Returns
    -------
    ndarray
        Real field amplitude (same broadcast shape as the inputs).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta < -1e-12) or np.any(theta > np.pi + 1e-12):
        raise ParameterError("theta must lie in [0, pi]")
    if patch is None:
        return np.ones(np.broadcast(theta, phi).shape)
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"wavelength must be > 0, got {lam!r}")

    k = 2.0 * np.pi / lam
    st = np.sin(theta)
    u = 0.5 * k * patch.width_m * st * np.sin(phi)
    slot = np.sinc(u / np.pi)  # sin(u)/u with the u = 0 limit handled
    pair = np.cos(0.5 * k * patch.length_m * st * np.cos(phi))
    front = slot * pair * np.cos(theta)
    return np.where(theta <= np.pi / 2.0, front, 0.0)


def array_factor(array, theta, phi, lam):
    """Complex array factor: sum of per-element phasors.

    AF = sum_n w_n * exp(j * 2*pi/lambda * (x_n sin(theta)cos(phi)
                                            + y_n sin(theta)sin(phi)))

    Summation order is the element order of ``array``, so results are
    bit-identical between calls.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"wavelength must be > 0, got {lam!r}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    k = 2.0 * np.pi / lam
    ux = np.sin(theta) * np.cos(phi)
    uy = np.sin(theta) * np.sin(phi)
    af = np.zeros(np.broadcast(ux, uy).shape, dtype=complex)
    for (x, y), w in zip(array.element_positions_m, array.excitations):
        af = af + w * np.exp(1j * k * (x * ux + y * uy))
    return af


def _pattern_grids(grid_step_deg):
    """Midpoint theta grid and node phi grid for the given step."""
    if not (math.isfinite(grid_step_deg) and 0.1 - 1e-9 <= grid_step_deg <= 30.0):
        raise ParameterError(
            f"grid step must lie in [0.1, 30] degrees, got {grid_step_deg!r}")
    n_theta = 180.0 / grid_step_deg
    n_phi = 360.0 / grid_step_deg
    if abs(n_theta - round(n_theta)) > 1e-9 or abs(n_phi - round(n_phi)) > 1e-9:
        raise ParameterError(
            f"grid step {grid_step_deg} deg must divide 180 and 360 degrees")
    n_theta, n_phi = int(round(n_theta)), int(round(n_phi))
    step = math.radians(grid_step_deg)
    theta = (np.arange(n_theta) + 0.5) * step
    phi = np.arange(n_phi) * step
    return theta, phi, step


def total_pattern(patch, array, lam, grid_step_deg=1.0):
    """Directive gain of element-times-array-factor over the sphere.

    D is |element * AF|^2 scaled so the midpoint-rule integral
    (1/4pi) * integral(D dOmega) equals 1.  ``patch=None`` selects an
    isotropic element.

    Parameters
    ----------
    patch : PatchSpec or None
    array : ArraySpec
    lam : float
        Wavelength in metres.
    grid_step_deg : float
        Angular resolution; 1 degree by default, 0.1 degree floor.

    Returns
    -------
    RadiationPattern
    """
    theta, phi, step = _pattern_grids(grid_step_deg)
    tg = theta[:, None]
    pg = phi[None, :]
    field_amp = element_pattern(patch, tg, pg, lam) * array_factor(array, tg, pg, lam)
    power = np.abs(field_amp) ** 2
    integral = float(np.sum(power * np.sin(theta)[:, None]) * step * step)
    if integral <= 0.0:
        raise ParameterError("pattern has zero radiated power")
    return RadiationPattern(theta_grid_rad=theta, phi_grid_rad=phi,
                            directive_gain=power * (4.0 * np.pi / integral))


def fss_gain_enhancement(fss):
    """Broadside gain boost of the reflective superstrate in dB.

    The ray series bouncing between surface and ground sums, at
    resonance, to a power gain of (1 + |G|) / (1 - |G|):

        dG = 10*log10((1 + |G|) / (1 - |G|))

    A transparent surface (|G| = 0) gives 0 dB; the boost grows without
    bound as |G| approaches 1.
    """
    g = fss.reflection_mag
    if not (0.0 <= g < 1.0):
        raise ParameterError(f"reflection magnitude must lie in [0, 1), got {g!r}")
    return 10.0 * math.log10((1.0 + g) / (1.0 - g))


def prs_resonance_height(fss, lam, order):
    """Cavity height (metres) that puts the ray series in phase.

    H = (phi_prs + phi_gnd) * lambda / (4*pi) + N * lambda / 2 for
    resonance order N >= 0; exactly affine in N with slope lambda/2.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"wavelength must be > 0, got {lam!r}")
    if int(order) != order or order < 0:
        raise ParameterError(f"resonance order must be an integer >= 0, got {order!r}")
    return ((fss.reflection_phase_rad + fss.ground_phase_rad) * lam / (4.0 * np.pi)
            + order * lam / 2.0)


def system_gain(pattern, efficiency, fss_delta_db):
    """Total gain in dBi: peak directivity, efficiency loss, FSS boost.

    G = 10*log10(max D) + 10*log10(efficiency) + fss_delta_db
    """
    if not (0.0 < efficiency <= 1.0):
        raise ParameterError(f"efficiency must lie in (0, 1], got {efficiency!r}")
    return (pattern.peak_directivity_dbi
            + 10.0 * math.log10(efficiency)
            + fss_delta_db)


def _nearest_phi_column(pattern, phi_target_deg):
    phi_deg = np.degrees(pattern.phi_grid_rad)
    circ = np.abs((phi_deg - phi_target_deg + 180.0) % 360.0 - 180.0)
    return int(np.argmin(circ))


def _principal_cut(pattern, cut):
    """Signed-angle cut through broadside: alpha in (-pi, pi)."""
    cuts = {"e_plane": 0.0, "h_plane": 90.0}
    if cut not in cuts:
        raise ParameterError(f"cut must be one of {sorted(cuts)}, got {cut!r}")
    j_fwd = _nearest_phi_column(pattern, cuts[cut])
    j_bwd = _nearest_phi_column(pattern, cuts[cut] + 180.0)
    alpha = np.concatenate((-pattern.theta_grid_rad[::-1], pattern.theta_grid_rad))
    gain = np.concatenate((pattern.directive_gain[::-1, j_bwd],
                           pattern.directive_gain[:, j_fwd]))
    return alpha, gain


def _crossing(alpha, level_db, i_inside, i_outside):
    """Linear interpolation of the alpha where level_db crosses zero."""
    a0, a1 = alpha[i_inside], alpha[i_outside]
    return a0 + (a1 - a0) * level_db[i_inside] / (
        level_db[i_inside] - level_db[i_outside])


def beamwidths(pattern, cut):
    """Half-power and first-null beamwidths (degrees) of a principal cut.

    The main lobe is the cut maximum in the front half-space
    (|alpha| < 90 degrees; for symmetric two-sided patterns the front
    lobe is taken by convention).  The half-power width spans the two
    crossings of D_peak/2 around that maximum, found by linear
    interpolation of dB values between grid points.  The first-null
    width spans the nearest local minima at least 20 dB below the peak
    on either side, or None when no such null exists.

    Parameters
    ----------
    pattern : RadiationPattern
    cut : {"e_plane", "h_plane"}

    Returns
    -------
    (float, float or None)
        (half-power width, first-null width) in degrees.

    Raises
    ------
    DegeneratePatternError
        Flat cut or no half-power crossing inside the cut.
    """
    alpha, gain = _principal_cut(pattern, cut)
    front = np.abs(alpha) < np.pi / 2.0
    peak_idx = int(np.flatnonzero(front)[np.argmax(gain[front])])
    peak = gain[peak_idx]
    if peak <= 0 or np.all(gain == gain[0]):
        raise DegeneratePatternError(f"{cut} cut is flat; no half-power crossing")

    with np.errstate(divide="ignore"):
        rel_db = 10.0 * np.log10(np.maximum(gain / peak, 1e-30))
    half_db = 10.0 * math.log10(0.5)
    level = rel_db - half_db  # positive inside the half-power contour

    right = None
    for i in range(peak_idx, len(alpha) - 1):
        if level[i] >= 0 > level[i + 1]:
            right = _crossing(alpha, level, i, i + 1)
            break
    left = None
    for i in range(peak_idx, 0, -1):
        if level[i] >= 0 > level[i - 1]:
            left = _crossing(alpha, level, i, i - 1)
            break
    if left is None or right is None:
        raise DegeneratePatternError(
            f"{cut} cut never falls to half power inside the visible range")
    hpbw = math.degrees(right - left)

    null_floor_db = -20.0
    def first_null(direction):
        i = peak_idx + direction
        while 0 < i < len(alpha) - 1:
            if rel_db[i] <= null_floor_db and gain[i] <= gain[i - 1] and gain[i] <= gain[i + 1]:
                return alpha[i]
            i += direction
        return None

    n_right = first_null(+1)
    n_left = first_null(-1)
    fnbw = math.degrees(n_right - n_left) if n_right is not None and n_left is not None else None
    return hpbw, fnbw
