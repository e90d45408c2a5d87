"""Physical link models: fiber attenuation and a satellite downlink budget.

The satellite budget composes fixed optics efficiencies with three
elevation-dependent factors: geometric collection of a diffracting,
turbulence-spread Gaussian beam; Kim-model atmospheric extinction; and a
log-normal scintillation quantile.  It returns a raw (T, xi) pair; any
calibration against reference hardware is applied by the caller so that raw
and calibrated quantities stay separable.

Path lengths use a spherical-shell geometry, which stays finite at grazing
elevations where a flat-slab secant diverges.
"""

import math
from dataclasses import dataclass

from scipy.special import ndtri

from .errors import DegenerateLink, DomainError, EmptyGrid

# below this the link is treated as switched off rather than attenuating
T_FLOOR = 1e-12


@dataclass(frozen=True)
class FiberLink:
    length_km: float
    loss_db_per_km: float = 0.2

    def __post_init__(self):
        if self.length_km < 0:
            raise DomainError(f"fiber length must be non-negative, got {self.length_km}")
        if self.loss_db_per_km < 0:
            raise DomainError(f"fiber loss must be non-negative, got {self.loss_db_per_km}")


def fiber_transmittance(link: FiberLink) -> float:
    """T = 10^(-loss * length / 10)."""
    return 10.0 ** (-link.loss_db_per_km * link.length_km / 10.0)


@dataclass(frozen=True)
class SatLink:
    """Satellite-to-ground link description.  Lengths km, apertures m."""

    elevation: float            # degrees; 90 = zenith, symmetric about 90
    V_visib: float              # visibility, km
    Cn2: float                  # refractive-index structure parameter, m^(-2/3)
    R_E: float = 6371.0         # Earth radius, km
    L_zen: float = 500.0        # satellite altitude, km
    L_OGS: float = 0.0          # ground-station altitude, km
    D_t: float = 0.3            # transmitter aperture diameter, m
    D_r: float = 1.0            # receiver aperture diameter, m
    T_t: float = 0.95           # transmitter optics efficiency
    T_r: float = 0.95           # receiver optics efficiency
    L_p: float = 0.1            # pointing loss fraction
    L_atm: float = 20.0         # atmosphere thickness, km
    p_th: float = 1e-6          # scintillation outage quantile
    wavelength_nm: float = 1550.0
    xi_ch: float = 0.02         # channel excess noise, SNU, elevation-independent

    def __post_init__(self):
        if not 0.0 <= self.elevation <= 180.0:
            raise DomainError(f"elevation must lie in [0, 180] degrees, got {self.elevation}")
        if not self.V_visib > 0:
            raise DomainError(f"visibility must be positive, got {self.V_visib}")
        if self.Cn2 < 0:
            raise DomainError(f"Cn2 must be non-negative, got {self.Cn2}")
        if not self.L_zen > self.L_OGS >= 0:
            raise DomainError("need satellite altitude > ground-station altitude >= 0")
        if not 0 < self.p_th < 1:
            raise DomainError(f"outage quantile must lie in (0, 1), got {self.p_th}")
        for name in ("D_t", "D_r", "T_t", "T_r", "wavelength_nm"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not 0 <= self.L_p < 1:
            raise DomainError(f"pointing loss fraction must lie in [0, 1), got {self.L_p}")


# Table-style weather presets: (visibility km, Cn2 m^(-2/3))
WEATHER = {
    "good": (200.0, 1e-16),
    "bad": (20.0, 1e-13),
}


def link_for_weather(elevation: float, weather: str, **overrides) -> SatLink:
    if weather not in WEATHER:
        raise DomainError(f"weather must be one of {sorted(WEATHER)}, got {weather!r}")
    v_visib, cn2 = WEATHER[weather]
    return SatLink(elevation=elevation, V_visib=v_visib, Cn2=cn2, **overrides)


def _effective_elevation_rad(elevation_deg: float) -> float:
    theta_e = min(elevation_deg, 180.0 - elevation_deg)
    if theta_e <= 0.0:
        raise DomainError(
            f"slant range diverges at the horizon, elevation {elevation_deg} degrees"
        )
    return math.radians(theta_e)


def _shell_slant_km(elevation_deg: float, r_ground_km: float, h_km: float) -> float:
    # chord from a station at radius R to a shell at radius R+h
    th = _effective_elevation_rad(elevation_deg)
    r = r_ground_km
    s = r * math.sin(th)
    return math.sqrt(s * s + 2.0 * r * h_km + h_km * h_km) - s


def slant_range(link: SatLink) -> float:
    """Ground-station-to-satellite distance in km, mirrored about zenith."""
    return _shell_slant_km(link.elevation, link.R_E + link.L_OGS,
                           link.L_zen - link.L_OGS)


def atmospheric_path_km(link: SatLink) -> float:
    """Path length through the L_atm-thick spherical shell, km."""
    return _shell_slant_km(link.elevation, link.R_E + link.L_OGS,
                           link.L_atm - link.L_OGS)


def kim_extinction(v_visib_km: float, wavelength_nm: float) -> float:
    """Kim-model extinction coefficient in 1/km.

    q = 1.6 for clear air (V > 50 km), 1.3 for haze; finer brackets below
    6 km visibility are outside both weather presets.
    """
    if not v_visib_km > 0:
        raise DomainError(f"visibility must be positive, got {v_visib_km}")
    q = 1.6 if v_visib_km > 50.0 else 1.3
    return (3.91 / v_visib_km) * (wavelength_nm / 550.0) ** (-q)


def rytov_variance(cn2: float, wavenumber: float, path_m: float) -> float:
    """Plane-wave Rytov variance sigma_R^2 = 1.23 Cn2 k^(7/6) L^(11/6)."""
    return 1.23 * cn2 * wavenumber ** (7.0 / 6.0) * path_m ** (11.0 / 6.0)


def scintillation_exponent(rytov_sq: float) -> float:
    """Saturated log-irradiance variance sigma_ln^2.

    Interpolates between the weak-fluctuation limit (equal to the Rytov
    variance) and saturation; without the saturation form the strong-Cn2
    preset would predict fade depths of hundreds of orders of magnitude.
    """
    if rytov_sq == 0.0:
        return 0.0
    s12 = rytov_sq ** 1.2
    return 0.49 * rytov_sq / (1.0 + 1.11 * s12) ** (7.0 / 6.0) \
        + 0.51 * rytov_sq / (1.0 + 0.69 * s12) ** (5.0 / 6.0)


def fried_parameter(cn2: float, wavenumber: float, path_m: float) -> float:
    """Fried coherence length r0 = (0.423 k^2 Cn2 L)^(-3/5), in meters."""
    if cn2 == 0.0:
        return math.inf
    return (0.423 * wavenumber * wavenumber * cn2 * path_m) ** (-3.0 / 5.0)


def satellite_transmittance(link: SatLink):
    """Raw downlink (T, xi) at the link's elevation.

    T = T_t T_r (1 - L_p) T_diff T_atm T_turb with
      T_diff: collection fraction 1 - exp(-2 (D_r/2)^2 / w_eff^2) where
              w_eff^2 adds turbulent beam spread (lambda L / pi r0)^2 to the
              diffractive far-field radius of a waist-D_t/2 Gaussian beam;
      T_atm:  Kim extinction over the shell path;
      T_turb: log-normal scintillation transmittance at the p_th quantile.
    xi is the elevation-independent excess noise carried by the link.
    """
    path_sat_m = slant_range(link) * 1e3
    path_atm_km = atmospheric_path_km(link)
    path_atm_m = path_atm_km * 1e3
    lam = link.wavelength_nm * 1e-9
    k = 2.0 * math.pi / lam

    w0 = link.D_t / 2.0
    z_r = math.pi * w0 * w0 / lam
    w_diff_sq = w0 * w0 * (1.0 + (path_sat_m / z_r) ** 2)
    r0 = fried_parameter(link.Cn2, k, path_atm_m)
    w_spread_sq = 0.0 if math.isinf(r0) else (lam / (math.pi * r0) * path_atm_m) ** 2
    w_eff_sq = w_diff_sq + w_spread_sq
    t_diff = 1.0 - math.exp(-2.0 * (link.D_r / 2.0) ** 2 / w_eff_sq)

    sigma_ext = kim_extinction(link.V_visib, link.wavelength_nm)
    t_atm = math.exp(-sigma_ext * path_atm_km)

    sig_ln_sq = scintillation_exponent(rytov_variance(link.Cn2, k, path_atm_m))
    sig_ln = math.sqrt(sig_ln_sq)
    t_turb = math.exp(-0.5 * sig_ln_sq + sig_ln * ndtri(link.p_th))
    t_turb = min(t_turb, 1.0)

    t = link.T_t * link.T_r * (1.0 - link.L_p) * t_diff * t_atm * t_turb
    if t < T_FLOOR:
        raise DegenerateLink(f"transmittance {t:.3e} below floor {T_FLOOR:.0e}")
    return t, link.xi_ch


def duty_cycle(rates, threshold: float, total_window_h: float = 3.0):
    """Fraction of a pass with key rate at or above threshold.

    rates is a sequence of (elevation, key_rate) pairs on a uniform grid;
    elevation maps linearly onto time, so the usable duration is just the
    fraction times the window.  Returns (fraction, duration_h).
    """
    rates = list(rates)
    if not rates:
        raise EmptyGrid("duty cycle of an empty elevation grid")
    above = sum(1 for _, r in rates if r >= threshold)
    fraction = above / len(rates)
    return fraction, fraction * total_window_h
