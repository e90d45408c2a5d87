"""Derived quantities of the simultaneous quantum-classical (SQCC) protocol.

Alice Gaussian-modulates coherent states (variance V_mod per quadrature, SNU)
and adds a large classical displacement d from a phase alphabet.  Bob
heterodynes, decodes the classical symbol, re-displaces by the *decoded*
symbol and rescales his record by an electronic gain N_d so that decoding
mistakes leave a physical second-moment structure.

The channel is carried as (T, xi).  The equivalent thermal-noise number
W = xi*T/(1-T) + 1 is singular at T = 1, but it only ever enters through the
product (1-T)*W = xi*T + (1-T), which is what this module uses; T = 1 is then
a regular point and xi acts as directly added noise there.
"""

import math
from dataclasses import dataclass

from scipy.special import erfc, erfcinv

from .errors import DomainError, NonPhysicalRescale
from .gaussian import TwoModeCM


@dataclass(frozen=True)
class ProtocolParams:
    """Alice/Bob/channel configuration.  All variances in SNU (vacuum = 1)."""

    v_mod: float          # Alice's Gaussian modulation variance
    d: float              # classical displacement amplitude (sqrt-SNU)
    T: float              # channel transmittance
    xi: float             # channel excess noise (SNU)
    eta: float            # detector efficiency
    v_el: float           # detector electronic noise (SNU)
    beta: float           # reconciliation efficiency

    def __post_init__(self):
        if not self.v_mod > 0:
            raise DomainError(f"v_mod must be positive, got {self.v_mod}")
        if self.d < 0:
            raise DomainError(f"displacement must be non-negative, got {self.d}")
        if not 0 < self.T <= 1:
            raise DomainError(f"transmittance must lie in (0, 1], got {self.T}")
        if self.xi < 0:
            raise DomainError(f"excess noise must be non-negative, got {self.xi}")
        if not 0 < self.eta <= 1:
            raise DomainError(f"detector efficiency must lie in (0, 1], got {self.eta}")
        if self.v_el < 0:
            raise DomainError(f"electronic noise must be non-negative, got {self.v_el}")
        if not 0 <= self.beta < 1:
            raise DomainError(f"reconciliation efficiency must lie in [0, 1), got {self.beta}")

    @property
    def V(self) -> float:
        """Thermal variance of Alice's average state, V = V_mod + 1."""
        return self.v_mod + 1.0


@dataclass(frozen=True)
class SqccDerived:
    """Quantities derived from one (params, detector-model) evaluation."""

    alpha: float          # Bob-side re-displacement amplitude sqrt(eta T) d
    snr: float            # classical signal-to-noise ratio alpha^2/(V_b+1)
    e_C: float            # classical bit-error rate
    delta: float          # correlation-decay factor
    N_d: float            # electronic rescaling gain
    V_b: float            # Bob's variance before rescaling
    V_bd: float           # Bob's variance after a re-displacement mistake


def channel_added_noise(p: ProtocolParams) -> float:
    # (1-T)W evaluated in the singularity-free form
    return p.xi * p.T + (1.0 - p.T)


def bob_variance(p: ProtocolParams, v_eff: float, ideal: bool = False) -> float:
    """Bob's mode variance eta (T V_eff + (1-T) W) + (1-eta) + 2 v_el.

    With ideal=True the detector terms are dropped (eta = 1, v_el = 0), which
    is the view used to bound the eavesdropper for a trusted receiver.
    """
    if v_eff < 1.0:
        raise DomainError(f"effective thermal variance must be >= 1, got {v_eff}")
    eta = 1.0 if ideal else p.eta
    v_el = 0.0 if ideal else p.v_el
    return eta * (p.T * v_eff + channel_added_noise(p)) + (1.0 - eta) + 2.0 * v_el


def classical_bit_error_rate(snr: float) -> float:
    """e_C = erfc(sqrt(SNR)/2) / 2."""
    if snr < 0:
        raise DomainError(f"SNR must be non-negative, got {snr}")
    return 0.5 * erfc(math.sqrt(snr) / 2.0)


def correlation_decay(snr: float) -> float:
    """delta = sqrt(SNR/pi) exp(-SNR/4); unimodal with maximum at SNR = 2."""
    if snr < 0:
        raise DomainError(f"SNR must be non-negative, got {snr}")
    return math.sqrt(snr / math.pi) * math.exp(-snr / 4.0)


def signal_to_noise(p: ProtocolParams, ideal: bool = False) -> float:
    v_b = bob_variance(p, p.V, ideal)
    eta = 1.0 if ideal else p.eta
    return eta * p.T * p.d * p.d / (v_b + 1.0)


def rescaling_gain(v_b: float, v_bd: float) -> float:
    """N_d = sqrt((V_b + 1)/(V_bd + 1))."""
    if v_bd <= -1.0:
        raise NonPhysicalRescale(
            f"post-mistake variance V_bd={v_bd} <= -1: no gain restores physicality"
        )
    return math.sqrt((v_b + 1.0) / (v_bd + 1.0))


def derive(p: ProtocolParams, ideal: bool = False) -> SqccDerived:
    """All SQCC derived quantities at Alice's true modulation variance.

    The rescaling gain is always computed here, at the pre-filter variance;
    post-selection reuses it unchanged.
    """
    eta = 1.0 if ideal else p.eta
    v_b = bob_variance(p, p.V, ideal)
    alpha_sq = eta * p.T * p.d * p.d
    snr = alpha_sq / (v_b + 1.0)
    e_c = classical_bit_error_rate(snr)
    delta = correlation_decay(snr)
    v_bd = v_b + 2.0 * alpha_sq * e_c - 2.0 * (v_b + 1.0) * delta - 2.0 * alpha_sq * e_c * e_c
    n_d = rescaling_gain(v_b, v_bd)
    return SqccDerived(
        alpha=math.sqrt(alpha_sq), snr=snr, e_C=e_c, delta=delta,
        N_d=n_d, V_b=v_b, V_bd=v_bd,
    )


def build_data_cm(p: ProtocolParams, sd: SqccDerived, v_eff: float) -> TwoModeCM:
    """Alice-Bob covariance matrix as Bob's data actually looks.

    a = V_eff, b = Bob's variance at V_eff, c = N_d sqrt(eta T (V_eff^2 - 1))
    (1 - delta).  sd must come from derive(p) at the original variance: the
    rescaling gain and decay factor are set before any filtering.
    """
    b = bob_variance(p, v_eff, ideal=False)
    c = sd.N_d * math.sqrt(p.eta * p.T * (v_eff * v_eff - 1.0)) * (1.0 - sd.delta)
    return TwoModeCM(a=v_eff, b=b, c=c)


def build_eve_cm(p: ProtocolParams, v_eff: float) -> TwoModeCM:
    """Covariance matrix conceded to the eavesdropper for a trusted receiver.

    Every Bob-side quantity (variance, SNR, error rate, decay, gain) is
    recomputed at eta = 1, v_el = 0: detection losses happen inside Bob's lab
    and are not attributed to the channel.  Alice's diagonal is shared with
    the data view.
    """
    sd = derive(p, ideal=True)
    b = bob_variance(p, v_eff, ideal=True)
    c = sd.N_d * math.sqrt(p.T * (v_eff * v_eff - 1.0)) * (1.0 - sd.delta)
    return TwoModeCM(a=v_eff, b=b, c=c)


def min_displacement(p: ProtocolParams, target_error: float) -> float:
    """Smallest displacement meeting a target classical bit-error rate.

    d_min = 2 erfc^{-1}(2 W_target) sqrt((V_b + 1)/T).  The formula carries T,
    not eta*T, under the root; it is exact for an ideal detector and slightly
    conservative otherwise.
    """
    if not 0.0 < target_error < 0.5:
        raise DomainError(f"target error rate must lie in (0, 1/2), got {target_error}")
    v_b = bob_variance(p, p.V, ideal=False)
    return 2.0 * erfcinv(2.0 * target_error) * math.sqrt((v_b + 1.0) / p.T)
