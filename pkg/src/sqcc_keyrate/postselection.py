"""Gaussian post-selection by heralded noiseless attenuation on Alice's side.

Alice keeps a round with probability exp(-g^2 |gamma|^2) where gamma is her
complex modulation sample.  Averaged over the Gaussian ensemble this is a
Gaussian filter: the accepted ensemble is again Gaussian with a smaller
modulation variance, so the whole key-rate pipeline can be rerun on the
filtered ensemble.  Classical decoding happened before the filter, so the
error rate, decay factor and rescaling gain keep their pre-filter values.
"""

import math

from .errors import DomainError
from .sqcc import ProtocolParams, build_data_cm, build_eve_cm, derive


def acceptance_probability(g: float, v_mod: float) -> float:
    """P_A = 1 / (2 g^2 V_mod + 1)."""
    if g < 0:
        raise DomainError(f"filter gain must be non-negative, got {g}")
    if not v_mod > 0:
        raise DomainError(f"v_mod must be positive, got {v_mod}")
    return 1.0 / (2.0 * g * g * v_mod + 1.0)


def effective_modulation_variance(g: float, v_mod: float) -> float:
    """Modulation variance of the accepted sub-ensemble, V_mod P_A."""
    return v_mod * acceptance_probability(g, v_mod)


def gain_for_target_variance(v_mod: float, v_target: float) -> float:
    """Inverse of effective_modulation_variance in g, for fixed v_mod."""
    if not 0 < v_target <= v_mod:
        raise DomainError(
            f"target variance must lie in (0, v_mod]={v_mod}, got {v_target}"
        )
    return math.sqrt((v_mod - v_target) / (2.0 * v_mod * v_target))


def post_selected_pipeline(p: ProtocolParams, g: float):
    """Covariance matrices of the accepted ensemble.

    Returns (data_cm, eve_cm, P_A).  Both matrices are rebuilt at the
    filtered variance, while N_d, e_C and delta stay those of the original
    ensemble (decoding and rescaling precede the filter).
    """
    p_a = acceptance_probability(g, p.v_mod)
    v_eff = effective_modulation_variance(g, p.v_mod) + 1.0
    sd = derive(p, ideal=False)
    data_cm = build_data_cm(p, sd, v_eff)
    eve_cm = build_eve_cm(p, v_eff)
    return data_cm, eve_cm, p_a
