"""Asymptotic secret-key rates and scalar parameter optimizers.

Rates are reverse-reconciliation Devetak-Winter rates against collective
Gaussian attacks, K = P_A (beta I_AB - I_E), reported unclamped so that the
sign carries information; use KeyRateReport.secure_rate for a throughput.

A "trusted" receiver evaluates the Holevo bound on a detector-free view of
the state (detection loss and electronic noise stay inside Bob's lab); an
"untrusted" receiver concedes the full data-view matrix to the eavesdropper.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .gaussian import (
    TwoModeCM,
    bosonic_entropy,
    conditional_cm_after_heterodyne,
    entropy_of_cm,
)
from .postselection import post_selected_pipeline
from .sqcc import ProtocolParams

MODES = ("trusted", "untrusted")


@dataclass(frozen=True)
class KeyRateReport:
    """One key-rate evaluation with its decomposition."""

    key_rate: float           # bits per channel use, unclamped
    mutual_info: float        # I_AB
    holevo_bound: float       # I_E
    accept_prob: float        # post-selection acceptance probability
    gain: float               # post-selection filter gain
    mode: str
    v_mod: float
    block_size: Optional[float] = None   # None for asymptotic rates

    @property
    def secure_rate(self) -> float:
        """Usable throughput: the rate clamped at zero."""
        return max(self.key_rate, 0.0)


def mutual_information(cm: TwoModeCM) -> float:
    """Alice-Bob mutual information per use for double-quadrature encoding.

    Heterodyne measured variances are V_A = (a+1)/2, V_B = (b+1)/2 with
    covariance c/2 per quadrature; two quadratures give
    I_AB = log2(V_A / V_{A|B}).
    """
    v_a = 0.5 * (cm.a + 1.0)
    v_b = 0.5 * (cm.b + 1.0)
    phi = 0.5 * cm.c
    v_cond = v_a - phi * phi / v_b
    if v_cond <= 0:
        raise DomainError(
            f"conditional variance {v_cond} <= 0: matrix outside heterodyne range"
        )
    return math.log2(v_a / v_cond)


def holevo_bound(eve_cm: TwoModeCM) -> float:
    """Holevo information of Eve with Bob's heterodyne outcome, I_E.

    Purification argument: S(E) = S(AB) and S(E|b) = S(A|b), so
    I_E = S(AB) - g(nu_cond) with nu_cond the conditional symplectic
    eigenvalue of Alice's mode after Bob's heterodyne.
    """
    s_joint = entropy_of_cm(eve_cm)
    nu_cond = conditional_cm_after_heterodyne(eve_cm)
    return s_joint - bosonic_entropy(nu_cond)


def asymptotic_key_rate(p: ProtocolParams, g: float = 0.0, mode: str = "trusted") -> KeyRateReport:
    """Devetak-Winter rate of the post-selected ensemble, K = P_A (beta I_AB - I_E)."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    data_cm, eve_cm, p_a = post_selected_pipeline(p, g)
    i_ab = mutual_information(data_cm)
    i_e = holevo_bound(data_cm if mode == "untrusted" else eve_cm)
    rate = p_a * (p.beta * i_ab - i_e)
    return KeyRateReport(
        key_rate=rate, mutual_info=i_ab, holevo_bound=i_e,
        accept_prob=p_a, gain=g, mode=mode, v_mod=p.v_mod,
    )


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Argmax of a unimodal f on [lo, hi] by golden-section search."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


def _rate_fn(p: ProtocolParams, mode: str, fs):
    if fs is None:
        return lambda g: asymptotic_key_rate(p, g, mode)
    from .finite_size import finite_size_key_rate
    return lambda g: finite_size_key_rate(p, g, fs, mode)


def optimize_gain(p: ProtocolParams, mode: str = "trusted", fs=None,
                  g_max: float = 3.0, tol: float = 1e-4) -> KeyRateReport:
    """Best post-selection gain on [0, g_max].

    Coarse 64-point scan locates the basin (the rate develops a second,
    inferior stationary point in some regimes), then golden-section search
    refines the maximiser to within tol.  g = 0 (no filtering) is a valid
    answer.
    """
    rate_at = _rate_fn(p, mode, fs)
    grid = np.linspace(0.0, g_max, 64)
    vals = [rate_at(g).key_rate for g in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    g_best = _golden_max(lambda g: rate_at(g).key_rate, lo, hi, tol)
    best = rate_at(g_best)
    coarse = rate_at(grid[i])
    return best if best.key_rate >= coarse.key_rate else coarse


def optimize_modulation_variance(p: ProtocolParams, mode: str = "trusted", fs=None,
                                 v_max: float = 20.0, tol: float = 1e-4) -> KeyRateReport:
    """Best modulation variance on (0, v_max] with no post-selection.

    Same coarse-then-golden strategy as optimize_gain, scanning v_mod while
    every other protocol parameter (including the displacement) is held
    fixed.
    """
    from dataclasses import replace

    rate_fn_of = lambda v: _rate_fn(replace(p, v_mod=v), mode, fs)(0.0)
    grid = np.linspace(1e-3, v_max, 64)
    vals = [rate_fn_of(v).key_rate for v in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    v_best = _golden_max(lambda v: rate_fn_of(v).key_rate, lo, hi, tol)
    best = rate_fn_of(v_best)
    coarse = rate_fn_of(grid[i])
    return best if best.key_rate >= coarse.key_rate else coarse
