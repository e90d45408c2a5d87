"""Two-mode Gaussian-state algebra in shot-noise units (vacuum variance = 1).

Every covariance matrix in this package has the symmetric two-mode block form

    sigma = [[ a*I2,   c*Z ],
             [ c*Z,    b*I2 ]],     I2 = diag(1, 1),  Z = diag(1, -1),

so states are stored in the reduced (a, b, c) form rather than as 4x4 arrays.
Note det(c*Z) = -c^2, which fixes the sign convention Delta = a^2 + b^2 - 2c^2
used throughout.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, NegativeDiscriminant, NonFiniteInput

# Symplectic eigenvalues within this window of 1 are treated as exactly 1
# (the 0*log0 limit); anything below 1 by more than the window is an error,
# not a clamp.
UNIT_TOL = 1e-9


@dataclass(frozen=True)
class TwoModeCM:
    """Reduced (a, b, c) form of a symmetric two-mode covariance matrix."""

    a: float
    b: float
    c: float


class SymplecticSpectrum(NamedTuple):
    lambda1: float
    lambda2: float


def symplectic_eigenvalues(cm: TwoModeCM) -> SymplecticSpectrum:
    """Symplectic spectrum of a reduced-form two-mode covariance matrix.

    lambda_{1,2} = sqrt((Delta +- sqrt(Delta^2 - 4 det)) / 2) with
    Delta = a^2 + b^2 - 2c^2 and det = (ab - c^2)^2.  The discriminant is
    evaluated in the factored form (a - b)^2 ((a + b)^2 - 4c^2), which avoids
    the catastrophic cancellation of Delta^2 - 4 det near degeneracy, and the
    smaller eigenvalue is recovered from the determinant product to avoid a
    second cancellation.
    """
    a, b, c = cm.a, cm.b, cm.c
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
        raise NonFiniteInput(f"covariance entries must be finite, got {cm}")
    if a <= 0 or b <= 0:
        raise DomainError(f"diagonal variances must be positive, got a={a}, b={b}")

    gap = (a + b) ** 2 - 4.0 * c * c
    if gap < 0.0:
        if gap < -UNIT_TOL * (a + b) ** 2:
            raise NegativeDiscriminant(
                f"|c|={abs(c)} exceeds (a+b)/2={(a + b) / 2}: not a covariance matrix"
            )
        gap = 0.0
    delta = a * a + b * b - 2.0 * c * c
    root = abs(a - b) * math.sqrt(gap)

    lam1_sq = 0.5 * (delta + root)
    if lam1_sq < 0.0:
        raise NegativeDiscriminant(f"negative squared eigenvalue {lam1_sq} for {cm}")
    lam1 = math.sqrt(lam1_sq)
    lam2 = abs(a * b - c * c) / lam1 if lam1 > 0.0 else 0.0
    return SymplecticSpectrum(lam1, lam2)


def bosonic_entropy(x: float) -> float:
    """Entropy contribution g(x) of one symplectic eigenvalue, in bits.

    g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2); returns exactly
    0 within UNIT_TOL of the vacuum eigenvalue x = 1.
    """
    if x < 1.0 - UNIT_TOL:
        raise DomainError(f"symplectic eigenvalue {x} below the vacuum bound 1")
    if x <= 1.0 + UNIT_TOL:
        return 0.0
    up = 0.5 * (x + 1.0)
    dn = 0.5 * (x - 1.0)
    return up * math.log2(up) - dn * math.log2(dn)


def entropy_of_cm(cm: TwoModeCM) -> float:
    """Von Neumann entropy S(sigma) = sum_i g(lambda_i) in bits."""
    lam1, lam2 = symplectic_eigenvalues(cm)
    return bosonic_entropy(lam1) + bosonic_entropy(lam2)


def conditional_cm_after_heterodyne(cm: TwoModeCM) -> float:
    """Mode-A covariance after a heterodyne measurement of mode B.

    sigma_{A|b} = sigma_a - sigma_c sigma_c^T / (b + 1) = (a - c^2/(b+1)) I2.
    The conditional matrix is proportional to the identity, so its single
    symplectic eigenvalue equals the returned diagonal.
    """
    if cm.b <= -1.0:
        raise DomainError(f"heterodyne conditioning undefined for b={cm.b} <= -1")
    lam = cm.a - cm.c * cm.c / (cm.b + 1.0)
    if lam < 1.0 - UNIT_TOL:
        raise DomainError(f"conditional variance {lam} below vacuum: non-physical state")
    return lam
