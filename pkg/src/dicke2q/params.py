"""Model parameters, derived critical quantities and the phase taxonomy.

Conventions used throughout the package: hbar = 1, so every energy is an
angular frequency.  The model couples a single boson mode (frequency
``omega``) to N identical two-level systems (splitting ``omega0``) through
both field quadratures, with independent strengths ``omega_E`` for the
(a + a^dag) quadrature and ``omega_M`` for the (a - a^dag) one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple


class Phase(enum.Enum):
    """Ground-state phase of the two-quadrature model.

    NORMAL    both order parameters vanish
    ELECTRIC  real-quadrature condensate, discrete pair of minima
    MAGNETIC  imaginary-quadrature condensate, discrete pair of minima
    EM        equal couplings, continuous circle of degenerate minima
    """

    NORMAL = "Normal"
    ELECTRIC = "Electric"
    MAGNETIC = "Magnetic"
    EM = "EM"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ModelParams:
    """Complete parameter set.

    Attributes
    ----------
    omega : float
        Boson mode frequency, > 0.
    omega0 : float
        Two-level splitting, > 0.
    omega_E : float
        Coupling to the (a + a^dag) quadrature, >= 0.
    omega_M : float
        Coupling to the (a - a^dag) quadrature, >= 0.
    n_spins : int
        Number of two-level systems, >= 1.  Mean-field quantities are
        reported per spin, so any value works for the thermodynamic limit;
        the exact-diagonalization routines use it as the actual system size.
    """

    omega: float
    omega0: float
    omega_E: float
    omega_M: float
    n_spins: int = 1

    def __post_init__(self):
        if not (self.omega > 0.0) or not (self.omega0 > 0.0):
            raise ValueError(
                "omega and omega0 must be positive, got "
                f"omega={self.omega}, omega0={self.omega0}"
            )
        if self.omega_E < 0.0 or self.omega_M < 0.0:
            raise ValueError(
                "couplings must be non-negative, got "
                f"omega_E={self.omega_E}, omega_M={self.omega_M}"
            )
        if self.n_spins != int(self.n_spins) or int(self.n_spins) < 1:
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins}")

    def with_couplings(self, omega_E: float, omega_M: float) -> "ModelParams":
        """Copy with the two coupling strengths replaced."""
        return replace(self, omega_E=omega_E, omega_M=omega_M)

    def with_size(self, n_spins: int) -> "ModelParams":
        return replace(self, n_spins=n_spins)


def critical_coupling(omega: float, omega0: float) -> float:
    """Coupling strength at which the normal phase loses stability.

    Equals sqrt(omega * omega0) / 2; the same threshold applies to either
    quadrature coupling alone.
    """
    if omega <= 0.0 or omega0 <= 0.0:
        raise ValueError(f"frequencies must be positive, got {omega}, {omega0}")
    return math.sqrt(omega * omega0) / 2.0


def mu_factors(params: ModelParams) -> Tuple[Optional[float], Optional[float]]:
    """Reduced inverse-coupling factors (mu_E, mu_M).

    mu_X = omega * omega0 / (4 * omega_X^2), which crosses 1 exactly at the
    critical coupling.  A vanishing coupling leaves the factor undefined and
    the corresponding entry is None rather than infinity.
    """
    w, w0 = params.omega, params.omega0
    mu_e = w * w0 / (4.0 * params.omega_E**2) if params.omega_E > 0.0 else None
    mu_m = w * w0 / (4.0 * params.omega_M**2) if params.omega_M > 0.0 else None
    return mu_e, mu_m


@dataclass(frozen=True)
class CriticalQuantities:
    """Bundle of the derived critical numbers for one parameter set."""

    omega_cr: float
    mu_E: Optional[float]
    mu_M: Optional[float]

    @classmethod
    def from_params(cls, params: ModelParams) -> "CriticalQuantities":
        mu_e, mu_m = mu_factors(params)
        return cls(critical_coupling(params.omega, params.omega0), mu_e, mu_m)
