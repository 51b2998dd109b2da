"""Polariton excitation branches above the mean-field ground state.

Quadratic fluctuations around the mean-field minimum give two polariton
branches.  A single pair of dispersion formulas covers every phase once the
bare parameters are replaced by phase-dependent effective ("tilde") values;
this module performs that substitution and evaluates both branches in a form
that stays accurate where the naive expression suffers catastrophic
cancellation, i.e. near and on the critical lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .meanfield import SYMMETRY_TOL, classify_phase
from .params import ModelParams, Phase, critical_coupling, mu_factors

#: a branch below GAPLESS_TOL * omega counts as gapless
GAPLESS_TOL = 1e-8


class SpectrumConsistencyError(RuntimeError):
    """The lower branch came out imaginary: the requested phase does not
    describe these couplings (e.g. a normal-phase formula evaluated above
    the critical coupling)."""


@dataclass(frozen=True)
class TildeParams:
    """Effective parameters entering the shared dispersion formulas."""

    omega0: float
    omega_E: float
    omega_M: float


@dataclass(frozen=True)
class PolaritonSpectrum:
    eps_minus: float
    eps_plus: float
    phase: Phase
    tilde: TildeParams


@dataclass(frozen=True)
class ModeFlags:
    """Qualitative labels for one spectrum.

    goldstone: gapless lower branch from the broken continuous symmetry
    (equal couplings above critical).  critical: gapless lower branch on a
    second-order boundary.  amplitude: gapped upper branch accompanying a
    Goldstone mode.
    """

    goldstone: bool
    critical: bool
    amplitude: bool


def tilde_substitution(params: ModelParams, phase: Phase) -> TildeParams:
    """Effective (omega0, omega_E, omega_M) for the given phase.

    The normal phase keeps the bare values.  A condensed phase rescales its
    dominant coupling by the corresponding mu factor and stiffens omega0 by
    1/mu; the EM phase uses the same substitution as Electric, which it
    matches continuously on the diagonal.
    """
    if phase is Phase.NORMAL:
        return TildeParams(params.omega0, params.omega_E, params.omega_M)
    mu_e, mu_m = mu_factors(params)
    if phase in (Phase.ELECTRIC, Phase.EM):
        if mu_e is None:
            raise ValueError("the Electric substitution requires omega_E > 0")
        return TildeParams(params.omega0 / mu_e, params.omega_E * mu_e, params.omega_M)
    if phase is Phase.MAGNETIC:
        if mu_m is None:
            raise ValueError("the Magnetic substitution requires omega_M > 0")
        return TildeParams(params.omega0 / mu_m, params.omega_E, params.omega_M * mu_m)
    raise ValueError(f"unknown phase {phase!r}")


def polariton_energies(
    params: ModelParams,
    phase: Optional[Phase] = None,
    tol_sym: float = SYMMETRY_TOL,
) -> PolaritonSpectrum:
    """Both excitation branches at one parameter point.

    The branch energies squared are (s -+ sqrt(r)) / 2 with

        s = 8 wE~ wM~ + omega^2 + w0~^2
        r = (omega^2 - w0~^2)^2 + 16 (wE~ w0~ + wM~ omega)(wE~ omega + wM~ w0~)

    evaluated in tilde parameters.  The difference s^2 - r factorizes as
    4 (4 wE~^2 - omega w0~)(4 wM~^2 - omega w0~), so the lower branch is
    computed as 2 (4 wE~^2 - omega w0~)(4 wM~^2 - omega w0~) / (s + sqrt(r)),
    which is exact-to-rounding arbitrarily close to the critical lines where
    the subtractive form loses every significant digit.  On the EM line the
    same factorization vanishes identically (mu = omega w0~ / (4 wE~^2) = 1
    after substitution), so eps_minus is returned as an exact zero.

    A significantly negative lower branch squared means the requested phase
    does not describe these couplings; that raises SpectrumConsistencyError
    rather than returning a silently clamped value.
    """
    if phase is None:
        phase = classify_phase(params, tol_sym)
    tilde = tilde_substitution(params, phase)
    w = params.omega
    w0t, wet, wmt = tilde.omega0, tilde.omega_E, tilde.omega_M
    s_sum = 8.0 * wet * wmt + w * w + w0t * w0t
    rad = (w * w - w0t * w0t) ** 2 + 16.0 * (wet * w0t + wmt * w) * (wet * w + wmt * w0t)
    root = math.sqrt(rad)
    if phase is Phase.EM:
        em2 = 0.0
        ep2 = s_sum
    else:
        factor_e = 4.0 * wet * wet - w * w0t
        factor_m = 4.0 * wmt * wmt - w * w0t
        em2 = 2.0 * factor_e * factor_m / (s_sum + root)
        ep2 = 0.5 * (s_sum + root)
        if em2 < -1e-12 * s_sum:
            raise SpectrumConsistencyError(
                f"lower branch squared = {em2} at omega_E={params.omega_E}, "
                f"omega_M={params.omega_M} under the {phase} substitution"
            )
        if em2 < 0.0:
            em2 = 0.0
        em2 += 0.0  # turn a signed zero (0.0 * negative factor) into +0.0
    return PolaritonSpectrum(math.sqrt(em2), math.sqrt(ep2), phase, tilde)


def mode_scan(
    points: Iterable[ModelParams],
    gapless_tol: float = GAPLESS_TOL,
    tol_sym: float = SYMMETRY_TOL,
) -> List[Tuple[PolaritonSpectrum, ModeFlags]]:
    """Spectra with Goldstone / critical / amplitude flags for many points."""
    out = []
    for p in points:
        spec = polariton_energies(p, tol_sym=tol_sym)
        cr = critical_coupling(p.omega, p.omega0)
        line_tol = tol_sym * p.omega
        gapless = spec.eps_minus < gapless_tol * p.omega
        on_diagonal = abs(p.omega_E - p.omega_M) <= line_tol
        goldstone = gapless and on_diagonal and p.omega_E >= cr - line_tol
        on_e_line = abs(p.omega_E - cr) <= line_tol and p.omega_M <= cr + line_tol
        on_m_line = abs(p.omega_M - cr) <= line_tol and p.omega_E <= cr + line_tol
        critical = gapless and (on_e_line or on_m_line)
        amplitude = goldstone and spec.eps_plus > gapless_tol * p.omega
        out.append((spec, ModeFlags(goldstone, critical, amplitude)))
    return out
