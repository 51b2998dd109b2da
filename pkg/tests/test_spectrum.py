"""Polariton branch checks.

Reference values:

* resonant Tavis-Cummings regime (omega = omega0 = 1, equal couplings,
  normal phase): branches at omega -+ 2 Omega exactly
* decoupled point: bare frequencies come back unchanged
* diagonal above critical at Omega = 1: substitution gives
  eps_plus^2 = 8 mu + 1 + 1/mu^2 with mu = 1/4, i.e. eps_plus = sqrt(19).
"""

import math

import numpy as np
import pytest

from dicke2q import (
    ModelParams,
    Phase,
    SpectrumConsistencyError,
    critical_coupling,
    mode_scan,
    polariton_energies,
    tilde_substitution,
)


def _sum_and_product(w, tilde):
    s = 8.0 * tilde.omega_E * tilde.omega_M + w * w + tilde.omega0**2
    prod = (4.0 * tilde.omega_E**2 - w * tilde.omega0) * (
        4.0 * tilde.omega_M**2 - w * tilde.omega0
    )
    return s, prod


def test_tavis_cummings_branches():
    for coupling in (0.05, 0.1, 0.2, 0.35, 0.45):
        s = polariton_energies(ModelParams(1.0, 1.0, coupling, coupling))
        assert s.phase is Phase.NORMAL
        assert s.eps_minus == pytest.approx(1.0 - 2.0 * coupling, rel=1e-12)
        assert s.eps_plus == pytest.approx(1.0 + 2.0 * coupling, rel=1e-12)


def test_decoupled_point():
    s = polariton_energies(ModelParams(1.0, 0.8, 0.0, 0.0))
    assert s.eps_minus == 0.8
    assert s.eps_plus == 1.0


def test_diagonal_above_critical():
    s = polariton_energies(ModelParams(1.0, 1.0, 1.0, 1.0))
    assert s.phase is Phase.EM
    assert s.eps_minus == 0.0  # exact zero, not merely small
    assert s.eps_plus == math.sqrt(19.0)


def test_exact_zero_on_critical_lines():
    cr = critical_coupling(1.0, 1.0)
    for wm in (0.0, 0.2, 0.4):
        s = polariton_energies(ModelParams(1.0, 1.0, cr, wm))
        assert s.eps_minus == 0.0
        assert math.copysign(1.0, s.eps_minus) == 1.0  # and not -0.0
    for we in (0.0, 0.3):
        assert polariton_energies(ModelParams(1.0, 1.0, we, cr)).eps_minus == 0.0


def test_sum_and_product_rules():
    # eps_-^2 + eps_+^2 = S and eps_-^2 eps_+^2 = (S^2 - R)/4, which pins the
    # cancellation-free lower-branch formula against the textbook one
    rng = np.random.default_rng(9)
    for _ in range(300):
        w, w0 = rng.uniform(0.3, 2.5, 2)
        we, wm = rng.uniform(0.0, 2.0, 2)
        p = ModelParams(w, w0, we, wm)
        s = polariton_energies(p)
        tilde = tilde_substitution(p, s.phase)
        ssum, prod = _sum_and_product(w, tilde)
        em2, ep2 = s.eps_minus**2, s.eps_plus**2
        assert em2 + ep2 == pytest.approx(ssum, rel=1e-12)
        assert em2 * ep2 == pytest.approx(prod, rel=1e-9, abs=1e-12 * ssum**2)


def test_lower_branch_real_in_every_phase():
    rng = np.random.default_rng(10)
    for _ in range(500):
        w, w0 = rng.uniform(0.3, 2.5, 2)
        we, wm = rng.uniform(0.0, 2.0, 2)
        s = polariton_energies(ModelParams(w, w0, we, wm))
        assert s.eps_minus >= 0.0
        assert s.eps_plus > 0.0
        assert s.eps_plus >= s.eps_minus


def test_continuity_across_critical_line():
    cr = 0.5
    below = polariton_energies(ModelParams(1.0, 1.0, cr - 1e-8, 0.2)).eps_minus
    above = polariton_energies(ModelParams(1.0, 1.0, cr + 1e-8, 0.2)).eps_minus
    assert below < 1e-3
    assert above < 1e-3
    # square-root onset from both sides: doubling the detuning scales
    # eps_minus by sqrt(2)
    near = polariton_energies(ModelParams(1.0, 1.0, cr + 1e-8, 0.2)).eps_minus
    far = polariton_energies(ModelParams(1.0, 1.0, cr + 2e-8, 0.2)).eps_minus
    assert far / near == pytest.approx(math.sqrt(2.0), rel=1e-4)


def test_duality_under_coupling_swap():
    rng = np.random.default_rng(13)
    for _ in range(100):
        we, wm = rng.uniform(0.0, 2.0, 2)
        a = polariton_energies(ModelParams(1.0, 1.0, we, wm))
        b = polariton_energies(ModelParams(1.0, 1.0, wm, we))
        assert a.eps_minus == pytest.approx(b.eps_minus, rel=1e-10, abs=1e-12)
        assert a.eps_plus == pytest.approx(b.eps_plus, rel=1e-10)


def test_wrong_phase_raises():
    p = ModelParams(1.0, 1.0, 1.0, 0.2)  # firmly electric
    with pytest.raises(SpectrumConsistencyError):
        polariton_energies(p, phase=Phase.NORMAL)


def test_tilde_substitution_requires_coupling():
    with pytest.raises(ValueError):
        tilde_substitution(ModelParams(1.0, 1.0, 0.0, 0.3), Phase.ELECTRIC)
    with pytest.raises(ValueError):
        tilde_substitution(ModelParams(1.0, 1.0, 0.3, 0.0), Phase.MAGNETIC)


def test_tilde_values_electric():
    p = ModelParams(1.0, 1.0, 1.0, 0.2)
    t = tilde_substitution(p, Phase.ELECTRIC)
    assert t.omega0 == 4.0       # omega0 / mu with mu = 1/4
    assert t.omega_E == 0.25     # omega_E * mu
    assert t.omega_M == 0.2      # untouched


def test_mode_scan_flags():
    points = [
        ModelParams(1.0, 1.0, 0.2, 0.3),  # normal bulk
        ModelParams(1.0, 1.0, 1.0, 1.0),  # EM line
        ModelParams(1.0, 1.0, 0.5, 0.2),  # on the electric critical line
        ModelParams(1.0, 1.0, 1.0, 0.2),  # electric bulk
    ]
    flags = [f for _, f in mode_scan(points)]
    assert not (flags[0].goldstone or flags[0].critical or flags[0].amplitude)
    assert flags[1].goldstone and flags[1].amplitude and not flags[1].critical
    assert flags[2].critical and not flags[2].goldstone
    assert not (flags[3].goldstone or flags[3].critical)
