"""Mean-field layer: variational energy, closed-form minima, the numerical
minimizer, landscape grids and transition-order detection.

Frozen reference numbers below were computed from the closed forms by hand:
at omega = omega0 = 1 and coupling 1.0 the dominant-coupling mu is 0.25, so
|beta|/sqrt(N) = sqrt((1 - mu)/2)    = 0.61237243569579447
|alpha|/sqrt(N) = sqrt(1 - mu^2)     = 0.96824583655185426   (omega = 1)
E/N             = -(1 - mu)^2/(4 mu) = -0.5625
and at coupling 1.5 the same chain gives mu = 1/9, E/N = -16/9.
"""

import math

import numpy as np
import pytest

from dicke2q import (
    CouplingPath,
    GridSpec,
    ModelParams,
    Phase,
    analytic_order_parameters,
    classify_phase,
    eliminate_alpha,
    em_valley_point,
    ground_energy,
    landscape,
    minimize_numerically,
    minimum_energy_per_spin,
    reduced_energy,
    transition_order,
)
from dicke2q.meanfield import valley_energies

BETA_AT_1 = 0.61237243569579447
ALPHA_AT_1 = 0.96824583655185426
ENERGY_AT_1 = -0.5625
ENERGY_AT_15 = -16.0 / 9.0


# --- variational energy and the alpha elimination ---------------------------


def test_ground_energy_origin_is_zero():
    p = ModelParams(1.0, 1.0, 0.7, 0.4, n_spins=6)
    assert ground_energy(0j, 0j, p) == 0.0


def test_ground_energy_domain_check():
    p = ModelParams(1.0, 1.0, 0.7, 0.4, n_spins=2)
    with pytest.raises(ValueError):
        ground_energy(0j, 1.5 + 0.5j, p)  # |beta|^2 = 2.5 > N


def test_eliminate_alpha_is_stationary():
    # de/d(Re alpha) and de/d(Im alpha) both vanish at the eliminated point
    rng = np.random.default_rng(3)
    h = 1e-7
    for _ in range(50):
        n = int(rng.integers(1, 9))
        p = ModelParams(*rng.uniform(0.4, 1.6, 2), *rng.uniform(0.0, 1.5, 2), n)
        r = 0.9 * math.sqrt(n) * rng.uniform(0.0, 1.0)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        beta = complex(r * math.cos(ang), r * math.sin(ang))
        alpha = eliminate_alpha(beta, p)
        e0 = ground_energy(alpha, beta, p)
        d_re = (ground_energy(alpha + h, beta, p) - ground_energy(alpha - h, beta, p)) / (2 * h)
        d_im = (ground_energy(alpha + 1j * h, beta, p) - ground_energy(alpha - 1j * h, beta, p)) / (2 * h)
        assert abs(d_re) < 1e-6
        assert abs(d_im) < 1e-6
        # and it is a minimum over alpha, not just stationary
        assert ground_energy(alpha + 0.01 + 0.02j, beta, p) > e0


def test_reduced_energy_equals_eliminated_ground_energy():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(1, 12))
        p = ModelParams(*rng.uniform(0.4, 1.6, 2), *rng.uniform(0.0, 1.5, 2), n)
        r = 0.95 * math.sqrt(n) * rng.uniform(0.0, 1.0)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        beta = complex(r * math.cos(ang), r * math.sin(ang))
        full = ground_energy(eliminate_alpha(beta, p), beta, p)
        assert reduced_energy(beta, p) == pytest.approx(full, rel=1e-13, abs=1e-13)


def test_reduced_energy_scales_linearly_with_n():
    # per-spin energy depends only on beta/sqrt(N)
    p1 = ModelParams(1.0, 1.0, 1.0, 0.2, n_spins=1)
    p9 = ModelParams(1.0, 1.0, 1.0, 0.2, n_spins=9)
    b = 0.4 + 0.1j
    assert reduced_energy(3 * b, p9) / 9 == pytest.approx(reduced_energy(b, p1), rel=1e-14)


# --- classification ----------------------------------------------------------


@pytest.mark.parametrize(
    "we,wm,expected",
    [
        (0.2, 0.3, Phase.NORMAL),
        (0.49, 0.0, Phase.NORMAL),
        (1.0, 0.2, Phase.ELECTRIC),
        (0.2, 1.0, Phase.MAGNETIC),
        (1.0, 1.0, Phase.EM),
        (0.3, 0.3, Phase.NORMAL),   # on the diagonal but below critical
        (0.5, 0.5, Phase.NORMAL),   # exactly critical stays Normal
        (0.5, 0.2, Phase.NORMAL),   # exactly critical off-diagonal too
        (0.5 + 1e-12, 0.2, Phase.ELECTRIC),
        (1.2, 0.8, Phase.ELECTRIC),
        (0.8, 1.2, Phase.MAGNETIC),
    ],
)
def test_classify_phase(we, wm, expected):
    assert classify_phase(ModelParams(1.0, 1.0, we, wm)) is expected


def test_classify_phase_diagonal_tolerance():
    p = ModelParams(1.0, 1.0, 1.0, 1.0 + 5e-10)
    assert classify_phase(p) is Phase.EM
    assert classify_phase(p, tol_sym=1e-11) is Phase.MAGNETIC


def test_classify_phase_off_resonance():
    # omega = 4, omega0 = 1 puts the critical coupling at 1.0
    p = ModelParams(4.0, 1.0, 1.5, 0.3)
    assert classify_phase(p) is Phase.ELECTRIC
    assert classify_phase(p.with_couplings(0.9, 0.3)) is Phase.NORMAL


# --- closed forms ------------------------------------------------------------


def test_minimum_energy_frozen_values():
    assert minimum_energy_per_spin(ModelParams(1.0, 1.0, 0.2, 0.3)) == 0.0
    assert minimum_energy_per_spin(ModelParams(1.0, 1.0, 1.0, 0.2)) == ENERGY_AT_1
    assert minimum_energy_per_spin(ModelParams(1.0, 1.0, 0.2, 1.0)) == ENERGY_AT_1
    assert minimum_energy_per_spin(ModelParams(1.0, 1.0, 1.0, 1.0)) == ENERGY_AT_1
    assert minimum_energy_per_spin(ModelParams(1.0, 1.0, 1.5, 1.0)) == pytest.approx(
        ENERGY_AT_15, rel=1e-15
    )


def test_minimum_energy_continuous_at_critical():
    for delta in (1e-6, 1e-8, 1e-10):
        e = minimum_energy_per_spin(ModelParams(1.0, 1.0, 0.5 + delta, 0.2))
        # quadratic onset: e ~ -omega0 * (delta/omega_cr)^2
        assert -5.0 * delta**2 / 0.25 < e <= 0.0


def test_analytic_order_parameters_electric():
    p = ModelParams(1.0, 1.0, 1.0, 0.2, n_spins=4)
    pair = analytic_order_parameters(p)
    assert len(pair) == 2
    for m in pair:
        assert m.phase is Phase.ELECTRIC
        assert m.theta is None
        assert m.beta.imag == 0.0 and m.alpha.imag == 0.0
        assert abs(m.beta_scaled) == pytest.approx(BETA_AT_1, abs=1e-15)
        assert abs(m.alpha_scaled) == pytest.approx(ALPHA_AT_1, abs=1e-15)
        # anti-correlated signs
        assert m.alpha.real * m.beta.real < 0.0
        assert reduced_energy(m.beta, p) / 4 == pytest.approx(ENERGY_AT_1, abs=1e-15)
    assert pair[0].beta == -pair[1].beta


def test_analytic_order_parameters_magnetic_mirrors_electric():
    pe = ModelParams(1.0, 1.0, 1.3, 0.2, n_spins=3)
    pm = ModelParams(1.0, 1.0, 0.2, 1.3, n_spins=3)
    electric = analytic_order_parameters(pe)
    magnetic = analytic_order_parameters(pm)
    for me, mm in zip(electric, magnetic):
        # swap of couplings maps (alpha, beta) -> (i alpha, i beta)
        assert mm.beta == pytest.approx(1j * me.beta, abs=1e-15)
        assert mm.alpha == pytest.approx(1j * me.alpha, abs=1e-15)
        assert mm.alpha.imag * mm.beta.imag < 0.0


def test_em_valley_point_and_u1_invariance():
    p = ModelParams(1.0, 1.0, 1.0, 1.0, n_spins=5)
    e0 = None
    for theta in np.linspace(0.0, 2.0 * math.pi, 17):
        m = em_valley_point(p, float(theta))
        assert abs(m.beta_scaled) == pytest.approx(BETA_AT_1, abs=1e-15)
        e = ground_energy(m.alpha, m.beta, p) / p.n_spins
        if e0 is None:
            e0 = e
        assert e == pytest.approx(e0, abs=1e-14)
    assert e0 == pytest.approx(ENERGY_AT_1, abs=1e-14)


def test_em_valley_point_rejected_off_the_line():
    with pytest.raises(ValueError):
        em_valley_point(ModelParams(1.0, 1.0, 1.0, 0.2), 0.3)


def test_normal_phase_minimum_is_origin():
    (m,) = analytic_order_parameters(ModelParams(1.0, 1.0, 0.1, 0.2))
    assert m.alpha == 0j and m.beta == 0j


# --- numerical minimizer ------------------------------------------------------


def test_minimizer_matches_closed_form_electric():
    p = ModelParams(1.0, 1.0, 1.0, 0.2)
    found = minimize_numerically(p)
    assert len(found) == 2
    betas = sorted(m.beta.real for m in found)
    assert betas[0] == pytest.approx(-BETA_AT_1, abs=1e-9)
    assert betas[1] == pytest.approx(+BETA_AT_1, abs=1e-9)
    for m in found:
        assert m.phase is Phase.ELECTRIC
        assert m.beta.imag == pytest.approx(0.0, abs=1e-9)
        assert m.alpha.real * m.beta.real < 0.0
        assert reduced_energy(m.beta, p) == pytest.approx(ENERGY_AT_1, abs=1e-12)


def test_minimizer_normal_phase():
    found = minimize_numerically(ModelParams(1.0, 1.0, 0.2, 0.3))
    assert len(found) == 1
    assert abs(found[0].beta) < 1e-9


def test_minimizer_samples_em_ring():
    p = ModelParams(1.0, 1.0, 1.0, 1.0)
    found = minimize_numerically(p)
    assert len(found) >= 4  # several distinct valley members, not one point
    for m in found:
        assert m.phase is Phase.EM
        assert m.theta is not None
        assert abs(m.beta_scaled) == pytest.approx(BETA_AT_1, abs=1e-9)
    wrapped = [m.theta % (2.0 * math.pi) for m in found]
    assert wrapped == sorted(wrapped)


def test_minimizer_respects_n_spins_scaling():
    p = ModelParams(1.0, 1.0, 1.5, 0.2, n_spins=16)
    found = minimize_numerically(p)
    mu = 1.0 / 9.0
    want = math.sqrt(16 * (1.0 - mu) / 2.0)
    assert {round(m.beta.real, 9) for m in found} == {
        round(-want, 9),
        round(want, 9),
    }


def test_valley_flatness_on_and_off_diagonal():
    spread_on = np.ptp(valley_energies(ModelParams(1.0, 1.0, 1.0, 1.0), n_theta=90))
    assert spread_on < 1e-12
    # off the diagonal every ray drains into one of the two global minima
    e_off = valley_energies(ModelParams(1.0, 1.0, 1.0, 0.6), n_theta=90)
    assert np.allclose(e_off, ENERGY_AT_1, atol=1e-12)


# --- landscape grids ----------------------------------------------------------


def test_landscape_grid_contents():
    p = ModelParams(1.0, 1.0, 1.0, 0.2)
    grid = landscape(p, GridSpec(n_re=81, n_im=81))
    assert grid.energy.shape == (81, 81)
    assert grid.valid[0, 0] == False  # corner lies outside the disk
    assert math.isnan(grid.energy[0, 0])
    # minimum cells sit on the real axis near +-BETA_AT_1
    cells = grid.minimum_cells(tol=1e-6)
    assert len(cells) == 2
    for i, j in cells:
        assert abs(abs(grid.re_axis[i]) - BETA_AT_1) < 0.02
        assert abs(grid.im_axis[j]) < 0.02
    assert np.nanmin(grid.energy) == pytest.approx(ENERGY_AT_1, abs=1e-3)


def test_landscape_em_ring_degeneracy():
    grid = landscape(ModelParams(1.0, 1.0, 1.0, 1.0), GridSpec(n_re=101, n_im=101))
    cells = grid.minimum_cells(tol=1e-4)
    radii = [math.hypot(grid.re_axis[i], grid.im_axis[j]) for i, j in cells]
    assert len(cells) >= 8
    for r in radii:
        assert r == pytest.approx(BETA_AT_1, abs=0.02)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_re=1)
    with pytest.raises(ValueError):
        GridSpec(re_range=(0.5, -0.5))


# --- transition order ----------------------------------------------------------


def test_second_order_across_critical_line():
    path = CouplingPath((0.3, 0.2), (0.8, 0.2))
    rep = transition_order(path, ModelParams(1.0, 1.0, 0.3, 0.2))
    assert rep.order == "second"
    assert rep.phases == (Phase.NORMAL, Phase.ELECTRIC)
    assert rep.crossing[0] == pytest.approx(0.5, abs=1e-9)
    assert rep.crossing[1] == 0.2
    assert rep.first_margin < 1.0
    assert rep.second_margin > 10.0


def test_first_order_across_diagonal():
    path = CouplingPath((1.2, 0.8), (0.8, 1.2))
    rep = transition_order(path, ModelParams(1.0, 1.0, 1.2, 0.8))
    assert rep.order == "first"
    assert rep.phases == (Phase.ELECTRIC, Phase.MAGNETIC)
    cx, cy = rep.crossing
    assert cx == pytest.approx(1.0, abs=1e-8)
    assert cy == pytest.approx(1.0, abs=1e-8)
    assert rep.first_margin > 10.0


def test_no_transition_inside_one_phase():
    path = CouplingPath((0.1, 0.1), (0.3, 0.2))
    rep = transition_order(path, ModelParams(1.0, 1.0, 0.1, 0.1))
    assert rep.order == "none"
    assert rep.crossing is None
    assert rep.phases is None


def test_path_validation():
    with pytest.raises(ValueError):
        CouplingPath((0.4, 0.4), (0.4, 0.4))
    with pytest.raises(ValueError):
        CouplingPath((-0.1, 0.4), (0.5, 0.4))
    p = CouplingPath((0.0, 0.0), (3.0, 4.0))
    assert p.length() == 5.0
    assert p.point(0.5) == (1.5, 2.0)


def test_duality_of_the_energy_density():
    rng = np.random.default_rng(5)
    for _ in range(40):
        we, wm = rng.uniform(0.0, 2.0, 2)
        a = minimum_energy_per_spin(ModelParams(1.0, 1.0, we, wm))
        b = minimum_energy_per_spin(ModelParams(1.0, 1.0, wm, we))
        assert a == b
