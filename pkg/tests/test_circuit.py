import json
import math

import pytest
from scipy.constants import e as E_CHARGE, h as PLANCK

from dicke2q import (
    CircuitParams,
    ModelParams,
    UnsupportedRegimeError,
    effective_model,
    lumped_energies,
    model_from_circuit,
    report_document,
)

# a parameter set squarely inside the lumped-reduction regime
GOOD = dict(
    c_r=1e-12, c_g=5e-15, c_j=5e-15, l_r=1e-9, l_1=5e-12, l_2=5e-12, e_j=1e-28
)


def circuit(**overrides):
    return CircuitParams(**{**GOOD, **overrides})


def test_field_validation():
    with pytest.raises(ValueError):
        circuit(c_r=0.0)
    with pytest.raises(ValueError):
        circuit(l_2=-1e-12)
    with pytest.raises(ValueError):
        circuit(e_j=-1e-30)
    assert circuit(e_j=0.0).phi_ext == math.pi


def test_from_dict_schema():
    assert CircuitParams.from_dict(dict(GOOD)) == circuit()
    with pytest.raises(ValueError, match="unknown"):
        CircuitParams.from_dict({**GOOD, "c_x": 1e-15})
    missing = dict(GOOD)
    del missing["l_r"]
    with pytest.raises(ValueError, match="missing"):
        CircuitParams.from_dict(missing)


def test_from_file(tmp_path):
    path = tmp_path / "cell.json"
    path.write_text(json.dumps(GOOD))
    assert CircuitParams.from_file(path) == circuit()
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2, 3]")
    with pytest.raises(ValueError, match="JSON object"):
        CircuitParams.from_file(bad)


def test_charging_energy_value():
    le = lumped_energies(circuit())
    assert le.e_cr == pytest.approx(2.0 * E_CHARGE**2 / GOOD["c_r"], rel=1e-15)
    phi0 = PLANCK / (2.0 * E_CHARGE)
    assert le.e_lr == pytest.approx(phi0**2 / (2.0 * GOOD["l_r"]), rel=1e-15)


def test_coupling_identities():
    # with c_g = c_j the charge coupling equals the resonator charging energy,
    # and with l_1 = l_2 the flux coupling equals the inductive energy
    le = lumped_energies(circuit())
    assert le.g_q == pytest.approx(le.e_cr, rel=1e-12)
    assert le.g_l == pytest.approx(le.e_lr, rel=1e-12)
    # identities break when the symmetry is lifted
    le2 = lumped_energies(circuit(c_g=2e-15, l_1=2e-12))
    assert abs(le2.g_q - le2.e_cr) > 0.1 * le2.e_cr
    assert abs(le2.g_l - le2.e_lr) > 0.1 * le2.e_lr


def test_homogeneity_scalings():
    base = lumped_energies(circuit())
    lam = 3.7
    caps = lumped_energies(circuit(c_r=GOOD["c_r"] * lam, c_g=GOOD["c_g"] * lam, c_j=GOOD["c_j"] * lam))
    assert caps.e_cr * lam == pytest.approx(base.e_cr, rel=1e-12)
    assert caps.e_cj * lam == pytest.approx(base.e_cj, rel=1e-12)
    assert caps.g_q * lam == pytest.approx(base.g_q, rel=1e-12)
    inds = lumped_energies(circuit(l_r=GOOD["l_r"] * lam, l_1=GOOD["l_1"] * lam, l_2=GOOD["l_2"] * lam))
    assert inds.e_lr * lam == pytest.approx(base.e_lr, rel=1e-12)
    assert inds.g_l * lam == pytest.approx(base.g_l, rel=1e-12)
    # the inductive-ratio energy is scale-free in the inductances
    assert inds.e_lj == pytest.approx(base.e_lj, rel=1e-12)


def test_validity_flags_and_gate():
    le = lumped_energies(circuit(l_1=1e-10))  # l_r only 10x l_1
    assert le.cap_ok and not le.ind_ok
    with pytest.raises(UnsupportedRegimeError, match="L_r"):
        effective_model(le, 1e-28)
    # the gate can be bypassed explicitly (smaller e_j keeps the junction
    # mode confined, since this geometry also shrinks E_LJ)
    eff = effective_model(le, 1e-30, check_validity=False)
    assert eff.omega_res > 0.0
    # or relaxed through the ratio
    le_easy = lumped_energies(circuit(l_1=1e-10), validity_ratio=5.0)
    assert le_easy.ind_ok


def test_sweet_spot_gate():
    le = lumped_energies(circuit())
    with pytest.raises(UnsupportedRegimeError, match="sweet spot"):
        effective_model(le, 1e-28, phi_ext=math.pi + 1e-3)


def test_overstrong_junction_gate():
    le = lumped_energies(circuit())
    with pytest.raises(UnsupportedRegimeError, match="not positive"):
        effective_model(le, e_j=1e-20)


def test_effective_frequencies():
    le = lumped_energies(circuit())
    eff = effective_model(le, GOOD["e_j"])
    hbar = PLANCK / (2.0 * math.pi)
    assert eff.omega_res == pytest.approx(math.sqrt(8.0 * le.e_cr * le.e_lr) / hbar, rel=1e-12)
    assert eff.omega_j == pytest.approx(
        math.sqrt(8.0 * le.e_cj * (le.e_lj - GOOD["e_j"] / 2.0)) / hbar, rel=1e-12
    )
    # kappa prefactors pass straight through to the couplings
    eff2 = effective_model(le, GOOD["e_j"], kappa_q=0.5, kappa_l=2.0)
    assert eff2.g_e == pytest.approx(0.5 * eff.g_e, rel=1e-15)
    assert eff2.g_m == pytest.approx(2.0 * eff.g_m, rel=1e-15)


def test_collective_coupling_scaling():
    m1 = model_from_circuit(circuit(), n_atoms=1)
    m9 = model_from_circuit(circuit(), n_atoms=9)
    assert isinstance(m1, ModelParams)
    assert m9.n_spins == 9
    assert m9.omega_E == pytest.approx(3.0 * m1.omega_E, rel=1e-15)
    assert m9.omega_M == pytest.approx(3.0 * m1.omega_M, rel=1e-15)
    assert m9.omega == m1.omega
    assert m9.omega0 == m1.omega0


def test_report_document():
    doc = report_document(circuit(), n_atoms=4)
    json.dumps(doc)  # must be serializable as-is
    assert set(doc) == {"inputs", "lumped", "effective", "model", "warnings"}
    assert doc["inputs"]["c_r"] == GOOD["c_r"]
    assert doc["lumped"]["e_cr"]["provenance"] == "printed-formula"
    assert doc["effective"]["omega_res"]["provenance"].startswith("convention:")
    assert doc["model"]["phase"] in ("Normal", "Electric", "Magnetic", "EM")
    assert any("E_LJ" in w for w in doc["warnings"])
