"""Lumped-element circuit to model-parameter mapping.

A Josephson atom is coupled capacitively (through C_g) and inductively
(through a shared branch L_1, L_2) to one cell of a transmission-line
resonator (C_r, L_r per cell).  In the hierarchy C_r >> C_g, C_J and
L_r >> L_1, L_2 the cell reduces to lumped charging/inductive energies plus
one charge-type and one flux-type coupling, which map onto the two
quadrature couplings of the spin-boson model.

All inputs are SI (farads, henries, joules, radians) and the lumped energies
come out in joules.  The reduction formulas are implemented exactly as
printed in the source material for this model, including E_LJ whose growth
with L_r looks suspicious dimensionally; the report flags it so downstream
users know that number is taken on faith.  Frequencies and couplings derived
from the lumped energies depend on quantization conventions and carry
explicit convention provenance; the coupling prefactors kappa_q, kappa_l are
adjustable for that reason.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from scipy.constants import e as _E_CHARGE, h as _PLANCK, hbar as _HBAR

from .meanfield import classify_phase
from .params import ModelParams

#: the lumped reduction assumes C_r/C, L_r/L at least this large
VALIDITY_RATIO = 100.0
#: tolerance on the external flux sweet-spot condition phi_ext = pi
_PHI_TOL = 1e-9

_FLUX_QUANTUM = _PLANCK / (2.0 * _E_CHARGE)

_FIELDS = ("c_r", "c_g", "c_j", "l_r", "l_1", "l_2", "e_j", "phi_ext")


class UnsupportedRegimeError(ValueError):
    """The circuit sits outside the regime where the reduction is valid."""


@dataclass(frozen=True)
class CircuitParams:
    """One resonator cell plus its Josephson atom, SI units.

    c_r, l_r: per-cell resonator capacitance and inductance.
    c_g: coupling capacitance; c_j: junction capacitance.
    l_1: shared inductive branch; l_2: the atom-side return branch.
    e_j: Josephson energy (joules); phi_ext: external flux phase (radians).
    """

    c_r: float
    c_g: float
    c_j: float
    l_r: float
    l_1: float
    l_2: float
    e_j: float
    phi_ext: float = math.pi

    def __post_init__(self):
        for name in ("c_r", "c_g", "c_j", "l_r", "l_1", "l_2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.e_j < 0.0:
            raise ValueError(f"e_j must be non-negative, got {self.e_j}")

    @classmethod
    def from_dict(cls, data: dict) -> "CircuitParams":
        unknown = set(data) - set(_FIELDS)
        if unknown:
            raise ValueError(f"unknown circuit fields: {sorted(unknown)}")
        missing = set(_FIELDS[:-1]) - set(data)
        if missing:
            raise ValueError(f"missing circuit fields: {sorted(missing)}")
        return cls(**{key: float(value) for key, value in data.items()})

    @classmethod
    def from_file(cls, path) -> "CircuitParams":
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ValueError(f"circuit file {path} must hold a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class LumpedEnergies:
    """Reduced cell energies (joules) plus the regime-validity flags."""

    e_cr: float
    e_lr: float
    e_cj: float
    e_lj: float
    g_q: float
    g_l: float
    cap_ok: bool
    ind_ok: bool
    validity_ratio: float


def lumped_energies(circuit: CircuitParams, validity_ratio: float = VALIDITY_RATIO) -> LumpedEnergies:
    """Evaluate the printed reduction formulas; never raises on regime
    violations, it only flags them."""
    e2 = _E_CHARGE * _E_CHARGE
    phi02 = _FLUX_QUANTUM * _FLUX_QUANTUM
    e_cr = 2.0 * e2 / circuit.c_r
    e_lr = phi02 / (2.0 * circuit.l_r)
    e_cj = 2.0 * e2 / (circuit.c_g + circuit.c_j)
    e_lj = phi02 * (circuit.l_r + circuit.l_1) / (2.0 * (circuit.l_1 + circuit.l_2))
    g_q = 4.0 * e2 * circuit.c_g / (circuit.c_r * (circuit.c_g + circuit.c_j))
    g_l = phi02 * circuit.l_1 / (circuit.l_r * (circuit.l_1 + circuit.l_2))
    cap_ok = circuit.c_r >= validity_ratio * max(circuit.c_g, circuit.c_j)
    ind_ok = circuit.l_r >= validity_ratio * max(circuit.l_1, circuit.l_2)
    return LumpedEnergies(e_cr, e_lr, e_cj, e_lj, g_q, g_l, cap_ok, ind_ok, validity_ratio)


@dataclass(frozen=True)
class EffectiveParams:
    """Single-mode, two-level reduction of one cell, in angular frequencies.

    omega_res: resonator mode.  omega_j: Josephson atom splitting at the
    phi_ext = pi sweet spot, where the cosine flips sign and contributes
    -e_j/2 to the quadratic flux coefficient.  g_e, g_m: per-atom charge and
    flux couplings.
    """

    omega_res: float
    omega_j: float
    g_e: float
    g_m: float
    kappa_q: float
    kappa_l: float


def effective_model(
    lumped: LumpedEnergies,
    e_j: float,
    phi_ext: float = math.pi,
    kappa_q: float = 1.0,
    kappa_l: float = 1.0,
    check_validity: bool = True,
) -> EffectiveParams:
    """Effective frequencies and couplings from the lumped energies.

    Raises UnsupportedRegimeError away from the sweet spot, outside the
    lumped-reduction regime (unless check_validity is off), or when the
    junction term overwhelms the inductive confinement (omega_j^2 <= 0).
    """
    if abs(phi_ext - math.pi) > _PHI_TOL:
        raise UnsupportedRegimeError(
            f"phi_ext = {phi_ext} is not the sweet spot pi; the two-level "
            "reduction implemented here only holds there"
        )
    if check_validity and not (lumped.cap_ok and lumped.ind_ok):
        bad = []
        if not lumped.cap_ok:
            bad.append(f"C_r < {lumped.validity_ratio} * max(C_g, C_J)")
        if not lumped.ind_ok:
            bad.append(f"L_r < {lumped.validity_ratio} * max(L_1, L_2)")
        raise UnsupportedRegimeError(
            "lumped reduction invalid: " + " and ".join(bad)
        )
    stiffness = lumped.e_lj - e_j / 2.0
    if stiffness <= 0.0:
        raise UnsupportedRegimeError(
            f"E_LJ - E_J/2 = {stiffness} J is not positive; no confined "
            "Josephson mode at the sweet spot"
        )
    omega_res = math.sqrt(8.0 * lumped.e_cr * lumped.e_lr) / _HBAR
    omega_j = math.sqrt(8.0 * lumped.e_cj * stiffness) / _HBAR
    g_e = kappa_q * lumped.g_q / _HBAR
    g_m = kappa_l * lumped.g_l / _HBAR
    return EffectiveParams(omega_res, omega_j, g_e, g_m, kappa_q, kappa_l)


def model_from_circuit(
    circuit: CircuitParams,
    n_atoms: int,
    kappa_q: float = 1.0,
    kappa_l: float = 1.0,
    validity_ratio: float = VALIDITY_RATIO,
) -> ModelParams:
    """ModelParams for n_atoms identical cells.

    The collective coupling grows as sqrt(N) times the per-atom one, so the
    model couplings are omega_E = sqrt(N) g_e and omega_M = sqrt(N) g_m.
    """
    lumped = lumped_energies(circuit, validity_ratio)
    eff = effective_model(lumped, circuit.e_j, circuit.phi_ext, kappa_q, kappa_l)
    root = math.sqrt(n_atoms)
    return ModelParams(
        omega=eff.omega_res,
        omega0=eff.omega_j,
        omega_E=root * eff.g_e,
        omega_M=root * eff.g_m,
        n_spins=n_atoms,
    )


def report_document(
    circuit: CircuitParams,
    n_atoms: int = 1,
    kappa_q: float = 1.0,
    kappa_l: float = 1.0,
    validity_ratio: float = VALIDITY_RATIO,
) -> dict:
    """JSON-serializable account of the full circuit-to-phase pipeline.

    Each derived quantity carries a provenance tag: "printed-formula" for the
    lumped reduction taken directly from the source expressions,
    "convention" for quantities that additionally depend on quantization and
    normalization choices.
    """
    lumped = lumped_energies(circuit, validity_ratio)
    eff = effective_model(lumped, circuit.e_j, circuit.phi_ext, kappa_q, kappa_l)
    model = model_from_circuit(circuit, n_atoms, kappa_q, kappa_l, validity_ratio)
    phase = classify_phase(model)

    def printed(value):
        return {"value": value, "units": "J", "provenance": "printed-formula"}

    def convention(value, units, note):
        return {"value": value, "units": units, "provenance": f"convention: {note}"}

    warnings = [
        "E_LJ is evaluated exactly as printed and grows with l_r; treat its "
        "absolute scale with caution"
    ]
    return {
        "inputs": {name: getattr(circuit, name) for name in _FIELDS},
        "lumped": {
            "e_cr": printed(lumped.e_cr),
            "e_lr": printed(lumped.e_lr),
            "e_cj": printed(lumped.e_cj),
            "e_lj": printed(lumped.e_lj),
            "g_q": printed(lumped.g_q),
            "g_l": printed(lumped.g_l),
            "validity": {
                "cap_ok": lumped.cap_ok,
                "ind_ok": lumped.ind_ok,
                "ratio": lumped.validity_ratio,
            },
        },
        "effective": {
            "omega_res": convention(eff.omega_res, "rad/s", "sqrt(8 E_Cr E_Lr)/hbar"),
            "omega_j": convention(
                eff.omega_j, "rad/s", "sqrt(8 E_CJ (E_LJ - E_J/2))/hbar at phi_ext = pi"
            ),
            "g_e": convention(eff.g_e, "rad/s", f"kappa_q * G_Q / hbar, kappa_q = {kappa_q}"),
            "g_m": convention(eff.g_m, "rad/s", f"kappa_l * G_L / hbar, kappa_l = {kappa_l}"),
        },
        "model": {
            "omega": model.omega,
            "omega0": model.omega0,
            "omega_E": model.omega_E,
            "omega_M": model.omega_M,
            "n_spins": model.n_spins,
            "phase": str(phase),
        },
        "warnings": warnings,
    }
