"""Batch evaluation over coupling-space grids, with reproducible artifacts.

A sweep takes a validated SweepSpec, walks the (omega_E, omega_M) grid in a
fixed row-major order, computes the requested per-point tasks and writes

    results.csv      one row per grid point, floats at 17 significant digits
    manifest.jsonl   run metadata, the canonical spec and its hash, and the
                     numerical tolerances in force

Rows are computed possibly in parallel but always written in grid order by a
single writer, so two runs of the same spec produce byte-identical data
files; the only field that may differ between runs is the manifest creation
timestamp.  Figure reproduction and the self-check oracle reuse the same
writers.
"""

from __future__ import annotations

import cmath
import csv
import hashlib
import json
import math
import multiprocessing
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import exact, meanfield, spectrum
from .params import ModelParams, Phase
from .version import VERSION

#: environment variable consulted when no worker count is passed explicitly
WORKERS_ENV = "DICKE2Q_WORKERS"

TASKS = ("phase", "order_params", "spectrum", "derivatives", "exact_diag", "landscape")

COLUMNS = (
    "omega_E",
    "omega_M",
    "phase",
    "alpha_abs_scaled",
    "beta_abs_scaled",
    "beta_arg",
    "energy_per_spin",
    "eps_minus",
    "eps_plus",
    "flags",
    "dE_domega_E",
    "dE_domega_M",
    "d2E_domega_E2",
    "d2E_domega_M2",
    "ed_energy_per_spin",
    "ed_gap",
    "landscape_file",
)

FIGURES = (
    "symmetry_diagram",
    "phase_diagram",
    "landscape_a",
    "landscape_b",
    "landscape_c",
    "landscape_d",
    "derivatives",
    "polariton_lower",
    "polariton_upper",
)

#: panel parameter sets (omega_E, omega_M) for the landscape figures
_LANDSCAPE_POINTS = {
    "landscape_a": (0.1, 0.3),
    "landscape_b": (1.0, 1.0),
    "landscape_c": (1.0, 1.5),
    "landscape_d": (1.5, 1.0),
}


class SweepValidationError(ValueError):
    """The sweep specification is not runnable as given."""


@dataclass(frozen=True)
class SweepSpec:
    """Grid, model constants and task list for one batch run.

    omega_e_axis / omega_m_axis are (start, stop, steps) triples expanded
    with linspace; steps = 1 collapses an axis to its start value.  The
    fock_cutoff applies to the exact_diag task only and defaults to
    4 * n_spins; landscape_points sets the square grid edge for the
    landscape task.
    """

    omega_e_axis: Tuple[float, float, int]
    omega_m_axis: Tuple[float, float, int]
    tasks: Tuple[str, ...]
    omega: float = 1.0
    omega0: float = 1.0
    n_spins: int = 1
    tol_sym: float = meanfield.SYMMETRY_TOL
    gapless_tol: float = spectrum.GAPLESS_TOL
    derivative_step: float = 1e-3
    fock_cutoff: Optional[int] = None
    landscape_points: int = 201

    def __post_init__(self):
        problems = []
        for name, axis in (("omega_e_axis", self.omega_e_axis), ("omega_m_axis", self.omega_m_axis)):
            ok = (
                len(axis) == 3
                and axis[2] == int(axis[2])
                and axis[2] >= 1
                and (axis[0] < axis[1] or (axis[0] == axis[1] and axis[2] == 1))
                and axis[0] >= 0.0
            )
            if not ok:
                problems.append(f"{name} must be (start, stop, steps>=1) with 0 <= start <= stop, got {axis}")
        if not self.tasks:
            problems.append("tasks list is empty")
        unknown = [t for t in self.tasks if t not in TASKS]
        if unknown:
            problems.append(f"unknown tasks {unknown}; valid tasks are {list(TASKS)}")
        if len(set(self.tasks)) != len(self.tasks):
            problems.append(f"duplicate tasks in {list(self.tasks)}")
        if self.omega <= 0.0 or self.omega0 <= 0.0:
            problems.append(f"omega and omega0 must be positive, got {self.omega}, {self.omega0}")
        if self.n_spins < 1 or self.n_spins != int(self.n_spins):
            problems.append(f"n_spins must be a positive integer, got {self.n_spins}")
        if self.tol_sym <= 0.0 or self.gapless_tol <= 0.0 or self.derivative_step <= 0.0:
            problems.append("tolerances and the derivative step must be positive")
        if self.fock_cutoff is not None and self.fock_cutoff < 1:
            problems.append(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")
        if self.landscape_points < 2:
            problems.append(f"landscape_points must be >= 2, got {self.landscape_points}")
        if problems:
            raise SweepValidationError("; ".join(problems))

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        known = {
            "omega_e_axis",
            "omega_m_axis",
            "tasks",
            "omega",
            "omega0",
            "n_spins",
            "tol_sym",
            "gapless_tol",
            "derivative_step",
            "fock_cutoff",
            "landscape_points",
        }
        unknown = set(data) - known
        if unknown:
            raise SweepValidationError(f"unknown spec fields: {sorted(unknown)}")
        if "omega_e_axis" not in data or "omega_m_axis" not in data or "tasks" not in data:
            raise SweepValidationError("spec requires omega_e_axis, omega_m_axis and tasks")
        coerced = dict(data)
        for axis in ("omega_e_axis", "omega_m_axis"):
            seq = coerced[axis]
            if not isinstance(seq, (list, tuple)) or len(seq) != 3:
                raise SweepValidationError(f"{axis} must be a (start, stop, steps) triple, got {seq}")
            coerced[axis] = (float(seq[0]), float(seq[1]), int(seq[2]))
        coerced["tasks"] = tuple(coerced["tasks"])
        return cls(**coerced)

    def canonical_dict(self) -> dict:
        """Physics content of the spec (no execution details), for hashing."""
        return {
            "omega_e_axis": list(self.omega_e_axis),
            "omega_m_axis": list(self.omega_m_axis),
            "tasks": list(self.tasks),
            "omega": self.omega,
            "omega0": self.omega0,
            "n_spins": self.n_spins,
            "tol_sym": self.tol_sym,
            "gapless_tol": self.gapless_tol,
            "derivative_step": self.derivative_step,
            "fock_cutoff": self.fock_cutoff,
            "landscape_points": self.landscape_points,
        }

    def axis_values(self) -> Tuple[np.ndarray, np.ndarray]:
        def expand(axis):
            start, stop, steps = axis
            return np.linspace(start, stop, int(steps))

        return expand(self.omega_e_axis), expand(self.omega_m_axis)

    @property
    def n_points(self) -> int:
        return int(self.omega_e_axis[2]) * int(self.omega_m_axis[2])


def spec_hash(spec_dict: dict) -> str:
    blob = json.dumps(spec_dict, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit argument, else the DICKE2Q_WORKERS variable, else 1."""
    if workers is None:
        raw = os.environ.get(WORKERS_ENV)
        if raw is None:
            return 1
        try:
            workers = int(raw)
        except ValueError as exc:
            raise SweepValidationError(f"{WORKERS_ENV}={raw!r} is not an integer") from exc
    if workers < 1:
        raise SweepValidationError(f"worker count must be >= 1, got {workers}")
    return workers


# ---------------------------------------------------------------------------
# per-point computation


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _derivatives(spec: SweepSpec, we: float, wm: float) -> dict:
    """Central differences of the closed-form energy density, one coupling
    at a time; one-sided at the omega_X = 0 domain edge."""
    h = spec.derivative_step * spec.omega

    def density(e, m):
        p = ModelParams(spec.omega, spec.omega0, e, m, spec.n_spins)
        return meanfield.minimum_energy_per_spin(p, spec.tol_sym)

    out = {}
    for key1, key2, here, other, along_e in (
        ("dE_domega_E", "d2E_domega_E2", we, wm, True),
        ("dE_domega_M", "d2E_domega_M2", wm, we, False),
    ):
        def f(x):
            return density(x, other) if along_e else density(other, x)

        if here - h >= 0.0:
            out[key1] = (f(here + h) - f(here - h)) / (2.0 * h)
            out[key2] = (f(here + h) - 2.0 * f(here) + f(here - h)) / (h * h)
        else:
            out[key1] = (f(here + h) - f(here)) / h
            out[key2] = (f(here + 2.0 * h) - 2.0 * f(here + h) + f(here)) / (h * h)
    return out


def _point_row(payload) -> dict:
    spec, index, we, wm, out_dir = payload
    params = ModelParams(spec.omega, spec.omega0, we, wm, spec.n_spins)
    row = dict.fromkeys(COLUMNS)
    row["omega_E"] = we
    row["omega_M"] = wm
    if "phase" in spec.tasks:
        row["phase"] = str(meanfield.classify_phase(params, spec.tol_sym))
    if "order_params" in spec.tasks:
        rep = meanfield.analytic_order_parameters(params, spec.tol_sym)[0]
        row["alpha_abs_scaled"] = abs(rep.alpha_scaled)
        row["beta_abs_scaled"] = abs(rep.beta_scaled)
        row["beta_arg"] = cmath.phase(rep.beta)
        row["energy_per_spin"] = meanfield.minimum_energy_per_spin(params, spec.tol_sym)
    if "spectrum" in spec.tasks:
        spec_point, flags = spectrum.mode_scan([params], spec.gapless_tol, spec.tol_sym)[0]
        row["eps_minus"] = spec_point.eps_minus
        row["eps_plus"] = spec_point.eps_plus
        tokens = [
            name
            for name in ("amplitude", "critical", "goldstone")
            if getattr(flags, name)
        ]
        row["flags"] = ";".join(tokens) if tokens else "none"
    if "derivatives" in spec.tasks:
        row.update(_derivatives(spec, we, wm))
    if "exact_diag" in spec.tasks:
        cutoff = spec.fock_cutoff if spec.fock_cutoff else 4 * spec.n_spins
        ham = exact.build_hamiltonian(params, exact.SpinBosonBasis(spec.n_spins, cutoff))
        res = exact.ground_spectrum(ham)
        row["ed_energy_per_spin"] = res.e0_per_spin
        row["ed_gap"] = res.gap
    if "landscape" in spec.tasks:
        grid = meanfield.GridSpec(spec.landscape_points, spec.landscape_points)
        surf = meanfield.landscape(params, grid)
        rel = f"landscapes/p{index:06d}.npy"
        np.save(Path(out_dir) / rel, surf.energy)
        row["landscape_file"] = rel
    return row


# ---------------------------------------------------------------------------
# writers


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in columns])
            count += 1
    return count


def _tolerances() -> dict:
    return {
        "tol_sym": meanfield.SYMMETRY_TOL,
        "grad_tol": meanfield.GRAD_TOL,
        "dedup_tol": meanfield.DEDUP_TOL,
        "gapless_tol": spectrum.GAPLESS_TOL,
        "degeneracy_tol": exact.DEGENERACY_TOL,
        "residual_tol": exact.RESIDUAL_TOL,
    }


def _write_manifest(path: Path, spec_dict: dict, n_points: int, columns: Sequence[str], kind: str, extra: Optional[dict] = None) -> None:
    run = {
        "record": "run",
        "tool": "dicke2q",
        "version": VERSION,
        "kind": kind,
        "spec_sha256": spec_hash(spec_dict),
        "n_points": n_points,
        "columns": list(columns),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        run.update(extra)
    lines = [
        run,
        {"record": "spec", "spec": spec_dict},
        {"record": "tolerances", **_tolerances()},
    ]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for line in lines:
            handle.write(json.dumps(line, sort_keys=True) + "\n")


@dataclass(frozen=True)
class SweepResult:
    csv_path: Path
    manifest_path: Path
    n_points: int
    columns: Tuple[str, ...]


def run_sweep(
    spec: SweepSpec,
    out_dir,
    workers: Optional[int] = None,
    csv_name: str = "results.csv",
) -> SweepResult:
    """Execute the sweep and write results + manifest into out_dir.

    The grid is walked with omega_E as the outer loop and omega_M as the
    inner one; that order defines the row order of the CSV regardless of the
    worker count.
    """
    workers = resolve_workers(workers)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if "landscape" in spec.tasks:
        (out / "landscapes").mkdir(exist_ok=True)
    e_values, m_values = spec.axis_values()
    payloads = [
        (spec, i * len(m_values) + j, float(we), float(wm), str(out))
        for i, we in enumerate(e_values)
        for j, wm in enumerate(m_values)
    ]
    if workers > 1 and len(payloads) > 1:
        chunk = max(1, len(payloads) // (8 * workers))
        with multiprocessing.Pool(workers) as pool:
            rows = pool.map(_point_row, payloads, chunksize=chunk)
    else:
        rows = [_point_row(p) for p in payloads]
    csv_path = out / csv_name
    n = _write_csv(csv_path, COLUMNS, rows)
    manifest_path = out / "manifest.jsonl"
    _write_manifest(manifest_path, spec.canonical_dict(), n, COLUMNS, kind="sweep")
    return SweepResult(csv_path, manifest_path, n, COLUMNS)


# ---------------------------------------------------------------------------
# figure reproduction


def _figure_symmetry_diagram(out: Path, steps: int, workers: int) -> Path:
    columns = ("omega_E", "omega_M", "hamiltonian_symmetry", "broken_symmetry", "phase")
    axis = np.linspace(0.0, 2.0, steps)
    broken = {
        Phase.NORMAL: "none",
        Phase.ELECTRIC: "T_E",
        Phase.MAGNETIC: "T_M",
        Phase.EM: "U1",
    }
    rows = []
    for we in axis:
        for wm in axis:
            p = ModelParams(1.0, 1.0, float(we), float(wm))
            ham_sym = "U1" if abs(we - wm) <= meanfield.SYMMETRY_TOL else "Z2_parity"
            phase = meanfield.classify_phase(p)
            rows.append(
                {
                    "omega_E": float(we),
                    "omega_M": float(wm),
                    "hamiltonian_symmetry": ham_sym,
                    "broken_symmetry": broken[phase],
                    "phase": str(phase),
                }
            )
    path = out / "symmetry_diagram.csv"
    n = _write_csv(path, columns, rows)
    _write_manifest(
        out / "manifest.jsonl",
        {"figure": "symmetry_diagram", "steps": steps, "range": [0.0, 2.0]},
        n,
        columns,
        kind="figure",
    )
    return path


def _figure_phase_diagram(out: Path, steps: int, workers: int) -> Path:
    spec = SweepSpec(
        omega_e_axis=(0.0, 2.0, steps),
        omega_m_axis=(0.0, 2.0, steps),
        tasks=("phase", "order_params", "spectrum"),
    )
    return run_sweep(spec, out, workers=workers, csv_name="phase_diagram.csv").csv_path


def _figure_landscape(name: str):
    def build(out: Path, steps: int, workers: int) -> Path:
        we, wm = _LANDSCAPE_POINTS[name]
        params = ModelParams(1.0, 1.0, we, wm)
        grid = meanfield.GridSpec(n_re=steps, n_im=steps)
        surf = meanfield.landscape(params, grid)
        columns = ("re_beta_scaled", "im_beta_scaled", "energy_per_spin", "valid")
        rows = []
        for i, u in enumerate(surf.re_axis):
            for j, v in enumerate(surf.im_axis):
                e = surf.energy[i, j]
                rows.append(
                    {
                        "re_beta_scaled": float(u),
                        "im_beta_scaled": float(v),
                        "energy_per_spin": None if math.isnan(e) else float(e),
                        "valid": "true" if surf.valid[i, j] else "false",
                    }
                )
        path = out / f"{name}.csv"
        n = _write_csv(path, columns, rows)
        _write_manifest(
            out / "manifest.jsonl",
            {"figure": name, "omega_E": we, "omega_M": wm, "steps": steps},
            n,
            columns,
            kind="figure",
        )
        return path

    return build


def _figure_derivatives(out: Path, steps: int, workers: int) -> Path:
    """Energy density and its derivatives along two scans: across the
    normal/Electric boundary, and across the first-order diagonal."""
    columns = (
        "path",
        "omega_E",
        "omega_M",
        "energy_per_spin",
        "dE_domega_E",
        "d2E_domega_E2",
    )
    scans = (
        ("across_critical", np.linspace(0.1, 0.9, steps), 0.2),
        ("across_diagonal", np.linspace(0.6, 1.4, steps), 1.0),
    )
    h = 1e-3
    rows = []
    for label, axis, wm in scans:
        for we in axis:
            def f(x):
                return meanfield.minimum_energy_per_spin(ModelParams(1.0, 1.0, float(x), wm))

            rows.append(
                {
                    "path": label,
                    "omega_E": float(we),
                    "omega_M": wm,
                    "energy_per_spin": f(we),
                    "dE_domega_E": (f(we + h) - f(we - h)) / (2.0 * h),
                    "d2E_domega_E2": (f(we + h) - 2.0 * f(we) + f(we - h)) / (h * h),
                }
            )
    path = out / "derivatives.csv"
    n = _write_csv(path, columns, rows)
    _write_manifest(
        out / "manifest.jsonl",
        {"figure": "derivatives", "steps": steps, "fd_step": h},
        n,
        columns,
        kind="figure",
    )
    return path


def _figure_polariton(which: str):
    def build(out: Path, steps: int, workers: int) -> Path:
        columns = ("omega_E", "omega_M", "eps", "flags")
        axis = np.linspace(0.0, 2.0, steps)
        rows = []
        for we in axis:
            points = [ModelParams(1.0, 1.0, float(we), float(wm)) for wm in axis]
            for (spec_point, flags), p in zip(spectrum.mode_scan(points), points):
                tokens = [
                    name
                    for name in ("amplitude", "critical", "goldstone")
                    if getattr(flags, name)
                ]
                rows.append(
                    {
                        "omega_E": p.omega_E,
                        "omega_M": p.omega_M,
                        "eps": spec_point.eps_minus if which == "lower" else spec_point.eps_plus,
                        "flags": ";".join(tokens) if tokens else "none",
                    }
                )
        path = out / f"polariton_{which}.csv"
        n = _write_csv(path, columns, rows)
        _write_manifest(
            out / "manifest.jsonl",
            {"figure": f"polariton_{which}", "steps": steps, "range": [0.0, 2.0]},
            n,
            columns,
            kind="figure",
        )
        return path

    return build


_FIGURE_BUILDERS = {
    "symmetry_diagram": (_figure_symmetry_diagram, 101),
    "phase_diagram": (_figure_phase_diagram, 101),
    "landscape_a": (_figure_landscape("landscape_a"), 201),
    "landscape_b": (_figure_landscape("landscape_b"), 201),
    "landscape_c": (_figure_landscape("landscape_c"), 201),
    "landscape_d": (_figure_landscape("landscape_d"), 201),
    "derivatives": (_figure_derivatives, 401),
    "polariton_lower": (_figure_polariton("lower"), 101),
    "polariton_upper": (_figure_polariton("upper"), 101),
}


def reproduce_figure(
    name: str,
    out_dir,
    steps: Optional[int] = None,
    workers: Optional[int] = None,
) -> Path:
    """Regenerate the data behind one named figure into out_dir.

    steps overrides the default sampling density (useful to keep smoke tests
    quick); the produced CSV and manifest follow the same conventions as
    run_sweep.
    """
    if name not in _FIGURE_BUILDERS:
        raise SweepValidationError(
            f"unknown figure {name!r}; available: {', '.join(FIGURES)}"
        )
    builder, default_steps = _FIGURE_BUILDERS[name]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return builder(out, steps or default_steps, resolve_workers(workers))


# ---------------------------------------------------------------------------
# self-check oracle


#: representative points (omega_E, omega_M) at omega = omega0 = 1
DEFAULT_ORACLE_POINTS = ((0.2, 0.3), (1.0, 0.2), (1.0, 1.0))

_ORACLE_COLUMNS = (
    "omega_E",
    "omega_M",
    "check",
    "observed",
    "tolerance",
    "verdict",
)


def oracle_report(
    out_dir=None,
    points: Sequence[Tuple[float, float]] = DEFAULT_ORACLE_POINTS,
    n_list: Sequence[int] = (4, 8, 12),
    energy_tol: float = 1e-9,
    coherence_tol: float = 1e-6,
) -> List[dict]:
    """Cross-validate the three independent routes to the ground state.

    For each point: closed forms against the numerical minimizer (energy and
    order-parameter positions), then the finite-size trend of the exact
    ground energy toward the mean-field value.  Returns one row per check;
    writes oracle.csv + manifest when out_dir is given.
    """
    sizes = list(n_list)
    if not sizes or sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise SweepValidationError(f"n_list must be strictly increasing, got {n_list}")
    rows = []
    for we, wm in points:
        params = ModelParams(1.0, 1.0, we, wm)
        analytic = meanfield.analytic_order_parameters(params)
        numeric = meanfield.minimize_numerically(params)
        e_ref = meanfield.minimum_energy_per_spin(params)
        e_obs = max(
            abs(meanfield.reduced_energy(m.beta, params) / params.n_spins - e_ref)
            for m in numeric
        )
        rows.append(
            {
                "omega_E": we,
                "omega_M": wm,
                "check": "energy_analytic_vs_numerical",
                "observed": e_obs,
                "tolerance": energy_tol,
                "verdict": "ok" if e_obs <= energy_tol else "FAIL",
            }
        )
        phase = meanfield.classify_phase(params)
        if phase is Phase.EM:
            radius = abs(analytic[0].beta_scaled)
            d_obs = max(abs(abs(m.beta_scaled) - radius) for m in numeric)
        else:
            d_obs = max(
                min(abs(m.beta_scaled - a.beta_scaled) for a in analytic)
                for m in numeric
            )
        rows.append(
            {
                "omega_E": we,
                "omega_M": wm,
                "check": "order_parameters_analytic_vs_numerical",
                "observed": d_obs,
                "tolerance": coherence_tol,
                "verdict": "ok" if d_obs <= coherence_tol else "FAIL",
            }
        )
        report = exact.meanfield_convergence(params, sizes)
        trend = report.rows[-1].deviation - report.rows[0].deviation
        ok = report.deviation_monotone and report.energy_sign_ok
        rows.append(
            {
                "omega_E": we,
                "omega_M": wm,
                "check": "ed_deviation_trend",
                "observed": trend,
                "tolerance": 0.0,
                "verdict": "ok" if ok else "FAIL",
            }
        )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        n = _write_csv(out / "oracle.csv", _ORACLE_COLUMNS, rows)
        _write_manifest(
            out / "manifest.jsonl",
            {"points": [list(p) for p in points], "n_list": sizes},
            n,
            _ORACLE_COLUMNS,
            kind="oracle",
        )
    return rows
