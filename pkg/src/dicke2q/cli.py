"""Command-line front end.

Four subcommands: ``sweep`` runs a batch grid job from flags and/or a JSON
spec file, ``figure`` regenerates the data behind a named figure, ``oracle``
cross-validates the analytic, numerical and exact-diagonalization routes,
and ``circuit`` maps a lumped-element circuit description onto model
parameters.  Exit codes: 0 success, 1 validation or solver failure, 2 bad
command line (argparse).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circuit import CircuitParams, UnsupportedRegimeError, report_document
from .sweep import (
    FIGURES,
    TASKS,
    SweepSpec,
    SweepValidationError,
    oracle_report,
    reproduce_figure,
    run_sweep,
)
from .version import VERSION


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicke2q",
        description="Batch tools for the two-quadrature Dicke model.",
    )
    parser.add_argument("--version", action="version", version=f"dicke2q {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a coupling-space grid job")
    sw.add_argument("--spec", type=Path, help="JSON file with sweep spec fields; flags override it")
    sw.add_argument("--omega-e", nargs=3, metavar=("START", "STOP", "STEPS"), help="omega_E axis")
    sw.add_argument("--omega-m", nargs=3, metavar=("START", "STOP", "STEPS"), help="omega_M axis")
    sw.add_argument("--tasks", help="comma-separated subset of: " + ",".join(TASKS))
    sw.add_argument("--omega", type=float, help="boson frequency (default 1.0)")
    sw.add_argument("--omega0", type=float, help="two-level splitting (default 1.0)")
    sw.add_argument("--n-spins", type=int, help="system size (default 1)")
    sw.add_argument("--tol-sym", type=float, help="EM line half-width, units of omega")
    sw.add_argument("--gapless-tol", type=float, help="gapless threshold, units of omega")
    sw.add_argument("--derivative-step", type=float, help="finite-difference step, units of omega")
    sw.add_argument("--fock-cutoff", type=int, help="Fock cutoff for the exact_diag task")
    sw.add_argument("--landscape-points", type=int, help="grid edge for the landscape task")
    sw.add_argument("--workers", type=int, help="process count (default $DICKE2Q_WORKERS or 1)")
    sw.add_argument("--out", type=Path, required=True, help="output directory")

    fig = sub.add_parser("figure", help="regenerate the data behind a named figure")
    fig.add_argument("name", choices=FIGURES)
    fig.add_argument("--steps", type=int, help="override the sampling density")
    fig.add_argument("--workers", type=int)
    fig.add_argument("--out", type=Path, required=True, help="output directory")

    orc = sub.add_parser("oracle", help="cross-validate the independent solution routes")
    orc.add_argument(
        "--point",
        nargs=2,
        type=float,
        action="append",
        metavar=("OMEGA_E", "OMEGA_M"),
        help="coupling point to check (repeatable; defaults to three representatives)",
    )
    orc.add_argument("--n-list", default="4,8,12", help="comma-separated system sizes")
    orc.add_argument("--out", type=Path, help="also write oracle.csv + manifest here")

    circ = sub.add_parser("circuit", help="map a lumped-element circuit file to model parameters")
    circ.add_argument("file", type=Path, help="flat JSON with c_r,c_g,c_j,l_r,l_1,l_2,e_j[,phi_ext]")
    circ.add_argument("--n-atoms", type=int, default=1)
    circ.add_argument("--kappa-q", type=float, default=1.0, help="charge-coupling prefactor")
    circ.add_argument("--kappa-l", type=float, default=1.0, help="flux-coupling prefactor")
    circ.add_argument("--validity-ratio", type=float, default=100.0)
    circ.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    return parser


def _spec_from_args(args) -> SweepSpec:
    data = {}
    if args.spec is not None:
        with open(args.spec, "r", encoding="utf-8") as handle:
            loaded = json.load(handle)
        if not isinstance(loaded, dict):
            raise SweepValidationError(f"spec file {args.spec} must hold a JSON object")
        data.update(loaded)
    if args.omega_e is not None:
        data["omega_e_axis"] = [float(args.omega_e[0]), float(args.omega_e[1]), int(args.omega_e[2])]
    if args.omega_m is not None:
        data["omega_m_axis"] = [float(args.omega_m[0]), float(args.omega_m[1]), int(args.omega_m[2])]
    if args.tasks is not None:
        data["tasks"] = [t.strip() for t in args.tasks.split(",") if t.strip()]
    for flag, key in (
        ("omega", "omega"),
        ("omega0", "omega0"),
        ("n_spins", "n_spins"),
        ("tol_sym", "tol_sym"),
        ("gapless_tol", "gapless_tol"),
        ("derivative_step", "derivative_step"),
        ("fock_cutoff", "fock_cutoff"),
        ("landscape_points", "landscape_points"),
    ):
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    return SweepSpec.from_dict(data)


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    result = run_sweep(spec, args.out, workers=args.workers)
    print(f"wrote {result.csv_path} ({result.n_points} rows)")
    print(f"wrote {result.manifest_path}")
    return 0


def _cmd_figure(args) -> int:
    path = reproduce_figure(args.name, args.out, steps=args.steps, workers=args.workers)
    print(f"wrote {path}")
    return 0


def _cmd_oracle(args) -> int:
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError as exc:
        raise SweepValidationError(f"--n-list must be comma-separated integers: {exc}")
    kwargs = {"n_list": n_list}
    if args.point:
        kwargs["points"] = [tuple(p) for p in args.point]
    rows = oracle_report(out_dir=args.out, **kwargs)
    failures = 0
    for row in rows:
        print(
            f"{row['verdict']:4s} ({row['omega_E']}, {row['omega_M']}) "
            f"{row['check']}: observed={row['observed']:.3e} tolerance={row['tolerance']:.3e}"
        )
        failures += row["verdict"] != "ok"
    print(f"{len(rows) - failures}/{len(rows)} checks passed")
    return 1 if failures else 0


def _cmd_circuit(args) -> int:
    circuit = CircuitParams.from_file(args.file)
    report = report_document(
        circuit,
        n_atoms=args.n_atoms,
        kappa_q=args.kappa_q,
        kappa_l=args.kappa_l,
        validity_ratio=args.validity_ratio,
    )
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out is not None:
        args.out.write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "oracle": _cmd_oracle,
    "circuit": _cmd_circuit,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SweepValidationError, UnsupportedRegimeError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
