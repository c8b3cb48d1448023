"""Command-line harness: ``projrom {fom,pod,rom,compare,bench}``."""

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness, io
from .errors import ConfigError, RomError
from .pod import pod_energy_report
from .solvers import GaussNewtonSettings

log = logging.getLogger("projrom")

EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 2, 3, 4


def _problem_args(p):
    p.add_argument("--num-cells", type=int, default=1024)
    p.add_argument("--alpha", type=float, default=0.02)
    p.add_argument("--beta", type=float, default=0.02)
    p.add_argument("--gamma", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=5e-4)
    p.add_argument("--num-steps", type=int, default=4096)
    p.add_argument("--stepper", choices=harness.EXPLICIT + harness.IMPLICIT, default="rk4")
    p.add_argument("--jacobian", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--gn-reduction", type=float, default=1e-3, help="relative residual reduction")
    p.add_argument("--gn-abs-tol", type=float, default=0.0)
    p.add_argument("--gn-max-iters", type=int, default=50)


def _rom_args(p):
    p.add_argument("--method", choices=("galerkin", "lspg", "lspg-steady"), required=True)
    p.add_argument("--basis", type=Path, required=True)
    p.add_argument("--rom-size", type=int, help="use the leading modes of the basis only")
    p.add_argument("--weighting", default="identity", help="identity | diagonal | collocation[:f] | scaled-collocation[:f]")
    p.add_argument("--sample-fraction", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stencil-left", type=int, default=1)
    p.add_argument("--stencil-right", type=int, default=0)
    p.add_argument("--fom-final", type=Path, help="FOM final state, for error columns in the report")
    p.add_argument("--out-dir", type=Path, default=Path("."))


def build_parser():
    parser = argparse.ArgumentParser(prog="projrom", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fom", help="run the Burgers full-order model and store every state")
    _problem_args(p)
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("pod", help="POD basis from a snapshot file")
    p.add_argument("--snapshots", type=Path, required=True)
    p.add_argument("--rom-size", type=int, required=True)
    p.add_argument("--reference", choices=("initial", "zero"), default="initial",
                   help="centre on the first snapshot (initial condition) or not at all")
    p.add_argument("--rank-tol", type=float, default=1e-12,
                   help="relative singular-value cutoff; negative disables the rank check")
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("rom", help="run a Galerkin or LSPG ROM")
    _problem_args(p)
    _rom_args(p)

    p = sub.add_parser("compare", help="relative l2 / l-inf error of a ROM final state")
    p.add_argument("--fom", type=Path, required=True)
    p.add_argument("--rom", type=Path, required=True)

    p = sub.add_parser("bench", help="time-per-step over replica ROM runs")
    _problem_args(p)
    _rom_args(p)
    p.add_argument("--replicas", type=int, default=10)
    return parser


def _config(args, method="fom"):
    weighting = args.weighting if method != "fom" else "identity"
    if method != "fom" and args.sample_fraction is not None and ":" not in weighting:
        weighting = f"{weighting}:{args.sample_fraction}"
    return harness.RunConfig(
        num_cells=args.num_cells, alpha=args.alpha, beta=args.beta, gamma=args.gamma,
        method=method, stepper=args.stepper, dt=args.dt, num_steps=args.num_steps,
        rom_size=getattr(args, "rom_size", None) or 0, weighting=weighting,
        seed=getattr(args, "seed", 0),
        settings=GaussNewtonSettings(args.gn_reduction, args.gn_abs_tol, args.gn_max_iters),
        jacobian=args.jacobian,
        stencil=(getattr(args, "stencil_left", 1), getattr(args, "stencil_right", 0)),
    )


def _load_basis(args):
    basis = io.read_matrix(args.basis)
    if args.rom_size:
        if args.rom_size > basis.shape[1]:
            raise ConfigError(f"basis holds {basis.shape[1]} modes, {args.rom_size} requested")
        basis = basis[:, : args.rom_size]
    return basis


def cmd_fom(args):
    config = _config(args)
    run = harness.run_fom(config)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    io.write_matrix(args.out_dir / "snapshots.psnap", run.snapshots.values)
    io.write_matrix(args.out_dir / "final_state.psnap", run.final_state)
    print(f"fom: N={config.num_cells} steps={config.num_steps} columns={run.snapshots.values.shape[1]} "
          f"ms_per_iteration={run.wall_ms / config.num_steps:.4f}")


def cmd_pod(args):
    S = io.read_matrix(args.snapshots)
    x_ref = S[:, 0] if args.reference == "initial" else np.zeros(S.shape[0])
    rank_tol = None if args.rank_tol < 0 else args.rank_tol
    basis, s = harness.build_pod(S, x_ref, args.rom_size, rank_tol)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    io.write_matrix(args.out_dir / "basis.psnap", basis)
    with open(args.out_dir / "singular_values.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "singular_value", "retained_energy"])
        for i, sv in enumerate(s):
            writer.writerow([i, repr(float(sv)), repr(pod_energy_report(s, i + 1))])
    print(f"pod: p={args.rom_size} retained_energy={pod_energy_report(s, args.rom_size):.12f}")


def _fom_final(args):
    return io.read_vector(args.fom_final) if args.fom_final else None


def cmd_rom(args):
    config = _config(args, args.method)
    basis = _load_basis(args)
    run = harness.run_rom(config, basis)
    row = harness.report_row(config, run, _fom_final(args))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    io.write_matrix(args.out_dir / "reduced_trajectory.psnap", run.trajectory)
    io.write_matrix(args.out_dir / "final_state.psnap", run.final_state)
    if run.sample_indices is not None:
        io.write_indices(args.out_dir / "sample_indices.txt", run.sample_indices.indices)
    io.write_report(args.out_dir / "report.csv", [row])
    print(", ".join(f"{k}={row[k]}" for k in io.REPORT_COLUMNS))


def cmd_compare(args):
    rel_l2, rel_linf = harness.compare_states(io.read_vector(args.fom), io.read_vector(args.rom))
    print(f"rel_l2={rel_l2!r}, rel_linf={rel_linf!r}")


def cmd_bench(args):
    config = _config(args, args.method)
    row = harness.bench(config, _load_basis(args), args.replicas)
    fom_state = _fom_final(args)
    if fom_state is not None:
        run = harness.run_rom(config, _load_basis(args))
        row["rel_l2"], row["rel_linf"] = harness.compare_states(fom_state, run.final_state)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    io.write_report(args.out_dir / "bench.csv", [row])
    print(f"bench: N={row['N']} p={row['p']} z={row['z']} replicas={args.replicas} "
          f"ms_per_iteration={row['ms_per_iteration']:.4f}")


COMMANDS = {"fom": cmd_fom, "pod": cmd_pod, "rom": cmd_rom, "compare": cmd_compare, "bench": cmd_bench}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RomError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error[numerical]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, io.FormatError) as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
