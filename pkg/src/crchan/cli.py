"""Command-line surface: structure tables, verification, noise simulation
and machine-readable exports.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 dimension
budget exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import run_verification
from .codec import make_code, simulate_noise
from .collective import build_collective_system
from .errors import (
    BadDimension,
    CrchanError,
    DegenerateAngle,
    DimensionBudgetExceeded,
    OutOfRange,
    UnknownBlock,
)
from .halves import format_half, parse_half
from .linalg import Tolerances
from .serialize import (
    SCHEMA_VERSION,
    write_basis_json,
    write_centrals_json,
    write_structure_csv,
    write_structure_json,
)
from .structure import StructureReport, construct_irrep_basis, structure_report

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_ARGS = 2
EXIT_BUDGET = 3
EXIT_IO = 4

STAIRCASE_MAX_N = 12


def render_staircase(report: StructureReport) -> str:
    """ASCII weight staircase with the j-bands annotated.

    Bands stack bottom-up by descending j: the j band is p_j rows tall and
    spans the q_j columns with |m| <= j.  Column heights are the weight-space
    dimensions, so the outline is the n-fold convolution profile.
    """
    dims = {tm: dim for tm, dim in report.weight_dims}
    tms = [tm for tm, _ in report.weight_dims]
    labels = [format_half(tm) for tm in tms]
    width = max(3, max(len(s) for s in labels), max(len(str(d)) for d in dims.values()))
    # Band top rows, walking descending j from the bottom of the picture.
    band_top = {}
    level = 0
    for tj, p, q in sorted(report.rows, reverse=True):
        level += p
        band_top[level] = (tj, p, q)
    height = max(dims.values())
    lines = []
    for lev in range(height, 0, -1):
        cells = [
            ("#" * width if dims[tm] >= lev else " " * width) for tm in tms
        ]
        row = " ".join(cells)
        if lev in band_top:
            tj, p, q = band_top[lev]
            row += f"   j={format_half(tj)}  p={p}  q={q}"
        lines.append(row.rstrip())
    lines.append(" ".join(f"{label:>{width}}" for label in labels) + "   m")
    lines.append(
        " ".join(f"{dims[tm]:>{width}}" for tm in tms) + "   dim V_m"
    )
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _tolerances(args) -> Tolerances:
    return Tolerances(rank_tol=args.tol_rank, verify_tol=args.tol_verify)


def cmd_structure(args) -> int:
    report = structure_report(args.n, args.d)
    if args.format == "json":
        payload = {"schema_version": SCHEMA_VERSION, "kind": "structure"}
        payload.update(report.to_dict())
        _emit(json.dumps(payload, indent=2), args.out)
    elif args.format == "csv":
        import csv
        import io

        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["j", "p", "q", "pq", "p_squared"])
        for tj, p, q in report.rows:
            writer.writerow([format_half(tj), p, q, p * q, p * p])
        _emit(buffer.getvalue().rstrip("\r\n"), args.out)
    else:
        text = report.render_text()
        if args.n <= STAIRCASE_MAX_N:
            text += "\n\n" + render_staircase(report)
        _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verification(
        args.n,
        args.d,
        thetas=args.thetas,
        tol=_tolerances(args),
        budget=args.budget_dim,
    )
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "verify",
            "n": args.n,
            "d": args.d,
            "checks": [
                {
                    "name": r.name,
                    "status": r.status,
                    "residual": r.residual,
                    "note": r.note,
                }
                for r in results
            ],
        }
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        lines = [r.render() for r in results]
        failures = [r.name for r in results if r.failed]
        if failures:
            lines.append(f"FAILED: first failing check is {failures[0]}")
        else:
            lines.append(f"all {len(results)} checks passed or were skipped")
        _emit("\n".join(lines), args.out)
    return EXIT_VERIFY_FAILED if any(r.failed for r in results) else EXIT_OK


def cmd_simulate(args) -> int:
    if args.j is None:
        raise UnknownBlock("simulate requires --j")
    system = build_collective_system(args.n, args.d, args.budget_dim)
    decomp = construct_irrep_basis(system, _tolerances(args))
    code = make_code(decomp, args.j)
    rotations = simulate_noise(
        code,
        "random-rotations",
        trials=args.trials,
        seed=args.seed,
        negative_control=True,
    )
    channel = simulate_noise(
        code,
        "channel",
        trials=args.channel_steps,
        seed=args.seed,
        thetas=args.thetas,
        negative_control=True,
    )
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "simulate",
            "n": args.n,
            "d": args.d,
            "twice_j": code.twice_j,
            "logical_dim": code.logical_dim,
            "gauge_dim": code.gauge_dim,
            "seed": args.seed,
            "reports": [r._asdict() for r in (rotations, channel)],
        }
        _emit(json.dumps(payload, indent=2), args.out)
        return EXIT_OK
    lines = [
        f"block j={format_half(code.twice_j)}: logical dim {code.logical_dim},"
        f" gauge dim {code.gauge_dim}"
    ]
    if code.trivial:
        lines.append("note: logical dimension 1, the code carries no qudit")
    for r in (rotations, channel):
        lines.append(
            f"{r.mode:<17} trials={r.trials:<4d} min fidelity={r.min_fidelity:.12f}"
            f"  mean={r.mean_fidelity:.12f}  max leakage={r.max_leakage:.3e}"
        )
    controls = [
        r.control_min_fidelity
        for r in (rotations, channel)
        if r.control_min_fidelity is not None
    ]
    if controls:
        lines.append(
            f"negative control (raw site-1 embedding): min fidelity={min(controls):.6f}"
        )
    else:
        lines.append(
            "negative control skipped: logical dim exceeds the site dimension"
        )
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    report = structure_report(args.n, args.d)
    system = build_collective_system(args.n, args.d, args.budget_dim)
    decomp = construct_irrep_basis(system, _tolerances(args))
    written = []
    if args.format == "csv":
        path = out_dir / "structure.csv"
        write_structure_csv(report, path)
    else:
        path = out_dir / "structure.json"
        write_structure_json(report, path)
    written.append(path)
    basis_path = out_dir / "basis.json"
    write_basis_json(decomp, basis_path)
    written.append(basis_path)
    if args.centrals:
        centrals_path = out_dir / "centrals.json"
        write_centrals_json(decomp, centrals_path)
        written.append(centrals_path)
    for path in written:
        print(path)
    return EXIT_OK


def _parse_thetas(text: str) -> tuple[float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated angles")
    return tuple(parts)


def _parse_j(text: str) -> float:
    try:
        return parse_half(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crchan",
        description=(
            "Collective rotation channels: commutant block structure,"
            " verification oracles and noiseless-subsystem simulation."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="number of sites")
    common.add_argument("--d", type=int, default=2, help="site dimension (default 2)")
    common.add_argument(
        "--format", choices=("text", "json", "csv"), default="text", dest="format"
    )
    common.add_argument("--out", default=None, help="write output to this path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--thetas", type=_parse_thetas, default=None,
                        help="channel angles as x,y,z")
    common.add_argument("--tol-rank", type=float, default=1e-10, dest="tol_rank")
    common.add_argument("--tol-verify", type=float, default=1e-9, dest="tol_verify")
    common.add_argument("--budget-dim", type=int, default=None, dest="budget_dim",
                        help="dimension budget (env CRC_BUDGET_DIM overrides default)")

    sub = parser.add_subparsers(dest="command", required=True)
    p_structure = sub.add_parser(
        "structure", parents=[common], help="multiplicity table and weight staircase"
    )
    p_structure.set_defaults(func=cmd_structure)
    p_verify = sub.add_parser(
        "verify", parents=[common], help="run the verification suite"
    )
    p_verify.set_defaults(func=cmd_verify)
    p_simulate = sub.add_parser(
        "simulate", parents=[common], help="noise immunity simulation for one block"
    )
    p_simulate.add_argument("--j", type=_parse_j, default=None,
                            help="block label, e.g. 1/2 or 1")
    p_simulate.add_argument("--trials", type=int, default=100)
    p_simulate.add_argument("--channel-steps", type=int, default=10,
                            dest="channel_steps")
    p_simulate.set_defaults(func=cmd_simulate)
    p_export = sub.add_parser(
        "export", parents=[common], help="write structure/basis/centrals files"
    )
    p_export.add_argument("--centrals", action="store_true",
                          help="also export the central projections")
    p_export.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n < 1 or args.d < 2:
        print(f"invalid configuration: n={args.n}, d={args.d}", file=sys.stderr)
        return EXIT_BAD_ARGS
    try:
        return args.func(args)
    except DimensionBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DegenerateAngle, UnknownBlock, OutOfRange, BadDimension, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except CrchanError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
