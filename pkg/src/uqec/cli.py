"""Command-line front end: verification grids, single experiments, KL checks,
matrix dumps, and Monte Carlo trajectory cross-checks.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .codes import CODE_NAMES, PureQubitState, encoding_unitary, get_code, standard_error_set
from .linalg import write_matrix
from .recovery import ErrorChannel, read_channel_file, recovery_for, validate_kl

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class CliError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uqec",
        description="Measurement-free quantum error correction on density matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, code_default: str | None = None) -> None:
        p.add_argument("--code", default=code_default, required=code_default is None,
                       help="code name: bitflip3, divincenzo5, shor9")
        p.add_argument("--tol", type=float, default=1e-10, help="pass/fail tolerance")
        p.add_argument("--seed", type=int, default=42, help="RNG seed")
        p.add_argument("--output", default=None, help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "table"), default="table")

    p = sub.add_parser("verify", help="run the full verification grid")
    add_common(p, code_default="all")

    p = sub.add_parser("demo", help="run one experiment and print the report")
    add_common(p)
    p.add_argument("--channel-file", default=None, help="channel spec file (label probability per line)")
    p.add_argument("--probs", default=None,
                   help="comma-separated probabilities in standard error-set order")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)

    p = sub.add_parser("kl-check", help="orthonormality and degeneracy of the error set")
    add_common(p)

    p = sub.add_parser("dump", help="write recovery matrix, encoder, and logical vectors")
    add_common(p)

    p = sub.add_parser("trajectory", help="Monte Carlo cross-check at state-vector level")
    add_common(p)
    p.add_argument("--channel-file", default=None)
    p.add_argument("--probs", default=None)
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--beta", type=float, default=0.8)
    p.add_argument("--samples", type=int, default=100_000)
    return parser


def _resolve_codes(name: str) -> list[str]:
    if name == "all":
        return list(CODE_NAMES)
    if name not in CODE_NAMES:
        raise CliError(f"unknown code {name!r}; valid names: {', '.join(CODE_NAMES)} or 'all'")
    return [name]


def _resolve_state(alpha: float | None, beta: float | None) -> PureQubitState:
    if alpha is None or beta is None:
        raise CliError("--alpha and --beta are required")
    norm2 = alpha * alpha + beta * beta
    if abs(norm2 - 1.0) > 1e-9:
        raise CliError(f"alpha^2 + beta^2 = {norm2!r}, must be 1 within 1e-9")
    scale = 1.0 / np.sqrt(norm2)
    return PureQubitState(alpha * scale, beta * scale)


def _resolve_channel(args: argparse.Namespace, code_name: str) -> ErrorChannel:
    code = get_code(code_name)
    if (args.channel_file is None) == (args.probs is None):
        raise CliError("provide exactly one of --channel-file / --probs")
    if args.channel_file is not None:
        try:
            return read_channel_file(args.channel_file, code)
        except (OSError, ValueError) as exc:
            raise CliError(str(exc)) from exc
    ops = standard_error_set(code)
    try:
        probs = [float(t) for t in args.probs.split(",")]
    except ValueError as exc:
        raise CliError(f"bad --probs value: {exc}") from exc
    if len(probs) != len(ops):
        raise CliError(f"--probs needs {len(ops)} entries for {code_name}, got {len(probs)}")
    try:
        return ErrorChannel.from_probs(ops, probs)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _pairs(items) -> str:
    return " ".join(f"{label}={p:.6g}" for label, p in items)


def _report_table_line(r: analysis.RecoveryReport) -> str:
    status = "PASS" if r.passed else "FAIL"
    return (
        f"[{status}] {r.code} alpha={r.alpha:+.6f} beta={r.beta:+.6f} "
        f"fidelity={r.fidelity:.12f} residual={r.residual:.3e} "
        f"syndrome: {_pairs(r.syndrome)}"
    )


def _report_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["code", "alpha", "beta", "fidelity", "residual", "passed", "tolerance",
         "channel", "syndrome"]
    )
    for r in reports:
        writer.writerow([
            r.code,
            format(r.alpha, ".17g"),
            format(r.beta, ".17g"),
            format(r.fidelity, ".17g"),
            format(r.residual, ".17g"),
            r.passed,
            format(r.tolerance, ".17g"),
            ";".join(f"{lb}:{format(p, '.17g')}" for lb, p in r.channel),
            ";".join(f"{lb}:{format(p, '.17g')}" for lb, p in r.syndrome),
        ])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def cmd_verify(args: argparse.Namespace) -> int:
    codes = _resolve_codes(args.code)
    lines: list[str] = []
    all_reports = []
    failures = 0
    for name in codes:
        reports = analysis.verify_code(name, tol=args.tol, seed=args.seed)
        all_reports.extend(reports)
        failed = sum(not r.passed for r in reports)
        failures += failed
        if args.format == "json":
            lines.extend(analysis.report_to_json(r) for r in reports)
        elif args.format == "table":
            lines.extend(_report_table_line(r) for r in reports)
        if args.format == "table":
            lines.append(f"{name}: {len(reports) - failed}/{len(reports)} cases passed")
    if args.format == "csv":
        _emit(_report_csv(all_reports), args.output)
    else:
        _emit("\n".join(lines), args.output)
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_demo(args: argparse.Namespace) -> int:
    codes = _resolve_codes(args.code)
    if len(codes) != 1:
        raise CliError("demo needs a single code, not 'all'")
    channel = _resolve_channel(args, codes[0])
    psi = _resolve_state(args.alpha, args.beta)
    report = analysis.run_experiment(codes[0], channel, psi, tol=args.tol)
    if args.format == "json":
        _emit(analysis.report_to_json(report), args.output)
    elif args.format == "csv":
        _emit(_report_csv([report]), args.output)
    else:
        fact = report.factorization
        text = "\n".join([
            f"code:      {report.code}",
            f"input:     alpha={report.alpha:.6g} beta={report.beta:.6g}",
            f"channel:   {_pairs(report.channel)}",
            f"fidelity:  {report.fidelity:.12f}",
            f"residual:  {report.residual:.3e} (product form: {fact.is_product})",
            f"syndrome:  {_pairs(report.syndrome)}",
            f"verdict:   {'PASS' if report.passed else 'FAIL'} at tolerance {report.tolerance:g}",
        ])
        _emit(text, args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_kl_check(args: argparse.Namespace) -> int:
    codes = _resolve_codes(args.code)
    lines = []
    for name in codes:
        code = get_code(name)
        report = validate_kl(code, standard_error_set(code))
        if args.format == "json":
            groups = ", ".join(
                "[" + ", ".join(f'"{lb}"' for lb in grp) + "]" for grp in report.classes
            )
            lines.append(
                "{"
                f'"code": "{name}", '
                f'"gram_deviation": {format(report.gram_deviation, ".17g")}, '
                f'"classes": [{groups}], '
                f'"nondegenerate": {"true" if report.is_nondegenerate else "false"}'
                "}"
            )
        else:
            lines.append(f"{name}: gram deviation {report.gram_deviation:.3e}, "
                         f"{len(report.classes)} error classes")
            if report.degenerate_classes:
                for grp in report.degenerate_classes:
                    lines.append(f"  degenerate: {{{','.join(grp)}}}")
            else:
                lines.append("  nondegenerate (all classes are singletons)")
    _emit("\n".join(lines), args.output)
    return EXIT_OK


def cmd_dump(args: argparse.Namespace) -> int:
    codes = _resolve_codes(args.code)
    out_dir = Path(args.output) if args.output else Path(".")
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name in codes:
            code = get_code(name)
            rec = recovery_for(name)
            write_matrix(out_dir / f"{name}_R.txt", rec.matrix)
            sidecar = []
            for i, lbl in enumerate(rec.row_labels):
                m = "completion" if lbl.m is None else str(lbl.m)
                sidecar.append(f"{i} {m} {lbl.label}")
            (out_dir / f"{name}_R_labels.txt").write_text("\n".join(sidecar) + "\n")
            write_matrix(out_dir / f"{name}_encoder.txt", encoding_unitary(code))
            write_matrix(out_dir / f"{name}_logical0.txt", code.logical0.reshape(-1, 1))
            write_matrix(out_dir / f"{name}_logical1.txt", code.logical1.reshape(-1, 1))
            written.extend(
                f"{name}_{suffix}" for suffix in
                ("R.txt", "R_labels.txt", "encoder.txt", "logical0.txt", "logical1.txt")
            )
    except OSError as exc:
        raise CliError(f"cannot write to {out_dir}: {exc}") from exc
    sys.stdout.write("\n".join(f"wrote {out_dir / f}" for f in written) + "\n")
    return EXIT_OK


def cmd_trajectory(args: argparse.Namespace) -> int:
    codes = _resolve_codes(args.code)
    if len(codes) != 1:
        raise CliError("trajectory needs a single code, not 'all'")
    channel = _resolve_channel(args, codes[0])
    psi = _resolve_state(args.alpha, args.beta)
    report = analysis.trajectory_statistics(
        codes[0], channel, psi, samples=args.samples, seed=args.seed, tol=args.tol
    )
    if args.format == "json":
        entries = ", ".join(
            "{"
            f'"label": "{e.label}", "class": "{e.class_label}", '
            f'"p": {format(e.probability, ".17g")}, '
            f'"count": {e.count}, '
            f'"frequency": {format(e.frequency, ".17g")}, '
            f'"bound_3sigma": {format(e.bound_3sigma, ".17g")}, '
            f'"within": {"true" if e.within_bound else "false"}'
            "}"
            for e in report.entries
        )
        _emit(
            "{"
            f'"code": "{report.code}", "samples": {report.samples}, '
            f'"seed": {report.seed}, "entries": [{entries}], '
            f'"max_recovery_error": {format(report.max_recovery_error, ".17g")}, '
            f'"passed": {"true" if report.passed else "false"}'
            "}",
            args.output,
        )
    else:
        lines = [
            f"{report.code}: {report.samples} samples, seed {report.seed}",
            f"{'label':>10} {'class':>14} {'p':>10} {'freq':>10} {'|diff|':>10} {'3sigma':>10}  ok",
        ]
        for e in report.entries:
            lines.append(
                f"{e.label:>10} {e.class_label:>14} {e.probability:>10.6f} "
                f"{e.frequency:>10.6f} {abs(e.frequency - e.probability):>10.6f} "
                f"{e.bound_3sigma:>10.6f}  {'yes' if e.within_bound else 'NO'}"
            )
        lines.append(f"max per-sample recovery error: {report.max_recovery_error:.3e}")
        lines.append(f"verdict: {'PASS' if report.passed else 'FAIL'}")
        _emit("\n".join(lines), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


_COMMANDS = {
    "verify": cmd_verify,
    "demo": cmd_demo,
    "kl-check": cmd_kl_check,
    "dump": cmd_dump,
    "trajectory": cmd_trajectory,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
