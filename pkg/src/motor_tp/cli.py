"""``motor-tp`` command line interface.

Subcommands: analyze, batch, synth, fitts.  Exit codes: 0 success, 1 partial
batch failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .alignment import CtwConfig
from .errors import MotorTPError
from .infomeasure import AnalysisConfig, FittsTask, analyze_pair, fitts_ip, fitts_mt
from .mocap_io import read_csv, write_csv, write_report
from .synth import SynthSpec, generate_pair, random_warp

log = logging.getLogger("motor_tp")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _retention(value: str) -> float:
    v = float(value)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError("retention must be in (0, 1]")
    return v


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--retention", type=_retention, default=0.90,
                   help="share of x's variance kept by PCA (default 0.90)")
    p.add_argument("--alignment", choices=["none", "dtw", "ctw"], default="ctw")
    p.add_argument("--clamp", type=float, default=1e-6,
                   help="keep |rho_hat| <= 1 - clamp (default 1e-6)")
    p.add_argument("--variance-floor", type=float, default=1e-12)
    p.add_argument("--ctw-max-iters", type=int, default=20)
    p.add_argument("--ctw-tol", type=float, default=1e-4)
    p.add_argument("--ctw-dim", type=int, default=None,
                   help="CCA dimension for CTW (default: from 90%% variance, max 10)")
    p.add_argument("--ctw-ridge", type=float, default=1e-6)


def _config(args) -> AnalysisConfig:
    try:
        return AnalysisConfig(
            retention=args.retention,
            alignment=args.alignment,
            clamp=args.clamp,
            variance_floor=args.variance_floor,
            ctw=CtwConfig(d=args.ctw_dim, ridge=args.ctw_ridge,
                          max_iters=args.ctw_max_iters, tol=args.ctw_tol),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _load(path):
    try:
        return read_csv(path)
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc.strerror}") from None
    except MotorTPError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_analyze(args) -> int:
    cfg = _config(args)
    x, y = _load(args.x), _load(args.y)
    try:
        report = analyze_pair(x, y, cfg)
    except MotorTPError as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out) if args.out else Path(f"tp_{Path(args.x).stem}_{Path(args.y).stem}.json")
    out.write_bytes(write_report(report))
    print(f"TP(x|y) = {report.total_tp:.4f} bps (m={report.retained_components}, n_eff={report.n_eff})")
    return EXIT_OK


def read_manifest(path) -> list[tuple[str, str, str]]:
    """Rows ``x,y`` or ``id,x,y``; paths are relative to the manifest; ``#`` starts a comment."""
    base = Path(path).parent
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot open {path}: {exc.strerror}") from None
    pairs = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        row = [cell.strip() for cell in row]
        if not row or not row[0] or row[0].startswith("#"):
            continue
        if len(row) == 2:
            pid, xp, yp = f"pair{len(pairs) + 1}", *row
        elif len(row) == 3:
            pid, xp, yp = row
        else:
            raise CliError(f"{path}: expected 'x,y' or 'id,x,y' at line {lineno}")
        pairs.append((pid, str(base / xp), str(base / yp)))
    return pairs


def _run_pair(pid, xp, yp, cfg, outdir):
    x, y = _load(xp), _load(yp)
    results = []
    for tag, a, b in (("xy", x, y), ("yx", y, x)):
        try:
            report = analyze_pair(a, b, cfg)
        except MotorTPError as exc:
            raise CliError(str(exc)) from None
        (outdir / f"{pid}_{tag}.json").write_bytes(write_report(report))
        results.append(report.total_tp)
    return results


def cmd_batch(args) -> int:
    cfg = _config(args)
    pairs = read_manifest(args.manifest)
    if not pairs:
        raise CliError(f"{args.manifest}: manifest lists no pairs")
    outdir = Path(args.out) if args.out else Path(".")
    outdir.mkdir(parents=True, exist_ok=True)

    threads = int(os.environ.get("MOTOR_TP_THREADS", "0") or 0) or (os.cpu_count() or 1)
    threads = max(1, min(threads, len(pairs)))

    def job(item):
        pid, xp, yp = item
        try:
            return _run_pair(pid, xp, yp, cfg, outdir), None
        except CliError as exc:
            return None, str(exc)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(job, pairs))

    lines = ["x\ty\tTP(x|y)"]
    failed = 0
    for (pid, xp, yp), (tps, error) in zip(pairs, outcomes):
        xn, yn = Path(xp).name, Path(yp).name
        if error is not None:
            failed += 1
            lines.append(f"{xn}\t{yn}\tFAILED: {error}")
            print(f"{pid}: {error}", file=sys.stderr)
            continue
        lines.append(f"{xn}\t{yn}\t{tps[0]:.1f} bps")
        lines.append(f"{yn}\t{xn}\t{tps[1]:.1f} bps")
    table = "\n".join(lines) + "\n"
    (outdir / "summary.tsv").write_text(table)
    sys.stdout.write(table)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_synth(args) -> int:
    warp = None
    if args.warp_knots:
        import numpy as np

        warp = random_warp(np.random.default_rng(args.seed), n_knots=args.warp_knots,
                           strength=args.warp_strength)
    try:
        spec = SynthSpec(
            beta=tuple(args.beta),
            rho=args.rho,
            T=args.frames,
            p_components=args.components,
            frame_rate=args.frame_rate,
            seed=args.seed,
            warp=warp,
            warp_length=args.warp_length,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    x, y = generate_pair(spec)
    write_csv(args.out_x, x)
    write_csv(args.out_y, y)
    print(f"wrote {args.out_x} ({x.n_frames} frames) and {args.out_y} ({y.n_frames} frames)")
    return EXIT_OK


def cmd_fitts(args) -> int:
    try:
        task = FittsTask(a=args.a, b=args.b, D=args.D, W=args.W)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(f"MT={fitts_mt(task):.3f} s, IP={fitts_ip(task.b):.1f} bps")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motor-tp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="throughput of X conditioned on Y")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--out", help="report path (default tp_<x>_<y>.json)")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("batch", help="both directions for every pair in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", help="output directory (default .)")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("synth", help="write a synthetic AR(2) pair with known correlation")
    p.add_argument("--rho", type=float, default=0.9)
    p.add_argument("--frames", "-T", type=int, default=12000)
    p.add_argument("--components", type=int, default=1)
    p.add_argument("--frame-rate", type=float, default=120.0)
    p.add_argument("--beta", type=float, nargs=3, default=[0.1, 1.2, -0.5],
                   metavar=("B0", "B1", "B2"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warp-knots", type=int, default=0,
                   help="interior knots of a random time warp applied to y (0 = none)")
    p.add_argument("--warp-strength", type=float, default=0.6)
    p.add_argument("--warp-length", type=int, default=None)
    p.add_argument("--out-x", default="synth_x.csv")
    p.add_argument("--out-y", default="synth_y.csv")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fitts", help="Fitts movement time and index of performance")
    p.add_argument("--a", type=float, required=True, help="intercept (s)")
    p.add_argument("--b", type=float, required=True, help="slope (s/bit)")
    p.add_argument("--D", type=float, required=True, help="distance to target")
    p.add_argument("--W", type=float, required=True, help="target width")
    p.set_defaults(func=cmd_fitts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"motor-tp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
