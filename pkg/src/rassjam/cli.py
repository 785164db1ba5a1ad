"""Command-line entry point: ``rassjam {profile,sweep-p,sweep-n,baseline,validate}``.

Exit codes: 0 success, 2 usage/config error, 3 validation failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import checks, outputs
from .analysis import RASS, TRADITIONAL, Experiment, jsnr_monte_carlo, sweep
from .errors import ConfigError, RassError
from .experiments import RASS_MAX_PTM_DB, TRADITIONAL_MIN_PTM_DB, run_profile
from .receiver import write_snapshot_csv
from .scenario import default_scenario, read_scenario
from .suppression import write_profile_csv

log = logging.getLogger("rassjam")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


def parse_p_grid(text: str) -> list[float]:
    """``a:b:step`` inclusive of ``b`` (up to rounding), or a comma list."""
    try:
        if ":" in text:
            a, b, step = (float(v) for v in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(round((b - a) / step)) + 1
            grid = [round(a + i * step, 12) for i in range(count)]
        else:
            grid = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p grid {text!r}; expected a:b:step") from None
    if not grid or any(not 0.0 <= v <= 1.0 for v in grid):
        raise argparse.ArgumentTypeError("p grid must be nonempty and inside [0, 1]")
    return grid


def parse_n_set(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N set {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("N set must hold positive integers")
    return values


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", type=Path, help="scenario JSON (default: bundled four-radar scenario)")
    common.add_argument("--out", type=Path, default=Path("rassjam_out"), help="output directory")
    common.add_argument("--trials", type=int, default=1000, help="Monte Carlo trials (default 1000)")
    common.add_argument("--seed", type=_u64, help="override the scenario's master seed")
    common.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo trials")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rassjam", description="Simulate RASS jamming against eigenprojection in a multistatic radar.")
    sub = parser.add_subparsers(dest="command", required=True)

    prof = sub.add_parser("profile", parents=[common], help="range profiles after eigenprojection")
    prof.add_argument("--pattern", choices=[TRADITIONAL, RASS, "both"], default="both")
    prof.add_argument("--trial-index", type=int, default=0)
    prof.add_argument("--per-radar", action="store_true", help="add per-radar columns to the profile CSV")
    prof.add_argument("--dump-snapshots", action="store_true", help="also write the raw snapshot matrices")

    sp = sub.add_parser("sweep-p", parents=[common], help="output JSNR versus selection probability")
    sp.add_argument("--p-grid", type=parse_p_grid, default=parse_p_grid("0.1:0.9:0.1"))
    sp.add_argument("--mode", choices=["exact", "perturbation", "both"], default="both")

    sn = sub.add_parser("sweep-n", parents=[common], help="output JSNR versus jammer array size")
    sn.add_argument("--n-set", type=parse_n_set, default=parse_n_set("16,32,64"))
    sn.add_argument("--mode", choices=["exact", "perturbation", "both"], default="both")

    sub.add_parser("baseline", parents=[common], help="full-array residual JSNR versus RASS at p = 0.5")

    val = sub.add_parser("validate", parents=[common], help="run the oracle and invariant suites")
    val.add_argument("--prop1-tol", type=float, default=0.02, help="relative Frobenius bound for the RASS covariance")
    val.add_argument("--draws", type=int, default=100_000, help="slot draws for the covariance check")
    return parser


def _load(args):
    sc = read_scenario(args.scenario) if args.scenario else default_scenario()
    if args.seed is not None:
        sc = sc.with_(master_seed=args.seed)
    return sc


def _write_csv(path, meta, header, rows):
    def writer(fh):
        fh.write(f"# {outputs.comment_line(meta)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    outputs.atomic_write_with(path, writer)


def cmd_profile(args, sc) -> int:
    exp = Experiment.prepare(sc)
    meta = outputs.metadata(sc, "profile")
    patterns = [TRADITIONAL, RASS] if args.pattern == "both" else [args.pattern]
    summary = {"meta": meta,
               "thresholds": {"traditional_min_peak_to_median_db": TRADITIONAL_MIN_PTM_DB,
                              "rass_max_peak_to_median_db": RASS_MAX_PTM_DB},
               "patterns": {}}
    for pattern in patterns:
        run = run_profile(exp, pattern, args.trial_index)
        outputs.atomic_write_with(
            args.out / f"profile_{pattern}.csv",
            lambda fh, run=run: write_profile_csv(fh, run.profile, args.per_radar, outputs.comment_line(meta)))
        if args.dump_snapshots:
            outputs.atomic_write_with(
                args.out / f"snapshots_{pattern}.csv",
                lambda fh, run=run: write_snapshot_csv(fh, run.snapshot.data, outputs.comment_line(meta)))
        info = run.summary()
        if pattern == TRADITIONAL:
            info["passes"] = info["target_is_peak"] and info["peak_to_median_db"] >= TRADITIONAL_MIN_PTM_DB
        else:
            info["passes"] = (not info["target_is_peak"]) and info["peak_to_median_db"] <= RASS_MAX_PTM_DB
        summary["patterns"][pattern] = info
        print(f"{pattern:12s} peak bin {info['peak_bin']:4d}  target bin {info['target_bin']:4d}  "
              f"peak/median {info['peak_to_median_db']:6.2f} dB")
    outputs.atomic_write_text(args.out / "profile_summary.json", outputs.dumps(summary))
    return EXIT_OK


def _sweep_rows(reports, key):
    rows = []
    for r in reports:
        rows.append([outputs.fmt(r.p) if key == "p" else r.num_elements,
                     r.num_elements if key == "p" else outputs.fmt(r.p),
                     r.trials, outputs.fmt(r.closed_form_db),
                     outputs.fmt(r.empirical_exact_db), outputs.fmt(r.empirical_perturbation_db)])
    return rows


def _cell(v) -> str:
    if isinstance(v, int):
        return str(v)
    try:
        return f"{float(v):.3f}"
    except ValueError:
        return str(v)


def _print_table(header, rows):
    print(" ".join(f"{h:>{max(len(h), 8)}s}" for h in header))
    for row in rows:
        print(" ".join(f"{_cell(v):>{max(len(h), 8)}s}" for h, v in zip(header, row)))


def cmd_sweep_p(args, sc) -> int:
    reports = sweep(sc, "p", args.p_grid, args.trials, args.mode, workers=args.workers)
    meta = outputs.metadata(sc, "sweep-p")
    header = ["p", "N", "trials", "closed_form_db", "empirical_exact_db", "empirical_perturbation_db"]
    rows = _sweep_rows(reports, "p")
    _write_csv(args.out / "jsnr_vs_p.csv", meta, header, rows)
    outputs.atomic_write_text(args.out / "jsnr_vs_p.json",
                              outputs.dumps({"meta": meta, "reports": [r.to_dict() for r in reports]}))
    _print_table(header, rows)
    return EXIT_OK


def cmd_sweep_n(args, sc) -> int:
    reports = sweep(sc, "n", args.n_set, args.trials, args.mode, workers=args.workers)
    meta = outputs.metadata(sc, "sweep-n")
    header = ["N", "p", "trials", "closed_form_db", "empirical_exact_db", "empirical_perturbation_db"]
    rows = _sweep_rows(reports, "n")
    if len(reports) > 1:
        header += ["closed_form_gap_db", "empirical_exact_gap_db", "empirical_perturbation_gap_db"]
        for i, row in enumerate(rows):
            if i == 0:
                row += ["", "", ""]
                continue
            prev, cur = reports[i - 1], reports[i]
            row += [outputs.fmt(cur.closed_form_db - prev.closed_form_db)]
            for attr in ("empirical_exact_db", "empirical_perturbation_db"):
                a, b = getattr(prev, attr), getattr(cur, attr)
                row.append(outputs.fmt(b - a) if a is not None and b is not None else "")
    _write_csv(args.out / "jsnr_vs_n.csv", meta, header, rows)
    outputs.atomic_write_text(args.out / "jsnr_vs_n.json",
                              outputs.dumps({"meta": meta, "reports": [r.to_dict() for r in reports]}))
    _print_table(header, rows)
    return EXIT_OK


def cmd_baseline(args, sc) -> int:
    exp = Experiment.prepare(sc)
    full = jsnr_monte_carlo(sc, TRADITIONAL, args.trials, "exact", workers=args.workers, experiment=exp)
    rass = jsnr_monte_carlo(sc.with_(p=0.5), RASS, args.trials, "exact", workers=args.workers)
    doc = {
        "meta": outputs.metadata(sc, "baseline"),
        "trials": args.trials,
        "omega_f_db": full.empirical_exact_db,
        "omega_r_p05_db": rass.empirical_exact_db,
        "omega_r_p05_closed_form_db": rass.closed_form_db,
        "delta_db": rass.empirical_exact_db - full.empirical_exact_db,
        "reference_omega_f_db": checks.REFERENCE_OMEGA_F_DB,
        "omega_f_offset_from_reference_db": full.empirical_exact_db - checks.REFERENCE_OMEGA_F_DB,
    }
    outputs.atomic_write_text(args.out / "baseline.json", outputs.dumps(doc))
    print(f"Omega_F = {doc['omega_f_db']:.2f} dB   Omega_R(0.5) = {doc['omega_r_p05_db']:.2f} dB   "
          f"delta = {doc['delta_db']:.2f} dB")
    return EXIT_OK


def cmd_validate(args, sc) -> int:
    if not args.prop1_tol > 0:
        raise UsageError("--prop1-tol must be positive")
    if args.draws < 1:
        raise UsageError("--draws must be >= 1")
    results = checks.run_all(sc, args.trials, args.prop1_tol, args.draws)
    ok = all(r.passed for r in results)
    doc = {"meta": outputs.metadata(sc, "validate"), "passed": ok, "checks": [r.as_dict() for r in results]}
    outputs.atomic_write_text(args.out / "validate.json", outputs.dumps(doc))
    for r in results:
        state = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        measured = "" if r.measured is None else f"{r.measured:.6g}"
        print(f"[{state}] {r.name:28s} {measured:>14s}  bound {r.bound}")
        if r.skipped or "DISCREPANCY" in r.note:
            log.warning("%s: %s", r.name, r.note)
    return EXIT_OK if ok else EXIT_VALIDATION


COMMANDS = {
    "profile": cmd_profile,
    "sweep-p": cmd_sweep_p,
    "sweep-n": cmd_sweep_n,
    "baseline": cmd_baseline,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        sc = _load(args)
        return COMMANDS[args.command](args, sc)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rassjam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"rassjam: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rassjam: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RassError as exc:
        print(f"rassjam: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
