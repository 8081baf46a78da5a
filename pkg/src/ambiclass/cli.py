"""Command line front end: ``verify``, ``scan``, ``classgroup`` and ``pell``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from multiprocessing import Pool

from .ambiguity import CHECK_NAMES, VerificationReport, verify_discriminant
from .forms import class_group
from .quadfield import NotFundamental, fundamental_discriminants, validate_discriminant
from .units import fundamental_unit

CSV_COLUMNS = (
    "delta", "h", "h_narrow", "t", "ramified_primes", "norm_eps", "idx_Q", "idx_E",
    "idx_coh", "am_actual", "am_predicted", "amst_actual", "amst_predicted",
    "all_checks_pass", "ms_elapsed",
)

DEFAULT_NEGATIVE = (-10000, -3)
DEFAULT_POSITIVE = (5, 5000)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class ScanConfig:
    min_delta: int
    max_delta: int
    sign: str = "both"
    out: str | None = None
    fmt: str = "csv"
    jobs: int = 1
    factor_bound: int | None = None
    fail_fast: bool = False
    timing: bool = True

    def __post_init__(self):
        if self.min_delta > self.max_delta:
            raise ValueError(f"empty range: min {self.min_delta} > max {self.max_delta}")
        if self.jobs < 1:
            raise ValueError("parallelism must be at least 1")
        if self.fmt not in ("csv", "jsonl"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def discriminants(self) -> list[int]:
        ds = fundamental_discriminants(self.min_delta, self.max_delta)
        if self.sign == "negative":
            ds = [d for d in ds if d < 0]
        elif self.sign == "positive":
            ds = [d for d in ds if d > 0]
        return sorted(ds, key=lambda d: (abs(d), d))


def record(r: VerificationReport, timing: bool = True) -> dict:
    """Flat export record; ``checks`` stays nested."""
    return {
        "delta": r.delta,
        "h": r.h,
        "h_narrow": r.h_narrow,
        "t": r.t,
        "ramified_primes": list(r.ramified_primes),
        "norm_eps": r.norm_eps,
        "idx_Q": r.idx_q,
        "idx_E": r.idx_e,
        "idx_coh": r.idx_coh,
        "am_actual": r.am_actual,
        "am_predicted": r.am_predicted,
        "amst_actual": r.amst_actual,
        "amst_predicted": r.amst_predicted,
        "all_checks_pass": r.all_passed,
        "ms_elapsed": r.ms_elapsed if timing else 0.0,
        "checks": dict(r.checks),
    }


def csv_row(rec: dict) -> list[str]:
    row = []
    for col in CSV_COLUMNS:
        v = rec[col]
        if col == "ramified_primes":
            v = ";".join(map(str, v))
        elif isinstance(v, bool):
            v = "true" if v else "false"
        row.append(str(v))
    return row


def parse_csv_row(row: dict) -> dict:
    """Inverse of csv_row for the columns CSV carries."""
    out = {}
    for col in CSV_COLUMNS:
        v = row[col]
        if col == "ramified_primes":
            out[col] = [int(x) for x in v.split(";")] if v else []
        elif col == "all_checks_pass":
            out[col] = v == "true"
        elif col == "ms_elapsed":
            out[col] = float(v)
        else:
            out[col] = int(v)
    return out


def format_report(r: VerificationReport) -> str:
    lines = [
        f"discriminant      {r.delta}",
        f"class number      h = {r.h}, narrow h+ = {r.h_narrow}",
        f"ramified          t = {r.t}, finite primes {', '.join(map(str, r.ramified_primes))}"
        + (" and infinity" if r.delta < 0 else ""),
        f"unit norm         {r.norm_eps if r.delta > 0 else 'n/a (imaginary)'}",
        f"unit indices      (E:E&NL*) = {r.idx_q}, (E:NE) = {r.idx_e}, (E[N]:E^(1-s)) = {r.idx_coh}",
        f"ambiguous         actual {r.am_actual}, predicted {r.am_predicted}",
        f"strongly ambig.   actual {r.amst_actual}, predicted {r.amst_predicted}",
    ]
    for name in CHECK_NAMES:
        lines.append(f"  {name:<16} {'PASS' if r.checks[name] else 'FAIL'}")
    lines.append(f"elapsed           {r.ms_elapsed:.1f} ms")
    return "\n".join(lines)


def _parse_disc(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise NotFundamental(f"{text!r} is not an integer") from None
    validate_discriminant(n)
    return n


def cmd_verify(args) -> int:
    try:
        delta = _parse_disc(args.disc)
    except NotFundamental as exc:
        print(f"error: not a fundamental discriminant: {exc}", file=sys.stderr)
        return EXIT_USAGE
    r = verify_discriminant(delta)
    print(format_report(r))
    return EXIT_OK if r.all_passed else EXIT_FAIL


def _verify_one(delta: int) -> VerificationReport:
    return verify_discriminant(delta)


def run_scan(cfg: ScanConfig, stream, progress=None) -> tuple[int, int]:
    """Verify every discriminant of the scan and write records in ascending |delta| order."""
    if cfg.factor_bound is not None:
        os.environ["AMBICLASS_FACTOR_BOUND"] = str(cfg.factor_bound)
    ds = cfg.discriminants()
    writer = csv.writer(stream, lineterminator="\n") if cfg.fmt == "csv" else None
    if writer:
        writer.writerow(CSV_COLUMNS)
    count = failures = 0
    pool = Pool(cfg.jobs) if cfg.jobs > 1 else None
    try:
        results = pool.imap(_verify_one, ds, chunksize=16) if pool else map(_verify_one, ds)
        for r in results:
            rec = record(r, cfg.timing)
            if writer:
                writer.writerow(csv_row(rec))
            else:
                stream.write(json.dumps(rec, sort_keys=False) + "\n")
            count += 1
            if not r.all_passed:
                failures += 1
                if progress:
                    bad = [k for k, v in r.checks.items() if not v]
                    progress(f"FAIL delta={r.delta}: {', '.join(bad)}")
                if cfg.fail_fast:
                    break
            if progress and count % 500 == 0:
                progress(f"{count}/{len(ds)} discriminants verified")
    finally:
        if pool:
            pool.terminate()
    return count, failures


def _scan_config(args) -> ScanConfig:
    lo, hi = args.min, args.max
    if lo is None and hi is None:
        if args.sign == "negative":
            lo, hi = DEFAULT_NEGATIVE
        elif args.sign == "positive":
            lo, hi = DEFAULT_POSITIVE
        else:
            lo, hi = DEFAULT_NEGATIVE[0], DEFAULT_POSITIVE[1]
    elif lo is None:
        lo = min(DEFAULT_NEGATIVE[0], hi)
    elif hi is None:
        hi = max(DEFAULT_POSITIVE[1], lo)
    return ScanConfig(
        min_delta=lo,
        max_delta=hi,
        sign=args.sign,
        out=args.out,
        fmt=args.format,
        jobs=args.jobs or os.cpu_count() or 1,
        factor_bound=args.factor_bound,
        fail_fast=args.fail_fast,
        timing=not args.no_timing,
    )


def cmd_scan(args) -> int:
    try:
        cfg = _scan_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out and cfg.out != "-":
        try:
            stream = open(cfg.out, "w", newline="")
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        stream = sys.stdout
    start = time.perf_counter()

    def progress(msg):
        print(msg, file=sys.stderr, flush=True)

    try:
        count, failures = run_scan(cfg, stream, progress)
    finally:
        if stream is not sys.stdout:
            stream.close()
    elapsed = time.perf_counter() - start
    print(f"scanned {count} discriminants, {failures} failures, {elapsed:.1f} s", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def _form_key(f):
    return (f.a, abs(f.b), -f.b)


def cmd_classgroup(args) -> int:
    try:
        delta = _parse_disc(args.disc)
    except NotFundamental as exc:
        print(f"error: not a fundamental discriminant: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cl = class_group(delta)
    reps = sorted(cl.wide_reps.values(), key=_form_key)
    print(f"{cl.wide}; representatives {', '.join(map(str, reps))}")
    if delta > 0:
        nreps = sorted(cl.narrow_reps.values(), key=_form_key)
        print(f"narrow {cl.narrow}; representatives {', '.join(map(str, nreps))}")
    return EXIT_OK


def cmd_pell(args) -> int:
    try:
        delta = _parse_disc(args.disc)
    except NotFundamental as exc:
        print(f"error: not a fundamental discriminant: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if delta < 0:
        print(f"error: {delta} < 0 has no fundamental unit", file=sys.stderr)
        return EXIT_USAGE
    eps = fundamental_unit(delta)
    print(f"{eps}, norm {eps.norm()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ambiclass",
        description="Ambiguous ideal classes of quadratic fields, computed and checked.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify every identity for one discriminant")
    v.add_argument("--disc", required=True, help="fundamental discriminant")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="verify a range of discriminants and export the results")
    s.add_argument("--min", type=int)
    s.add_argument("--max", type=int)
    s.add_argument("--sign", choices=("negative", "positive", "both"), default="both")
    s.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    s.add_argument("--out", help="output file (default: standard output)")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    s.add_argument("--factor-bound", type=int, default=None)
    s.add_argument("--fail-fast", action="store_true")
    s.add_argument("--no-timing", action="store_true", help="write ms_elapsed as 0 for reproducible output")
    s.set_defaults(func=cmd_scan)

    c = sub.add_parser("classgroup", help="print the class group with representative forms")
    c.add_argument("--disc", required=True)
    c.set_defaults(func=cmd_classgroup)

    e = sub.add_parser("pell", help="print the fundamental unit and its norm")
    e.add_argument("--disc", required=True)
    e.set_defaults(func=cmd_pell)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
