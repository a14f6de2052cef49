"""Command-line front end.

Exit codes: 0 success, 1 verification failure or missing report inputs,
2 usage error (unknown subcommand, invalid (q, r)), 3 cache corruption.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from pathlib import Path

from . import distfit, keysize, rate_stats
from .ff_tower import FieldError, build_tower, factor_prime_power
from .herm_curve import rational_points
from .rate_stats import GAMMAS
from .store import CacheCorruption, SeriesCache

DEFAULT_MAX_Q = 8
TABLE1_Q = (3, 4, 5, 7, 8, 9, 11, 13)
TABLE2_Q = (2, 4, 8, 16)
SAMPLE_MODE = "jumps"


class UsageError(Exception):
    pass


def _check_pair(q: int, r: int, extended: bool) -> None:
    try:
        build_tower(q, r)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    if q > DEFAULT_MAX_Q:
        if not extended:
            raise UsageError(f"q={q} is an extended-scale target; pass --extended")
        warnings.warn(f"q={q}: expect hours of elimination work", RuntimeWarning, stacklevel=2)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _series(args):
    _check_pair(args.q, args.r, args.extended)
    return SeriesCache(args.cache).get(args.q, args.r, args.gamma, workers=args.workers)


def cmd_points(args) -> int:
    try:
        factor_prime_power(args.q)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    _emit(rational_points(args.q).to_csv(), args.out)
    return 0


def cmd_dims(args) -> int:
    _emit(_series(args).to_csv(), args.out)
    return 0


def cmd_moments(args) -> int:
    _emit(json.dumps(rate_stats.moments_json(_series(args)), sort_keys=True) + "\n", args.out)
    return 0


def cmd_fit(args) -> int:
    series = _series(args)
    sample = rate_stats.empirical_sample(series, args.sample)
    families = args.families or distfit.FAMILIES
    bad = [f for f in families if f not in distfit.FAMILIES]
    if bad:
        raise UsageError(f"unknown families: {', '.join(bad)}")
    ranked = distfit.rank_by_aic(sample, families)
    m = rate_stats.moments(series)
    doc = {
        "q": series.q, "r": series.r, "gamma": series.gamma, "sample": args.sample,
        "ranking": [f.to_json() for f in ranked],
        "moment_fit": dict(zip(("loc", "scale"), distfit.gumbel_moment_fit(float(m.E), m.D))),
    }
    _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
    return 0


def cmd_keysize(args) -> int:
    series = _series(args)
    prof = keysize.keysize_profile(series, keysize.default_model(series, args.model))
    _emit(prof.to_csv(), args.out)
    return 0


def cmd_verify(args) -> int:
    from .checks import run_suite

    _check_pair(args.q, args.r, args.extended)
    rep = run_suite(args.q, args.r, args.gamma, n_random=args.n_random)
    _emit(json.dumps(rep.to_json(), sort_keys=True) + "\n", args.out)
    return 0 if rep.ok else 1


def _fmt(x, digits):
    return f"{float(x):.{digits}f}"


def export_report(cache: SeriesCache, outdir: Path, extended: bool = False,
                  compute: bool = False) -> list[tuple[int, int, str]]:
    """Write table1.csv, table2.csv and figure2.csv; return the missing keys."""
    missing: list[tuple[int, int, str]] = []

    def fetch(q, r, gamma):
        if q > DEFAULT_MAX_Q and not extended:
            return None
        s = cache.get(q, r, gamma) if compute else cache.load(q, r, gamma)
        if s is None:
            missing.append((q, r, gamma))
        return s

    outdir.mkdir(parents=True, exist_ok=True)
    fig_rows = []
    for name, qs, rfun in (("table1.csv", TABLE1_Q, lambda q: q), ("table2.csv", TABLE2_Q, lambda q: 2)):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "E_1pt", "Var_1pt", "E_deg3", "Var_deg3"])
        for q in qs:
            cells = [q]
            for gamma in GAMMAS:
                s = fetch(q, rfun(q), gamma)
                if s is None:
                    cells += ["", ""]
                    continue
                m = rate_stats.moments(s)
                er, dr = rate_stats.ratios(s, m)
                cells += [_fmt(m.E, 2), _fmt(m.Var, 2)]
                fig_rows.append([q, rfun(q), gamma, _fmt(er, 3), _fmt(dr, 3)])
            if any(c != "" for c in cells[1:]):
                w.writerow(cells)
        (outdir / name).write_text(buf.getvalue())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "r", "gamma", "E_ratio", "D_ratio"])
    w.writerows(fig_rows)
    (outdir / "figure2.csv").write_text(buf.getvalue())
    return missing


def cmd_report(args) -> int:
    if args.scope != "tables":
        raise UsageError(f"unknown report scope {args.scope!r}")
    outdir = Path(args.outdir)
    missing = export_report(SeriesCache(args.cache), outdir, args.extended, args.compute)
    for name in ("table1.csv", "table2.csv", "figure2.csv"):
        sys.stdout.write(f"# {name}\n" + (outdir / name).read_text())
    if missing:
        for key in missing:
            print(f"missing cache entry: q={key[0]} r={key[1]} gamma={key[2]}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hermsub", description=__doc__.splitlines()[0])
    ap.add_argument("--cache", default=None, help="cache root (default: $HERMSUB_CACHE or ./cache)")
    ap.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    ap.add_argument("--extended", action="store_true", help="allow q > 8 targets")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", help="affine rational points as CSV")
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_points)

    def series_parser(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("q", type=int)
        p.add_argument("r", type=int)
        p.add_argument("gamma", choices=GAMMAS)
        p.set_defaults(func=func)
        return p

    series_parser("dims", cmd_dims, "subfield subcode dimension series (CSV)")
    series_parser("moments", cmd_moments, "expectation and variance of the rate (JSON)")
    p = series_parser("fit", cmd_fit, "distribution fits ranked by AIC (JSON)")
    p.add_argument("--sample", choices=rate_stats.SAMPLE_MODES, default=SAMPLE_MODE)
    p.add_argument("--families", nargs="+", default=None)
    p = series_parser("keysize", cmd_keysize, "exact and estimated key-size profile (CSV)")
    p.add_argument("--model", choices=("moment", "mle"), default="moment")
    p = series_parser("verify", cmd_verify, "run the invariant suite")
    p.add_argument("--n-random", type=int, default=10)

    p = sub.add_parser("report", help="moment tables (r=q and r=2) and ratio coordinates")
    p.add_argument("scope", choices=("tables",))
    p.add_argument("--outdir", default="report")
    p.add_argument("--compute", action="store_true", help="compute missing series")
    p.set_defaults(func=cmd_report)
    return ap


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hermsub: error: {exc}", file=sys.stderr)
        return 2
    except CacheCorruption as exc:
        print(f"hermsub: cache corruption: {exc}\n"
              f"hint: delete the entry (or the cache directory) to recompute", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
