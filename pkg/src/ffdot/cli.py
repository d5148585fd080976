"""``ffdot`` command line: construct | analyze | verify | sweep | probe.

Exit status: 0 success / all checks passed, 1 verification failure,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import geometry as geo
from . import harness
from .pointset import FAMILIES, SampleSpec, format_set, read_set, sample, write_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _params(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise harness.ConfigError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = int(val)
    return out


def _lines(text: str | None) -> tuple[tuple[int, ...], ...]:
    if not text:
        return ()
    return tuple(_int_list(chunk) for chunk in text.split(";"))


def _single(values: tuple[int, ...], flag: str) -> int:
    if len(values) != 1:
        raise harness.ConfigError(f"{flag} takes a single value here")
    return values[0]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _spec_from_args(args, family: str, q: int, d: int) -> SampleSpec:
    params = _params(args.param)
    variety = geo.parse_variety(args.variety, q) if args.variety else None
    if variety is not None and variety.d != d:
        raise harness.ConfigError(f"variety has d={variety.d}, expected {d}")
    translate = _int_list(args.translate) if args.translate else None
    if translate is not None and len(translate) != d:
        raise harness.ConfigError(f"--translate needs {d} coordinates")
    return SampleSpec(
        family=family, q=q, d=d, size=args.size, seed=args.seed,
        j=params.get("j", 1), translate=translate, lines=_lines(args.lines),
        variety=variety,
    )


def cmd_construct(args) -> int:
    q, d = _single(args.q, "--q"), _single(args.d, "--d")
    harness.check_cap(q, d)
    family = (args.family or ["variety" if args.variety else "full-space"])[0]
    E = sample(_spec_from_args(args, family, q, d))
    if args.out:
        write_set(E, args.out)
    else:
        sys.stdout.write(format_set(E))
    print(f"# seed={args.seed} size={E.size}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    if not args.e or not args.f:
        raise harness.ConfigError("analyze needs --e and --f")
    E, F = read_set(args.e), read_set(args.f)
    report = harness.analyze(E, F, seed=args.seed, family_E=Path(args.e).name, family_F=Path(args.f).name)
    if args.format == "csv":
        text = harness.reports_to_csv([report])
    else:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = harness.run_verify(
        args.suite, qmax=args.qmax, dmax=args.dmax, trials=args.trials,
        seed=args.seed, workers=args.workers,
    )
    lines = [f"# seed={args.seed} qmax={args.qmax} dmax={args.dmax} trials={args.trials}"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.suite}: {r.checks} checks, {len(r.failures)} failures, {len(r.skipped)} skipped")
        lines += [f"  failure: {m}" for m in r.failures]
        lines += [f"  skipped: {m}" for m in r.skipped]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _config(args) -> harness.ExperimentConfig:
    fams = list(args.family or ["uniform-random"])
    if len(fams) == 1:
        fams.append("uniform-random")
    if len(fams) != 2:
        raise harness.ConfigError("--family may be given at most twice (E, then F)")
    params = _params(args.param)
    return harness.ExperimentConfig(
        qs=args.q, ds=args.d, ks=args.k or (1.0,), trials=args.trials, seed=args.seed,
        families=(fams[0], fams[1]), j=params.get("j", 1),
        translate=_int_list(args.translate) if args.translate else None,
        variety_text=args.variety, lines=_lines(args.lines), pinned=args.pinned,
    )


def cmd_sweep(args) -> int:
    rows = harness.run_sweep(_config(args), workers=args.workers)
    _emit(harness.rows_to_csv(rows, harness.SWEEP_FIELDS), args.out)
    return EXIT_OK


def cmd_probe(args) -> int:
    if not args.variety:
        raise harness.ConfigError("probe needs --variety")
    q, d = _single(args.q, "--q"), _single(args.d, "--d")
    V = geo.parse_variety(args.variety, q)
    if V.d != d:
        raise harness.ConfigError(f"variety has d={V.d}, expected {d}")
    rows = harness.run_probe(V, args.k or (1.0,), trials=args.trials, seed=args.seed, workers=args.workers)
    _emit(harness.rows_to_csv(rows, harness.PROBE_FIELDS), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffdot", description="Dot product sets over F_q^d")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=20):
        sp.add_argument("--q", type=_int_list, default=(5,), help="odd prime(s), comma separated")
        sp.add_argument("--d", type=_int_list, default=(2,), help="dimension(s), comma separated")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--out")
        sp.add_argument("--workers", type=int, default=1)

    def family_flags(sp):
        sp.add_argument("--family", action="append", choices=FAMILIES,
                        help="set family; give twice for (E, F) in sweep")
        sp.add_argument("--variety", help="diagonal quadratic a1,..,ad;b1,..,bd;c")
        sp.add_argument("--param", action="append", help="family parameter, e.g. j=1")
        sp.add_argument("--translate", help="comma separated translation vector")
        sp.add_argument("--lines", help="line directions for line-union, e.g. '1,0;1,1'")

    c = sub.add_parser("construct", help="build or sample a point set")
    common(c)
    family_flags(c)
    c.add_argument("--size", type=int, help="sample this many points (default: whole family)")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="report every statistic for a pair of sets")
    common(a)
    a.add_argument("--e", help="point-set file for E")
    a.add_argument("--f", help="point-set file for F")
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run verification suites")
    common(v, trials=200)
    v.add_argument("--suite", default="all", choices=(*harness.SUITES, "all"))
    v.add_argument("--qmax", type=int, default=13)
    v.add_argument("--dmax", type=int, default=3)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="density sweep, one CSV row per (q, d, K)")
    common(s)
    family_flags(s)
    s.add_argument("--k", type=_float_list, help="densities K with |E||F| = K q^d")
    s.add_argument("--pinned", action="store_true", help="also record the pinned-set fraction")
    s.add_argument("--format", choices=("csv",), default="csv")
    s.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("probe", help="probe a variety avoiding the origin")
    common(pr)
    pr.add_argument("--variety")
    pr.add_argument("--k", type=_float_list)
    pr.add_argument("--format", choices=("csv",), default="csv")
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except harness.ReportInvariantError as exc:
        print(f"ffdot: invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"ffdot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
