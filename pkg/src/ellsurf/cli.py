"""Command line front end.

    ellsurf catalog
    ellsurf analyze 9,1
    ellsurf frobenius 9,1 -p 5 --cache-dir .cache
    ellsurf picard 10,1
    ellsurf pair 6,5 --T0 2
    ellsurf verify-tables --scope tables-12

Every report is a JSON document with a schema_version field, printed to
stdout and optionally written to --json-out.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import catalog, get_surface, reference_polynomial
from .kodaira import SCHEMA_VERSION, good_prime_test
from .moduli import CASE_OF_2N, pairs_for, random_rationals
from .mordell_weil import EllipticSurface, rank_lower_bound, torsion_order
from .picard import CertificationError, certify_picard, known_factor
from .verify import SCOPES, check_fibers, check_sections, run_scope
from .zeta import NAIVE_THRESHOLD, BudgetExceeded, CountCache, frobenius_polynomial

log = logging.getLogger("ellsurf")

EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    surface: str | None = None
    primes: list = field(default_factory=list)
    r_max: int = 4
    workers: int = 1
    cache_dir: str | None = None
    naive_bsgs_threshold: int = NAIVE_THRESHOLD
    time_budget: float | None = None
    seed: int = 0


def _config(args) -> RunConfig:
    if args.workers < 1:
        raise SystemExit("--workers must be at least 1")
    return RunConfig(getattr(args, "surface", None), list(getattr(args, "p", None) or []),
                     args.r_max, args.workers, args.cache_dir, args.threshold,
                     args.time_budget, args.seed)


def _emit(report: dict, args) -> None:
    report = {"schema_version": SCHEMA_VERSION, **report}
    text = json.dumps(report, indent=2, sort_keys=False)
    print(text)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")


def _surface(parser, key):
    try:
        return get_surface(key)
    except KeyError:
        parser.error(f"unknown surface {key!r}; try `catalog`")


# -- subcommands ---------------------------------------------------------------

def cmd_catalog(args, parser) -> int:
    rows = [{"id": e.name, "kind": e.kind, "torsion": e.tors, "rank_Q": e.rank_q,
             "rank_Qbar": e.rank_qbar, "rho": e.rho, "primes": sorted(e.frobenius)}
            for e in catalog()]
    _emit({"command": "catalog", "surfaces": rows}, args)
    return 0


def cmd_analyze(args, parser) -> int:
    entry = _surface(parser, args.surface)
    S = EllipticSurface.from_entry(entry)
    an = S.analysis
    tors = torsion_order(S)
    fib, sec = check_fibers(entry), check_sections(entry)
    report = {"command": "analyze", "surface": entry.name, "analysis": an.to_dict(),
              "torsion": {"order": tors.order, "lower": tors.lower, "upper": tors.upper},
              "rank_lower_bound_Q": rank_lower_bound(S, entry),
              "rank_lower_bound_Qbar": rank_lower_bound(S, entry, geometric=True),
              "matches_table": fib.ok and sec.ok,
              "diff": {} if fib.ok and sec.ok else {"fibers": fib.detail, "sections": sec.detail}}
    _emit(report, args)
    return 0 if report["matches_table"] else EXIT_MISMATCH


def cmd_frobenius(args, parser) -> int:
    cfg = _config(args)
    entry = _surface(parser, args.surface)
    if not cfg.primes:
        parser.error("frobenius needs -p")
    out, status = [], 0
    for p in cfg.primes:
        if not good_prime_test(entry.a_invariants(), p):
            parser.error(f"{p} is not a good prime for {entry.name}")
        S = EllipticSurface.from_entry(entry, p)
        known, _, _ = known_factor(S, entry, p)
        try:
            f, pc = frobenius_polynomial(S.analysis, p, known, surface=entry.name,
                                         r_max=cfg.r_max, cache=CountCache(cfg.cache_dir),
                                         workers=cfg.workers,
                                         threshold=cfg.naive_bsgs_threshold,
                                         time_budget=cfg.time_budget)
        except BudgetExceeded as exc:
            print(f"budget exhausted at p = {p}: {exc}; finished counts are cached",
                  file=sys.stderr)
            return EXIT_BUDGET
        row = {"p": p, **f.to_dict(), "counts": pc.to_dict(), "counted_this_run": pc.computed}
        if p in entry.frobenius:
            row["matches_reference"] = f.f.coeffs == reference_polynomial(entry.frobenius[p]).coeffs
            if not row["matches_reference"]:
                status = EXIT_MISMATCH
        out.append(row)
    _emit({"command": "frobenius", "surface": entry.name, "results": out}, args)
    return status


def cmd_picard(args, parser) -> int:
    cfg = _config(args)
    entry = _surface(parser, args.surface)
    try:
        cert = certify_picard(entry, cfg.cache_dir, cfg.r_max, cfg.workers)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit({"command": "picard", **cert.to_dict()}, args)
    return 0


def cmd_pair(args, parser) -> int:
    cfg = _config(args)
    key = args.case.replace(" ", "").strip("()")
    if key not in CASE_OF_2N:
        parser.error(f"no tangent-line construction for {args.case!r}; "
                     f"choose from {', '.join(CASE_OF_2N)}")
    if args.T0 is not None:
        candidates = [Fraction(args.T0)]
    else:
        candidates = random_rationals(random.Random(cfg.seed), 50, height=12)
    for T0 in candidates:
        got = pairs_for(key, [T0], height=args.height, bound=args.bound)
        if got:
            pair = got[0]
            _emit({"command": "pair", **pair.to_dict(),
                   "j_invariants": [str(j) for j in pair.j_invariants()]}, args)
            return 0
    print("no verified pair found for the given T0 values", file=sys.stderr)
    return EXIT_MISMATCH


def cmd_verify_tables(args, parser) -> int:
    cfg = _config(args)
    checks = run_scope(args.scope, cfg.cache_dir, cfg.r_max, cfg.workers)
    ok = all(c.ok for c in checks)
    _emit({"command": "verify-tables", "scope": args.scope, "ok": ok,
           "checks": [c.to_dict() for c in checks]}, args)
    return 0 if ok else EXIT_MISMATCH


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r-max", type=int, default=4, help="largest extension degree to count over")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cache-dir", default=None, help="point-count cache directory")
    common.add_argument("--threshold", type=int, default=NAIVE_THRESHOLD,
                        help="field size above which BSGS replaces naive counting")
    common.add_argument("--time-budget", type=float, default=None, help="seconds")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json-out", default=None, help="also write the report here")
    common.add_argument("-v", "--verbose", action="store_true")

    # shared flags live on the subcommands (``ellsurf frobenius 9,1 -p 5 --workers 4``)
    ap = argparse.ArgumentParser(prog="ellsurf", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list the catalogued surfaces")
    a = sub.add_parser("analyze", parents=[common], help="fibres, torsion, section ranks")
    a.add_argument("surface")
    f = sub.add_parser("frobenius", parents=[common], help="f_p from point counts")
    f.add_argument("surface")
    f.add_argument("-p", type=int, action="append", required=True)
    pc = sub.add_parser("picard", parents=[common], help="certify the Picard number")
    pc.add_argument("surface")
    pr = sub.add_parser("pair", parents=[common], help="a verified 2N-congruent pair")
    pr.add_argument("case", help="6,5 | 10,1 | 10,3")
    pr.add_argument("--T0", default=None, help="rational fibre parameter, e.g. 2 or 3/2")
    pr.add_argument("--height", type=int, default=20, help="search height on the quartic")
    pr.add_argument("--bound", type=int, default=500, help="trace congruence checked up to here")
    v = sub.add_parser("verify-tables", parents=[common], help="rerun a reference scope")
    v.add_argument("--scope", choices=SCOPES, default="tables-12")
    return ap


_COMMANDS = {"catalog": cmd_catalog, "analyze": cmd_analyze, "frobenius": cmd_frobenius,
             "picard": cmd_picard, "pair": cmd_pair, "verify-tables": cmd_verify_tables}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return _COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
