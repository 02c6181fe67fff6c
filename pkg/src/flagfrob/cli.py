"""Command-line surface for the cohomology and decomposition engines.

Subcommands mirror the library: line-bundle cohomology with certificates,
Euler characteristics, the bundle catalog, semiorthogonality verification,
the pushforward decomposition, the general-n conjecture checks, and the
self-test suite.  All numbers in JSON output are decimal strings so that
64-bit consumers never truncate; key order is deterministic.

Exit codes: 0 success / verified; 2 identity failure or violation found;
3 incomplete (unresolved bounded results); 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .coh import coh_line_charp, euler_char
from .collections import verify_semiorthogonality
from .frobdecomp import (
    VARIETIES,
    build_collection,
    conjecture_check,
    decompose,
)
from .rootsys import TypeALattice
from .sheaves import build_catalog

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_INCOMPLETE = 3
EXIT_USAGE = 64


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _parse_weight(text: str, rank: int):
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != rank:
        raise ValueError("weight needs %d comma-separated integers" % rank)
    return tuple(int(s) for s in parts)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    elif args.format == "csv":
        rows = payload.get("csv", [])
        for row in rows:
            print(",".join(str(x) for x in row))
    else:
        print(text)


def _threads(args) -> int:
    if args.jobs:
        return args.jobs
    env = os.environ.get("FLAGFROB_THREADS")
    if env and env.isdigit() and int(env) > 0:
        return int(env)
    return 1


def cmd_coh(args) -> int:
    lat = TypeALattice(args.n)
    lam = _parse_weight(args.weight, lat.rank)
    state, cert = coh_line_charp(lat, lam, args.p)
    payload = {
        "n": str(args.n),
        "p": str(args.p),
        "weight": [str(x) for x in lam],
        "determined": state.determined,
        "support": [str(d) for d in sorted(state.support)],
        "euler": str(state.euler),
        "dims": {str(d): str(v) for d, v in sorted((state.dims or {}).items())},
        "labels": {
            str(d): [str(x) for x in mu]
            for d, mu in sorted((state.labels or {}).items())
        },
        "csv": [["degree", "dim"]]
        + [[d, v] for d, v in sorted((state.dims or {}).items())],
    }
    text = "H(L_%s) over n=%d, p=%d: %s" % (list(lam), args.n, args.p, state)
    if args.explain:
        text += "\n" + cert.render()
        payload["certificate"] = cert.render().splitlines()
    _emit(args, payload, text)
    return EXIT_OK if state.determined else EXIT_INCOMPLETE


def cmd_euler(args) -> int:
    lat = TypeALattice(args.n)
    lam = _parse_weight(args.weight, lat.rank)
    value = euler_char(lat, lam)
    payload = {
        "n": str(args.n),
        "weight": [str(x) for x in lam],
        "euler": str(value),
        "csv": [["euler"], [value]],
    }
    _emit(args, payload, "euler characteristic of L_%s = %d" % (list(lam), value))
    return EXIT_OK


def cmd_catalog(args) -> int:
    cat = build_catalog(args.n)
    payload = cat.to_json_dict()
    lines = ["catalog for n=%d (%d entries)" % (args.n, len(cat.names()))]
    rows = [["name", "rank"]]
    for name in cat.names():
        e = cat[name]
        lines.append(
            "  %-22s rank %-5d presentations: %s"
            % (name, e.rank, ", ".join(c.label or c.kind for c in e.chains))
        )
        rows.append([name, e.rank])
    payload["csv"] = rows
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    n = VARIETIES[args.variety]
    cat = build_catalog(n)
    coll = build_collection(cat, args.variety)
    from .collections import right_dual_basis
    from .frobdecomp import _all_tower_chains

    try:
        duals, _ = right_dual_basis(cat, coll)
        towers = _all_tower_chains(cat, coll, duals)
    except Exception:
        towers = None
    report = verify_semiorthogonality(
        cat, coll, args.p, variety=args.variety, jobs=_threads(args),
        extra_chains=towers or None,
    )
    payload = report.to_json_dict()
    payload["csv"] = [["later", "earlier", "status"]] + [
        [q.later, q.earlier, q.status] for q in report.pairs
    ]
    _emit(args, payload, report.render())
    if report.violations:
        return EXIT_FAIL
    return EXIT_OK


def cmd_decompose(args) -> int:
    n = VARIETIES[args.variety]
    cat = build_catalog(n)
    report = decompose(cat, args.variety, args.p)
    payload = report.to_json_dict()
    payload["csv"] = [["name", "rank", "degree", "multiplicity"]] + [
        [s.name, s.rank, s.degree, s.multiplicity] for s in report.summands
    ]
    _emit(args, payload, report.render())
    if report.verdict == "incomplete":
        return EXIT_INCOMPLETE
    return EXIT_OK if report.verdict == "pass" else EXIT_FAIL


def cmd_conjecture(args) -> int:
    report = conjecture_check(args.n, args.p)
    payload = report.to_json_dict()
    payload["csv"] = [["name", "degree", "status"]] + [
        [name, deg, status] for name, deg, status, _ in report.concentration
    ]
    _emit(args, payload, report.render())
    if report.verdict == "fail":
        return EXIT_FAIL
    if report.verdict == "conditional":
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Run the acceptance suite (pytest) for this installation."""
    import subprocess

    here = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    tests = os.path.join(here, "tests")
    target = tests if os.path.isdir(tests) else "--pyargs flagfrob"
    cmd = [sys.executable, "-m", "pytest", "-q", target]
    if args.fast:
        cmd.append("-m")
        cmd.append("not slow")
    proc = subprocess.run(cmd)
    return EXIT_OK if proc.returncode == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json", "csv"), default="text",
        help="output format (data goes to stdout, diagnostics to stderr)",
    )
    common.add_argument("--jobs", type=int, default=0,
                        help="worker threads (default: FLAGFROB_THREADS or 1)")
    ap = argparse.ArgumentParser(
        prog="flagfrob",
        description="exact characteristic-p cohomology and Frobenius "
        "pushforward decompositions on incidence flag varieties",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("coh", help="line-bundle cohomology on the flag variety")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--weight", required=True, help="comma-separated integers")
    p.add_argument("--explain", action="store_true", help="emit the certificate")
    p.set_defaults(func=cmd_coh)

    p = add_parser("euler", help="exact Euler characteristic of a line bundle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weight", required=True)
    p.set_defaults(func=cmd_euler)

    p = add_parser("catalog", help="named bundle catalog with presentations")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_catalog)

    p = add_parser("verify", help="semiorthogonality report for a collection")
    p.add_argument("--variety", choices=sorted(VARIETIES), required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = add_parser("decompose", help="Frobenius pushforward decomposition")
    p.add_argument("--variety", choices=sorted(VARIETIES), required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_decompose)

    p = add_parser("conjecture", help="general-n conjecture necessary checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_conjecture)

    p = add_parser("selftest", help="run the acceptance test suite")
    p.add_argument("--fast", action="store_true", help="skip slow tests")
    p.set_defaults(func=cmd_selftest)
    return ap


def _fold_weight_args(argv):
    """Join '--weight -1,0,5' into '--weight=-1,0,5' so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--weight" and i + 1 < len(argv):
            out.append("--weight=" + argv[i + 1])
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _fold_weight_args(list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        if getattr(args, "p", None) is not None and not _is_prime(args.p):
            print("error: --p must be a prime", file=sys.stderr)
            return EXIT_USAGE
        if getattr(args, "n", None) is not None and args.n < 2:
            print("error: --n must be at least 2", file=sys.stderr)
            return EXIT_USAGE
        if getattr(args, "p", None) is not None and args.p <= 2:
            print("note: p <= 2 is outside the collection hypotheses (p > 2); "
                  "results are flagged non-conforming", file=sys.stderr)
        return args.func(args)
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
