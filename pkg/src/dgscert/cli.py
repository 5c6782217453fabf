"""Command-line entry point: ``dgscert {analyze,pair,census,snf}``.

Exit codes
----------
0   certified DGS (analyze) / success
2   input error (bad graph6, bad matrix file, size limit)
3   census audit failure
10  level bound greater than 1
11  inconclusive (singular walk matrix)
12  pair is not generalized cospectral
13  a verified non-isomorphic mate was found (pair)
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from math import gcd
from pathlib import Path

from . import __version__
from .census import CensusOptions, census
from .certify import DEFAULT_BUDGET_MS, Kind, certify
from .cospectral import check_regular_orthogonal, generalized_cospectral, recover_q, verify_q_action
from .errors import (
    CensusAuditError,
    DgsError,
    MalformedGraph6,
    MatrixFormatError,
    NotCospectral,
    SingularWalkMatrix,
    SizeLimitExceeded,
    SizeMismatch,
)
from .graph import Graph, are_isomorphic, emit_graph6, parse_adjacency_json, parse_graph6
from .linalg import IntMatrix, rank_mod_p, snf
from .primes import is_prime
from .report import census_json, dumps, q_json, verdict_json
from .walk import annihilator_poly, hat_walk_matrix, walk_matrix

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_AUDIT = 3
EXIT_BOUND = 10
EXIT_INCONCLUSIVE = 11
EXIT_NOT_COSPECTRAL = 12
EXIT_MATE = 13

VERDICT_EXIT = {
    Kind.CERTIFIED: EXIT_OK,
    Kind.LEVEL_BOUND: EXIT_BOUND,
    Kind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    Kind.MATE_FOUND: EXIT_MATE,
}

# config keys accepted in key=value files, with their converters
_CONFIG_KEYS = {
    "factor-budget": float,
    "json": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "jobs": int,
    "dedup": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "prime": lambda s: [int(x) for x in s.replace(",", " ").split()],
}

log = logging.getLogger("dgscert")


def read_config(path: str | Path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key.replace("-", "_")] = _CONFIG_KEYS[key](value)
    return out


def _read_graph(arg: str | None, adjlist: str | None) -> Graph:
    if adjlist:
        text = sys.stdin.read() if adjlist == "-" else Path(adjlist).read_text()
        return parse_adjacency_json(text)
    text = sys.stdin.read() if arg in (None, "-") else arg
    text = text.strip()
    if text.startswith(("[", "{")):
        return parse_adjacency_json(text)
    return parse_graph6(text.splitlines()[0] if text else "")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stderr.write(text)
    else:
        Path(path).write_text(text)


# analyze ------------------------------------------------------------------------


def analyze(g: Graph, primes: list[int] | None = None, budget_ms: float | None = DEFAULT_BUDGET_MS) -> dict:
    w = walk_matrix(g).w
    v = certify(g, budget_ms)
    ranks = {"2": rank_mod_p(w, 2)}
    if v.bound is not None:
        for p in v.bound.provenance:
            if p.rank is not None:
                ranks[str(p.prime)] = p.rank
    for p in primes or []:
        ranks[str(p)] = rank_mod_p(w, p)
    return {
        "graph6": emit_graph6(g),
        "n": g.n,
        "snf": [str(x) for x in v.snf],
        "det_w": str(v.det_w),
        "ranks": dict(sorted(ranks.items(), key=lambda kv: int(kv[0]))),
        "theorem1": None if v.theorem1 is None else {
            "certified": v.theorem1.certified,
            "reason": v.theorem1.reason,
            "quotient": None if v.theorem1.quotient is None else str(v.theorem1.quotient),
        },
        "level_bound": verdict_json(v)["bound"],
        "verdict": verdict_json(v),
    }


def _print_analysis(rep: dict) -> None:
    print(f"graph6      {rep['graph6']}  (n = {rep['n']})")
    print(f"SNF(W)      {' '.join(rep['snf'])}")
    print(f"det W       {rep['det_w']}")
    print("rank_p W    " + "  ".join(f"p={p}: {r}" for p, r in rep["ranks"].items()))
    t1 = rep["theorem1"]
    print(f"odd/sqfree  {'unresolved' if t1 is None else t1['reason']}")
    b = rep["level_bound"]
    if b:
        print(f"level bound every level divides {b['divisor']}{'' if b['complete'] else ' (incomplete factorization)'}")
        for p in b["provenance"]:
            print(f"  {p['prime']:>12}  {p['exponent_in_dn']} -> {p['exponent_in_bound']}  {p['rule']}  rank={p['rank']}")
    v = rep["verdict"]
    print(f"verdict     {v['kind']}: {v['reason']}")
    for note in v["notes"]:
        print(f"  note: {note}")


def cmd_analyze(args) -> int:
    try:
        g = _read_graph(args.graph6, args.adjlist)
    except (MalformedGraph6, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for p in args.prime or []:
        if not is_prime(p):
            print(f"error: --prime {p} is not prime", file=sys.stderr)
            return EXIT_INPUT
    if args.dump_w:
        _write(args.dump_w, walk_matrix(g).w.dumps())
    if args.dump_what:
        _write(args.dump_what, hat_walk_matrix(g, 2, annihilator_poly(g, 2)).dumps())
    rep = analyze(g, args.prime, args.factor_budget)
    if args.json:
        sys.stdout.write(dumps(rep))
    else:
        _print_analysis(rep)
    return VERDICT_EXIT[Kind(rep["verdict"]["kind"])]


# pair -----------------------------------------------------------------------------


def pair_report(g: Graph, h: Graph) -> dict:
    """Raises NotCospectral / SingularWalkMatrix like `recover_q`."""
    if g.n != h.n:
        raise SizeMismatch(f"vertex counts differ: {g.n} vs {h.n}")
    if not generalized_cospectral(g, h):
        raise NotCospectral("graphs are not generalized cospectral")
    iso = are_isomorphic(g, h) if g.n <= 16 else None
    rq = recover_q(g, h)
    dg, dh = snf(walk_matrix(g).w).last, snf(walk_matrix(h).w).last
    failed = check_regular_orthogonal(rq.q)
    return {
        "a": emit_graph6(g),
        "b": emit_graph6(h),
        "n": g.n,
        "generalized_cospectral": True,
        "isomorphic": (iso is not None) if g.n <= 16 else None,
        "isomorphism": None if iso is None else list(iso),
        "q": q_json(rq),
        "level": rq.level,
        "checks": {
            "orthogonal": "orthogonality" not in failed,
            "regular": "regularity" not in failed,
            "conjugation": verify_q_action(rq, g) == h,
            "level_divides_gcd_dn": gcd(dg, dh) % rq.level == 0,
            "permutation": rq.is_permutation,
        },
    }


def cmd_pair(args) -> int:
    try:
        g, h = parse_graph6(args.graph6_a), parse_graph6(args.graph6_b)
    except MalformedGraph6 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        rep = pair_report(g, h)
    except SizeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotCospectral as exc:
        print(f"error: NotCospectral: {exc}", file=sys.stderr)
        return EXIT_NOT_COSPECTRAL
    except SingularWalkMatrix as exc:
        print(f"error: SingularWalkMatrix: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if args.json:
        sys.stdout.write(dumps(rep))
    else:
        print(f"pair        {rep['a']}  {rep['b']}  (n = {rep['n']})")
        print("cospectral  yes (generalized)")
        print(f"isomorphic  {rep['isomorphic']}")
        print(f"level       {rep['level']}")
        print("Q =")
        width = max(len(x) for row in rep["q"] for x in row)
        for row in rep["q"]:
            print("  " + " ".join(x.rjust(width) for x in row))
        print("checks      " + ", ".join(f"{k}={v}" for k, v in rep["checks"].items()))
    return EXIT_OK if rep["isomorphic"] else EXIT_MATE


# census ---------------------------------------------------------------------------


def cmd_census(args) -> int:
    def progress(done, total):
        if not args.json and total > 1:
            print(f"\r  sweep {done}/{total}", end="", file=sys.stderr, flush=True)
            if done == total:
                print(file=sys.stderr)

    opts = CensusOptions(
        dedup=args.dedup,
        jobs=args.jobs,
        allow_n8=args.allow_n8,
        budget_ms=args.factor_budget,
        progress=progress,
    )
    try:
        rep = census(args.n, opts)
    except SizeLimitExceeded as exc:
        print(f"error: SizeLimitExceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CensusAuditError as exc:
        print(f"error: audit failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"census-n{args.n}.json").write_text(dumps(census_json(rep)))
    (out / f"census-n{args.n}-pairs.txt").write_text(rep.pair_lines())
    if args.json:
        sys.stdout.write(dumps(census_json(rep)))
        return EXIT_OK
    certified = sum(1 for r in rep.verdict_audit if r["verdict"] == Kind.CERTIFIED.value)
    print(f"n = {rep.n}: {rep.total_graphs} labeled graphs, {rep.classes} isomorphism classes")
    print(f"generalized-cospectral buckets with mates: {len(rep.buckets)} ({len(rep.pairs)} pairs)")
    print(f"certified DGS classes: {certified}; audit disagreements: {len(rep.disagreements)}")
    for k, v in rep.checks.items():
        print(f"  {k}: {v}")
    print(f"wrote {out / f'census-n{args.n}.json'} and {out / f'census-n{args.n}-pairs.txt'}")
    return EXIT_OK


# snf ------------------------------------------------------------------------------


def cmd_snf(args) -> int:
    try:
        text = sys.stdin.read() if args.matrix_file == "-" else Path(args.matrix_file).read_text()
        m = IntMatrix.parse(text)
    except (OSError, MatrixFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    d = [str(x) for x in snf(m).d]
    if args.json:
        sys.stdout.write(json.dumps(d) + "\n")
    else:
        print(" ".join(d))
    return EXIT_OK


# parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgscert", description="Exact DGS certificates for graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="key=value file mirroring the flags; explicit flags win")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", default=None, help="machine-readable output only")
        p.add_argument("--factor-budget", type=float, default=None, metavar="MS",
                       help=f"time budget for factoring d_n (default {DEFAULT_BUDGET_MS:g} ms)")

    p = sub.add_parser("analyze", help="certify or bound one graph")
    p.add_argument("graph6", nargs="?", help="graph6 string (default: read stdin)")
    p.add_argument("--adjlist", metavar="FILE", help="adjacency-list JSON instead of graph6")
    p.add_argument("--prime", type=int, action="append", default=None, help="also report rank_p W")
    p.add_argument("--dump-w", metavar="FILE", help="write W in matrix text format ('-' for stderr)")
    p.add_argument("--dump-what", metavar="FILE", help="write the compressed walk matrix at p = 2")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pair", help="recover Q for a generalized-cospectral pair")
    p.add_argument("graph6_a")
    p.add_argument("graph6_b")
    common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("census", help="exhaustive census of all graphs on n vertices")
    p.add_argument("n", type=int)
    p.add_argument("--out-dir", default=".", help="directory for the JSON report and pair list")
    p.add_argument("--dedup", dest="dedup", action="store_true", default=None,
                   help="list only class representatives in mate buckets (default)")
    p.add_argument("--no-dedup", dest="dedup", action="store_false",
                   help="also list every labeled member of mate buckets")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for the sweep")
    p.add_argument("--allow-n8", action="store_true", help="permit n = 8 (2^28 labeled graphs)")
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("snf", help="Smith normal form of a matrix file")
    p.add_argument("matrix_file", help="matrix text file ('-' for stdin)")
    p.add_argument("--json", action="store_true", default=None)
    p.set_defaults(func=cmd_snf)
    return parser


_DEFAULTS = {"json": False, "factor_budget": DEFAULT_BUDGET_MS, "jobs": 1, "dedup": True, "prime": None}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg = {}
    if args.config:
        try:
            cfg = read_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: config: {exc}", file=sys.stderr)
            return EXIT_INPUT
    for key, default in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, cfg.get(key, default))
    try:
        return args.func(args)
    except DgsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
