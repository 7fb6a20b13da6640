"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed (invalid family, LYM bound
exceeded, chain not forbidden), 2 usage or input error.  Data goes to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import factorial

from . import chains, concentration, cutpoint, search
from .core import (
    MAX_N,
    Family,
    FamilyFormatError,
    TiltParams,
    elements_of,
    family_from_json,
    family_to_json,
    mask_from_elements,
    mirror,
    normalize_params,
    verify_family,
)

REFS = {
    "verify": {"valid": "forbidden-pair definition"},
    "cutpoint": {"cutpoints": "cut-point existence lemma", "trace": "crossing functions f(A,u), g(A,u)"},
    "chains": {"forbidden": "chain forbidden-pair property"},
    "lym": {"per_x": "LYM-type inequality per cut point", "double_count": "permutation double counting"},
    "concentration": {
        "bandsize": "band family size lemma",
        "band_bound": "band family size lemma, constant 2",
        "per_x": "Hoeffding tail bound per prefix",
        "window": "cut-point concentration lemma",
        "upper_bound": "main theorem, explicit finite-n form",
    },
    "search": {"size": "maximum independent set of the conflict graph"},
    "construct": {"valid": "forbidden-pair definition"},
}


class UsageError(Exception):
    pass


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def emit(obj: dict, args) -> None:
    if getattr(args, "refs", False):
        obj = dict(obj)
        obj["refs"] = REFS.get(args.command, {})
    sys.stdout.write(dumps(obj) + "\n")


def _n(value: str) -> int:
    n = int(value)
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n must be in [1, {MAX_N}]")
    return n


def _nonneg(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _params(args) -> TiltParams:
    try:
        return TiltParams(args.p, args.q, getattr(args, "patterns", True))
    except ValueError as exc:
        raise UsageError(f"p/q: {exc}") from None


def _read_family(path: str) -> tuple[Family, TiltParams]:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"file: {exc}") from None
    return family_from_json(text)


# --- subcommands -------------------------------------------------------------

def cmd_verify(args) -> int:
    fam, params = _read_family(args.file)
    v = verify_family(fam, params, args.max_conflicts)
    out: dict = {"valid": v.valid}
    if not v.valid:
        out["conflicts"] = [[elements_of(F), elements_of(G)] for F, G in v.conflicts]
    emit(out, args)
    return 0 if v.valid else 1


def _positive_pq(p: int, q: int) -> None:
    if p < 1 or q < 1:
        raise UsageError("p/q: cut points need p >= 1 and q >= 1")


def cmd_cutpoint(args) -> int:
    if args.file:
        fam, params = _read_family(args.file)
        n = fam.n
        p = args.p if args.p is not None else params.p
        q = args.q if args.q is not None else params.q
        sets = list(fam.members)
    else:
        if args.n is None or args.set is None or args.p is None or args.q is None:
            raise UsageError("set: give --file, or all of --n --set --p --q")
        n, p, q = args.n, args.p, args.q
        try:
            elems = [int(t) for t in args.set.split(",") if t.strip()]
            sets = [mask_from_elements(elems, n)]
        except ValueError as exc:
            raise UsageError(f"set: {exc}") from None
    _positive_pq(p, q)
    status = 0
    for A in sets:
        try:
            rep = cutpoint.cut_points(A, p, q, n, trace=args.trace)
        except cutpoint.NoCutPoint:
            emit({"set": elements_of(A), "cutpoints": []}, args)
            status = 1
            continue
        out: dict = {"set": elements_of(A), "cutpoints": list(rep.cutpoints)}
        if args.trace:
            out["trace"] = [[frac(f), frac(g)] for f, g in rep.trace]
        emit(out, args)
    return status


def cmd_chains(args) -> int:
    import random

    n, p, q = args.n, args.p, args.q
    _positive_pq(p, q)
    xs = [args.x] if args.x is not None else list(range(n + 1))
    if any(not 0 <= x <= n for x in xs):
        raise UsageError(f"x: must be in [0, {n}]")
    rs = [args.r] if args.r is not None else list(range(q))
    if any(not 0 <= r < q for r in rs):
        raise UsageError(f"r: must be in [0, {q})")
    ok = True
    for x in xs:
        for r in rs:
            rng = random.Random(args.seed * 1_000_003 + x * 1009 + r)
            perms = [chains.BlockPermutation.identity(x, n)]
            perms += [chains.BlockPermutation.random(x, n, rng) for _ in range(args.samples)]
            for pi in perms:
                spec = chains.ChainSpec(x, r, pi, p, q, n)
                good = chains.verify_chain_forbidden(spec)
                ok = ok and good
                emit(
                    {
                        "x": x,
                        "r": r,
                        "pi": pi.as_list(),
                        "members": [elements_of(m) for m in spec.members],
                        "forbidden": good,
                    },
                    args,
                )
    return 0 if ok else 1


def cmd_lym(args) -> int:
    fam, params = _read_family(args.file)
    params = normalize_params(params)
    p, q = params.p, params.q
    _positive_pq(p, q)
    mirrored = p > q
    if mirrored:
        fam = Family.from_masks(fam.n, (mirror(F, fam.n) for F in fam))
        p, q = q, p
    parts = chains.partition_by_cut_point(fam, p, q)
    rows = []
    ok = True
    for x in sorted(parts):
        s = chains.lym_sum(parts[x], x, p, q, fam.n)
        row: dict = {"x": x, "count": len(parts[x]), "sum": frac(s), "leq_q": s <= q}
        ok = ok and s <= q
        if args.double_count and factorial(x) * factorial(fam.n - x) <= chains.PERMUTATION_CAP:
            dc = chains.double_count_check(fam, x, p, q)
            row["double_count"] = {"lhs": dc.lhs, "analytic": dc.analytic, "rhs": dc.rhs}
            ok = ok and dc.identity_ok
        rows.append(row)
    emit({"n": fam.n, "p": p, "q": q, "mirrored": mirrored, "per_x": rows, "pass": ok}, args)
    return 0 if ok else 1


def cmd_concentration(args) -> int:
    n, p, q = args.n, args.p, args.q
    _positive_pq(p, q)
    if n < 2:
        raise UsageError("n: concentration needs n >= 2")
    spec = concentration.BandSpec(n)
    per_x = [
        {
            "x": x,
            "violators": concentration.per_x_violators(spec, x),
            "chernoff_rhs": concentration.chernoff_rhs(n, x, spec.T),
        }
        for x in range(1, n + 1)
    ]
    lo, hi = concentration.window(n, p, q)
    out: dict = {
        "n": n,
        "bandsize": concentration.count_band_family(spec),
        "band_bound": concentration.band_bound(n),
        "per_x": per_x,
        "window": [lo, hi],
        "upper_bound": concentration.explicit_upper_bound(n, p, q),
    }
    if args.sample is not None:
        samples = concentration.sample_outside_band(n, args.sample, args.seed)
        out["window_check"] = concentration.window_stats(n, p, q, samples)
    emit(out, args)
    return 0


def cmd_search(args) -> int:
    if args.n > search.FULL_LATTICE_MAX_N:
        raise UsageError(f"n: exact search supports n <= {search.FULL_LATTICE_MAX_N}")
    params = _params(args)
    budget = None if args.budget_ms is None else args.budget_ms / 1000.0
    workers = 1 if args.canonical else args.workers
    res = search.max_family_exact(args.n, params, budget, workers)
    emit(res.to_json(), args)
    return 0


def cmd_construct(args) -> int:
    params = _params(args)
    if args.kind == "middle":
        fam = search.construct_middle_level(args.n)
    elif args.kind == "levels":
        try:
            fam = search.construct_consecutive_levels(args.n, args.p, args.q)
        except ValueError as exc:
            raise UsageError(f"p/q: {exc}") from None
    else:
        if args.n > search.FULL_LATTICE_MAX_N:
            raise UsageError(f"n: greedy supports n <= {search.FULL_LATTICE_MAX_N}")
        fam = search.greedy_family(args.n, params, args.policy, args.seed)
    out = family_to_json(fam, params)
    out["valid"] = verify_family(fam, params, max_conflicts=1).valid
    emit(out, args)
    return 0


def cmd_sweep(args) -> int:
    if args.n_max > search.FULL_LATTICE_MAX_N or args.n_min > args.n_max:
        raise UsageError(f"n-max: need n-min <= n-max <= {search.FULL_LATTICE_MAX_N}")
    params = _params(args)
    budget = None if args.budget_ms is None else args.budget_ms / 1000.0
    rows = search.sweep(range(args.n_min, args.n_max + 1), params, args.mode, budget, args.seed)
    text = search.rows_to_csv(rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--refs", action="store_true", help="annotate reported quantities with the result they check")

    ap = argparse.ArgumentParser(prog="tiltsperner", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def pq(sp, required=True, patterns=False):
        sp.add_argument("--p", type=_nonneg, required=required)
        sp.add_argument("--q", type=_nonneg, required=required)
        if patterns:
            sp.add_argument("--patterns", action=argparse.BooleanOptionalAction, default=True)

    sp = sub.add_parser("verify", parents=[common], help="check a family JSON")
    sp.add_argument("--file", required=True, help="family JSON path, or - for stdin")
    sp.add_argument("--max-conflicts", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cutpoint", parents=[common], help="cut points of a set or of every family member")
    sp.add_argument("--file")
    sp.add_argument("--n", type=_n)
    sp.add_argument("--set", help="comma-separated elements, e.g. 1,3")
    pq(sp, required=False)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_cutpoint)

    sp = sub.add_parser("chains", parents=[common], help="chain members and forbidden-pair verdicts")
    sp.add_argument("--n", type=_n, required=True)
    pq(sp)
    sp.add_argument("--x", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("--samples", type=_nonneg, default=0)
    sp.set_defaults(func=cmd_chains)

    sp = sub.add_parser("lym", parents=[common], help="per-cut-point LYM sums of a family")
    sp.add_argument("--file", required=True)
    sp.add_argument("--double-count", action="store_true")
    sp.set_defaults(func=cmd_lym)

    sp = sub.add_parser("concentration", parents=[common], help="band family and cut-point window")
    sp.add_argument("--n", type=_n, required=True)
    pq(sp)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sample", type=_nonneg)
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.set_defaults(func=cmd_concentration)

    sp = sub.add_parser("search", parents=[common], help="exact maximum family size")
    sp.add_argument("--n", type=_n, required=True)
    pq(sp, patterns=True)
    sp.add_argument("--budget-ms", type=_nonneg)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--canonical", action="store_true", help="single worker, reproducible witness")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("construct", parents=[common], help="emit a constructed family")
    sp.add_argument("--n", type=_n, required=True)
    pq(sp, patterns=True)
    sp.add_argument("--kind", choices=("middle", "levels", "greedy"), default="levels")
    sp.add_argument("--policy", choices=search.ORDER_POLICIES, default="middle")
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("sweep", parents=[common], help="CSV of best sizes against bounds")
    sp.add_argument("--n-min", type=_n, default=1)
    sp.add_argument("--n-max", type=_n, required=True)
    pq(sp, patterns=True)
    sp.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    sp.add_argument("--budget-ms", type=_nonneg, default=1000)
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FamilyFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
