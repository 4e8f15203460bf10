"""Command-line front end: one subcommand per experiment family.

Every run writes a record file (JSON or CSV) plus a manifest carrying the
schema version, the seed and a hash of the resolved configuration; the
same config and seed always reproduce the same bytes apart from the
elapsed_ms timing field.  --plot additionally renders a PNG next to the
records.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__, bounds, charsums, ffield, hilbert, multstats, plotting, primes
from .errors import ResourceCapError, ValidationError
from .patterns import (
    DigitPattern,
    enumerate_members,
    pattern_from_string,
    pattern_to_string,
    random_pattern,
)
from .reporting import (
    Stopwatch,
    config_hash,
    make_manifest,
    write_csv_report,
    write_json_report,
    write_manifest,
)

# execution/presentation knobs that do not affect results
_NON_CONFIG_KEYS = {"out", "format", "plot", "threads", "func"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digitsieve",
        description="Experiments on integers with prescribed binary digits.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomized choices")
    common.add_argument("--out", type=Path, default=Path("reports"), help="output directory")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--plot", action="store_true", help="also render a PNG figure")
    common.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("DIGITSIEVE_THREADS", "1")),
        help="worker pool size (default: DIGITSIEVE_THREADS or 1)",
    )
    common.add_argument("--max-members", type=int, default=1 << 28, help="enumeration cap")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list the members of a pattern")
    p.add_argument("--pattern", required=True, help="MSB-first string over {0,1,*}")
    p.add_argument("--limit", type=int, default=1 << 16, help="print at most this many members")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("cong", parents=[common], help="divisibility counts vs predicted decay")
    p.add_argument("--pattern", required=True)
    p.add_argument("--q", default=None, help="comma-separated moduli")
    p.add_argument("--q-range", default=None, help="lo:hi[:step] modulus range")
    p.set_defaults(func=_cmd_cong)

    p = sub.add_parser("squarefree", parents=[common], help="squarefree counts over pattern sets")
    p.add_argument("--pattern", action="append", default=[], help="repeatable")
    p.add_argument("--random", type=int, default=0, help="number of random starred patterns")
    p.add_argument("--n", type=int, default=24, help="bit length for random patterns")
    p.add_argument("--kappa-max", type=float, default=0.4)
    p.add_argument("--method", choices=("direct", "moebius", "both"), default="both")
    p.set_defaults(func=_cmd_squarefree)

    p = sub.add_parser("euler", parents=[common], help="Euler phi(s)/s averages over pattern sets")
    p.add_argument("--pattern", action="append", default=[])
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--n", type=int, default=24)
    p.add_argument("--kappa-max", type=float, default=0.6)
    p.add_argument("--kappa-min", type=float, default=0.0)
    p.set_defaults(func=_cmd_euler)

    p = sub.add_parser("expsum", parents=[common], help="exponential sums over a pattern set")
    p.add_argument("--pattern", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", default="1", help="comma-separated numerators (default 1)")
    p.set_defaults(func=_cmd_expsum)

    p = sub.add_parser("qrsplit", parents=[common], help="quadratic residue split of pattern sets")
    p.add_argument("--pattern", action="append", default=[])
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--kappa-max", type=float, default=0.45)
    p.add_argument("--prime", default=None, help="comma-separated primes")
    p.add_argument("--prime-count", type=int, default=1, help="primes drawn from the dyadic window")
    p.set_defaults(func=_cmd_qrsplit)

    p = sub.add_parser("bounds", parents=[common], help="decay exponents tau/theta")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("dyadic", parents=[common], help="square-divisibility sums over dyadic windows")
    p.add_argument("--pattern", required=True)
    p.add_argument("--a", required=True, help="comma-separated window starts")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=_cmd_dyadic)

    p = sub.add_parser("hilbert", parents=[common], help="build a cube and scan it")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a0", type=int, default=0)
    p.add_argument("--gens", required=True, help="comma-separated generators")
    p.set_defaults(func=_cmd_hilbert)

    p = sub.add_parser("fF", parents=[common], help="largest cube dimensions f(p), F(p)")
    p.add_argument("--primes", required=True, help="comma-separated odd primes")
    p.add_argument("--exact-cap", type=int, default=hilbert.DEFAULT_EXACT_CAP)
    p.add_argument("--restarts", type=int, default=hilbert.DEFAULT_RESTARTS)
    p.add_argument("--table", type=Path, default=None, help="incremental JSON table to reuse/update")
    p.add_argument("--force", action="store_true", help="recompute primes already in the table")
    p.set_defaults(func=_cmd_ff)

    p = sub.add_parser("ffield", parents=[common], help="restricted-digit residue split in F_{p^n}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, default=None, help="digit-set size (default p)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=_cmd_ffield)

    return parser


def _resolved_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NON_CONFIG_KEYS}


def _emit(
    args: argparse.Namespace,
    records: list[dict],
    *,
    csv_fields: tuple[str, ...],
    stem: str | None = None,
) -> Path:
    cfg = _resolved_config(args)
    chash = config_hash(cfg)
    manifest = make_manifest(__version__, args.seed, chash)
    for r in records:
        r["config_hash"] = chash
    stem = stem or args.command
    args.out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        path = args.out / f"{stem}.json"
        write_json_report(path, manifest, records)
    else:
        path = args.out / f"{stem}.csv"
        write_csv_report(path, csv_fields + ("config_hash",), [{k: r.get(k, "") for k in csv_fields + ("config_hash",)} for r in records])
        write_manifest(args.out / f"{stem}.manifest.json", manifest)
    return path


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad {what}: {text!r}") from exc


def _parse_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValidationError(f"range must be lo:hi[:step], got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step < 1 or hi < lo:
        raise ValidationError(f"bad range {text!r}")
    return list(range(lo, hi + 1, step))


def _check_member_cap(pat: DigitPattern, args: argparse.Namespace) -> DigitPattern:
    if pat.member_count() > args.max_members:
        raise ResourceCapError(f"member count {pat.member_count()} exceeds cap {args.max_members}")
    return pat


def _collect_patterns(args: argparse.Namespace, rng: random.Random, *, starred: bool, kappa_min: float = 0.0) -> list[DigitPattern]:
    pats = [pattern_from_string(s) for s in args.pattern]
    if args.random:
        k_hi = int(args.kappa_max * args.n)
        k_lo = max(1, int(kappa_min * args.n))
        if k_hi < k_lo:
            raise ValidationError(f"kappa range admits no k for n={args.n}")
        for _ in range(args.random):
            k = rng.randint(k_lo, k_hi)
            pats.append(random_pattern(rng, args.n, k, starred=starred))
    if not pats:
        raise ValidationError("no patterns given (use --pattern or --random)")
    for pat in pats:
        _check_member_cap(pat, args)
    return pats


def _pool_map(threads: int, fn, items):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_enumerate(args: argparse.Namespace) -> list[dict]:
    watch = Stopwatch()
    pat = pattern_from_string(args.pattern, allow_degenerate=True)
    total = pat.member_count()
    if total > args.max_members:
        raise ResourceCapError(f"member count {total} exceeds cap {args.max_members}")
    members = []
    for i, m in enumerate(enumerate_members(pat)):
        if i >= args.limit:
            break
        members.append(m)
    for m in members:
        print(m)
    if total > len(members):
        print(f"... ({total - len(members)} more)", file=sys.stderr)
    record = {
        "statistic": "enumerate",
        "pattern": pattern_to_string(pat),
        "n": pat.n,
        "k": pat.k,
        "kappa": pat.kappa,
        "total": total,
        "members": members,
        "truncated": total > len(members),
        "elapsed_ms": watch.elapsed_ms(),
    }
    _emit(args, [record], csv_fields=("statistic", "pattern", "n", "k", "kappa", "total"))
    return [record]


def _cmd_cong(args: argparse.Namespace) -> list[dict]:
    pat = _check_member_cap(pattern_from_string(args.pattern), args)
    if args.q:
        q_list = _parse_int_list(args.q, "modulus list")
    elif args.q_range:
        q_list = _parse_range(args.q_range)
    else:
        raise ValidationError("need --q or --q-range")
    watch = Stopwatch()
    rows = bounds.measure_cong_decay(pat, q_list)
    records = [dict(r.row(), statistic="cong_decay", n=pat.n, kappa=pat.kappa) for r in rows]
    for r in records:
        r["elapsed_ms"] = watch.elapsed_ms()
        print(f"q={r['q']:>8}  count={r['count']:>10}  predicted_exp={r['predicted_exponent']:.4f}  measured_exp={r['measured_exponent']:.4f}")
    path = _emit(args, records, csv_fields=bounds.CongDecayRow.CSV_FIELDS)
    if args.plot:
        plotting.save_decay_plot(records, path.with_suffix(".png"), total=pat.member_count(), title=f"divisibility decay, pattern {args.pattern}")
    return records


def _one_squarefree(pat: DigitPattern, method: str) -> dict:
    watch = Stopwatch()
    if method in ("direct", "both"):
        rep = multstats.squarefree_count_direct(pat)
    else:
        rep = multstats.squarefree_count_moebius(pat)
    if method == "both":
        other = multstats.squarefree_count_moebius(pat)
        if other.count != rep.count:
            raise AssertionError(f"method disagreement on {pattern_to_string(pat)}: {rep.count} vs {other.count}")
    record = rep.record()
    record["method"] = method if method != "both" else "direct-sieve+moebius"
    record["pattern"] = pattern_to_string(pat)
    record["elapsed_ms"] = watch.elapsed_ms()
    return record


def _cmd_squarefree(args: argparse.Namespace) -> list[dict]:
    rng = random.Random(args.seed)
    pats = _collect_patterns(args, rng, starred=True)
    records = _pool_map(args.threads, lambda p: _one_squarefree(p, args.method), pats)
    for r in records:
        print(f"pattern {r['pattern']}: {r['value']}/{r['total']} squarefree, ratio {r['ratio']:.6f} (predicted {r['predicted']:.6f})")
    path = _emit(args, records, csv_fields=("statistic", "pattern", "n", "k", "kappa", "value", "total", "ratio", "predicted", "method"))
    if args.plot:
        plotting.save_ratio_plot(records, path.with_suffix(".png"), title="squarefree density vs kappa")
    return records


def _one_euler(pat: DigitPattern) -> dict:
    watch = Stopwatch()
    rep = multstats.euler_ratio_sum(pat)
    record = rep.record()
    record["pattern"] = pattern_to_string(pat)
    record["elapsed_ms"] = watch.elapsed_ms()
    return record


def _cmd_euler(args: argparse.Namespace) -> list[dict]:
    rng = random.Random(args.seed)
    pats = _collect_patterns(args, rng, starred=True, kappa_min=args.kappa_min)
    records = _pool_map(args.threads, _one_euler, pats)
    for r in records:
        print(f"pattern {r['pattern']}: sum {r['value']:.6f}, ratio {r['ratio']:.6f} (predicted {r['predicted']:.6f})")
    path = _emit(args, records, csv_fields=("statistic", "pattern", "n", "k", "kappa", "value", "total", "ratio", "predicted", "method"))
    if args.plot:
        plotting.save_ratio_plot(records, path.with_suffix(".png"), title="Euler ratio vs kappa")
    return records


def _cmd_expsum(args: argparse.Namespace) -> list[dict]:
    pat = _check_member_cap(pattern_from_string(args.pattern), args)
    a_list = _parse_int_list(args.a, "numerator list")
    records = []
    for a in a_list:
        watch = Stopwatch()
        res = charsums.exp_sum(pat, a, args.q)
        records.append(
            {
                "statistic": "exp_sum",
                "pattern": args.pattern,
                "n": pat.n,
                "kappa": pat.kappa,
                "q": args.q,
                "a": a,
                "re": res.re,
                "im": res.im,
                "magnitude": res.magnitude,
                "normalized": res.normalized,
                "reference": res.reference,
                "elapsed_ms": watch.elapsed_ms(),
            }
        )
        print(f"a={a:>6}: |S| = {res.magnitude:.6f}, normalized {res.normalized:.3e} (reference {res.reference:.3e})")
    _emit(args, records, csv_fields=("statistic", "pattern", "n", "kappa", "q", "a", "re", "im", "magnitude", "normalized", "reference"))
    return records


def _cmd_qrsplit(args: argparse.Namespace) -> list[dict]:
    rng = random.Random(args.seed)
    pats = _collect_patterns(args, rng, starred=False)
    if args.prime:
        prime_list = _parse_int_list(args.prime, "prime list")
    else:
        prime_list = []
        lo, hi = 1 << args.n, 1 << (args.n + 1)
        while len(prime_list) < args.prime_count:
            cand = primes.next_prime(rng.randrange(lo, hi))
            if cand < hi and cand not in prime_list:
                prime_list.append(cand)
        prime_list.sort()
    jobs = [(p, pat) for p in prime_list for pat in pats]

    def run(job):
        p, pat = job
        watch = Stopwatch()
        split = charsums.qr_split(pat, p)
        return {
            "statistic": "qr_split",
            "p": p,
            "pattern": pattern_to_string(pat),
            "n": pat.n,
            "kappa": pat.kappa,
            "plus": split.plus,
            "minus": split.minus,
            "zero": split.zero,
            "deviation": split.deviation,
            "elapsed_ms": watch.elapsed_ms(),
        }

    import warnings as _warnings

    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")  # window warnings handled by explicit prime choice
        records = _pool_map(args.threads, run, jobs)
    for r in records:
        print(f"p={r['p']} pattern {r['pattern']}: +{r['plus']} -{r['minus']} 0:{r['zero']}  dev {r['deviation']:.5f}")
    path = _emit(args, records, csv_fields=("p", "n", "kappa", "plus", "minus", "zero", "deviation"))
    if args.plot:
        plotting.save_deviation_plot(records, path.with_suffix(".png"), title="QR split deviations")
    return records


def _cmd_bounds(args: argparse.Namespace) -> list[dict]:
    watch = Stopwatch()
    params = bounds.BoundParams.from_ratios(args.kappa, args.rho)
    record = {
        "statistic": "bound_exponents",
        "kappa": params.kappa,
        "rho": params.rho,
        "tau": params.tau,
        "theta": params.theta,
        "residual": params.residual(),
        "elapsed_ms": watch.elapsed_ms(),
    }
    if args.kappa / 2 <= args.rho <= 0.5:
        record["two_window_exponent"] = bounds.predicted_two_window_exponent(args.kappa, args.rho)
    print(f"tau({args.kappa}, {args.rho}) = {params.tau:.12f}")
    print(f"theta({args.kappa}, {args.rho}) = {params.theta:.12f}")
    _emit(args, [record], csv_fields=("statistic", "kappa", "rho", "tau", "theta", "residual"))
    return [record]


def _cmd_dyadic(args: argparse.Namespace) -> list[dict]:
    pat = _check_member_cap(pattern_from_string(args.pattern), args)
    a_list = _parse_int_list(args.a, "window list")
    records = []
    for a in a_list:
        watch = Stopwatch()
        res = bounds.measure_dyadic_square_sum(pat, a, epsilon=args.epsilon)
        records.append(
            {
                "statistic": "dyadic_square_sum",
                "pattern": args.pattern,
                "n": pat.n,
                "kappa": pat.kappa,
                "a": res.a,
                "value": res.value,
                "reference": res.reference,
                "epsilon": res.epsilon,
                "elapsed_ms": watch.elapsed_ms(),
            }
        )
        print(f"A={a:>8}: sum {res.value} (reference {res.reference:.3f})")
    path = _emit(args, records, csv_fields=("statistic", "pattern", "n", "kappa", "a", "value", "reference", "epsilon"))
    if args.plot:
        plotting.save_dyadic_plot(records, path.with_suffix(".png"), title=f"dyadic square sums, pattern {args.pattern}")
    return records


def _cmd_hilbert(args: argparse.Namespace) -> list[dict]:
    gens = _parse_int_list(args.gens, "generator list")
    watch = Stopwatch()
    cube = hilbert.build_cube(args.p, args.a0, gens)
    ap = hilbert.longest_ap(cube.elements, args.p)
    sums = hilbert.sigma_star(gens, args.p)
    record = {
        "statistic": "hilbert_cube",
        "p": args.p,
        "a0": cube.a0,
        "gens": list(cube.gens),
        "size": len(cube.elements),
        "elements": sorted(cube.elements) if len(cube.elements) <= 4096 else None,
        "longest_ap": {"start": ap.start, "difference": ap.difference, "length": ap.length},
        "sigma_star_size": len(sums),
        "elapsed_ms": watch.elapsed_ms(),
    }
    print(f"H({cube.a0}; {','.join(map(str, cube.gens))}) in F_{args.p}: {len(cube.elements)} elements")
    print(f"longest AP: start {ap.start}, difference {ap.difference}, length {ap.length}")
    _emit(args, [record], csv_fields=("statistic", "p", "a0", "size", "sigma_star_size"))
    return [record]


def _cmd_ff(args: argparse.Namespace) -> list[dict]:
    prime_list = _parse_int_list(args.primes, "prime list")
    table: dict[str, dict] = {}
    if args.table and args.table.exists():
        table = json.loads(args.table.read_text())
    records = []
    for p in prime_list:
        key = str(p)
        if key in table and not args.force:
            records.append(dict(table[key]))
            print(f"p={p}: cached f={table[key]['f']} F={table[key]['F']}")
            continue
        watch = Stopwatch()
        res = hilbert.compute_f_and_F(p, exact_cap=args.exact_cap, restarts=args.restarts, seed=args.seed)
        rec = res.record()
        rec["elapsed_ms"] = watch.elapsed_ms()
        table[key] = {k: v for k, v in rec.items() if k != "elapsed_ms"}
        records.append(rec)
        exact = "exact" if res.f.exact else "lower bound"
        print(f"p={p}: f={res.f.dimension} F={res.F.dimension} ({exact}); 12p^(1/4)={res.bound_12_p14:.1f}")
    if args.table:
        args.table.parent.mkdir(parents=True, exist_ok=True)
        args.table.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")
    path = _emit(args, records, csv_fields=("p", "f", "f_exact", "F", "F_exact", "bound_12p14", "bound_p319"))
    if args.plot:
        plotting.save_ff_plot(records, path.with_suffix(".png"), title="largest cube dimensions")
    return records


def _cmd_ffield(args: argparse.Namespace) -> list[dict]:
    rng = random.Random(args.seed)
    ctx = ffield.FieldContext(args.p, args.n, seed=args.seed)
    size = args.size if args.size is not None else args.p
    if not 1 <= size <= args.p:
        raise ValidationError(f"digit-set size must be in [1, {args.p}], got {size}")
    records = []
    for trial in range(args.trials):
        watch = Stopwatch()
        family = ffield.DigitSetFamily.of(
            [rng.sample(range(args.p), size) for _ in range(args.n)], args.p
        )
        split = ffield.qr_split_W(family, ctx)
        conds = ffield.check_conditions(family, ctx, args.epsilon)
        records.append(
            {
                "statistic": "ffield_qr_split",
                "p": args.p,
                "n": args.n,
                "trial": trial,
                "set_size": size,
                "plus": split.plus,
                "minus": split.minus,
                "zero": split.zero,
                "deviation": split.deviation,
                "product_ok": conds.product_ok,
                "min_ok": conds.min_ok,
                "in_proved_range": conds.in_proved_range,
                "elapsed_ms": watch.elapsed_ms(),
            }
        )
        print(f"trial {trial}: +{split.plus} -{split.minus} 0:{split.zero}  dev {split.deviation:.5f}"
              + ("" if conds.in_proved_range else "  [outside proved range]"))
    path = _emit(args, records, csv_fields=("statistic", "p", "n", "trial", "set_size", "plus", "minus", "zero", "deviation"))
    if args.plot:
        plotting.save_deviation_plot(records, path.with_suffix(".png"), title=f"residue split in F_{{{args.p}^{args.n}}}")
    return records


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
