"""Command-line front end: parameter grids in, deterministic CSV/JSON reports out.

Exit codes: 0 success, 1 invalid configuration or unwritable output,
2 work budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
import time
from fractions import Fraction

from . import __version__
from .budget import default_work_budget
from .constants import parse_alpha
from .errors import BudgetExceeded, InvalidInput
from .exact import convergents_from_quotients, parse_rational
from .expsum import (
    ExpSumParams,
    dr_coefficient_audit,
    distinct_sum_S,
    erdos_turan_check,
    lemma1_lhs,
    lemma2_lhs,
    min_distance,
    vinogradov_sum,
)
from .oracle import ALL_UP_TO_N, PRIMES_IN_WINDOW, DenomClass, achieved_exponent, best_multi_approx
from .primes import sieve_window
from .rng import SplitMix64
from .search import (
    THEOREM1,
    THEOREM2,
    ApproxResult,
    SearchParams,
    conjecture_scan,
    corollary2_probe,
    default_phi_grid,
    hypothesis_for,
    kappa,
    search_window,
    theorem1_search,
    theorem2_search,
)

# -- argument parsing ---------------------------------------------------------

_RANGE_RE = re.compile(r"^(-?\d+)\.\.(-?\d+)(?::(\d+))?$")


def parse_int_list(text: str) -> list[int]:
    """``"3"``, ``"1..10"``, ``"40..200:20"`` or comma-separated mixtures."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = _RANGE_RE.match(part)
        if m:
            lo, hi, step = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
            if step < 1 or lo > hi:
                raise argparse.ArgumentTypeError(f"bad range {part!r}")
            out.extend(range(lo, hi + 1, step))
        elif re.fullmatch(r"-?\d+", part):
            out.append(int(part))
        else:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}")
    return out


def parse_rational_list(text: str) -> list[Fraction]:
    try:
        return [parse_rational(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_alpha_list(text: str) -> list[Fraction]:
    try:
        return [parse_alpha(part) for part in text.split(",")]
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1, matching other invalid configurations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- row helpers --------------------------------------------------------------

RESULT_COLUMNS = [
    "alpha", "a", "q", "N", "n", "phi", "epsilon", "mode",
    "numerators", "denominators",
    "error_num", "error_den", "error_approx",
    "target_num", "target_den", "met_target",
    "branch", "L", "scanned", "skipped", "achieved_exponent",
]


def result_fields(res: ApproxResult) -> dict:
    tb = res.target_bound
    return {
        "alpha": res.alpha,
        "numerators": res.numerators,
        "denominators": res.denominators,
        "error_num": res.error.numerator,
        "error_den": res.error.denominator,
        "error_approx": float(res.error),
        "target_num": None if tb is None else tb.numerator,
        "target_den": None if tb is None else tb.denominator,
        "met_target": res.met_target,
        "branch": res.branch,
        "L": res.L,
        "scanned": res.scanned,
        "skipped": res.skipped,
    }


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = round((time.perf_counter() - self.start) * 1000, 3)

    def stamp(self, row: dict) -> dict:
        if self.enabled:
            row["wall_ms"] = self.ms
        return row


def _with_timing(columns: list[str], args) -> list[str]:
    return columns + ["wall_ms"] if getattr(args, "timing", False) else columns


# -- subcommands --------------------------------------------------------------


def cmd_kappa_table(args, budget):
    rows = []
    for n in args.n:
        if n < 1:
            raise InvalidInput(f"n must be >= 1, got {n}")
        k = kappa(n)
        rows.append({"n": n, "kappa": k, "kappa_num": k.numerator, "kappa_den": k.denominator, "kappa_approx": float(k)})
    return rows, ["n", "kappa", "kappa_num", "kappa_den", "kappa_approx"]


def _hypothesis(args, alpha, N, phi):
    if (args.a is None) != (args.q is None):
        raise InvalidInput("--a and --q must be given together")
    if args.a is not None:
        return args.a, args.q
    return hypothesis_for(alpha, N, phi)


def cmd_search(args, budget):
    rows = []
    for alpha in args.alpha:
        for N in args.N:
            for n in args.n:
                phis = args.phi if args.phi is not None else [kappa(n)]
                for phi in phis:
                    for eps in args.epsilon:
                        a, q = _hypothesis(args, alpha, N, phi)
                        p = SearchParams(alpha, a, q, N, n, eps, phi, args.mode)
                        P = search_window(N, q, not args.keep_q_divisors)
                        run = theorem1_search if args.mode == THEOREM1 else theorem2_search
                        with _Timer(args.timing) as t:
                            res = run(p, P, stop_early=not args.full_scan, budget=budget)
                        row = {"a": a, "q": q, "N": N, "n": n, "phi": phi, "epsilon": eps, "mode": args.mode}
                        row.update(result_fields(res))
                        row["achieved_exponent"] = achieved_exponent(alpha, a, q, res, N)
                        rows.append(t.stamp(row))
    return rows, _with_timing(RESULT_COLUMNS, args)


ORACLE_COLUMNS = [
    "alpha", "N", "n", "class", "excluded_modulus",
    "numerators", "denominators",
    "error_num", "error_den", "error_approx", "branch", "scanned",
]


def cmd_oracle(args, budget):
    rows = []
    for alpha in args.alpha:
        for N in args.N:
            for n in args.n:
                cls = DenomClass(args.denom_class, N, n, args.exclude_modulus)
                with _Timer(args.timing) as t:
                    res = best_multi_approx(alpha, cls, budget=budget)
                row = {"N": N, "n": n, "class": args.denom_class, "excluded_modulus": args.exclude_modulus}
                row.update(result_fields(res))
                rows.append(t.stamp(row))
    return rows, _with_timing(ORACLE_COLUMNS, args)


EXPSUM_COLUMNS = [
    "kind", "a", "q", "n", "k", "L", "N", "pattern", "P_size",
    "lhs", "rhs_bound", "ratio", "condition_ok", "term_count", "float_error_bound",
]


def _integer_partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _integer_partitions(n - first, first):
            yield (first,) + rest


def cmd_expsum_audit(args, budget):
    kinds = args.kinds
    unknown = set(kinds) - {"lemma1", "lemma2", "distinct", "dr"}
    if unknown:
        raise InvalidInput(f"unknown kinds: {sorted(unknown)}")
    rows = []

    def report_row(rep, P, k, pattern=None):
        return {
            "kind": rep.kind, "a": rep.params["a"], "q": rep.params["q"], "n": rep.params["n"],
            "k": k, "L": rep.params["L"], "N": rep.params["N"], "pattern": pattern,
            "P_size": len(P), "lhs": rep.lhs, "rhs_bound": rep.rhs_bound, "ratio": rep.ratio,
            "condition_ok": rep.condition_ok, "term_count": rep.term_count,
            "float_error_bound": rep.float_error_bound,
        }

    for N in args.N:
        for q in args.q:
            P = sieve_window(N, q)
            if len(P) == 0:
                raise InvalidInput(f"empty prime window for N={N}, q={q}")
            for n in args.n:
                for k in args.k:
                    for L in args.L:
                        for a in args.a:
                            p = ExpSumParams(a, q, n, k, L, N)
                            if "lemma1" in kinds:
                                rows.append(report_row(lemma1_lhs(p, P), P, k, (1,) * n))
                            if "lemma2" in kinds:
                                for pattern in _integer_partitions(n):
                                    if max(pattern) > 1:
                                        rep = lemma2_lhs(ExpSumParams(a, q, n, k, L, N, pattern), P)
                                        rows.append(report_row(rep, P, k, pattern))
                            if "distinct" in kinds and k == args.k[0]:
                                rep = distinct_sum_S(a, q, n, L, P, binomial=args.binomial, budget=budget)
                                rows.append(report_row(rep, P, None))
                        if "dr" in kinds:
                            d = dr_coefficient_audit(L, P, k, n, budget=budget)
                            rows.append({
                                "kind": "dr", "q": q, "n": n, "k": k, "L": L, "N": N, "P_size": len(P),
                                "lhs": d.max_dr, "rhs_bound": d.bound,
                                "ratio": d.max_dr / d.bound, "condition_ok": d.ok,
                            })
    return rows, EXPSUM_COLUMNS


ET_COLUMNS = [
    "trial", "J", "L", "S", "threshold", "S_gt_threshold",
    "min_dist_num", "min_dist_den", "min_dist_ok",
]


def et_point_set(rng: SplitMix64, max_J: int, max_L: int, max_den: int) -> tuple[int, list[Fraction]]:
    """Random ``L`` and ``J`` points ``k/d`` in ``[0, 1)``, each at distance ``>= 1/L`` from the integers."""
    L = rng.randint(2, max_L)
    J = rng.randint(1, max_J)
    points = []
    while len(points) < J:
        d = rng.randint(2, max_den)
        lo = -(-d // L)
        if lo > d - lo:
            continue
        points.append(Fraction(rng.randint(lo, d - lo), d))
    return L, points


def cmd_et_audit(args, budget):
    if args.max_L < 2 or args.max_J < 1 or args.max_den < 2:
        raise InvalidInput("need --max-L >= 2, --max-J >= 1, --max-den >= 2")
    rng = SplitMix64(args.seed)
    rows = []
    for trial in range(args.trials):
        L, points = et_point_set(rng, args.max_J, args.max_L, args.max_den)
        res = erdos_turan_check(points, L)
        md = min_distance(points)
        rows.append({
            "trial": trial, "J": len(points), "L": L, "S": res.S, "threshold": res.threshold,
            "S_gt_threshold": not res.conclusion, "min_dist_num": md.numerator,
            "min_dist_den": md.denominator, "min_dist_ok": md * L >= 1,
        })
    return rows, ET_COLUMNS


VINOGRADOV_COLUMNS = ["trial", "a", "q", "N", "lhs_num", "lhs_den", "lhs_approx", "bound", "ratio", "ok"]


def vinogradov_draw(rng: SplitMix64, max_q: int, max_N: int) -> tuple[int, int, int]:
    q = rng.randint(1, max_q)
    while True:
        a = rng.randint(1, q)
        if math.gcd(a, q) == 1:
            break
    return a, q, rng.randint(1, max_N)


def cmd_vinogradov_audit(args, budget):
    rng = SplitMix64(args.seed)
    rows = []
    for trial in range(args.trials):
        a, q, N = vinogradov_draw(rng, args.max_q, args.max_N)
        res = vinogradov_sum(a, q, N)
        rows.append({
            "trial": trial, "a": a, "q": q, "N": N, "lhs_num": res.lhs.numerator,
            "lhs_den": res.lhs.denominator, "lhs_approx": float(res.lhs), "bound": res.bound,
            "ratio": res.ratio, "ok": res.lhs <= res.bound,
        })
    return rows, VINOGRADOV_COLUMNS


def random_alpha(rng: SplitMix64, terms: int = 12, max_quotient: int = 9) -> Fraction:
    quotients = [rng.randint(0, max_quotient)] + [rng.randint(1, max_quotient) for _ in range(terms - 1)]
    return convergents_from_quotients(quotients)[-1]


SCAN_COLUMNS = [
    "alpha", "a", "q", "N", "n", "phi", "epsilon",
    "error_num", "error_den", "met_target", "branch",
    "numerators", "denominators", "error_approx", "target_num", "target_den", "L", "empirical_phi",
]


def cmd_conjecture_scan(args, budget):
    alphas = list(args.alpha or [])
    rng = SplitMix64(args.seed)
    alphas += [random_alpha(rng) for _ in range(args.random_alphas)]
    if not alphas:
        raise InvalidInput("give --alpha and/or --random-alphas")
    grid = args.phi
    if grid is None:
        k = kappa(args.n)
        grid = default_phi_grid(args.n, args.phi_step, extra=(k, k - args.epsilon))
    rows = []
    for alpha in alphas:
        for N in args.N:
            with _Timer(args.timing) as t:
                group = conjecture_scan(
                    [alpha], [N], args.n, args.epsilon, grid,
                    exclude_divisors=not args.keep_q_divisors, budget=budget,
                )
            for item in group:
                row = {k: item[k] for k in ("a", "q", "N", "n", "phi", "epsilon", "empirical_phi")}
                row.update(result_fields(item["result"]))
                rows.append(t.stamp(row))
    return rows, _with_timing(SCAN_COLUMNS, args)


COROLLARY_COLUMNS = [
    "alpha", "a", "q", "X", "n", "epsilon", "kappa", "N", "A", "Q", "omega", "Q_within_bound",
    "error_num", "error_den", "error_approx", "target_num", "target_den", "met_target", "branch",
    "numerators", "denominators",
]


def cmd_corollary2_probe(args, budget):
    rows = []
    for alpha in args.alpha:
        for X in args.X:
            for n in args.n:
                if (args.a is None) != (args.q is None):
                    raise InvalidInput("--a and --q must be given together")
                a, q = (args.a, args.q) if args.a is not None else hypothesis_for(alpha, X, 1)
                out = corollary2_probe(
                    alpha, a, q, X, n, args.epsilon,
                    exclude_divisors=not args.keep_q_divisors, budget=budget,
                )
                res = out.pop("result")
                err, tb = parse_rational(out["error"]), parse_rational(out["target_bound"])
                row = {k: out[k] for k in COROLLARY_COLUMNS if k in out}
                row.update({
                    "alpha": alpha, "epsilon": args.epsilon, "kappa": kappa(n),
                    "error_num": err.numerator, "error_den": err.denominator, "error_approx": float(err),
                    "target_num": tb.numerator, "target_den": tb.denominator,
                    "numerators": res.numerators, "denominators": res.denominators,
                })
                rows.append(row)
    return rows, COROLLARY_COLUMNS


# -- wiring -------------------------------------------------------------------


def _common(fmt_default: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--work-budget", type=positive_int, default=None,
                   help="max enumeration size (default: $PRIMEFRAC_WORK_BUDGET or 10**7)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primefrac", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"primefrac {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    csv_common, json_common = _common("csv"), _common("json")

    p = sub.add_parser("kappa-table", parents=[csv_common], help="exact kappa(n) table")
    p.add_argument("--n", type=parse_int_list, default=parse_int_list("1..10"))
    p.set_defaults(func=cmd_kappa_table)

    p = sub.add_parser("search", parents=[json_common], help="constructive search over a grid")
    p.add_argument("--alpha", type=parse_alpha_list, required=True)
    p.add_argument("--N", type=parse_int_list, required=True)
    p.add_argument("--n", type=parse_int_list, default=[2])
    p.add_argument("--epsilon", type=parse_rational_list, default=[Fraction(1, 2)])
    p.add_argument("--phi", type=parse_rational_list, default=None, help="default: kappa(n)")
    p.add_argument("--a", type=int, default=None, help="hypothesis numerator (default: best convergent)")
    p.add_argument("--q", type=int, default=None, help="hypothesis denominator")
    p.add_argument("--mode", choices=(THEOREM1, THEOREM2), default=THEOREM1)
    p.add_argument("--full-scan", action="store_true", help="scan every tuple instead of stopping early")
    p.add_argument("--keep-q-divisors", action="store_true", help="do not drop primes dividing q")
    p.add_argument("--timing", action="store_true", help="add a wall_ms column (not reproducible)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("oracle", parents=[json_common], help="brute-force optimum")
    p.add_argument("--alpha", type=parse_alpha_list, required=True)
    p.add_argument("--N", type=parse_int_list, required=True)
    p.add_argument("--n", type=parse_int_list, default=[2])
    p.add_argument("--class", dest="denom_class", choices=(PRIMES_IN_WINDOW, ALL_UP_TO_N), default=PRIMES_IN_WINDOW)
    p.add_argument("--exclude-modulus", type=positive_int, default=1,
                   help="drop window primes dividing this number")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("expsum-audit", parents=[csv_common], help="exponential sums against their bounds")
    p.add_argument("--N", type=parse_int_list, default=[20, 40])
    p.add_argument("--n", type=parse_int_list, default=[1, 2])
    p.add_argument("--k", type=parse_int_list, default=[0, 1])
    p.add_argument("--L", type=parse_int_list, default=[1, 5, 10])
    p.add_argument("--q", type=parse_int_list, default=[7, 11])
    p.add_argument("--a", type=parse_int_list, default=[1])
    p.add_argument("--kinds", type=lambda s: s.split(","), default=["lemma1", "lemma2", "distinct", "dr"])
    p.add_argument("--binomial", action="store_true", help="use C(n,2) instead of n^2 in the distinct threshold")
    p.set_defaults(func=cmd_expsum_audit)

    p = sub.add_parser("et-audit", parents=[csv_common], help="random point sets against S > J/6")
    p.add_argument("--trials", type=positive_int, default=500)
    p.add_argument("--max-J", type=positive_int, default=200)
    p.add_argument("--max-L", type=positive_int, default=50)
    p.add_argument("--max-den", type=positive_int, default=1000)
    p.set_defaults(func=cmd_et_audit)

    p = sub.add_parser("vinogradov-audit", parents=[csv_common], help="random (a, q, N) against N + 2q(1 + ln q)")
    p.add_argument("--trials", type=positive_int, default=300)
    p.add_argument("--max-q", type=positive_int, default=2000)
    p.add_argument("--max-N", type=positive_int, default=2000)
    p.set_defaults(func=cmd_vinogradov_audit)

    p = sub.add_parser("conjecture-scan", parents=[csv_common], help="empirical exponent table")
    p.add_argument("--alpha", type=parse_alpha_list, default=None)
    p.add_argument("--random-alphas", type=int, default=0, help="extra seeded random alphas")
    p.add_argument("--N", type=parse_int_list, required=True)
    p.add_argument("--n", type=positive_int, default=2)
    p.add_argument("--epsilon", type=parse_rational, default=Fraction(1, 8))
    p.add_argument("--phi", type=parse_rational_list, default=None)
    p.add_argument("--phi-step", type=parse_rational, default=Fraction(1, 8))
    p.add_argument("--keep-q-divisors", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_conjecture_scan)

    p = sub.add_parser("corollary2-probe", parents=[csv_common], help="denominators with exactly n prime factors")
    p.add_argument("--alpha", type=parse_alpha_list, required=True)
    p.add_argument("--X", type=parse_int_list, required=True)
    p.add_argument("--n", type=parse_int_list, default=[2])
    p.add_argument("--epsilon", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--keep-q-divisors", action="store_true")
    p.set_defaults(func=cmd_corollary2_probe)
    return parser


def config_of(args, budget: int) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    config["work_budget"] = budget
    config["version"] = __version__
    return config


def run(argv: list[str] | None = None) -> int:
    from .report import render

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        budget = args.work_budget if args.work_budget is not None else default_work_budget()
        rows, columns = args.func(args, budget)
        text = render(rows, columns, config_of(args, budget), args.format)
    except BudgetExceeded as exc:
        print(f"primefrac: {exc}", file=sys.stderr)
        return 2
    except InvalidInput as exc:
        print(f"primefrac: invalid configuration: {exc}", file=sys.stderr)
        return 1
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"primefrac: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
