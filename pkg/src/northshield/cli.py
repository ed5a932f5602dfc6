"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget/cap error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import envelope, jsr, linrep, sequences
from .quadfield import QuadInt, QuadRat, to_float

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _g(x: float) -> str:
    return f"{x:.12g}"


def _exact(x: QuadInt | QuadRat) -> str:
    return f"{x} ({to_float(x):.3f})"


def _load_rep_file(path: str) -> linrep.LinRep:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read representation file {path}: {exc}") from None
    try:
        return linrep.load_rep(text)
    except linrep.RepError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _workers(args) -> int:
    return args.workers if args.workers is not None else sequences.default_workers()


# -- eval ------------------------------------------------------------------


def cmd_eval(args) -> int:
    n = args.n
    if n < 0:
        raise UsageError(f"n must be nonnegative, got {n}")
    if args.seq == "stern":
        value: QuadInt | QuadRat = QuadInt(sequences.stern(n))
    elif args.seq == "northshield":
        value = sequences.northshield(n)
    else:
        value = linrep.lr_eval(_load_rep_file(args.seq), n)
    if args.format == "json":
        payload = value.to_json() if isinstance(value, QuadRat) else QuadRat(value).to_json()
        _emit(args, json.dumps({"seq": args.seq, "n": n, "value": payload, "float": to_float(value)}))
    elif args.format == "csv":
        q = QuadRat.coerce(value)
        _emit(args, _csv(["n", "a", "b", "den", "float"], [[n, q.num.a, q.num.b, q.den, _g(to_float(q))]]))
    else:
        _emit(args, _exact(value))
    return EXIT_OK


# -- scan ------------------------------------------------------------------


def cmd_scan(args) -> int:
    if not 2 <= args.lo <= args.hi:
        raise UsageError(f"scan needs 2 <= lo <= hi, got lo={args.lo}, hi={args.hi}")
    if args.decimation < 1:
        raise UsageError("--decimation must be positive")
    if args.seq == "northshield":
        cap = args.cap if args.cap is not None else sequences.NORTHSHIELD_SCAN_CAP
        scan = sequences.ratio_scan_northshield
    else:
        cap = args.cap if args.cap is not None else sequences.STERN_SCAN_CAP
        scan = sequences.ratio_scan_stern
    if args.hi > cap:
        raise sequences.CapExceeded(f"{args.seq} scan upper index (--cap)", args.hi, cap)
    result = scan(args.lo, args.hi, args.decimation, workers=_workers(args))
    summary = f"running max {_g(result.running_max)} at m={result.argmax} over [{result.lo}, {result.hi}]"
    if args.format == "csv":
        _emit(args, result.to_csv())
        print(summary, file=sys.stderr)
    elif args.format == "json":
        _emit(args, json.dumps(result.to_json()))
    else:
        lines = [summary]
        if args.decimation > 1 or len(result.samples) <= 50:
            lines += [f"{i} {_g(r)}" for i, r in result.samples]
        _emit(args, "\n".join(lines))
    return EXIT_OK


# -- verify ----------------------------------------------------------------


def _verify_22(args) -> int:
    lo, hi = args.lo if args.lo is not None else 2, args.hi if args.hi is not None else 3**9
    if lo < 2 or hi < lo:
        raise UsageError(f"envelope bound range needs 2 <= lo <= hi, got [{lo}, {hi}]")
    variants = ["silver", "one"] if args.coefficient == "both" else [args.coefficient]
    reports = [envelope.lemma22_check(lo, hi, c, workers=_workers(args)) for c in variants]
    if args.format == "json":
        _emit(args, json.dumps([r.to_json() for r in reports]))
    elif args.format == "csv":
        rows = [
            [r.name, m, str(lhs), str(rhs), _g(to_float(lhs)), _g(to_float(rhs))]
            for r in reports
            for m, lhs, rhs in r.violations
        ]
        _emit(args, _csv(["variant", "index", "lhs", "rhs", "lhs_float", "rhs_float"], rows))
    else:
        _emit(args, "\n".join(r.to_text() for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _verify_23(args) -> int:
    n_lo, n_hi = args.n_lo or 1, args.n_hi or 12
    if n_lo < 1 or n_hi < n_lo:
        raise UsageError(f"need 1 <= n-lo <= n-hi, got [{n_lo}, {n_hi}]")
    checks = [envelope.hmn_identity_check(n) for n in range(n_lo, n_hi + 1)]
    ratios = envelope.ratio_to_h_scan(n_lo, n_hi)
    increasing = all(b[1] > a[1] for a, b in zip(ratios, ratios[1:]))
    ok = all(c.passed for c in checks) and increasing
    rows = [
        [c.n, m, str(c.h_value), c.identity_holds, c.exceeds_max, _g(r)]
        for c, (m, r) in zip(checks, ratios)
    ]
    if args.format == "json":
        _emit(
            args,
            json.dumps(
                {
                    "status": "pass" if ok else "fail",
                    "ratio_increasing": increasing,
                    "rows": [dict(zip(["n", "m_n", "h", "identity", "exceeds_max", "b_over_h"], r)) for r in rows],
                }
            ),
        )
    elif args.format == "csv":
        _emit(args, _csv(["n", "m_n", "h", "identity", "exceeds_max", "b_over_h"], rows))
    else:
        lines = [f"n={r[0]} m_n={r[1]} h(m_n)={r[2]} identity={r[3]} exceeds_max={r[4]} b/h={r[5]}" for r in rows]
        lines.append(f"b/h increasing toward 1: {increasing}")
        lines.append("PASS" if ok else "FAIL")
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _verify_24(args) -> int:
    x_lo = Fraction(args.x_lo) if args.x_lo else Fraction(8, 5)
    x_hi = Fraction(args.x_hi) if args.x_hi else Fraction(3**10, 2)
    if x_lo <= Fraction(3, 2) or x_hi < x_lo:
        raise UsageError("grid needs 3/2 < x-lo <= x-hi")
    n_max = args.n_hi or 12
    grid = envelope.H_grid(x_lo, x_hi, args.grid)
    worst = max(v for _, v in grid)
    bp = [(n, envelope.H(Fraction(3**n, 2))) for n in range(1, n_max + 1)]
    bp_ok = all(abs(v) < 1e-9 * (1 + 2**0.5) ** n for n, v in bp)
    ok = worst <= 1e-9 and bp_ok
    if args.format == "csv":
        _emit(args, envelope.H_grid_csv(grid))
    elif args.format == "json":
        _emit(
            args,
            json.dumps(
                {
                    "status": "pass" if ok else "fail",
                    "grid_points": len(grid),
                    "grid_max_H": worst,
                    "breakpoints": [{"n": n, "H": v} for n, v in bp],
                }
            ),
        )
    else:
        _emit(
            args,
            f"grid of {len(grid)} points on [{float(x_lo):g}, {float(x_hi):g}]: max H = {worst:.3e}\n"
            f"breakpoints n=1..{n_max}: max |H|/(√2+1)^n = "
            f"{max(abs(v) / (1 + 2**0.5) ** n for n, v in bp):.3e}\n" + ("PASS" if ok else "FAIL"),
        )
    return EXIT_OK if ok else EXIT_FAIL


def _verify_eq24(args) -> int:
    n_lo, n_hi = args.n_lo or 1, args.n_hi or 10
    if n_lo < 1 or n_hi < n_lo:
        raise UsageError(f"need 1 <= n-lo <= n-hi, got [{n_lo}, {n_hi}]")
    rng = random.Random(args.seed)
    checks = [
        envelope.gap_identity_check(n, k)
        for n in range(n_lo, n_hi + 1)
        for k in envelope.gap_sample(n, args.samples, rng)
    ]
    stated_ok = all(c.matches_stated for c in checks)
    per_n: dict[int, set] = {}
    for c in checks:
        per_n.setdefault(c.n, set()).add(c.value)
    k_independent = all(len(v) == 1 for v in per_n.values())
    if args.format == "json":
        _emit(
            args,
            json.dumps(
                {
                    "status": "pass" if stated_ok else "fail",
                    "k_independent": k_independent,
                    "checks": [c.to_json() for c in checks],
                }
            ),
        )
    elif args.format == "csv":
        rows = [
            [c.n, c.k, str(c.value), _g(to_float(c.value)), c.matches_stated, c.segment_outer,
             c.matches_segment_form, c.sign, c.magnitude_below_one]
            for c in checks
        ]
        _emit(
            args,
            _csv(
                ["n", "k", "gap", "gap_float", "matches_stated", "segment_of_3k+1", "matches_segment_form",
                 "sign", "magnitude_below_one"],
                rows,
            ),
        )
    else:
        lines = []
        for c in checks:
            lines.append(
                f"n={c.n} k={c.k}: gap = {c.value} ({to_float(c.value):.6f}); "
                f"-√2((√2+1)/3)^(n+1) = {to_float(c.stated_form):.6f} match={c.matches_stated}; "
                f"3k+1 on segment {c.segment_outer}, k+1 on segment {c.segment_inner}, "
                f"-√2((√2+1)/3)^{c.segment_outer} match={c.matches_segment_form}; |gap|<1: {c.magnitude_below_one}"
            )
        signs = {c.sign for c in checks}
        lines.append(f"sign of gap over all samples: {sorted(signs)} (the interval (0,1) would need +1)")
        lines.append(f"k-independent per n: {k_independent}")
        lines.append("PASS" if stated_ok else "FAIL: gap differs from -√2((√2+1)/3)^(n+1)")
        _emit(args, "\n".join(lines))
    return EXIT_OK if stated_ok else EXIT_FAIL


def _verify_table1(args) -> int:
    rows = envelope.table1_report()
    ok = all(r.b_matches and r.holds_coefficient_one and r.holds_coefficient_silver for r in rows)
    if args.format == "json":
        _emit(args, envelope.table1_json(rows))
    elif args.format == "csv":
        _emit(
            args,
            _csv(
                ["m", "b", "table_b", "h_plus_floor", "h_seg1_plus_floor", "table_h", "b_matches", "h_matches",
                 "h_seg1_matches", "holds_c1", "holds_silver"],
                [
                    [r.m, str(r.b), r.table_b, _g(r.h_plus_floor), _g(r.h_segment1_plus_floor), r.table_h,
                     r.b_matches, r.h_matches, r.h_segment1_matches, r.holds_coefficient_one,
                     r.holds_coefficient_silver]
                    for r in rows
                ],
            ),
        )
    else:
        _emit(args, envelope.table1_text(rows))
    return EXIT_OK if ok else EXIT_FAIL


VERIFIERS = {
    "2.2": _verify_22,
    "2.3": _verify_23,
    "2.4": _verify_24,
    "eq2.4": _verify_eq24,
    "table1": _verify_table1,
}


def cmd_verify(args) -> int:
    return VERIFIERS[args.lemma](args)


# -- max -------------------------------------------------------------------


def cmd_max(args) -> int:
    if not 1 <= args.n_lo <= args.n_hi:
        raise UsageError(f"need 1 <= n_lo <= n_hi, got [{args.n_lo}, {args.n_hi}]")
    cap = args.cap if args.cap is not None else sequences.NORTHSHIELD_BRUTE_CAP
    ns = range(args.n_lo, args.n_hi + 1)
    closed = [sequences.interval_max_closed_form(n) for n in ns] if args.mode != "brute" else []
    brute = [sequences.interval_max_bruteforce(n, cap) for n in ns] if args.mode != "closed" else []
    rows = brute or closed
    agree = not (brute and closed) or all(b == c for b, c in zip(brute, closed))
    if args.format == "csv":
        _emit(args, sequences.interval_max_csv(rows))
    elif args.format == "json":
        _emit(args, json.dumps({"mode": args.mode, "agree": agree, "rows": [r.to_json() for r in rows]}))
    else:
        lines = [f"n={r.n} max={r.max_value} ({to_float(r.max_value):.6f}) first_argmax={r.first_argmax}" for r in rows]
        if brute and closed:
            lines.append("brute force and closed form agree" if agree else "DISAGREEMENT between brute force and closed form")
            for b, c in zip(brute, closed):
                if b != c:
                    lines.append(f"  n={b.n}: brute {b.max_value}@{b.first_argmax} vs closed {c.max_value}@{c.first_argmax}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if agree else EXIT_FAIL


# -- jsr -------------------------------------------------------------------


def _matrix_set(name: str) -> jsr.MatrixSet:
    if name == "stern":
        return jsr.stern_set()
    if name == "northshield":
        return jsr.northshield_set()
    return jsr.MatrixSet.from_rep(_load_rep_file(name))


def _parse_word(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--witness expects comma-separated digits, got {text!r}") from None


def cmd_jsr(args) -> int:
    if args.lower_len < 1 or args.upper_len < 1:
        raise UsageError("word lengths must be positive")
    mset = _matrix_set(args.set)
    budget = args.budget if args.budget is not None else jsr.DEFAULT_BUDGET
    bounds = jsr.jsr_bounds(
        mset, args.lower_len, args.upper_len, budget=budget, prune=not args.no_prune, workers=_workers(args)
    )
    report = None
    if args.witness:
        report = jsr.finiteness_check(mset, _parse_word(args.witness), bounds, args.tol)
    table = None
    if args.table:
        lengths = [n for n in range(1, args.upper_len + 1)]
        table = jsr.convergence_table(mset, lengths, budget=budget, prune=not args.no_prune)
    if args.format == "csv":
        _emit(args, jsr.convergence_csv(table or [(args.upper_len, bounds.upper)]))
    elif args.format == "json":
        payload = bounds.to_json()
        if report is not None:
            payload["finiteness"] = {
                "word": report.word,
                "normalized_radius": report.normalized,
                "gap": report.gap,
                "certified": report.certified,
            }
        _emit(args, json.dumps(payload))
    else:
        lines = [
            f"lower = {bounds.lower:.8f} (witness {bounds.lower_witness}, words up to length {bounds.lower_len})",
            f"upper = {bounds.upper:.8f} (inf-norm, words of length {bounds.upper_len})",
        ]
        if report is not None:
            lines.append(report.to_text())
        if table:
            lines += [f"len={n} upper={_g(u)}" for n, u in table]
        _emit(args, "\n".join(lines))
    return EXIT_OK


# -- rep -------------------------------------------------------------------


def cmd_rep(args) -> int:
    rep = _load_rep_file(args.file)
    if args.dump:
        _emit(args, rep.dumps())
        return EXIT_OK
    if args.oracle == "self":
        mismatch = linrep.verify_rep(rep, lambda n: linrep.lr_eval(rep, n), args.limit)
    else:
        mismatch = linrep.verify_rep(rep, linrep.ORACLES[args.oracle], args.limit)
    if args.format == "json":
        _emit(
            args,
            json.dumps(
                {
                    "status": "pass" if mismatch is None else "fail",
                    "limit": args.limit,
                    "mismatch": None
                    if mismatch is None
                    else {"n": mismatch.n, "got": mismatch.got.to_json(), "expected": mismatch.expected.to_json()},
                }
            ),
        )
    elif mismatch is None:
        _emit(args, f"pass: representation matches {args.oracle} for n < {args.limit}")
    else:
        _emit(args, f"fail: first mismatch at n={mismatch.n}: {mismatch.got} != {mismatch.expected}")
    return EXIT_OK if mismatch is None else EXIT_FAIL


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "text"], default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--decimation", type=int, default=1, metavar="N")
    common.add_argument("--cap", type=int, metavar="N", help="brute-force cap (index for scans, exponent for max)")
    common.add_argument("--workers", type=int, metavar="N", help="worker processes (default: CPU count)")

    parser = argparse.ArgumentParser(prog="northshield", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a(n), b(n) or a representation file")
    p.add_argument("seq", help="stern, northshield, or a representation JSON file")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", parents=[common], help="maximal-order ratio scan")
    p.add_argument("seq", choices=["stern", "northshield"])
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", parents=[common], help="run a lemma or identity harness")
    p.add_argument("lemma", choices=sorted(VERIFIERS))
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--coefficient", choices=["silver", "one", "both"], default="silver")
    p.add_argument("--n-lo", type=int)
    p.add_argument("--n-hi", type=int)
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--x-lo")
    p.add_argument("--x-hi")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("max", parents=[common], help="maxima of b over [3^(n-1), 3^n]")
    p.add_argument("n_lo", type=int)
    p.add_argument("n_hi", type=int)
    p.add_argument("mode", choices=["brute", "closed", "both"])
    p.set_defaults(func=cmd_max)

    p = sub.add_parser("jsr", parents=[common], help="joint spectral radius bounds")
    p.add_argument("set", help="stern, northshield, or a representation JSON file")
    p.add_argument("lower_len", type=int)
    p.add_argument("upper_len", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--table", action="store_true", help="convergence table of upper bounds by length")
    p.add_argument("--witness", help="candidate product for a finiteness check, e.g. 0,1")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_jsr)

    p = sub.add_parser("rep", parents=[common], help="load and verify a representation file")
    p.add_argument("file")
    p.add_argument("--oracle", choices=["northshield", "stern", "self"], default="self")
    p.add_argument("--limit", type=int, default=1000)
    p.add_argument("--dump", action="store_true", help="print the normalized JSON document")
    p.set_defaults(func=cmd_rep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (sequences.CapExceeded, jsr.BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
