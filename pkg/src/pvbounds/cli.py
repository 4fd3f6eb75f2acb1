"""Command-line front end: ``pvb <command> [options]``.

Exit status: 0 when every check passes, 1 when a checked invariant fails
(sweep violation, failed attainment, identity residual too large, ...),
2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__
from .audit import TABLE1, aouf_falsification_report, reproduce_table1
from .bounds import MAX_PRODUCT_LENGTH, bound_report, induction_identity_residual, positive_product
from .errors import CaseMismatch, InvalidParameters, NotAFalsificationRegime
from .extremal import ExtremalSpec, Family, attainment_report, delta_from_turns, expand
from .params import CaseLabel, ClassParams, classify_case, new_params
from .series import TruncatedSeries
from .verify import (
    DEFAULT_GRID,
    SampleGrid,
    SchwarzSpec,
    aouf_member_sweep,
    build_function_from_schwarz,
    certify_membership,
    random_member_sweep,
    schwarz_from_function,
)

BOUND_COLUMNS = ["n", "case", "theorem1", "aouf", "envelope", "sharp", "attained", "gap", "provenance"]


class UsageError(Exception):
    pass


@dataclass
class Output:
    data: object
    columns: list[str]
    rows: list[dict]
    text: str
    status: int = 0


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _csv_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.data, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.columns)
        for row in out.rows:
            w.writerow([_csv_value(row.get(c)) for c in out.columns])
        return buf.getvalue()
    return out.text.rstrip("\n") + "\n"


def _params(args) -> ClassParams:
    return new_params(args.A, args.B, args.beta, args.p)


def _n_values(spec: str, p: int) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = (int(s) for s in spec.split(":", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(spec)]
    except ValueError:
        raise UsageError(f"cannot parse n from {spec!r}; use N or LO:HI") from None
    if not values or min(values) < p + 1:
        raise UsageError(f"n must be >= p + 1 = {p + 1}")
    if max(values) - p > MAX_PRODUCT_LENGTH:
        raise UsageError(f"n - p must not exceed {MAX_PRODUCT_LENGTH}")
    return values


def _threads() -> int:
    raw = os.environ.get("PVB_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        raise UsageError(f"PVB_THREADS must be an integer, got {raw!r}") from None
    if k <= 0:
        return os.cpu_count() or 1
    return k


def _bound_row(params: ClassParams, n: int, rtol: float) -> dict:
    case = classify_case(params, n)
    if case is CaseLabel.MIXED_TERMS:
        rep = bound_report(params, n)
    else:
        family = Family.GLOBAL if case is CaseLabel.POSITIVE_TERMS else Family.PER_N
        rep = attainment_report(ExtremalSpec(params, family, n=n), n, rtol)
    return {
        "n": n,
        "case": str(rep.case),
        "theorem1": rep.theorem1_bound,
        "aouf": rep.aouf_bound,
        "envelope": rep.envelope_bound,
        "sharp": rep.sharp,
        "attained": rep.attained,
        "gap": rep.gap,
        "provenance": rep.provenance,
    }


def cmd_bound(args) -> Output:
    params = _params(args)
    rows = [_bound_row(params, n, args.tolerance) for n in _n_values(args.n, params.p)]
    failed = [r["n"] for r in rows if r["sharp"] and r["attained"] is False]
    lines = [f"S_p(A={params.A:g}, B={params.B:g}, beta={params.beta:g}, p={params.p})"]
    for r in rows:
        tag = "attained" if r["attained"] else ("not sharp: envelope" if not r["sharp"] else "NOT ATTAINED")
        lines.append(
            f"n={r['n']:<3d} {r['case']:<17s} theorem1={_fmt(r['theorem1'])} "
            f"aouf={_fmt(r['aouf'])} envelope={_fmt(r['envelope'])} [{tag}]"
        )
    data = rows[0] if len(rows) == 1 else {"params": params.as_dict(), "rows": rows}
    return Output(data, BOUND_COLUMNS, rows, "\n".join(lines), 1 if failed else 0)


def cmd_extremal(args) -> Output:
    params = _params(args)
    family = Family(args.family)
    if family is Family.PER_N and args.n is None:
        raise UsageError("--family per-n needs -n")
    spec = ExtremalSpec(params, family, n=args.n, delta=delta_from_turns(args.delta_turns), gap=args.gap)
    order = args.order if args.order is not None else max(params.p + 12, (args.n or 0) + 1)
    if order <= params.p:
        raise UsageError("--order must exceed p")
    f = expand(spec, order)
    coeffs = [
        {"power": k, "re": f.coeff(k).real, "im": f.coeff(k).imag, "abs": abs(f.coeff(k))}
        for k in range(params.p, order)
    ]
    data = {"params": params.as_dict(), "family": str(family), "gap": spec.effective_gap, "coefficients": coeffs}
    lines = [f"{family} extremal, first nontrivial power z^{spec.first_index}"]
    lines += [f"  z^{c['power']:<3d} {_fmt(c['re'])} {'+' if c['im'] >= 0 else '-'} {_fmt(abs(c['im']))}i" for c in coeffs]
    status = 0
    if args.n is not None:
        rep = attainment_report(spec, args.n, args.tolerance)
        data["attainment"] = rep.as_dict()
        lines.append(
            f"|a_{args.n}| = {_fmt(rep.extremal_modulus)} vs bound {_fmt(rep.theorem1_bound)}: "
            + ("attained" if rep.attained else "NOT attained")
        )
        if rep.printed_index_mismatch:
            lines.append(
                f"note: the printed gap n-1 puts the first coefficient at z^{params.p + args.n - 1}; "
                f"witnessed with gap n-p instead"
            )
        status = 0 if rep.attained else 1
    return Output(data, ["power", "re", "im", "abs"], coeffs, "\n".join(lines), status)


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"cannot parse complex numbers from {text!r}") from None


def cmd_membership(args) -> Output:
    params = _params(args)
    grid = SampleGrid(tuple(args.radii), args.angles) if args.radii else SampleGrid(DEFAULT_GRID.radii, args.angles)
    source = args.source
    if source == "coeffs":
        if not args.coeffs:
            raise UsageError("--source coeffs needs --coeffs")
        a = _parse_complex_list(args.coeffs)
        f = TruncatedSeries.of(a, offset=params.p, order=params.p + max(len(a), args.order or 1024))
        report = schwarz_from_function(f, params, grid, args.membership_tol)
    elif source == "schwarz":
        spec = SchwarzSpec(tuple(_parse_complex_list(args.zeros or "")), delta_from_turns(args.delta_turns))
        report = certify_membership(lambda o: build_function_from_schwarz(spec, params, o), params, grid, args.membership_tol)
    else:
        family = Family(source)
        if family is Family.PER_N and args.n is None:
            raise UsageError("--source per-n needs -n")
        spec = ExtremalSpec(params, family, n=args.n, delta=delta_from_turns(args.delta_turns), gap=args.gap)
        report = certify_membership(lambda o: expand(spec, o), params, grid, args.membership_tol)
    d = report.as_dict()
    text = (
        f"max |phi(z)|/|z| = {report.max_ratio:.12g} over radii {list(report.radii)} x {report.angles} angles "
        f"(order {report.order}): " + ("consistent with membership" if report.verdict else "NOT a member")
    )
    ill = report.ill_conditioned_radii
    tail = [r for r in report.excluded_radii if r not in ill]
    if tail:
        text += f"\nexcluded radii (tail unresolved): {tail}"
    if ill:
        text += f"\nexcluded radii (ill-conditioned in double precision): {list(ill)}"
    row = {k: v for k, v in d.items() if not isinstance(v, (list, dict))}
    return Output(d, list(row), [row], text, 0 if report.verdict else 1)


def cmd_sweep(args) -> Output:
    params = _params(args)
    max_n = args.max_n if args.max_n is not None else params.p + 10
    started = time.perf_counter()
    hits = random_member_sweep(params, args.count, max_n, args.seed, args.tolerance, _threads())
    rows = [v.as_dict() | {"schwarz": json.dumps(v.spec.as_dict())} for v in hits]
    data = {
        "params": params.as_dict(),
        "count": args.count,
        "max_n": max_n,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "violations": [v.as_dict() for v in hits],
    }
    text = f"{args.count} random members, n <= {max_n}, seed {args.seed}: {len(hits)} violations"
    for v in hits[:20]:
        text += f"\n  member {v.index}: |a_{v.n}| = {_fmt(v.modulus)} > {_fmt(v.bound)}"
    if args.verbose:
        text += f"\n({time.perf_counter() - started:.2f}s)"
    return Output(data, ["index", "n", "modulus", "bound", "ratio", "schwarz"], rows, text, 1 if hits else 0)


def cmd_audit(args) -> Output:
    rows = reproduce_table1()
    printed = [t[-1] for t in TABLE1]
    ok = all(abs(r.W - w) <= 1e-12 for r, w in zip(rows, printed))
    dict_rows = [{"k": r.k, "p": r.p, "A": r.A, "B": r.B, "beta": r.beta, "W": r.W} for r in rows]
    text = "k  p  A     B     beta  W\n" + "\n".join(
        f"{r.k}  {r.p}  {r.A:<5g} {r.B:<5g} {r.beta:<5g} {r.W:.6g}" for r in rows
    )
    text += "\nmatches printed table: " + ("yes" if ok else "NO")
    return Output({"table1": dict_rows, "matches_printed": ok}, ["k", "p", "A", "B", "beta", "W"], dict_rows, text, 0 if ok else 1)


def cmd_falsify(args) -> Output:
    params = _params(args)
    if args.n is None:
        raise UsageError("falsify needs -n")
    (n,) = _n_values(str(args.n), params.p)
    rep = aouf_falsification_report(params, n, rtol=args.tolerance)
    data = rep.as_dict()
    m = rep.membership
    verdict = (
        f"Theorem A violated: {_fmt(rep.witness_modulus)} > {_fmt(rep.aouf_bound)}"
        if rep.violated
        else f"Theorem A not violated here: {_fmt(rep.witness_modulus)} <= {_fmt(rep.aouf_bound)}"
    )
    lines = [
        verdict,
        f"case {rep.case}; valid bound {_fmt(rep.theorem1_bound)}; witness: the member with phi(z) = z^{rep.witness_gap}",
        f"membership: max |phi|/|z| = {m.max_ratio:.12g} ({'ok' if m.verdict else 'FAILED'})",
    ]
    if args.sweep_count:
        hits = aouf_member_sweep(params, args.sweep_count, n, args.seed, args.tolerance, _threads())
        data["companion_sweep"] = {"count": args.sweep_count, "seed": args.seed, "violations": len(hits)}
        lines.append(f"companion sweep: {len(hits)} members exceed the product bound")
    row = {k: v for k, v in data.items() if not isinstance(v, (dict, list))}
    return Output(data, list(row), [row], "\n".join(lines), 0 if rep.violated else 1)


def cmd_identity(args) -> Output:
    rows = []
    if args.random:
        rng = np.random.default_rng(args.seed)
        while len(rows) < args.random:
            p = int(rng.integers(1, 6))
            B = float(rng.uniform(-1, 0.9))
            A = float(rng.uniform(B, 1))
            params = new_params(A, B, float(rng.uniform(0, 1)), p)
            m = p + int(rng.integers(2, 21))
            if classify_case(params, m) is CaseLabel.POSITIVE_TERMS:
                rows.append(_identity_row(params, m))
    else:
        params = _params(args)
        m_max = args.m_max if args.m_max is not None else params.p + 20
        for m in range(params.p + 2, min(m_max, params.p + MAX_PRODUCT_LENGTH) + 1):
            if classify_case(params, m) is CaseLabel.POSITIVE_TERMS:
                rows.append(_identity_row(params, m))
    worst = max((r["relative_residual"] for r in rows), default=0.0)
    bad = [r for r in rows if r["relative_residual"] > args.tolerance]
    text = f"{len(rows)} case-3 points checked; worst relative residual {worst:.3g}; {len(bad)} above {args.tolerance:g}"
    data = {"checked": len(rows), "worst_relative_residual": worst, "tolerance": args.tolerance, "rows": rows}
    return Output(data, list(rows[0]) if rows else ["m"], rows, text, 1 if bad else 0)


def _identity_row(params: ClassParams, m: int) -> dict:
    res = induction_identity_residual(params, m)
    scale = positive_product(params, m) ** 2
    return params.as_dict() | {"m": m, "residual": res, "relative_residual": abs(res) / scale if scale else abs(res)}


def _add_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("-A", type=float, required=True)
    sp.add_argument("-B", type=float, required=True)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("-p", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json", "csv"], default="human")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--tolerance", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pvb", description="Coefficient bounds for p-valent Janowski-starlike functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bound", parents=[common], help="bounds and attainment for one n or a range LO:HI")
    _add_params(sp)
    sp.add_argument("-n", required=True, help="N or LO:HI")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("extremal", parents=[common], help="expand an extremal function")
    _add_params(sp)
    sp.add_argument("--family", choices=[f.value for f in Family], default="global")
    sp.add_argument("-n", type=int)
    sp.add_argument("--order", type=int)
    sp.add_argument("--gap", type=int, help="per-n lacunary gap (default: printed n-1)")
    sp.add_argument("--delta-turns", type=float, default=0.0, help="delta = exp(2 pi i t)")
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("membership", parents=[common], help="subordination check on a sample grid")
    _add_params(sp)
    sp.add_argument("--source", choices=["global", "per-n", "schwarz", "coeffs"], default="global")
    sp.add_argument("-n", type=int)
    sp.add_argument("--gap", type=int)
    sp.add_argument("--zeros", help="Blaschke zeros, e.g. '0.3+0.1j,-0.5j'")
    sp.add_argument("--coeffs", help="coefficients of z^p, z^(p+1), ... (first must be 1)")
    sp.add_argument("--order", type=int, help="truncation length for --coeffs (default 1024)")
    sp.add_argument("--delta-turns", type=float, default=0.0)
    sp.add_argument("--radii", type=float, nargs="+")
    sp.add_argument("--angles", type=int, default=DEFAULT_GRID.angles)
    sp.add_argument("--membership-tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_membership)

    sp = sub.add_parser("sweep", parents=[common], help="random members checked against the bound")
    _add_params(sp)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--max-n", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("audit", parents=[common], help="reproduce the table of W values")
    sp.add_argument("--table1", action="store_true", help="the four printed rows (the default)")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("falsify", parents=[common], help="exhibit a member beating the product bound")
    _add_params(sp)
    sp.add_argument("-n", type=int)
    sp.add_argument("--sweep-count", type=int, default=0, help="also run a companion random sweep")
    sp.set_defaults(func=cmd_falsify)

    sp = sub.add_parser("identity-check", parents=[common], help="residual of the squared-product identity")
    sp.add_argument("-A", type=float)
    sp.add_argument("-B", type=float)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("-p", type=int, default=1)
    sp.add_argument("--m-max", type=int)
    sp.add_argument("--random", type=int, default=0, metavar="K", help="K random case-3 points instead")
    sp.set_defaults(func=cmd_identity)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "identity-check" and not args.random and (args.A is None or args.B is None):
        print("pvb identity-check: need -A and -B, or --random K", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.showwarning = _show_warning
            out = args.func(args)
    except (InvalidParameters, UsageError, NotAFalsificationRegime, CaseMismatch, ValueError) as exc:
        print(f"pvb {args.command}: {exc}", file=sys.stderr)
        return 2
    text = render(out, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
