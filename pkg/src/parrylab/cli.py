"""parry-lab command line: JSON on stdout (or --emit), a short summary on stderr."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from . import __version__
from .betadynamics import (
    AlgebraicReal,
    FloatBeta,
    classify_blanchard,
    dyg,
    format_pattern,
    renyi_expansion,
    theta_perron,
)
from .equidist import belotserkovski_bound, circle_discrepancy, discrepancy_csv
from .exactpoly import IntPolynomial, format_poly, parse_poly
from .lenticulus import bounds_suite, find_amax, lenticular_measure, locate_lenticulus
from .rootfinder import PrecisionContext, find_roots, mahler_measure
from .table1 import verify_table1
from .trinomial import asym_root, gn_roots, lambda_limit

SCHEMA = "parry-lab/1"


class CheckFailed(Exception):
    pass


def _s(x, digits: int = 30) -> str:
    return mpmath.nstr(x, digits)


def _read_poly(arg: str) -> IntPolynomial:
    p = Path(arg)
    text = p.read_text() if p.is_file() else arg
    s = text.strip()
    if s.startswith("{"):
        data = json.loads(s)
        if "coeffs" not in data:
            raise ValueError("polynomial JSON needs a 'coeffs' array, lowest degree first")
        return IntPolynomial(data["coeffs"])
    return parse_poly(s)


def _read_beta(arg: str, bits: int):
    """A decimal gives a float beta; anything else is read as a polynomial and its largest real root."""
    try:
        with mp.workprec(bits):
            v = mpmath.mpf(arg)
        if not Path(arg).is_file():
            return FloatBeta(v, bits)
    except (ValueError, TypeError):
        pass
    return AlgebraicReal.largest_real_root(_read_poly(arg))


def _emit(args, payload: dict, text: Optional[str] = None) -> None:
    payload = {"schema": SCHEMA, **payload}
    out = text if text is not None else json.dumps(payload, indent=1)
    if getattr(args, "emit", None):
        Path(args.emit).write_text(out if out.endswith("\n") else out + "\n")
        print(json.dumps({"schema": SCHEMA, "written": args.emit}))
    else:
        print(out)


def _ctx(args) -> PrecisionContext:
    return PrecisionContext(args.precision)


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    beta = _read_beta(args.beta, args.precision)
    e = renyi_expansion(beta, args.budget)
    _emit(args, {"kind": "expansion", "pattern": format_pattern(e), "type": e.kind, "preperiod": e.preperiod,
                 "period": e.period, "exact": e.exact, "digits": len(e.digits)})
    print(format_pattern(e), file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    beta = _read_beta(args.beta, args.precision)
    c = classify_blanchard(beta, args.budget)
    _emit(args, {"kind": "classification", "class": c.label, "pattern": format_pattern(c.expansion),
                 "longest_zero_run": c.longest_zero_run, "exact": c.expansion.exact})
    return 0


def cmd_dyg(args) -> int:
    beta = _read_beta(args.beta, args.precision)
    _emit(args, {"kind": "dyg", "dyg": dyg(beta), "exact": isinstance(beta, AlgebraicReal)})
    return 0


def cmd_mahler(args) -> int:
    p = _read_poly(args.poly)
    m = mahler_measure(p, _ctx(args))
    _emit(args, {"kind": "mahler", "poly": format_poly(p), "M": _s(m.value), "error": _s(m.error, 5),
                 "on_circle": m.on_circle, "flagged": m.flagged})
    print(f"M = {_s(m.value, 15)}", file=sys.stderr)
    return 0


def cmd_trinomial(args) -> int:
    n = args.n
    ctx = _ctx(args)
    r = gn_roots(n, ctx, upto=n // 6 if args.upto is None else args.upto)
    rows = [(0, r.theta, "theta")] + [(j, r.z(j), None) for j in range(1, len(r.upper) + 1)]
    out = []
    for j, z, tag in rows:
        row = {"j": j, "re": _s(mpmath.re(z)), "im": _s(mpmath.im(z)), "abs": _s(abs(z)),
               "arg": _s(mpmath.arg(z))}
        if n >= 18 and j <= n // 6:
            d = asym_root(n, j)
            row.update({"sector": d.sector_tag, "D_re": _s(d.D_re), "D_im": _s(d.D_im),
                        "dist": _s(abs(mpmath.mpc(z) - d.value), 5)})
        out.append(row)
    if args.format == "csv":
        cols = ["j", "re", "im", "abs", "arg", "D_re", "D_im", "sector"]
        lines = [",".join(cols)] + [",".join(str(r.get(c, "")) for c in cols) for r in out]
        _emit(args, {}, "\n".join(lines))
    else:
        _emit(args, {"kind": "trinomial", "n": n, "roots": out})
    return 0


def cmd_lenticulus(args) -> int:
    ctx = _ctx(args)
    beta = _read_beta(args.beta, args.precision)
    minpoly = beta.minpoly if isinstance(beta, AlgebraicReal) else None
    L = locate_lenticulus(beta, ctx, minpoly=minpoly, first_root_only=args.first_root,
                          samples=args.samples, budget=args.budget)
    m = lenticular_measure(L, ctx)
    payload = json.loads(L.to_json())
    payload.update({"M_r": _s(m.M_r), "L_r": _s(m.L_r), "excluded": m.excluded})
    _emit(args, payload)
    print(f"dyg {L.n}, {len(L.certified)} certified discs, M_r = {_s(m.M_r, 12)}", file=sys.stderr)
    return 0


def cmd_bounds(args) -> int:
    p = _read_poly(args.poly)
    if p.lc < 0:
        p = -p
    rep = bounds_suite(p, _ctx(args))
    _emit(args, {"kind": "bounds", "poly": format_poly(p), **rep.to_dict()})
    return 0


def cmd_equidist(args) -> int:
    rows = []
    ctx = PrecisionContext(max(64, args.precision // 2))
    for n in args.n:
        d = circle_discrepancy(find_roots(IntPolynomial.from_terms({0: -1, 1: 1, n: 1}), ctx))
        rows.append((n, d, 8 * math.log(n) / math.sqrt(n)))
    if args.format == "csv":
        _emit(args, {}, discrepancy_csv(rows))
    else:
        _emit(args, {"kind": "equidist",
                     "rows": [{"n": n, "discrepancy": d, "bound": b,
                               "sigma": belotserkovski_bound(n, 0.0, 0.0)} for n, d, b in rows]})
    return 0


def cmd_constants(args) -> int:
    ctx = _ctx(args)
    C = find_amax(ctx)
    bits = args.precision
    digits = max(15, int(bits * math.log10(2)) - 5)
    out = {"kind": "constants", "precision": bits,
           "Lambda": _s(lambda_limit(bits), digits)}
    for k in ("Lambda_r", "mu_r", "kappa", "a_max", "S", "c", "ratio_c", "dobrowolski_floor", "slope"):
        out[k] = _s(getattr(C, k), digits)
    for n in (5, 31, 259):
        out[f"theta{n}_inv"] = _s(theta_perron(n).value(bits), digits)
    _emit(args, out)
    return 0


def cmd_table1(args) -> int:
    checks = verify_table1(args.budget)
    ok = sum(c.ok for c in checks)
    _emit(args, {"kind": "table1", "reproduced": ok, "rows": len(checks), "checks": [c.to_dict() for c in checks]})
    print(f"{ok}/{len(checks)} rows reproduced", file=sys.stderr)
    for c in checks:
        if not c.ok:
            print(f"  {c.entry.label}: {'; '.join(c.mismatches)}", file=sys.stderr)
    if ok != len(checks):
        raise CheckFailed("table rows differ from the re-derivation")
    return 0


def cmd_suite(args) -> int:
    from .acceptance import run_all

    res = run_all(_ctx(args), args.only)
    for r in res:
        print(r.line(), file=sys.stderr)
    _emit(args, {"kind": "suite", "results": [r.to_dict() for r in res]})
    if not all(r.passed for r in res):
        raise CheckFailed(f"{sum(not r.passed for r in res)} criteria failed")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parry-lab", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits")
    common.add_argument("--budget", type=int, default=100000, help="iteration budget for expansions")
    common.add_argument("--samples", type=int, default=512, help="contour samples")
    common.add_argument("--seedless", action="store_true", help="accepted for compatibility; runs are deterministic")
    common.add_argument("--emit", help="write the report to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    for name, fn, h in (("expand", cmd_expand, "Renyi expansion of 1 in base beta"),
                        ("classify", cmd_classify, "Blanchard class of beta"),
                        ("dyg", cmd_dyg, "dynamical degree of beta"),
                        ("lenticulus", cmd_lenticulus, "certified lenticular zeros of f_beta")):
        p = add(name, fn, h)
        p.add_argument("--beta", required=True, help="decimal, polynomial expression or polynomial file")
        if name == "lenticulus":
            p.add_argument("--first-root", action="store_true", help="only the first Rouche disc (dyg >= 32)")
    for name, fn, h in (("mahler", cmd_mahler, "Mahler measure"), ("bounds", cmd_bounds, "universal bounds")):
        p = add(name, fn, h)
        p.add_argument("--poly", required=True, help="polynomial expression, coefficient array or file")
        p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p = add("trinomial", cmd_trinomial, "indexed roots of -1 + z + z^n with developments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upto", type=int, default=None, help="last index j (default n/6)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p = add("equidist", cmd_equidist, "angular discrepancy of G_n roots")
    p.add_argument("--n", type=int, nargs="+", default=[100, 400, 1600])
    p.add_argument("--format", choices=("json", "csv"), default="json")
    add("constants", cmd_constants, "closed-form and limit constants")
    add("table1-verify", cmd_table1, "re-derive the bundled table")
    p = add("suite", cmd_suite, "run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="+", default=None)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision < 53:
        print("--precision must be at least 53 bits", file=sys.stderr)
        return 2
    mp.prec = args.precision
    try:
        return args.func(args)
    except CheckFailed as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, FileNotFoundError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
