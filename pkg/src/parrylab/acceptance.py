"""The fourteen acceptance checks, each returning a structured pass/fail record."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import mpmath
from mpmath import mp, mpf

from .betadynamics import AlgebraicReal, renyi_expansion, theta_perron
from .equidist import circle_discrepancy
from .exactpoly import LEHMER, IntPolynomial, cyclotomic, gn, gn_star
from .lenticulus import (
    bounds_suite,
    dobrowolski_minorant,
    find_amax,
    lenticular_indices,
    lenticular_measure,
    locate_lenticulus,
    rouche_first_root,
    rouche_verify,
    thresholds,
)
from .parryupper import f_beta, reversed_minpoly, series_of_rational, u_beta_coeffs, zeta_rational_form
from .parryupper import annulus_zero_count
from .rootfinder import PrecisionContext, find_roots, mahler_measure, pierce_delta
from .table1 import load_table1, verify_table1
from .trinomial import (
    asym_root,
    asym_tolerance,
    lambda_lseries,
    lambda_quadrature,
    mahler_gn,
    theta_n,
    trinomial_root,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.title} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "details": _plain(self.details), "seconds": round(self.seconds, 3)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (mpf, mpmath.mpc)):
        return mpmath.nstr(x, 15)
    return x


def _close(a, b, tol) -> bool:
    return abs(mpf(a) - mpf(b)) <= tol


def crit_1(ctx: PrecisionContext) -> CriterionResult:
    checks = verify_table1()
    bad = {c.entry.label: c.mismatches for c in checks if not c.ok}
    errata_ok = all(c.erratum_consistent for c in checks if c.entry.erratum and c.entry.minpoly is not None)
    return CriterionResult(1, "Table 1 reproduction", not bad,
                           {"rows": len(checks), "reproduced": len(checks) - len(bad), "mismatches": bad,
                            "errata_consistent": errata_ok})


def crit_2(ctx: PrecisionContext) -> CriterionResult:
    m2 = mahler_gn(2, ctx, cross_check=True).M
    m5 = mahler_gn(5, ctx, cross_check=True).M
    with mp.workprec(ctx.bits):
        golden = (1 + mpmath.sqrt(5)) / 2
        plastic = theta_perron(5).value(ctx.bits)
    ms = {n: mahler_gn(n, ctx).M for n in range(3, 101)}
    best = min(ms.values())
    argmin = [n for n, v in ms.items() if v - best < mpf(10) ** -12]
    ok = _close(m2, golden, 1e-9) and _close(m5, plastic, 1e-9) and _close(m5, "1.324717", 1e-6) and argmin == [5]
    return CriterionResult(2, "M(G_2), M(G_5) and the minimum over 3..100", ok,
                           {"M2": m2, "M5": m5, "argmin": argmin, "min": best})


def crit_3(ctx: PrecisionContext) -> CriterionResult:
    q = lambda_quadrature(ctx.bits)
    ls = lambda_lseries(ctx.bits)
    rn = {n: mahler_gn(n, ctx).rn for n in (50, 100, 500, 1000)}
    ok = _close(q, "1.38135", 5e-5) and abs(q - ls) <= 1e-12 and all(abs(v) <= 1 / 6 + 0.05 for v in rn.values())
    return CriterionResult(3, "Lambda by quadrature and L-series, r(n)", ok,
                           {"quadrature": q, "lseries": ls, "diff": abs(q - ls), "r": rn})


def crit_4(ctx: PrecisionContext) -> CriterionResult:
    C = find_amax(ctx)
    k_raw = mpf(C.kappa_golden)
    ok = (_close(k_raw, "0.171573", 1e-6) and abs(C.kappa**2 - 6 * C.kappa + 1) <= 1e-10
          and _close(C.a_max, "5.87433", 1e-4) and _close(C.S, "0.171784", 1e-6)
          and _close(C.c, "1.76274", 1e-5) and _close(C.ratio_c, "0.0355344", 1e-6))
    return CriterionResult(4, "kappa, a_max, S, c", ok, C.to_dict())


def crit_5(ctx: PrecisionContext) -> CriterionResult:
    C = find_amax(ctx)
    ok = (_close(C.Lambda_r, "1.16302", 1e-5) and _close(C.mu_r, "0.992337", 1e-5)
          and _close(C.dobrowolski_floor, "1.15411", 1e-5) and _close(C.slope, "0.0315536", 1e-6))
    return CriterionResult(5, "Lambda_r, mu_r and the minorant slope", ok,
                           {"Lambda_r": C.Lambda_r, "mu_r": C.mu_r, "product": C.dobrowolski_floor, "slope": C.slope})


def crit_6(ctx: PrecisionContext) -> CriterionResult:
    idx = lenticular_indices(615, ctx)
    asym = {}
    ok = idx.J_n == 17 and idx.H_n == 12
    for n in (260, 615, 1000, 5000):
        i = lenticular_indices(n, ctx)
        asym[n] = (i.J_n, round(i.J_asym, 4))
        ok &= abs(i.J_n - i.J_asym) <= 1
    return CriterionResult(6, "J_615, H_615 and the J_n asymptotic", ok,
                           {"J_615": idx.J_n, "H_615": idx.H_n, "J_vs_asym": asym})


def crit_7(ctx: PrecisionContext) -> CriterionResult:
    worst = {}
    ok = True
    for n in (200, 615, 1000):
        tol = asym_tolerance(n)
        w = mpf(0)
        for j in range(1, n // 6 + 1):
            d = asym_root(n, j)
            if d.sector_tag != "main":
                continue
            z, _ = trinomial_root(n, j, ctx.bits)
            w = max(w, abs(z - d.value) / tol)
        wt = abs(theta_n(n, ctx.bits) - asym_root(n, 0).D_re) / tol
        worst[n] = {"main_ratio": w, "theta_ratio": wt}
        ok &= w <= 1 and wt <= 1
    return CriterionResult(7, "asymptotic expansions within 2(LogLog n/Log n)^2/n", ok, worst)


def crit_8(ctx: PrecisionContext) -> CriterionResult:
    J = lenticular_indices(615, ctx).J_n
    circ = {j: rouche_verify(615, j, ctx=ctx).margin for j in range(1, J + 1)}
    first = {n: rouche_first_root(n, ctx=ctx).margin for n in range(32, 201)}
    ok = all(m > 0 for m in circ.values()) and all(m > 0 for m in first.values())
    return CriterionResult(8, "Rouche margins", ok,
                           {"min_margin_615": min(circ.values()), "min_margin_first_root": min(first.values())})


def crit_9(ctx: PrecisionContext) -> CriterionResult:
    b = theta_perron(300)
    L = locate_lenticulus(b, ctx, minpoly=b.minpoly)
    cert = [e for e in L.entries if e.j > 0 and e.certified and e.conjugate_ok]
    ok = len(cert) == L.J_n and L.entries[0].certified
    mr = {}
    for n in (260, 300, 400):
        bn = theta_perron(n)
        Ln = L if n == 300 else locate_lenticulus(bn, ctx)
        m = lenticular_measure(Ln, ctx).M_r
        floor_ = dobrowolski_minorant(n, ctx)
        mr[n] = {"M_r": m, "minorant": floor_}
        ok &= m >= floor_
    return CriterionResult(9, "lenticulus of theta_300^-1 and M_r minorant", ok,
                           {"J_300": L.J_n, "certified": len(cert), "M_r": mr})


def _salem_rows():
    return [e for e in load_table1() if e.minpoly is not None and e.is_salem]


def crit_10(ctx: PrecisionContext) -> CriterionResult:
    N = 300
    details = {}
    ok = True
    for e in _salem_rows():
        beta = AlgebraicReal.largest_real_root(e.minpoly)
        f = f_beta(beta, N)
        P = reversed_minpoly(e.minpoly)
        u = u_beta_coeffs(P, f, N)
        # second route: U = P (1 - z^p) / (-P*_parry) from the rational form
        rf = zeta_rational_form(beta)
        u2 = series_of_rational(P * rf.denominator, rf.numerator, N)
        conv = [sum(u[j] * f.coeffs[k - j] for j in range(k + 1)) - P[k] for k in range(N + 1)]
        row_ok = u == u2 and not any(conv)
        if e.beta_decimal == "1.291741":
            expect = [0] * (N + 1)
            expect[0], expect[23] = -1, 1
            details["U_1.291741_is_-(1-z^23)"] = u == expect
            row_ok &= u == expect
        details[e.label] = row_ok
        ok &= row_ok
    return CriterionResult(10, "U_beta f_beta = P_beta for the Salem rows", ok, details)


def _corpus() -> list[tuple[str, IntPolynomial]]:
    out = [(e.label, e.minpoly) for e in load_table1() if e.minpoly is not None]
    out.append(("Lehmer", LEHMER))
    out += [(f"G*_{n}", -gn_star(n)) for n in (7, 13, 31)]
    out += [("Phi_12", cyclotomic(12)), ("Phi_7 Phi_9", cyclotomic(7) * cyclotomic(9))]
    out.append(("X^2 - 3", IntPolynomial([-3, 0, 1])))
    return out


def crit_11(ctx: PrecisionContext) -> CriterionResult:
    th = thresholds(ctx.bits)
    finite = [e.label for e in _salem_rows()
              if renyi_expansion(AlgebraicReal.largest_real_root(e.minpoly)).kind == "simple"]
    sz_const = th.theta259_inv - 1
    details = {"finite_salem": finite, "theta31_inv": th.theta31_inv, "theta259_inv": th.theta259_inv,
               "sz_constant": sz_const}
    ok = not finite and _close(sz_const, "0.016126", 1e-6)
    bad = []
    for label, p in _corpus():
        p = p if p.lc > 0 else -p
        rep = bounds_suite(p, ctx)
        if rep.root_of_unity:
            continue
        if rep.salem_profile and not rep.salem_ok:
            bad.append((label, "salem"))
        if not rep.lehmer_ok:
            bad.append((label, "lehmer"))
        if not rep.house >= 1 + mpf("0.016126") / p.degree:
            bad.append((label, "house"))
    details["failures"] = bad
    ok &= not bad
    return CriterionResult(11, "universal bounds over the corpus", ok, details)


def crit_12(ctx: PrecisionContext) -> CriterionResult:
    d = pierce_delta(LEHMER, 500)
    with mp.workprec(ctx.bits):
        lhs = abs(mpmath.log(abs(mpf(d)))) / 500
        logm = mpmath.log(mahler_measure(LEHMER, ctx).value)
    ok = abs(lhs - logm) <= 0.02
    return CriterionResult(12, "Pierce growth for the Lehmer polynomial", ok,
                           {"log_delta_over_n": lhs, "log_M": logm})


def crit_13(ctx: PrecisionContext) -> CriterionResult:
    beta = AlgebraicReal.largest_real_root(LEHMER)
    res = {}
    ok = True
    for r in (0.9, 0.95):
        a = annulus_zero_count(beta, r)
        res[r] = {"count": a.count, "bound": a.bound}
        ok &= a.count <= a.bound
    return CriterionResult(13, "annulus zero bound for the Lehmer number", ok, res)


def crit_14(ctx: PrecisionContext) -> CriterionResult:
    ds = {}
    ok = True
    prev = math.inf
    for n in (100, 400, 1600):
        d = circle_discrepancy(find_roots(gn(n), PrecisionContext(max(64, ctx.bits // 2))))
        b = 8 * math.log(n) / math.sqrt(n)
        ds[n] = {"discrepancy": d, "bound": b}
        ok &= d <= b and d <= prev
        prev = d
    return CriterionResult(14, "discrepancy of G_n roots", ok, ds)


CRITERIA: dict[int, Callable[[PrecisionContext], CriterionResult]] = {
    1: crit_1, 2: crit_2, 3: crit_3, 4: crit_4, 5: crit_5, 6: crit_6, 7: crit_7,
    8: crit_8, 9: crit_9, 10: crit_10, 11: crit_11, 12: crit_12, 13: crit_13, 14: crit_14,
}


def run_criterion(k: int, ctx: PrecisionContext = PrecisionContext()) -> CriterionResult:
    t = time.perf_counter()
    try:
        r = CRITERIA[k](ctx)
    except Exception as exc:  # a crash is a failure with a reason, not a suite abort
        r = CriterionResult(k, CRITERIA[k].__name__, False, {"error": f"{type(exc).__name__}: {exc}"})
    r.seconds = time.perf_counter() - t
    return r


def run_all(ctx: PrecisionContext = PrecisionContext(), only=None) -> list[CriterionResult]:
    return [run_criterion(k, ctx) for k in (only or sorted(CRITERIA))]
