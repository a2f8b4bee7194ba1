"""Complex roots at configurable precision and the functionals built on them.

Roots come from a double-precision Aberth-Ehrlich sweep followed by Newton
polishing in mpmath; each root carries the Newton inclusion radius
deg * |P(z)| / |P'(z)| of its squarefree factor.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from . import _kernels
from .exactpoly import IntPolynomial, PolynomialError, exact_divide, poly_gcd

log = logging.getLogger(__name__)

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


class RootFinderError(ArithmeticError):
    def __init__(self, msg: str, residuals: Sequence[float] = ()):
        super().__init__(msg)
        self.residuals = list(residuals)


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 256
    newton_tol: Optional[mpf] = None

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be >= 64")

    @property
    def tol(self) -> mpf:
        if self.newton_tol is not None:
            return mpf(self.newton_tol)
        with mp.workprec(self.bits):
            return mpf(2) ** (-(self.bits // 2))

    @property
    def radius_cap(self) -> mpf:
        with mp.workprec(self.bits):
            return mpf(2) ** (-(self.bits // 4))


@dataclass(frozen=True)
class Root:
    value: mpc
    radius: mpf
    multiplicity: int = 1

    @property
    def abs(self) -> mpf:
        return abs(self.value)


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]
    source: IntPolynomial
    bits: int
    overlaps: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def values(self) -> list[mpc]:
        out = []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    def complex_array(self) -> np.ndarray:
        return np.array([complex(z) for z in self.values()], dtype=np.complex128)

    def to_json(self) -> str:
        rows = []
        for r in self.roots:
            for _ in range(r.multiplicity):
                rows.append({"re": mpmath.nstr(r.value.real, 30), "im": mpmath.nstr(r.value.imag, 30),
                             "radius": mpmath.nstr(r.radius, 5)})
        return json.dumps({"source": list(self.source.coeffs), "roots": rows})


# ---------------------------------------------------------------------------
# squarefree decomposition


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """[(s_i, i)] with p = c * prod s_i^i, each s_i squarefree and primitive."""
    out = []
    g_prev = p.primitive()
    gs = [g_prev]
    while gs[-1].degree > 0:
        gs.append(poly_gcd(gs[-1], gs[-1].derivative()))
    # w_i = g_{i-1} / g_i collects factors of multiplicity >= i
    ws = [exact_divide(gs[i - 1], gs[i]).primitive() for i in range(1, len(gs))]
    ws.append(IntPolynomial([1]))
    for i in range(1, len(ws)):
        s = exact_divide(ws[i - 1], ws[i]).primitive()
        if s.degree > 0:
            out.append((s, i))
    return out


# ---------------------------------------------------------------------------
# evaluation


class _Evaluator:
    """P and P' at mp points; sparse when P has few terms."""

    def __init__(self, p: IntPolynomial):
        self.p = p
        t = p.terms()
        self.sparse = len(t) * 8 < p.degree
        self.terms = t
        self.coeffs_hi = list(reversed(p.coeffs))

    def __call__(self, z):
        if self.sparse:
            f = mpc(0)
            df = mpc(0)
            for k, c in self.terms:
                if k == 0:
                    f += c
                    continue
                zk1 = z ** (k - 1)
                f += c * zk1 * z
                df += c * k * zk1
            return f, df
        f = mpc(0)
        df = mpc(0)
        for c in self.coeffs_hi:
            df = df * z + f
            f = f * z + c
        return f, df


def _float_roots(p: IntPolynomial, guesses: Optional[Sequence[complex]] = None, maxiter: int = 2000) -> np.ndarray:
    d = p.degree
    c = np.array([float(x) for x in reversed(p.coeffs)], dtype=np.complex128)
    c = c / c[0]
    dc = np.array([float(x) * (d - i) for i, x in enumerate(reversed(p.coeffs[1:]))], dtype=np.complex128)
    dc = dc / float(p.lc)
    if guesses is not None and len(guesses) == d:
        z = np.asarray(guesses, dtype=np.complex128).copy()
    else:
        r = abs(float(p.coeffs[0]) / float(p.lc)) ** (1.0 / d)
        r = r if r > 0 else 1.0
        k = np.arange(d)
        z = r * np.exp(1j * (GOLDEN_ANGLE * k + 0.4))
    # roots outside the unit disk are refined on the reversed polynomial, which is better scaled
    for _ in range(maxiter):
        z, step = _kernels.aberth_step(c, dc, z)
        if not np.all(np.isfinite(z)):
            raise RootFinderError("Aberth iteration diverged")
        if step <= 1e-14 * max(1.0, float(np.max(np.abs(z)))):
            break
    return z


def _polish(ev: _Evaluator, z0: complex, bits: int, deg: int) -> tuple[mpc, mpf, mpf]:
    with mp.workprec(bits + 32):
        z = mpc(z0)
        eps = mpf(2) ** (-bits)
        last = None
        for _ in range(200):
            f, df = ev(z)
            if df == 0:
                break
            step = f / df
            z -= step
            a = abs(step)
            if a <= eps * max(1, abs(z)):
                break
            if last is not None and a > last and a < mpf(2) ** (-(bits // 2)):
                break
            last = a
        f, df = ev(z)
        rad = deg * abs(f) / abs(df) if df != 0 else mpf("inf")
        # account for rounding in the evaluation itself
        rad += abs(z) * mpf(2) ** (-bits)
        return z, rad, abs(f)


def _roots_squarefree(s: IntPolynomial, bits: int, guesses=None) -> tuple[list[mpc], list[mpf], list[float]]:
    d = s.degree
    if d == 1:
        with mp.workprec(bits + 32):
            z = mpc(mpf(-s.coeffs[0]) / s.coeffs[1])
        return [z], [mpf(0)], [0.0]
    zf = _float_roots(s, guesses)
    ev = _Evaluator(s)
    zs, rs, res = [], [], []
    for z0 in zf:
        z, r, f = _polish(ev, complex(z0), bits, d)
        zs.append(z)
        rs.append(r)
        res.append(float(f))
    return zs, rs, res


def _find_overlaps(zs: list[mpc], rs: list[mpf]) -> list[tuple[int, int]]:
    arr = np.array([complex(z) for z in zs])
    n = len(arr)
    out = []
    order = np.argsort(arr.real)
    for a in range(n):
        i = order[a]
        for b in range(a + 1, n):
            j = order[b]
            if arr[j].real - arr[i].real > 1e-8:
                break
            if abs(arr[i] - arr[j]) < 1e-8 and abs(zs[i] - zs[j]) <= rs[i] + rs[j]:
                out.append((int(min(i, j)), int(max(i, j))))
    return out


def find_roots(p: IntPolynomial, ctx: PrecisionContext = PrecisionContext(),
               guesses: Optional[Sequence[complex]] = None, max_bits: int = 4096) -> RootSet:
    """All complex roots with certified radii below 2^-(bits/4)."""
    if p.is_zero() or p.degree < 1:
        raise PolynomialError("polynomial must have degree >= 1")
    v = p.valuation()
    roots: list[Root] = []
    if v:
        roots.append(Root(mpc(0), mpf(0), v))
        p = IntPolynomial(p.coeffs[v:])
    parts = squarefree_decomposition(p) if p.degree > 0 else []
    bits = ctx.bits
    cap = ctx.radius_cap
    for s, mult in parts:
        g = guesses if (guesses is not None and len(parts) == 1 and mult == 1 and not v) else None
        b = bits
        while True:
            zs, rs, res = _roots_squarefree(s, b, g)
            ov = _find_overlaps(zs, rs)
            if max(rs) <= cap and not ov:
                break
            if b * 2 > max_bits:
                raise RootFinderError("roots not certified within precision budget", res)
            log.debug("restarting root polish at %d bits", 2 * b)
            b *= 2
            g = [complex(z) for z in zs]
        roots.extend(Root(z, r, mult) for z, r in zip(zs, rs))
    allz = [r.value for r in roots]
    allr = [r.radius for r in roots]
    return RootSet(tuple(roots), p if not v else p * IntPolynomial.monomial(v), bits, tuple(_find_overlaps(allz, allr)))


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class MahlerResult:
    value: mpf
    error: mpf
    on_circle: int
    flagged: bool

    def __float__(self) -> float:
        return float(self.value)


def mahler_from_roots(lc: int, rs: RootSet) -> MahlerResult:
    with mp.workprec(rs.bits):
        logm = mpmath.log(abs(mpf(lc)))
        err = mpf(0)
        on = 0
        for r in rs.roots:
            a = abs(r.value)
            if a - r.radius > 1:
                logm += r.multiplicity * mpmath.log(a)
                err += r.multiplicity * r.radius / (a - r.radius)
            elif a + r.radius < 1:
                continue
            else:
                on += r.multiplicity
                err += r.multiplicity * mpmath.log1p(r.radius)
        m = mpmath.exp(logm)
        return MahlerResult(m, m * (mpmath.exp(err) - 1), on, on > 0 and err > mpf(2) ** (-(rs.bits // 4)))


def mahler_measure(p: IntPolynomial, ctx: PrecisionContext = PrecisionContext()) -> MahlerResult:
    """|a_d| * prod max(1, |alpha|) with leading coefficient a_d."""
    if p.is_zero():
        raise PolynomialError("zero polynomial")
    if p.degree == 0:
        return MahlerResult(mpf(abs(p.lc)), mpf(0), 0, False)
    return mahler_from_roots(p.lc, find_roots(p, ctx))


@dataclass(frozen=True)
class HouseHeight:
    house: mpf
    weil_height: mpf
    mahler: mpf


def house_and_height(p: IntPolynomial, ctx: PrecisionContext = PrecisionContext()) -> HouseHeight:
    rs = find_roots(p, ctx)
    m = mahler_from_roots(p.lc, rs)
    with mp.workprec(ctx.bits):
        h = max(abs(r.value) for r in rs.roots)
        return HouseHeight(h, mpmath.log(m.value) / p.degree, m.value)


# ---------------------------------------------------------------------------
# Pierce numbers


def _bareiss_det(mat: list[list[int]]) -> int:
    n = len(mat)
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _mulmod(a: list[int], b: list[int], tail: list[int], d: int) -> list[int]:
    """Product in Z[x]/(P) with P monic, x^d = sum tail_i x^i."""
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i, t in enumerate(tail):
                prod[k - d + i] += c * t
    return prod[:d]


def pierce_delta(p: IntPolynomial, n: int) -> int:
    """prod (alpha_i^n - 1) = Res(P, X^n - 1) for monic P, computed exactly.

    X^n - 1 is reduced mod P by square-and-multiply, then the norm is the
    determinant of multiplication by that residue on Z[X]/(P).
    """
    if not p.is_monic():
        raise PolynomialError("pierce_delta requires a monic polynomial")
    if n < 1:
        raise ValueError("n must be >= 1")
    d = p.degree
    tail = [-c for c in p.coeffs[:-1]]
    one = [1] + [0] * (d - 1)
    xv = [0] * d
    if d == 1:
        xv = [tail[0]]
    else:
        xv[1] = 1
    acc, base, k = one, xv, n
    while k:
        if k & 1:
            acc = _mulmod(acc, base, tail, d)
        base = _mulmod(base, base, tail, d)
        k >>= 1
    r = acc[:]
    r[0] -= 1
    # columns: r * x^i reduced
    cols = []
    cur = r
    for _ in range(d):
        cols.append(cur)
        cur = _mulmod(cur, xv, tail, d)
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    return _bareiss_det(mat)
