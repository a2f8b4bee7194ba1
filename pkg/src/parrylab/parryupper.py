"""The Parry Upper function f_beta(z) = -1 + sum t_i z^i and what hangs off it."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Optional

import mpmath
import numpy as np
from mpmath import mp, mpf

from . import _kernels
from .betadynamics import (
    AlgebraicReal,
    Beta,
    BetaError,
    FloatBeta,
    OrbitRing,
    ParryExpansion,
    as_beta,
    beta_value,
    dyg,
    gap_structure_ok,
    parry_polynomial,
    renyi_expansion,
)
from .exactpoly import IntPolynomial


class ContourTooClose(ArithmeticError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Integer power series c_0 + ... + c_N z^N with a tail bound on |z| <= r < 1."""

    coeffs: tuple[int, ...]
    digit_max: int = 1

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def tail_bound(self, r: float) -> float:
        if not 0 <= r < 1:
            raise ValueError("tail bound needs 0 <= r < 1")
        return self.digit_max * r ** (self.N + 1) / (1 - r)

    def sparse(self) -> tuple[np.ndarray, np.ndarray]:
        idx = [k for k, c in enumerate(self.coeffs) if c]
        return np.array(idx, dtype=np.int64), np.array([self.coeffs[k] for k in idx], dtype=np.complex128)

    def eval(self, pts: np.ndarray) -> np.ndarray:
        e, v = self.sparse()
        return _kernels.sparse_eval(e, v, np.asarray(pts, dtype=np.complex128))

    def eval_d(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        e, v = self.sparse()
        return _kernels.sparse_eval_d(e, v, np.asarray(pts, dtype=np.complex128))

    def eval_mp(self, z) -> tuple:
        f = mpmath.mpc(0)
        df = mpmath.mpc(0)
        for k, c in enumerate(self.coeffs):
            if c:
                if k == 0:
                    f += c
                else:
                    zk1 = z ** (k - 1)
                    f += c * zk1 * z
                    df += c * k * zk1
        return f, df

    def to_json(self) -> str:
        return json.dumps({str(k): c for k, c in enumerate(self.coeffs) if c})

    def as_poly(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)


def _expansion(beta: Beta, budget: int) -> ParryExpansion:
    return renyi_expansion(beta, budget)


def f_beta(beta, N: int, budget: int = 100000, expansion: Optional[ParryExpansion] = None) -> TruncatedSeries:
    """Coefficients -1, t_1, ..., t_N."""
    beta = as_beta(beta)
    e = expansion if expansion is not None else _expansion(beta, budget if not isinstance(beta, FloatBeta) else N)
    if e.kind == "undetermined" and N > len(e.digits):
        raise BetaError("expansion undetermined beyond computed digits")
    ds = e.unroll(N)
    with mp.workprec(64):
        if beta_value(beta, 64) <= (1 + mpmath.sqrt(5)) / 2:
            n = dyg(beta)
            if not gap_structure_ok(ds, n):
                raise BetaError("gap structure violated: digits inconsistent with dyg")
    return TruncatedSeries(tuple([-1] + ds), max(ds) if ds else 1)


@dataclass(frozen=True)
class RationalForm:
    """f_beta = numerator / denominator and zeta_beta = zeta_num / zeta_den."""

    numerator: IntPolynomial
    denominator: IntPolynomial
    zeta_num: IntPolynomial
    zeta_den: IntPolynomial
    simple: bool


def zeta_rational_form(beta, budget: int = 100000, expansion: Optional[ParryExpansion] = None) -> RationalForm:
    beta = as_beta(beta)
    e = expansion if expansion is not None else _expansion(beta, budget)
    if e.kind == "undetermined":
        raise BetaError("no rational form")
    pp = parry_polynomial(e).parry
    num = -pp.reverse()
    if e.kind == "simple":
        den = IntPolynomial([1])
        n_min = len(e.digits)
        one_minus = IntPolynomial.from_terms({0: 1, n_min: -1})
        # zeta = -(1 - z^N) / f
        return RationalForm(num, den, one_minus, pp.reverse(), True)
    per = IntPolynomial.from_terms({0: 1, e.period: -1})
    return RationalForm(num, per, IntPolynomial([1]) * per, pp.reverse(), False)


def series_of_rational(num: IntPolynomial, den: IntPolynomial, N: int) -> list[int]:
    """Power-series coefficients of num/den up to z^N; den(0) must be +-1."""
    d0 = den[0]
    if d0 not in (1, -1):
        raise ValueError("denominator constant term must be a unit")
    out = []
    dc = den.coeffs
    for k in range(N + 1):
        s = num[k] - sum(dc[j] * out[k - j] for j in range(1, min(k, len(dc) - 1) + 1))
        out.append(s * d0)
    return out


def orbit_series_check(beta: AlgebraicReal, N: int, bits: int = 256) -> mpf:
    """max_k |coefficient of -(1 - beta z) sum T^n(1) z^n minus that of f|, k <= N."""
    e = renyi_expansion(beta, 10 * N + 1000)
    ring = OrbitRing(beta)
    with mp.workprec(bits):
        b = beta.value(bits)
        orbit = []
        v = ring.one()
        for _ in range(N + 1):
            x = mpf(0)
            for c in reversed(v):
                x = x * b + c
            orbit.append(x)
            w = ring.mul_beta(v)
            v = ring.sub_int(w, ring.floor(w))
        fc = [-1] + e.unroll(N)
        err = mpf(0)
        for k in range(N + 1):
            c = -orbit[k] + (b * orbit[k - 1] if k else 0)
            err = max(err, abs(c - fc[k]))
        return err


def reversed_minpoly(p: IntPolynomial) -> IntPolynomial:
    """P*(z) normalised to constant term +1."""
    q = p.reverse()
    if q[0] < 0:
        q = -q
    if q[0] != 1:
        raise ValueError("constant term of the reversed polynomial must be +-1")
    return q


def u_beta_coeffs(p: IntPolynomial, f: TruncatedSeries, N: int) -> list[int]:
    """b_0 .. b_N of U_beta = P / f_beta, with P given with constant term +1."""
    if p[0] != 1:
        raise ValueError("P must have constant term +1 (pass the reversed minimal polynomial)")
    if f.coeffs[0] != -1:
        raise ValueError("f must start with -1")
    if N > f.N:
        raise ValueError("series too short")
    t = f.coeffs
    b = [-1]
    for r in range(1, N + 1):
        s = sum(b[j] * t[r - j] for j in range(1, r))
        b.append(-(t[r] + p[r] - s))
    # verification of U f = P coefficientwise
    for k in range(N + 1):
        conv = sum(b[j] * t[k - j] for j in range(k + 1))
        if conv != p[k]:
            raise ArithmeticError(f"U*f != P at order {k}")
    return b


@dataclass(frozen=True)
class TaylorCoefficient:
    value: mpf
    error: mpf


def taylor_c_m(beta, m: int, N: int = 2000, budget: int = 100000, bits: int = 256) -> TaylorCoefficient:
    """c_{beta,m} = f^(m)(1/beta) / m! from the digit series, with a geometric tail bound."""
    if m < 1:
        raise ValueError("m >= 1")
    beta = as_beta(beta)
    e = _expansion(beta, budget if not isinstance(beta, FloatBeta) else N)
    n_avail = N if e.kind != "undetermined" else min(N, len(e.digits))
    ds = e.unroll(n_avail)
    with mp.workprec(bits):
        x = 1 / beta_value(beta, bits)
        s = mpf(0)
        for n in range(m, n_avail + 1):
            t = ds[n - 1]
            if t:
                s += comb(n, m) * t * x ** (n - m)
        tmax = max(ds) if ds else 1
        n0 = n_avail + 1
        q = x * mpf(n0 + 1) / (n0 + 1 - m)
        if q >= 1:
            err = mpf("inf")
        else:
            err = tmax * comb(n0, m) * x ** (n0 - m) / (1 - q)
        return TaylorCoefficient(s, err)


def annulus_constant(beta_val) -> mpf:
    b = mpf(beta_val)
    num = mpmath.log(1 - 1 / b) - mpmath.log(2 - 1 / b)
    den = ((b - 1) / mpmath.log(b - 1) + 1) * mpmath.log(1 - 1 / b)
    return num / den


def annulus_bound(beta_val, r) -> mpf:
    return annulus_constant(beta_val) * mpmath.log(1 - mpf(r)) / mpmath.log(mpf(r))


def winding_count(f: TruncatedSeries, r: float, samples: int = 512, max_samples: int = 1 << 20) -> int:
    """Zeros of f inside |z| = r by sampled argument increments, with tail-bound safety."""
    tail = f.tail_bound(r)
    prev = None
    k = samples
    while k <= max_samples:
        th = 2 * np.pi * np.arange(k) / k
        vals = f.eval(r * np.exp(1j * th))
        mn = float(np.min(np.abs(vals)))
        if mn <= 4 * tail:
            raise ContourTooClose(f"contour |z|={r} within tail uncertainty of a zero")
        w = _kernels.winding(vals)
        cnt = int(round(w))
        if abs(w - cnt) < 1e-6 and _kernels.max_step(vals) < np.pi / 2:
            if prev == cnt:
                return cnt
            prev = cnt
        else:
            prev = None
        k *= 2
    raise ContourTooClose("winding number did not stabilise")


@dataclass(frozen=True)
class AnnulusCount:
    count: int
    bound: float
    inner: int
    outer: int


def annulus_zero_count(beta, r: float, samples: int = 512, N: Optional[int] = None, budget: int = 100000,
                       eps: float = 1e-3) -> AnnulusCount:
    """Zeros of f_beta in 1/beta <= |z| <= r (winding difference) and the majorant."""
    beta = as_beta(beta)
    bval = float(beta_value(beta, 64))
    if not 1 / bval <= r < 1:
        raise ValueError("need 1/beta <= r < 1")
    if N is None:
        N = 2000
        while (r ** (N + 1)) / (1 - r) > 1e-12:
            N *= 2
    f = f_beta(beta, N, budget)
    outer = winding_count(f, r, samples)
    inner = winding_count(f, 1 / bval - eps, samples)
    return AnnulusCount(outer - inner, float(annulus_bound(mpf(bval), r)), inner, outer)
