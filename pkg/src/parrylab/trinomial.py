"""Roots of G_n = -1 + z + z^n: indexing, asymptotic developments, M(G_n) and Lambda."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .betadynamics import theta_minpoly
from .exactpoly import gn
from .rootfinder import PrecisionContext, mahler_measure

ETA = mpf("1.2817770214")
N0 = 18


class TrinomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# theta_n


_THETA: dict[tuple[int, int], mpf] = {}
_LOCK = threading.Lock()


def theta_n(n: int, bits: int = 256) -> mpf:
    """The root of G_n in (0, 1), by bisection on a guaranteed bracket."""
    if n < 2:
        raise TrinomialError("n >= 2")
    key = (n, bits)
    with _LOCK:
        if key in _THETA:
            return _THETA[key]
    with mp.workprec(bits + 16):
        lo, hi = mpf(0), mpf(1)  # G_n(0) = -1 < 0 < 1 = G_n(1)
        # a few bisection steps, then safeguarded Newton inside the bracket
        x = mpf(1) - mpmath.log(n) / n if n > 2 else mpf("0.6")
        for _ in range(4 * bits):
            g = -1 + x + x**n
            if g > 0:
                hi = x
            else:
                lo = x
            dg = 1 + n * x ** (n - 1)
            nx = x - g / dg
            if not lo < nx < hi:
                nx = (lo + hi) / 2
            if abs(nx - x) < mpf(2) ** (-bits - 8):
                x = nx
                break
            x = nx
        val = +x
    with _LOCK:
        _THETA[key] = val
    return val


# ---------------------------------------------------------------------------
# indexed roots


@dataclass(frozen=True)
class IndexedTrinomialRoots:
    n: int
    theta: mpf
    upper: tuple[mpc, ...]  # z_{1,n}, ..., z_{floor((n-1)/2),n}
    radii: tuple[mpf, ...]
    negative_real: Optional[mpf]
    bits: int

    def z(self, j: int) -> mpc:
        if j == 0:
            return mpc(self.theta)
        return self.upper[j - 1]

    @property
    def inside_count(self) -> int:
        return self.n // 6


def _branch_guess(n: int, j: int) -> complex:
    """Fixed point of z = exp((Log(1 - z) + 2 pi i j) / n)."""
    z = np.exp(2j * np.pi * j / n) * (1 + 0j)
    for _ in range(200):
        w = 1 - z
        if w == 0:
            w = 1e-300
        nz = np.exp((np.log(w) + 2j * np.pi * j) / n)
        if abs(nz - z) < 1e-15:
            z = nz
            break
        z = nz
    return complex(z)


def _newton_g(n: int, z0, bits: int, maxiter: int = 200) -> tuple[mpc, mpf]:
    with mp.workprec(bits + 32):
        z = mpc(z0)
        eps = mpf(2) ** (-bits)
        for _ in range(maxiter):
            zn1 = z ** (n - 1)
            g = -1 + z + zn1 * z
            dg = 1 + n * zn1
            step = g / dg
            z -= step
            if abs(step) <= eps:
                break
        zn1 = z ** (n - 1)
        g = -1 + z + zn1 * z
        dg = 1 + n * zn1
        rad = n * abs(g) / abs(dg) + abs(z) * mpf(2) ** (-bits)
        return z, rad


def trinomial_root(n: int, j: int, bits: int = 256) -> tuple[mpc, mpf]:
    """z_{j,n} with its Newton inclusion radius (j = 0 gives theta_n)."""
    if j == 0:
        t = theta_n(n, bits)
        return mpc(t), mpf(2) ** (-bits)
    return _newton_g(n, _branch_guess(n, j), bits)


def gn_roots(n: int, ctx: PrecisionContext = PrecisionContext(), upto: Optional[int] = None) -> IndexedTrinomialRoots:
    """Indexed roots; `upto` limits the upper roots to j <= upto."""
    if n < 2:
        raise TrinomialError("n >= 2")
    bits = ctx.bits
    m = (n - 1) // 2
    if upto is not None:
        m = min(m, upto)
    zs, rs = [], []
    for j in range(1, m + 1):
        z, r = trinomial_root(n, j, bits)
        zs.append(z)
        rs.append(r)
    neg = None
    if n % 2 == 0:
        with mp.workprec(bits + 16):
            z, _ = _newton_g(n, -1 - float(np.log(2)) / n, bits)
            neg = z.real
    t = theta_n(n, bits)
    out = IndexedTrinomialRoots(n, t, tuple(zs), tuple(rs), neg, bits)
    _check_indexing(out, full=(upto is None))
    return out


def _check_indexing(r: IndexedTrinomialRoots, full: bool) -> None:
    n = r.n
    args = [mpmath.arg(z) for z in r.upper]
    if any(not a > 0 for a in args) or any(b <= a for a, b in zip(args, args[1:])):
        raise TrinomialError("indexing invariant violated: arguments not strictly increasing in (0, pi]")
    if any(rad > mpf(2) ** (-(r.bits // 4)) for rad in r.radii):
        raise TrinomialError("root not certified")
    for j, z in enumerate(r.upper, start=1):
        inside = abs(z) + r.radii[j - 1] < 1
        right = z.real - r.radii[j - 1] > mpf(1) / 2
        expected = j <= n // 6
        if inside != expected or right != expected:
            # n = 5 mod 6: e^(i pi / 3) is an exact root on the circle
            if n % 6 == 5 and abs(z - mpmath.exp(1j * mpmath.pi / 3)) < mpf(2) ** (-(r.bits // 4)):
                continue
            raise TrinomialError(f"sector invariant violated at j={j}")
    if full:
        count = 1 + 2 * len(r.upper) + (1 if r.negative_real is not None else 0)
        if count != n:
            raise TrinomialError("root count mismatch")


# ---------------------------------------------------------------------------
# transition sequences and developments


@dataclass(frozen=True)
class TransitionSequences:
    n: int
    u_n: float
    v_n: float
    epsilon: float = 0.25

    def chain_holds(self) -> bool:
        L = np.log(self.n)
        LL = np.log(L)
        return self.n // 6 > self.v_n > L > self.u_n > np.sqrt(L * LL)


def transition_sequences(n: int) -> TransitionSequences:
    if n < N0:
        raise TrinomialError("below asymptotic regime (n >= 18)")
    L = np.log(n)
    LL = np.log(L)
    return TransitionSequences(n, float(L**0.75 * LL**0.25), float(L**1.25), 0.25)


@dataclass(frozen=True)
class Development:
    D_re: mpf
    D_im: mpf
    D_mod: mpf
    D_arg: mpf
    sector_tag: str
    terminant: str

    @property
    def value(self) -> mpc:
        return mpc(self.D_re, self.D_im)


def d_theta(n: int) -> mpf:
    L = mpmath.log(n)
    LL = mpmath.log(L)
    frac = (n - L) / (n * L + n - L)
    return 1 - L / n * (1 - frac * (LL - n * mpmath.log(1 - L / n) - L))


def lambda_n(n: int) -> mpf:
    L = mpmath.log(n)
    return 1 - (1 - d_theta(n)) * n / L


def asym_root(n: int, j: int) -> Development:
    """The paper's limited development D(z_{j,n}) for the sector containing j (j = 0: theta_n)."""
    if n < N0:
        raise TrinomialError("below asymptotic regime (n >= 18)")
    if not 0 <= j <= n // 6:
        raise TrinomialError("need 0 <= j <= floor(n/6)")
    L = mpmath.log(n)
    LL = mpmath.log(L)
    if j == 0:
        d = d_theta(n)
        return Development(d, mpf(0), d, mpf(0), "theta", "(1/n) O((LogLog n/Log n)^2), constant 1/2")
    ts = transition_sequences(n)
    th = 2 * mpmath.pi * j / n
    if j > ts.v_n:
        s = mpmath.log(2 * mpmath.sin(mpmath.pi * j / n))
        re = mpmath.cos(th) + s / n
        im = mpmath.sin(th) + mpmath.tan(mpmath.pi * j / n) * s / n
        mod = 1 + s / n + (LL / L) ** 2 / (2 * n)
        A = -((1 - mpmath.cos(th)) / mpmath.sin(th)) * s / (2 * mpmath.pi * n)
        arg = 2 * mpmath.pi * (mpf(j) / n + A)
        return Development(re, im, mod, arg, "main", "(1/n) O((LogLog n/Log n)^2), constant 1")
    lam = lambda_n(n)
    t = theta_n(n, mp.prec)
    x = mpf(j) / L
    if j < ts.u_n:
        re = t + 2 * mpmath.pi**2 / n * x**2 * (1 + 2 * lam)
        im = 2 * mpmath.pi * L / n * x * (1 - (1 + lam) / L)
        tag, term = "bump-inner", "(1/(n Log n)) (j/Log n)^k O((LogLog n/Log n)^2)"
    else:
        re = t + 2 * mpmath.pi**2 / n * x**2 * (1 + 2 * mpmath.pi**2 / 3 * x**2 * (1 + lam))
        im = 2 * mpmath.pi * L / n * x * (1 - (1 - 4 * mpmath.pi**2 / 3 * x**2 * (1 - (1 - lam) / L)) / L)
        tag, term = "bump-outer", "(1/n) O((j/Log n)^6) real, (1/n) O((j/Log n)^5) imaginary"
    z = mpc(re, im)
    return Development(re, im, abs(z), mpmath.arg(z), tag, term)


def first_order_root(n: int, j: int) -> mpc:
    """e^{i th} (1 + Log(1 - e^{i th}) / n), th = 2 pi j / n: the direct first-order solution of z^n = 1 - z."""
    w = mpmath.exp(2j * mpmath.pi * j / n)
    return w * (1 + mpmath.log(1 - w) / n)


def asym_tolerance(n: int, slack: float = 2.0) -> mpf:
    L = mpmath.log(n)
    return slack * (mpmath.log(L) / L) ** 2 / n


# ---------------------------------------------------------------------------
# Mahler measure of G_n


@dataclass(frozen=True)
class MahlerGn:
    n: int
    M: mpf
    minorant_ok: bool
    rn: Optional[mpf]


def mahler_gn(n: int, ctx: PrecisionContext = PrecisionContext(), cross_check: bool = False) -> MahlerGn:
    """M(G_n) = theta_n^-1 prod_{j <= n/6} |z_{j,n}|^-2."""
    if n < 2:
        raise TrinomialError("n >= 2")
    k = n // 6
    with mp.workprec(ctx.bits):
        t = theta_n(n, ctx.bits)
        logm = -mpmath.log(t)
        for j in range(1, k + 1):
            z, _ = trinomial_root(n, j, ctx.bits)
            logm -= 2 * mpmath.log(abs(z))
        M = mpmath.exp(logm)
        if cross_check:
            other = mahler_measure(gn(n), ctx).value
            if abs(other - M) > mpf(2) ** (-(ctx.bits // 4)):
                raise ArithmeticError("root-product and generic Mahler routes disagree")
        lam = lambda_limit(ctx.bits)
        rn = (M / lam - 1) * mpmath.log(n)
        ok = M > lam - lam / (6 * mpmath.log(n))
        return MahlerGn(n, M, bool(ok), rn)


# ---------------------------------------------------------------------------
# Lambda


def _chi3(k: int) -> int:
    return (0, 1, -1)[k % 3]


def lambda_lseries(bits: int = 256) -> mpf:
    """exp(3 sqrt(3) / (4 pi) L(2, chi_3)), the series summed with mpmath's accelerated nsum."""
    with mp.workprec(bits + 32):
        L2 = mpmath.nsum(lambda m: 1 / (3 * m + 1) ** 2 - 1 / (3 * m + 2) ** 2, [0, mpmath.inf])
        return +mpmath.exp(3 * mpmath.sqrt(3) / (4 * mpmath.pi) * L2)


def lambda_quadrature(bits: int = 256) -> mpf:
    """exp(-(1/pi) int_0^{pi/3} Log(2 sin(x/2)) dx) with Log x integrated in closed form."""
    with mp.workprec(bits + 32):
        a = mpmath.pi / 3
        sing = a * (mpmath.log(a) - 1)

        def smooth(x):
            if x == 0:
                return mpf(0)
            return mpmath.log(2 * mpmath.sin(x / 2) / x)

        reg = mpmath.quad(smooth, [0, a])
        return +mpmath.exp(-(sing + reg) / mpmath.pi)


_LAMBDA: dict[int, mpf] = {}


def lambda_limit(bits: int = 256) -> mpf:
    """Lambda by both routes; they must agree to 2^-(bits/3)."""
    with _LOCK:
        if bits in _LAMBDA:
            return _LAMBDA[bits]
    a = lambda_lseries(bits)
    b = lambda_quadrature(bits)
    with mp.workprec(bits):
        if abs(a - b) > mpf(2) ** (-(bits // 3)):
            raise ArithmeticError("Lambda: L-series and quadrature routes disagree")
        v = +b
    with _LOCK:
        _LAMBDA[bits] = v
    return v


# ---------------------------------------------------------------------------
# Zhang-Zagier type check


@dataclass(frozen=True)
class ZhangZagier:
    n: int
    M_shift: mpf
    bound: mpf
    u: int
    ok: bool


def zhang_zagier_check(n: int, ctx: PrecisionContext = PrecisionContext()) -> ZhangZagier:
    """M(theta_n^-1 - 1) >= eta^(n+u) / Lambda * (1 - 1/(6 Log n))."""
    p = theta_minpoly(n).shift(1)
    u = -2 if n % 6 == 5 else 0
    m = mahler_measure(p, ctx).value
    with mp.workprec(ctx.bits):
        bound = ETA ** (n + u) / lambda_limit(ctx.bits) * (1 - 1 / (6 * mpmath.log(n)))
        return ZhangZagier(n, m, bound, u, bool(m >= bound))
