"""Rouche discs around the roots of G_n, the lenticulus of f_beta and the bounds built on it."""
from __future__ import annotations

import json
import math
import threading
from dataclasses import asdict, dataclass
from typing import Optional

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf
from scipy.optimize import minimize_scalar

from . import _kernels
from .betadynamics import (
    AlgebraicReal,
    FloatBeta,
    as_beta,
    beta_value,
    dyg,
    theta_perron,
)
from .exactpoly import IntPolynomial, cyclotomic_product_test, structure_flags, sturm_real_root_count
from .parryupper import TruncatedSeries, f_beta
from .rootfinder import PrecisionContext, find_roots, mahler_from_roots
from .trinomial import theta_n, transition_sequences, trinomial_root


class LenticulusError(ValueError):
    pass


# ---------------------------------------------------------------------------
# kappa and the optimal opening


def kappa(X, a):
    """kappa(X, a) bounding |-1 + z_j| / |z_j| on a Rouche circle of parameter a."""
    X = mpf(X)
    a = mpf(a)
    if not -1 <= X <= 1 or a < 1:
        raise ValueError("need X in [-1, 1] and a >= 1")
    e = mpmath.exp(mpmath.pi * X / a)
    w = abs(1 - e * mpmath.exp(1j * mpmath.pi * mpmath.sqrt(1 - X**2) / a))
    return w / e / (e + w)


def kappa1(a):
    """Closed form of kappa(1, a)."""
    a = mpf(a)
    return (1 - mpmath.exp(-mpmath.pi / a)) / (2 * mpmath.exp(mpmath.pi / a) - 1)


@dataclass(frozen=True)
class RoucheConstants:
    a_max: mpf
    kappa: mpf
    S: mpf
    c: mpf
    ratio_c: mpf  # e^{-2c} / (1 - e^{-c})
    Lambda_r: mpf
    mu_r: mpf
    dobrowolski_floor: mpf
    slope: mpf
    a_golden: float
    kappa_golden: float

    def to_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, mpf) else v) for k, v in asdict(self).items()}


_CONST: dict[int, RoucheConstants] = {}
_LOCK = threading.Lock()


def find_amax(ctx: PrecisionContext = PrecisionContext()) -> RoucheConstants:
    """Maximise kappa(1, a) on [1, 100], then polish through kappa^2 - 6 kappa + 1 = 0."""
    with _LOCK:
        if ctx.bits in _CONST:
            return _CONST[ctx.bits]
    res = minimize_scalar(lambda a: -float(kappa1(a)), bracket=(1.0, 5.0, 100.0), method="golden",
                          options={"xtol": 1e-10})
    a_g, k_g = float(res.x), -float(res.fun)
    with mp.workprec(ctx.bits):
        k = mpmath.findroot(lambda x: x**2 - 6 * x + 1, mpf(k_g))
        a_max = mpmath.pi / mpmath.log((k + 1) / (4 * k))
        S = 2 * mpmath.asin(k / 2)
        c = -mpmath.log(k)
        ratio_c = mpmath.exp(-2 * c) / (1 - mpmath.exp(-c))
    lr, mr = limit_constants(ctx.bits, S)
    with mp.workprec(ctx.bits):
        floor_ = lr * mr
        slope = floor_ * S / (2 * mpmath.pi)
    out = RoucheConstants(a_max, k, S, c, ratio_c, lr, mr, floor_, slope, a_g, k_g)
    with _LOCK:
        _CONST[ctx.bits] = out
    return out


def limit_constants(bits: int = 256, S: Optional[mpf] = None, delta: float = 1e-3) -> tuple[mpf, mpf]:
    """Lambda_r and mu_r by quadrature over [0, S], S = 2 arcsin(kappa/2)."""
    with mp.workprec(bits + 32):
        if S is None:
            k = 3 - 2 * mpmath.sqrt(2)
            S = 2 * mpmath.asin(k / 2)
        S = mpf(S)
        d = mpf(delta)
        # Log(2 sin(x/2)) = Log x + Log(2 sin(x/2) / x); Log x on [0, d] in closed form
        near = d * (mpmath.log(d) - 1) + mpmath.quad(
            lambda x: mpmath.log(2 * mpmath.sin(x / 2) / x) if x else mpf(0), [0, d])
        far = mpmath.quad(lambda x: mpmath.log(2 * mpmath.sin(x / 2)), [d, S])
        lam_r = mpmath.exp(-(near + far) / mpmath.pi)

        def logF(x):
            s = mpmath.sin(x / 2)
            disc = 1 - 12 * s + 4 * s**2
            if disc < 0:
                disc = mpf(0)
            return mpmath.log((1 + 2 * s - mpmath.sqrt(disc)) / (8 * s))

        # x = S - t^2 removes the square-root endpoint at S
        T = mpmath.sqrt(S)
        I = mpmath.quad(lambda t: 2 * t * logF(S - t**2), [0, T])
        mu_r = mpmath.exp(-I / mpmath.pi)
        return +lam_r, +mu_r


# ---------------------------------------------------------------------------
# indices


@dataclass(frozen=True)
class LenticularIndices:
    n: int
    J_n: int
    J_asym: float
    H_n: int
    c_n: mpf
    a_jn: dict
    t_0n: mpf
    v_n: float
    u_n: float


def j_asymptotic(n: int, k) -> mpf:
    return n / mpmath.pi * mpmath.asin(k / 2) + k * mpmath.log(k) / (mpmath.pi * mpmath.sqrt(4 - k**2))


def h_formula(n: int, k) -> int:
    return int(mpmath.floor(n / (2 * mpmath.pi) * (2 * mpmath.asin(k / 2) - k**2 / (1 - k)) - 1))


def a_jn_value(n: int, j: int) -> mpf:
    """a_{j,n} from pi/a = D + tl."""
    L = mpmath.log(n)
    LL = mpmath.log(L)
    s2 = 2 * mpmath.sin(mpmath.pi * j / n)
    B = s2 * (1 - mpmath.log(s2) / n)
    disc = 1 - 6 * B + B**2
    if disc <= 0:
        raise LenticulusError("a_{j,n} undefined: B_{j,n} beyond kappa")
    D = mpmath.log((1 + B - mpmath.sqrt(disc)) / (4 * B))
    tl = 2 / (n * B) * ((-3 + mpmath.exp(-D) + 2 * mpmath.exp(D)) / (4 - mpmath.exp(-D) - 2 * mpmath.exp(D))) * (LL / L) ** 2
    return mpmath.pi / (D + tl)


def compute_J(n: int, k, bits: int = 256) -> tuple[int, list[mpc]]:
    zs: list[mpc] = []
    j = 0
    while True:
        z, _ = trinomial_root(n, j + 1, bits)
        if abs(-1 + z) / abs(z) <= k:
            zs.append(z)
            j += 1
        else:
            return j, zs


def lenticular_indices(n: int, ctx: PrecisionContext = PrecisionContext(), strict: bool = True) -> LenticularIndices:
    if strict and n < 195:
        raise LenticulusError("n below 195: the Rouche sector machinery needs n >= 195")
    C = find_amax(ctx)
    k = C.kappa
    with mp.workprec(ctx.bits):
        J, zs = compute_J(n, k, ctx.bits)
        Jas = float(j_asymptotic(n, k))
        H = h_formula(n, k)
        c_n = n * (1 - abs(zs[-1])) if zs else mpf(0)
        ts = transition_sequences(n)
        a = {}
        for j in range(1, J + 1):
            if j <= ts.v_n or j == J:
                a[j] = C.a_max
            else:
                a[j] = a_jn_value(n, j)
        L = mpmath.log(n)
        t0 = (mpmath.log(L) / L) ** 2
    return LenticularIndices(n, J, Jas, H, c_n, a, t0, ts.v_n, ts.u_n)


# ---------------------------------------------------------------------------
# Rouche checks


@dataclass(frozen=True)
class RoucheResult:
    margin: float
    passed: bool
    samples: int


def _rouche_margin(n: int, pts: np.ndarray) -> np.ndarray:
    r = np.abs(pts)
    g = np.abs(-1 + pts + pts**n)
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = r ** (2 * n - 1) / (1 - r ** (n - 1))
    lhs = np.where(r < 1, lhs, np.inf)
    return g - lhs


def _circle(center: complex, radius: float, k: int) -> np.ndarray:
    th = 2 * np.pi * np.arange(k) / k
    return center + radius * np.exp(1j * th)


def rouche_verify(n: int, j: int, samples: int = 512, a: Optional[float] = None,
                  ctx: PrecisionContext = PrecisionContext()) -> RoucheResult:
    """min over the circle |z - z_{j,n}| = pi |z_{j,n}| / (n a) of |G_n(z)| - |z|^(2n-1) / (1 - |z|^(n-1))."""
    C = find_amax(ctx)
    a = float(C.a_max) if a is None else float(a)
    z, _ = trinomial_root(n, j, ctx.bits)
    zc = complex(z)
    R = math.pi * abs(zc) / (n * a)
    m = math.inf
    for k in (samples, 2 * samples):
        m = min(m, float(np.min(_rouche_margin(n, _circle(zc, R, k)))))
    return RoucheResult(m, m > 0, 2 * samples)


def rouche_first_root(n: int, samples: int = 512, ctx: PrecisionContext = PrecisionContext()) -> RoucheResult:
    if n < 32:
        raise LenticulusError("first-root mode needs n >= 32")
    return rouche_verify(n, 1, samples, ctx=ctx)


def external_contour(n: int, samples: int = 512, ctx: PrecisionContext = PrecisionContext()) -> RoucheResult:
    """Sampled Rouche condition on the outer boundary of the zero-free domain for dyg n >= 260."""
    if n < 260:
        raise LenticulusError("external contour needs n >= 260")
    C = find_amax(ctx)
    idx = lenticular_indices(n, ctx)
    J, H = idx.J_n, idx.H_n
    rho = 1 - float(idx.c_n) / n
    am = float(C.a_max)
    discs = []
    for j in range(1, 2 * J - H + 2):
        z = complex(trinomial_root(n, j, ctx.bits)[0])
        if j <= J:
            s = am
        else:
            s = am * (1 + am**2 * (j - J) ** 2 / (math.pi**2 * J**2)) ** -0.5
        discs.append((z, math.pi * abs(z) / (n * s)))
    th0 = float(theta_n(n, ctx.bits))
    discs_all = discs + [(th0, float(idx.t_0n) / n)]
    discs_all += [(z.conjugate(), r) for z, r in discs]

    def outside_all(p: np.ndarray, skip: int = -1) -> np.ndarray:
        ok = np.ones(p.shape, dtype=bool)
        for i, (c, r) in enumerate(discs_all):
            if i != skip:
                ok &= np.abs(p - c) >= r
        return ok

    margins = []
    total = 0
    for k in (samples, 2 * samples):
        # arc of the circle |z| = rho outside the discs, upper half plane
        big = rho * np.exp(1j * np.pi * np.arange(k * 8 + 1) / (k * 8))
        pts = [big[outside_all(big)]]
        for i, (c, r) in enumerate(discs_all):
            if np.imag(c) < 0:
                continue
            circ = _circle(c, r, k)
            keep = (np.abs(circ) <= rho) & outside_all(circ, skip=i) & (circ.imag >= 0)
            pts.append(circ[keep])
        p = np.concatenate(pts)
        total = max(total, len(p))
        margins.append(float(np.min(_rouche_margin(n, p))))
    m = min(margins)
    return RoucheResult(m, m > 0, total)


# ---------------------------------------------------------------------------
# lenticulus


@dataclass(frozen=True)
class LenticulusEntry:
    j: int
    z: mpc
    omega: Optional[mpc]
    radius: mpf
    rouche_margin: float
    certified: bool
    inner_radius_ok: Optional[bool] = None
    conjugate_ok: Optional[bool] = None

    def to_dict(self) -> dict:
        def c(v):
            return None if v is None else [mpmath.nstr(v.real, 30), mpmath.nstr(v.imag, 30)]

        return {"j": self.j, "z": c(self.z), "omega": c(self.omega), "radius": mpmath.nstr(self.radius, 10),
                "rouche_margin": self.rouche_margin, "certified": self.certified,
                "inner_radius_ok": self.inner_radius_ok, "conjugate_ok": self.conjugate_ok}


@dataclass(frozen=True)
class Lenticulus:
    n: int
    entries: tuple[LenticulusEntry, ...]
    J_n: int
    exact_digits: bool
    beta: mpf

    @property
    def certified(self) -> list[LenticulusEntry]:
        return [e for e in self.entries if e.certified]

    def to_json(self) -> str:
        return json.dumps({"schema": "parry-lab/1", "kind": "lenticulus", "n": self.n, "J_n": self.J_n,
                           "exact_digits": self.exact_digits, "beta": mpmath.nstr(self.beta, 40),
                           "entries": [e.to_dict() for e in self.entries]}, indent=1)


def _winding_on_circle(f: TruncatedSeries, center: complex, radius: float, samples: int = 256,
                       max_samples: int = 1 << 16) -> Optional[int]:
    r_max = abs(center) + radius
    if r_max >= 1:
        return None
    tail = f.tail_bound(r_max)
    prev = None
    k = samples
    while k <= max_samples:
        pts = _circle(center, radius, k)
        vals = f.eval(pts)
        if float(np.min(np.abs(vals))) <= 4 * tail:
            return None
        w = _kernels.winding(vals)
        cnt = int(round(w))
        if abs(w - cnt) < 1e-6 and _kernels.max_step(vals) < np.pi / 2:
            if prev == cnt:
                return cnt
            prev = cnt
        k *= 2
    return None


def _choose_N(rmax: float, floor_val: float, cap: int) -> int:
    """Smallest truncation with tail bound below 1e-3 times floor_val on |z| <= rmax."""
    target = 1e-3 * floor_val * (1 - rmax)
    N = int(math.ceil(math.log(target) / math.log(rmax))) if target < 1 else 1
    return min(max(N, 64), cap)


def locate_lenticulus(beta, ctx: PrecisionContext = PrecisionContext(), minpoly: Optional[IntPolynomial] = None,
                      first_root_only: bool = False, samples: int = 256, budget: int = 100000,
                      digit_cap: int = 60000) -> Lenticulus:
    """Certified zeros omega_{j,n} of f_beta in the Rouche discs around z_{j,n}."""
    beta = as_beta(beta, ctx.bits)
    n = dyg(beta)
    if first_root_only:
        if n < 32:
            raise LenticulusError("first-root lenticulus needs dyg >= 32")
        J = 1
    else:
        if n < 260:
            raise LenticulusError("full lenticulus needs dyg >= 260")
        J = lenticular_indices(n, ctx).J_n
    C = find_amax(ctx)
    idx = lenticular_indices(n, ctx, strict=False) if not first_root_only else None
    am = float(C.a_max)
    centers = [complex(trinomial_root(n, j, ctx.bits)[0]) for j in range(1, J + 1)]
    radii = [math.pi * abs(z) / (n * am) for z in centers]
    rmax = max(abs(z) + r for z, r in zip(centers, radii))
    margins = [rouche_verify(n, j, 128, ctx=ctx).margin for j in range(1, J + 1)]
    floor_val = max(min(margins), 1e-12)
    exact = isinstance(beta, AlgebraicReal)
    cap = digit_cap
    if isinstance(beta, FloatBeta):
        # digits stay trustworthy while beta^N times the input error remains small
        cap = min(cap, int(0.8 * beta.bits * math.log(2) / math.log(float(beta.value))))
    N = _choose_N(rmax, floor_val, cap)
    f = f_beta(beta, N, budget if exact else N)
    bits = ctx.bits
    with mp.workprec(bits):
        bval = beta_value(beta, bits)
    pstar = minpoly.reverse() if minpoly is not None else None
    entries = []
    # j = 0: the real zero 1/beta inside |z - theta_n| = t_{0,n}/n
    t0 = (math.log(math.log(n)) / math.log(n)) ** 2 if n >= 3 else 0.5
    th = float(theta_n(n, bits))
    w0 = _winding_on_circle(f, th, t0 / n, samples)
    with mp.workprec(bits):
        inv = 1 / bval
    entries.append(LenticulusEntry(0, mpc(th), mpc(inv), mpf(t0) / n, float("nan"), w0 == 1 and abs(float(inv) - th) < t0 / n))
    for j, (zc, R, mg) in enumerate(zip(centers, radii, margins), start=1):
        omega = None
        ok = False
        inner = None
        conj = None
        with mp.workprec(bits + 32):
            w = mpc(zc)
            for _ in range(100):
                fv, dfv = f.eval_mp(w)
                if dfv == 0:
                    break
                step = fv / dfv
                w -= step
                if abs(w - zc) > R:
                    break
                if abs(step) < mpf(2) ** (-bits):
                    break
            if abs(w - zc) < R:
                omega = +w
        if omega is not None:
            wn = _winding_on_circle(f, zc, R, samples)
            ok = wn == 1
            if idx is not None and j in idx.a_jn:
                inner = bool(abs(omega - zc) < mpmath.pi * abs(zc) / (n * idx.a_jn[j]))
            if pstar is not None:
                with mp.workprec(bits + 32):
                    pv = pstar(omega)
                    dpv = pstar.derivative()(omega)
                    rad = pstar.degree * abs(pv) / abs(dpv) if dpv != 0 else mpf("inf")
                    conj = bool(rad < mpf(2) ** (-(bits // 4)))
        entries.append(LenticulusEntry(j, mpc(centers[j - 1]), omega, mpf(R), mg, ok, inner, conj))
    return Lenticulus(n, tuple(entries), J, exact, bval)


# ---------------------------------------------------------------------------
# lenticular Mahler measure


@dataclass(frozen=True)
class LenticularMeasure:
    M_r: mpf
    L_r: mpf
    excluded: int
    n: int


def l_r(n: int, bval, ctx: PrecisionContext = PrecisionContext()) -> mpf:
    """The four-term lower bound of Log M_r for dyg n."""
    C = find_amax(ctx)
    idx = lenticular_indices(n, ctx, strict=False)
    J = idx.J_n
    with mp.workprec(ctx.bits):
        s = mpmath.log(mpf(bval))
        for j in range(1, J + 1):
            s -= 2 * mpmath.log(abs(trinomial_root(n, j, ctx.bits)[0]))
        vf = int(math.floor(idx.v_n))
        vc = int(math.ceil(idx.v_n))
        s -= 2 * min(vf, J) * mpmath.log(1 + mpmath.pi / (n * C.a_max))
        for j in range(vc, J + 1):
            s -= 2 * mpmath.log(1 + mpmath.pi / (n * idx.a_jn[j]))
        return s


def lenticular_measure(L: Lenticulus, ctx: PrecisionContext = PrecisionContext()) -> LenticularMeasure:
    with mp.workprec(ctx.bits):
        logm = mpmath.log(L.beta)
        excluded = 0
        for e in L.entries:
            if e.j == 0:
                continue
            if not e.certified or e.omega is None:
                excluded += 1
                continue
            logm -= 2 * mpmath.log(abs(e.omega))
        Mr = mpmath.exp(logm)
    lr = l_r(L.n, L.beta, ctx) if L.n >= 260 else mpf("nan")
    return LenticularMeasure(Mr, lr, excluded, L.n)


def dobrowolski_minorant(n: int, ctx: PrecisionContext = PrecisionContext()) -> mpf:
    C = find_amax(ctx)
    with mp.workprec(ctx.bits):
        return C.dobrowolski_floor * (1 - C.S / (2 * mpmath.pi * mpmath.log(n)))


def dygdeg_lhs(n: int, ctx: PrecisionContext = PrecisionContext()) -> mpf:
    C = find_amax(ctx)
    k = C.kappa
    with mp.workprec(ctx.bits):
        return n * (2 * mpmath.asin(k / 2) / mpmath.pi) + 2 * k * mpmath.log(k) / (mpmath.pi * mpmath.sqrt(4 - k**2))


# ---------------------------------------------------------------------------
# universal bounds


@dataclass(frozen=True)
class Thresholds:
    theta31_inv: mpf
    theta259_inv: mpf
    theta5_inv: mpf
    salem_gap: mpf
    bogomolov: mpf


def thresholds(bits: int = 256) -> Thresholds:
    with mp.workprec(bits):
        t31 = theta_perron(31).value(bits)
        t259 = theta_perron(259).value(bits)
        t5 = theta_perron(5).value(bits)
        return Thresholds(t31, t259, t5, t31 * (t31 - 1), mpmath.log(t31) / 4)


@dataclass
class BoundsReport:
    M: Optional[mpf] = None
    M_r: Optional[mpf] = None
    L_r: Optional[mpf] = None
    house: Optional[mpf] = None
    dyg: Optional[int] = None
    degree: int = 0
    weil_height: Optional[mpf] = None
    root_of_unity: bool = False
    lehmer_ok: Optional[bool] = None
    sz_ok: Optional[bool] = None
    salem_profile: bool = False
    salem_ok: Optional[bool] = None
    bogomolov_applicable: bool = False
    bogomolov_ok: Optional[bool] = None
    dygdeg_ok: Optional[bool] = None
    dobrowolski_minorant: Optional[mpf] = None
    salem_gap_constant: Optional[mpf] = None

    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            out[k] = mpmath.nstr(v, 20) if isinstance(v, (mpf, mpc)) else v
        return out


def bounds_suite(p: IntPolynomial, ctx: PrecisionContext = PrecisionContext()) -> BoundsReport:
    if not p.is_monic():
        raise ValueError("bounds_suite expects a monic polynomial")
    rep = BoundsReport(degree=p.degree)
    th = thresholds(ctx.bits)
    rep.salem_gap_constant = th.salem_gap
    if p[0] != 0 and cyclotomic_product_test(p):
        rep.root_of_unity = True
        return rep
    rs = find_roots(p, ctx)
    m = mahler_from_roots(p.lc, rs)
    tol = mpf(2) ** (-(ctx.bits // 4))
    with mp.workprec(ctx.bits):
        rep.M = m.value
        rep.house = max(abs(r.value) for r in rs.roots)
        rep.weil_height = mpmath.log(m.value) / p.degree
        rep.lehmer_ok = bool(m.value >= th.theta259_inv - tol)
        rep.sz_ok = bool(rep.house >= 1 + (th.theta259_inv - 1) / p.degree - tol)
        outside = [r for r in rs.roots if abs(r.value) - r.radius > 1]
        inside = [r for r in rs.roots if abs(r.value) + r.radius < 1]
        on = [r for r in rs.roots if r not in outside and r not in inside]
        rep.salem_profile = (len(outside) == 1 and len(inside) == 1 and outside[0].multiplicity == 1
                             and len(on) > 0 and structure_flags(p).reciprocal)
        golden = (1 + mpmath.sqrt(5)) / 2
        if 1 < rep.house <= golden:
            top = outside[0] if len(outside) == 1 else None
            if top is not None and abs(top.value.imag) <= top.radius and top.value.real > 0:
                beta = AlgebraicReal.largest_real_root(p)
            else:
                beta = FloatBeta(rep.house, ctx.bits)
            rep.dyg = dyg(beta)
        if rep.salem_profile:
            rep.salem_ok = bool(rep.house > th.theta31_inv and rep.dyg is not None and rep.dyg <= 31)
        real_count = sturm_real_root_count(p)
        rep.bogomolov_applicable = real_count == p.degree
        if rep.bogomolov_applicable:
            rep.bogomolov_ok = bool(rep.weil_height >= th.bogomolov)
        if rep.dyg is not None and rep.dyg >= 260:
            rep.dygdeg_ok = bool(dygdeg_lhs(rep.dyg, ctx) <= p.degree)
            rep.dobrowolski_minorant = dobrowolski_minorant(rep.dyg, ctx)
    return rep
