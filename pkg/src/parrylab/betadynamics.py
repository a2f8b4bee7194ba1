"""Exact Renyi-Parry dynamics of algebraic integers.

The orbit of 1 under x -> {beta x} is tracked as integer vectors in the
power basis of Q(beta); floors are certified by interval evaluation.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath
from mpmath import mp, mpf

from .exactpoly import (
    IntPolynomial,
    exact_divide,
    gn_star,
    sturm_real_root_count,
)

MAX_BITS = 1 << 15


class FloorUncertain(ArithmeticError):
    pass


class BetaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebraic reals


def _sign_at(p: IntPolynomial, x: Fraction) -> int:
    v = p(x)
    return (v > 0) - (v < 0)


class AlgebraicReal:
    """A real root of a squarefree integer polynomial with a rational isolating interval."""

    def __init__(self, minpoly: IntPolynomial, lo: Fraction, hi: Fraction, check: bool = True):
        if minpoly.lc < 0:
            minpoly = -minpoly
        self.minpoly = minpoly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if check and sturm_real_root_count(minpoly, self.lo, self.hi) != 1:
            raise BetaError("interval does not isolate exactly one root")
        self._lock = threading.Lock()
        self._cache: dict[int, mpf] = {}

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.minpoly}, ~{mpmath.nstr(self.value(64), 15)})"

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @classmethod
    def largest_real_root(cls, p: IntPolynomial) -> "AlgebraicReal":
        """Largest real root of p, isolated by Sturm counting."""
        if sturm_real_root_count(p) == 0:
            raise BetaError("polynomial has no real root")
        bound = Fraction(1 + max(abs(c) for c in p.coeffs[:-1]), abs(p.lc)) + 1
        lo, hi = -bound, bound
        # shrink from below while keeping the top root inside (lo, hi]
        while sturm_real_root_count(p, lo, hi) > 1:
            mid = (lo + hi) / 2
            if sturm_real_root_count(p, mid, hi) >= 1:
                lo = mid
            else:
                hi = mid
        return cls(p, lo, hi, check=False)

    @classmethod
    def root_in(cls, p: IntPolynomial, lo: Fraction, hi: Fraction) -> "AlgebraicReal":
        lo, hi = Fraction(lo), Fraction(hi)
        if sturm_real_root_count(p, lo, hi) < 1:
            raise BetaError("no root in interval")
        while sturm_real_root_count(p, lo, hi) > 1:
            mid = (lo + hi) / 2
            if sturm_real_root_count(p, mid, hi) >= 1:
                lo = mid
            else:
                hi = mid
        return cls(p, lo, hi, check=False)

    def _refine(self, bits: int) -> None:
        """Shrink the isolating interval below 2^-bits (Newton, then a verified sign change)."""
        target = Fraction(1, 1 << bits)
        p = self.minpoly
        if self.hi - self.lo <= target:
            return
        dp = p.derivative()
        with mp.workprec(bits + 64):
            x = mpf(self.lo.numerator) / self.lo.denominator / 2 + mpf(self.hi.numerator) / self.hi.denominator / 2
            for _ in range(200):
                d = dp(x)
                if d == 0:
                    break
                step = p(x) / d
                x -= step
                if abs(step) < mpf(2) ** (-bits - 32):
                    break
            man, exp = mpf(x).man_exp if x != 0 else (0, 0)
            xc = Fraction(int(man)) * (Fraction(2) ** int(exp)) if x != 0 else Fraction(0)
        eps = target / 4
        lo, hi = max(self.lo, xc - eps), min(self.hi, xc + eps)
        slo = _sign_at(p, lo) if lo != self.lo else None
        shi = _sign_at(p, hi)
        if lo < hi and slo is not None and slo * shi < 0:
            self.lo, self.hi = lo, hi
            return
        if shi == 0:
            self.lo = self.hi = hi
            return
        # bisection fallback (always sound)
        s_hi = _sign_at(p, self.hi)
        while self.hi - self.lo > target:
            mid = (self.lo + self.hi) / 2
            sm = _sign_at(p, mid)
            if sm == 0:
                self.lo = self.hi = mid
                return
            if sm == s_hi:
                self.hi = mid
            else:
                self.lo = mid

    def enclosure(self, bits: int) -> tuple[int, int]:
        """Integers (L, H) with L / 2^bits <= root <= H / 2^bits."""
        with self._lock:
            self._refine(bits)
            lo, hi = self.lo, self.hi
        return (lo.numerator << bits) // lo.denominator, -((-hi.numerator << bits) // hi.denominator)

    def value(self, bits: int = 256) -> mpf:
        with self._lock:
            if bits in self._cache:
                return self._cache[bits]
            self._refine(bits + 8)
            mid = (self.lo + self.hi) / 2
        with mp.workprec(bits):
            v = mpf(mid.numerator) / mid.denominator
        with self._lock:
            self._cache[bits] = v
        return v

    def __float__(self) -> float:
        return float(self.value(64))


@dataclass(frozen=True)
class FloatBeta:
    """A real beta known only as a high-precision decimal (non-certified digits)."""

    value: mpf
    bits: int = 256

    def __float__(self) -> float:
        return float(self.value)


Beta = Union[AlgebraicReal, FloatBeta]


def as_beta(x, bits: int = 256) -> Beta:
    if isinstance(x, (AlgebraicReal, FloatBeta)):
        return x
    if isinstance(x, IntPolynomial):
        return AlgebraicReal.largest_real_root(x)
    with mp.workprec(bits):
        return FloatBeta(mpf(x), bits)


def beta_value(beta: Beta, bits: int = 256) -> mpf:
    if isinstance(beta, AlgebraicReal):
        return beta.value(bits)
    with mp.workprec(bits):
        return +beta.value


# ---------------------------------------------------------------------------
# orbit arithmetic in Z[beta]

Vec = tuple[int, ...]


class OrbitRing:
    """Arithmetic on integer vectors modulo the monic minimal polynomial."""

    def __init__(self, beta: AlgebraicReal):
        p = beta.minpoly
        if p.lc != 1:
            raise BetaError("beta must be an algebraic integer (monic minimal polynomial)")
        self.beta = beta
        self.d = p.degree
        self.tail = tuple(-c for c in p.coeffs[:-1])  # beta^d = sum tail_i beta^i

    def one(self) -> Vec:
        return (1,) + (0,) * (self.d - 1)

    def zero(self) -> Vec:
        return (0,) * self.d

    def mul_beta(self, v: Vec) -> Vec:
        top = v[-1]
        out = [0] + list(v[:-1])
        if top:
            for i, t in enumerate(self.tail):
                out[i] += top * t
        return tuple(out)

    def sub_int(self, v: Vec, k: int) -> Vec:
        return (v[0] - k,) + v[1:]

    def interval(self, v: Vec, bits: int) -> tuple[int, int]:
        """Fixed-point enclosure (lo, hi) of v(beta) scaled by 2^bits, outward rounded."""
        bl, bh = self.beta.enclosure(bits)
        lo = hi = 0
        for c in reversed(v):
            # beta > 0, so the product extremes come from the endpoint pairs
            ps = (lo * bl, lo * bh, hi * bl, hi * bh)
            lo = (min(ps) >> bits) + (c << bits)
            hi = -((-max(ps)) >> bits) + (c << bits)
        return lo, hi

    def sign(self, v: Vec, max_bits: int = MAX_BITS) -> int:
        if not any(v):
            return 0
        bits = 64
        while bits <= max_bits:
            lo, hi = self.interval(v, bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise FloorUncertain("sign undecided within precision budget")

    def floor(self, v: Vec, max_bits: int = MAX_BITS) -> int:
        bits = 64
        while bits <= max_bits:
            lo, hi = self.interval(v, bits)
            flo, fhi = lo >> bits, hi >> bits
            if flo == fhi:
                return flo
            if fhi == flo + 1 and self.sub_int(v, fhi) == self.zero():
                return fhi
            bits *= 2
        raise FloorUncertain("floor uncertain")

    def power(self, k: int) -> Vec:
        v = self.one()
        for _ in range(k):
            v = self.mul_beta(v)
        return v


@dataclass(frozen=True)
class OrbitState:
    vec: Vec


def orbit_step(ring: OrbitRing, s: OrbitState) -> tuple[int, OrbitState]:
    """One step of the beta-transformation on T^j(1): returns the digit and T^(j+1)(1)."""
    w = ring.mul_beta(s.vec)
    k = ring.floor(w)
    return k, OrbitState(ring.sub_int(w, k))


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True)
class ParryExpansion:
    """Digits t_1 t_2 ... of d_beta(1) with preperiod/period structure.

    kind is 'simple' (digits are the full finite expansion), 'eventually_periodic'
    (digits = preperiod + one period) or 'undetermined' (budgeted prefix).
    """

    digits: tuple[int, ...]
    kind: str
    preperiod: int = 0
    period: int = 0
    exact: bool = True
    alphabet_max: int = 0

    @property
    def m(self) -> int:
        return len(self.digits) if self.kind == "simple" else self.preperiod

    def digit(self, i: int) -> int:
        """t_i for i >= 1."""
        if i < 1:
            raise IndexError("digits start at t_1")
        if i <= len(self.digits):
            return self.digits[i - 1]
        if self.kind == "simple":
            return 0
        if self.kind == "eventually_periodic":
            j = (i - 1 - self.preperiod) % self.period
            return self.digits[self.preperiod + j]
        raise BetaError("digit beyond computed prefix of an undetermined expansion")

    def unroll(self, n: int) -> list[int]:
        return [self.digit(i) for i in range(1, n + 1)]

    def pattern(self) -> str:
        return format_pattern(self)

    def longest_zero_run(self) -> int:
        best = cur = 0
        for t in self.digits:
            cur = cur + 1 if t == 0 else 0
            best = max(best, cur)
        return best


def renyi_expansion(beta: Beta, budget: int = 100000) -> ParryExpansion:
    """Greedy expansion of 1 with Brent cycle detection on exact orbit states."""
    if isinstance(beta, FloatBeta):
        return float_expansion(beta, budget)
    if float(beta) <= 1:
        raise BetaError("beta must be > 1")
    ring = OrbitRing(beta)
    states: list[Vec] = [ring.one()]
    digits: list[int] = []
    zero = ring.zero()

    def state(i: int) -> Vec:
        while len(states) <= i:
            k, nxt = orbit_step(ring, OrbitState(states[-1]))
            digits.append(k)
            states.append(nxt.vec)
        return states[i]

    # Brent: find period lam
    power = lam = 1
    tort = 0
    hare = 1
    found = False
    while hare <= budget:
        sh = state(hare)
        if sh == zero:
            m = hare
            return ParryExpansion(tuple(digits[:m]), "simple", m, 0, True, max(digits[:m]))
        if sh == state(tort):
            found = True
            break
        if power == lam:
            tort = hare
            power *= 2
            lam = 0
        hare += 1
        lam += 1
    if not found:
        n = min(len(digits), budget)
        return ParryExpansion(tuple(digits[:n]), "undetermined", 0, 0, True, max(digits[:n]) if n else 0)
    # find the start of the cycle
    mu = 0
    while state(mu) != state(mu + lam):
        mu += 1
    ds = tuple(digits[: mu + lam])
    return ParryExpansion(ds, "eventually_periodic", mu, lam, True, max(ds))


def float_expansion(beta: FloatBeta, n_digits: int) -> ParryExpansion:
    """Digits decided at working precision; flagged non-exact."""
    bits = beta.bits
    out = []
    with mp.workprec(bits):
        b = beta.value
        if b <= 1:
            raise BetaError("beta must be > 1")
        x = mpf(1)
        for _ in range(n_digits):
            y = b * x
            k = int(mpmath.floor(y))
            out.append(k)
            x = y - k
            if x == 0:
                return ParryExpansion(tuple(out), "simple", len(out), 0, False, max(out))
    return ParryExpansion(tuple(out), "undetermined", 0, 0, False, max(out) if out else 0)


# ---------------------------------------------------------------------------
# notation


def _runs(ds: Sequence[int]) -> list[str]:
    toks: list[str] = []
    i = 0
    while i < len(ds):
        if ds[i] == 0:
            j = i
            while j < len(ds) and ds[j] == 0:
                j += 1
            k = j - i
            toks.append("0" if k == 1 else f"0^{k}")
            i = j
        else:
            toks.append(str(ds[i]))
            i += 1
    return toks


def format_pattern(e: ParryExpansion) -> str:
    """Run-length notation, e.g. `0.1 0^3 1` or `0.1(0^4 1 0^6)^w`."""
    if e.kind == "eventually_periodic":
        pre = " ".join(_runs(e.digits[: e.preperiod]))
        per = " ".join(_runs(e.digits[e.preperiod:]))
        return f"0.{pre}({per})^w"
    body = " ".join(_runs(e.digits))
    return f"0.{body}" + (" ..." if e.kind == "undetermined" else "")


def _expand_tokens(text: str) -> list[int]:
    out: list[int] = []
    for tok in text.split():
        m = re.fullmatch(r"(\d+)(?:\^\{?(\d+)\}?)?", tok)
        if not m:
            raise BetaError(f"bad token {tok!r}")
        d = int(m.group(1))
        out.extend([d] * (int(m.group(2)) if m.group(2) else 1))
    return out


def parse_pattern(text: str) -> ParryExpansion:
    """Inverse of format_pattern; accepts `^w` or `^ω` for the period marker."""
    s = text.strip().replace("ω", "w").replace("\\omega", "w")
    if not s.startswith("0."):
        raise BetaError("pattern must start with '0.'")
    s = s[2:]
    m = re.fullmatch(r"\s*([^()]*?)\s*(?:\(\s*([^()]*)\s*\)\s*\^\s*\{?w\}?)?\s*", s)
    if not m:
        raise BetaError(f"cannot parse pattern {text!r}")
    pre = _expand_tokens(m.group(1))
    if m.group(2) is None:
        if not pre or pre[-1] == 0:
            raise BetaError("finite expansion must end with a nonzero digit")
        return ParryExpansion(tuple(pre), "simple", len(pre), 0, True, max(pre))
    per = _expand_tokens(m.group(2))
    if not per:
        raise BetaError("empty period")
    ds = tuple(pre + per)
    return normalize(ParryExpansion(ds, "eventually_periodic", len(pre), len(per), True, max(ds)))


def normalize(e: ParryExpansion) -> ParryExpansion:
    """Minimal period, then minimal preperiod."""
    if e.kind != "eventually_periodic":
        return e
    per = e.digits[e.preperiod:]
    p = len(per)
    for q in range(1, p + 1):
        if p % q == 0 and per == per[:q] * (p // q):
            per = per[:q]
            break
    pre = list(e.digits[: e.preperiod])
    per = list(per)
    while pre and pre[-1] == per[-1]:
        per = [pre.pop()] + per[:-1]
    ds = tuple(pre + per)
    return ParryExpansion(ds, "eventually_periodic", len(pre), len(per), e.exact, max(ds))


# ---------------------------------------------------------------------------
# admissibility


def _lex_less(a: Sequence[int], b: Sequence[int]) -> int:
    """-1 if a < b, 0 if equal, 1 if a > b (same length)."""
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def admissible(digits: Sequence[int], c_sequence: Optional[Sequence[int]] = None, period: Optional[int] = None) -> bool:
    """Parry's lexicographic condition on every shift.

    With c_sequence None the sequence is tested for self-admissibility: every
    proper shift must be strictly smaller than the sequence itself.  Finite
    sequences are padded with zeros; `period` marks the trailing block as
    repeating forever.
    """
    ds = list(digits)
    if period:
        pre, per = ds[: len(ds) - period], ds[len(ds) - period:]
        n = 2 * (len(ds) + period)
        full = pre + per * (n // period + 1)
    else:
        n = len(ds) + 1
        full = ds + [0] * (n + 1)
    if c_sequence is None:
        ref = full
        start = 1
    else:
        c = list(c_sequence)
        ref = c + [0] * (2 * n + len(c))
        start = 0
    limit = len(ds) if not period else len(ds) + period
    for j in range(start, limit):
        window = full[j: j + n]
        if len(window) < n:
            window = window + [0] * (n - len(window))
        if _lex_less(window, ref[:n]) >= 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Parry polynomial


@dataclass(frozen=True)
class ParryPolynomial:
    parry: IntPolynomial
    complementary: Optional[IntPolynomial]


def parry_polynomial(e: ParryExpansion, minpoly: Optional[IntPolynomial] = None) -> ParryPolynomial:
    if e.kind == "undetermined":
        raise BetaError("expansion undetermined")
    if e.kind == "simple":
        m = len(e.digits)
        terms = {m: 1}
        for i, t in enumerate(e.digits, start=1):
            terms[m - i] = terms.get(m - i, 0) - t
        p = IntPolynomial.from_terms(terms)
    else:
        m, L = e.preperiod, e.period
        D = m + L
        terms = {D: 1}
        for i, t in enumerate(e.digits, start=1):
            terms[D - i] = terms.get(D - i, 0) - t
        terms[m] = terms.get(m, 0) - 1
        for i, t in enumerate(e.digits[:m], start=1):
            terms[m - i] = terms.get(m - i, 0) + t
        p = IntPolynomial.from_terms(terms)
    comp = None
    if minpoly is not None:
        mp_ = minpoly if minpoly.lc > 0 else -minpoly
        comp = exact_divide(p, mp_)
    return ParryPolynomial(p, comp)


# ---------------------------------------------------------------------------
# Perron numbers theta_n^-1 and dynamical degree


def theta_minpoly(n: int) -> IntPolynomial:
    if n < 2:
        raise BetaError("n must be >= 2")
    p = -gn_star(n)
    if n % 6 == 5:
        p = exact_divide(p, IntPolynomial([1, -1, 1]))
    return p


_THETA_CACHE: dict[int, AlgebraicReal] = {}
_THETA_LOCK = threading.Lock()


def theta_perron(n: int) -> AlgebraicReal:
    """theta_n^-1, the Perron root of X^n - X^(n-1) - 1, isolated inside (1, 2)."""
    with _THETA_LOCK:
        if n not in _THETA_CACHE:
            _THETA_CACHE[n] = AlgebraicReal.root_in(theta_minpoly(n), Fraction(1), Fraction(2))
        return _THETA_CACHE[n]


def _gstar_sign(beta: Beta, k: int, ring: Optional[OrbitRing], powers: dict[int, Vec]) -> int:
    if ring is not None:
        def pw(j: int) -> Vec:
            if j not in powers:
                base = max((i for i in powers if i <= j), default=0)
                v = powers.get(base, ring.one())
                for _ in range(j - base):
                    v = ring.mul_beta(v)
                powers[j] = v
            return powers[j]

        a, b = pw(k - 1), pw(k)
        v = tuple(x - y for x, y in zip(a, b))
        v = (v[0] + 1,) + v[1:]
        return ring.sign(v)
    with mp.workprec(beta.bits):
        x = beta.value
        g = 1 + x ** (k - 1) - x ** k
        return (g > 0) - (g < 0)


GOLDEN = (1 + mpmath.sqrt(5)) / 2


def dyg(beta: Beta) -> int:
    """Dynamical degree: the n with theta_n^-1 <= beta < theta_{n-1}^-1."""
    ring = None
    if isinstance(beta, AlgebraicReal):
        if beta.minpoly.lc == 1:
            ring = OrbitRing(beta)
        x = beta.value(128)
    else:
        x = beta.value
    with mp.workprec(128):
        g = (1 + mpmath.sqrt(5)) / 2
        if x <= 1 or x > g + mpf(2) ** -100:
            raise BetaError("beta must lie in (1, golden mean]")
        r = x / (x - 1)
        n = max(2, int(mpmath.floor(r * mpmath.log(r))))
    if ring is None and isinstance(beta, AlgebraicReal):
        beta = FloatBeta(beta.value(256), 256)
    powers: dict[int, Vec] = {}
    for _ in range(10000):
        s_n = _gstar_sign(beta, n, ring, powers)
        if s_n > 0:
            n += 1
            continue
        if n == 2:
            return 2
        s_prev = _gstar_sign(beta, n - 1, ring, powers)
        if s_prev <= 0:
            n -= 1
            continue
        return n
    raise BetaError("dynamical degree search did not terminate")


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    label: str
    expansion: ParryExpansion
    longest_zero_run: int


def classify_blanchard(beta: Beta, budget: int = 100000) -> Classification:
    e = renyi_expansion(beta, budget)
    if e.kind == "simple":
        label = "C1"
    elif e.kind == "eventually_periodic":
        label = "C2"
    else:
        label = "undetermined(C3-C5)"
    return Classification(label, e, e.longest_zero_run())


def gap_structure_ok(digits: Sequence[int], n: int) -> bool:
    """For 1 < beta <= golden mean with dyg n: d = 0.1 0^(n-2) 1 0^(n1) 1 ... with every n_k >= n-2."""
    ds = list(digits)
    if not ds or ds[0] != 1:
        return False
    head = ds[1: n]
    if len(head) >= n - 2 and any(head[: n - 2]):
        return False
    ones = [i for i, t in enumerate(ds) if t]
    if any(t > 1 for t in ds):
        return False
    return all(b - a - 1 >= n - 2 for a, b in zip(ones, ones[1:]))
