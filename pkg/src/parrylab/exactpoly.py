"""Exact integer polynomials: arithmetic, Sturm counting, cyclotomic detection.

Coefficients are stored lowest degree first as Python ints.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Optional, Sequence, Union

Number = Union[int, Fraction]


class PolynomialError(ValueError):
    pass


class IntPolynomial:
    """Immutable univariate polynomial with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    # construction helpers
    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls([0, 1])

    @classmethod
    def from_terms(cls, terms: dict[int, int]) -> "IntPolynomial":
        if not terms:
            return cls([])
        c = [0] * (max(terms) + 1)
        for k, v in terms.items():
            c[k] += v
        return cls(c)

    # basic properties
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lc == 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        return format_poly(self)

    # arithmetic
    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        o = _lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPolynomial(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> "IntPolynomial":
        return _lift(other) - self

    def __mul__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial([])
        out = [0] * (len(a) + len(b) - 1)
        # sparse-aware schoolbook product
        nb = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in nb:
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def reverse(self) -> "IntPolynomial":
        """Reciprocal polynomial X^deg P(1/X)."""
        return IntPolynomial(reversed(self.coeffs))

    def shift(self, a: int) -> "IntPolynomial":
        """Return P(X + a)."""
        out = IntPolynomial([])
        xa = IntPolynomial([a, 1])
        for c in reversed(self.coeffs):
            out = out * xa + c
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        if g == 0:
            return self
        if self.lc < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def terms(self) -> list[tuple[int, int]]:
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def to_json(self) -> str:
        return json.dumps(list(self.coeffs))


def _lift(p: Union[IntPolynomial, int]) -> IntPolynomial:
    return p if isinstance(p, IntPolynomial) else IntPolynomial([p])


def gn(n: int) -> IntPolynomial:
    """The trinomial -1 + X + X^n."""
    if n < 2:
        raise PolynomialError("n must be >= 2")
    return IntPolynomial.from_terms({0: -1, 1: 1, n: 1})


def gn_star(n: int) -> IntPolynomial:
    """The reciprocal trinomial 1 + X^(n-1) - X^n."""
    if n < 2:
        raise PolynomialError("n must be >= 2")
    return IntPolynomial.from_terms({0: 1, n - 1: 1, n: -1})


LEHMER = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])


# ---------------------------------------------------------------------------
# text format

_TERM = re.compile(
    r"^(?P<coef>\d+)?(?:\s*\*?\s*(?P<x>[xX])(?:\s*\^\s*(?P<exp>\d+))?)?$"
)


def parse_poly(text: str) -> IntPolynomial:
    """Parse a JSON integer array (lowest degree first) or `c0 + c1*x + c2*x^2`."""
    s = text.strip()
    if s.startswith("["):
        data = json.loads(s)
        if not all(isinstance(v, int) for v in data):
            raise PolynomialError("coefficient array must hold integers")
        return IntPolynomial(data)
    if not s:
        raise PolynomialError("empty polynomial text")
    s = s.replace("**", "^").replace("−", "-")
    # split into signed terms
    pieces = re.findall(r"([+-]?)\s*([^+-]+)", s)
    if "".join(sign + body for sign, body in pieces).replace(" ", "") != s.replace(" ", ""):
        raise PolynomialError(f"cannot parse polynomial: {text!r}")
    terms: dict[int, int] = {}
    for sign, body in pieces:
        m = _TERM.match(body.strip())
        if not m or (m.group("coef") is None and m.group("x") is None):
            raise PolynomialError(f"bad term {body!r}")
        c = int(m.group("coef")) if m.group("coef") is not None else 1
        if m.group("x") is None:
            k = 0
        else:
            k = int(m.group("exp")) if m.group("exp") is not None else 1
        terms[k] = terms.get(k, 0) + (-c if sign == "-" else c)
    return IntPolynomial.from_terms(terms)


def format_poly(p: IntPolynomial) -> str:
    """Render lowest degree first, e.g. `-1 + x + x^12`."""
    if p.is_zero():
        return "0"
    parts = []
    for k, c in p.terms():
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "x" if k == 1 else f"x^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# structure and division


@dataclass(frozen=True)
class StructureFlags:
    monic: bool
    reciprocal: bool
    height: int
    sign_changes: int


def structure_flags(p: IntPolynomial) -> StructureFlags:
    if p.is_zero():
        raise PolynomialError("zero polynomial")
    nz = [c for c in p.coeffs if c]
    changes = sum(1 for a, b in zip(nz, nz[1:]) if (a > 0) != (b > 0))
    return StructureFlags(
        monic=p.is_monic(),
        reciprocal=p.coeffs == tuple(reversed(p.coeffs)),
        height=max(abs(c) for c in p.coeffs),
        sign_changes=changes,
    )


def divmod_poly(a: IntPolynomial, b: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Division over the integers; raises if a non-integral quotient digit appears."""
    if b.is_zero():
        raise PolynomialError("division by zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    q = [0] * max(len(r) - db, 1)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        if c % lb:
            raise PolynomialError("not divisible")
        t = c // lb
        q[k - db] = t
        for j, bj in enumerate(b.coeffs):
            if bj:
                r[k - db + j] -= t * bj
    return IntPolynomial(q), IntPolynomial(r)


def exact_divide(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    try:
        quo, rem = divmod_poly(p, q)
    except PolynomialError:
        raise PolynomialError("not divisible") from None
    if not rem.is_zero():
        raise PolynomialError("not divisible")
    return quo


def divides(q: IntPolynomial, p: IntPolynomial) -> bool:
    try:
        exact_divide(p, q)
        return True
    except PolynomialError:
        return False


def pseudo_remainder(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """lc(b)^(deg a - deg b + 1) * a mod b, computed in Z[x]."""
    if b.is_zero():
        raise PolynomialError("division by zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.lc
    if len(r) - 1 < db:
        return a
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        r = [x * lb for x in r]
        for j, bj in enumerate(b.coeffs):
            r[k - db + j] -= c * bj
        r.pop()
    return IntPolynomial(r)


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Q, normalised with positive leading coefficient."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        a, b = b, pseudo_remainder(a, b).primitive()
    return a.primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return p.primitive()
    return exact_divide(p.primitive() * (g.lc ** (p.degree + 1)), g).primitive()


# ---------------------------------------------------------------------------
# Sturm sequences


def sturm_chain(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm chain with content stripping; signs follow the classical negated remainders."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        a, b = chain[-2], chain[-1]
        delta = a.degree - b.degree
        r = pseudo_remainder(a, b)
        # pseudo-division multiplies a by lc(b)^(delta+1)
        if b.lc < 0 and (delta + 1) % 2 == 1:
            r = -r
        if r.is_zero():
            break
        g = r.content()
        chain.append(IntPolynomial(-(c // g) for c in r.coeffs))
    return [q for q in chain if not q.is_zero()]


def _sign_at(p: IntPolynomial, x: Optional[Number], at_plus_inf: bool) -> int:
    if x is None:
        s = 1 if p.lc > 0 else -1
        if not at_plus_inf and p.degree % 2 == 1:
            s = -s
        return s
    v = p(Fraction(x))
    return (v > 0) - (v < 0)


def _variations(chain: Sequence[IntPolynomial], x: Optional[Number], plus_inf: bool) -> int:
    signs = [s for s in (_sign_at(q, x, plus_inf) for q in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def sturm_real_root_count(p: IntPolynomial, a: Optional[Number] = None, b: Optional[Number] = None) -> int:
    """Number of distinct real roots in (a, b]; None means -inf / +inf."""
    if p.is_zero():
        raise PolynomialError("zero polynomial")
    if a is not None and b is not None and not Fraction(a) < Fraction(b):
        raise PolynomialError("need a < b")
    if p.degree == 0:
        return 0
    chain = sturm_chain(squarefree_part(p))
    return _variations(chain, a, False) - _variations(chain, b, True)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


_CYCLO_CACHE: dict[int, IntPolynomial] = {}


def cyclotomic(k: int) -> IntPolynomial:
    """k-th cyclotomic polynomial by exact division of X^k - 1."""
    if k < 1:
        raise PolynomialError("k must be >= 1")
    if k not in _CYCLO_CACHE:
        out = IntPolynomial.from_terms({k: 1, 0: -1})
        for d in range(1, k):
            if k % d == 0:
                out = exact_divide(out, cyclotomic(d))
        _CYCLO_CACHE[k] = out
    return _CYCLO_CACHE[k]


def totients(limit: int) -> list[int]:
    """Euler phi for 0..limit by sieve."""
    phi = list(range(limit + 1))
    for i in range(2, limit + 1):
        if phi[i] == i:
            for j in range(i, limit + 1, i):
                phi[j] -= phi[j] // i
    return phi


def graeffe(p: IntPolynomial) -> IntPolynomial:
    """Root-squaring step: roots of the result are the squares of the roots of p."""
    even = IntPolynomial(p.coeffs[0::2])
    odd = IntPolynomial(p.coeffs[1::2])
    out = even * even - IntPolynomial.x() * odd * odd
    if p.degree % 2:
        out = -out
    return out


def cyclotomic_product_test(p: IntPolynomial) -> bool:
    """True iff every root of p (leading coefficient +-1) is a root of unity.

    Graeffe iteration reaches a fixed point exactly for products of cyclotomic
    polynomials (Kronecker); a coefficient exceeding the binomial bound of a
    polynomial with all roots on the unit circle rules that out early.
    """
    if p.is_zero():
        raise PolynomialError("zero polynomial")
    if p.lc == -1:
        p = -p
    if not p.is_monic():
        raise PolynomialError("leading coefficient must be +-1")
    if p[0] == 0:
        raise PolynomialError("zero constant term")
    d = p.degree
    if d == 0:
        return True
    cap = [comb(d, k) for k in range(d + 1)]
    q = p
    for _ in range(2 * d + 2):
        if any(abs(c) > cap[k] for k, c in enumerate(q.coeffs)):
            return False
        nxt = graeffe(q)
        if nxt == q or nxt == -q:
            return True
        q = nxt
    return False


def strip_cyclotomic(p: IntPolynomial, max_index: Optional[int] = None) -> tuple[IntPolynomial, list[int]]:
    """Divide out every cyclotomic factor Phi_k (with multiplicity) for k up to max_index."""
    d = p.degree
    if max_index is None:
        # phi(k) >= sqrt(k/2), so phi(k) <= d forces k <= 2 d^2
        max_index = max(2, 2 * d * d)
    found: list[int] = []
    q = p
    tot = totients(max_index)
    for k in range(1, max_index + 1):
        if tot[k] > q.degree:
            continue
        phi = cyclotomic(k)
        while q.degree >= phi.degree and divides(phi, q):
            q = exact_divide(q, phi)
            found.append(k)
    if q.lc < 0:
        q = -q
    return q, found
