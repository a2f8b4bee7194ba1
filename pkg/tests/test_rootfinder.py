import math

import mpmath
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from parrylab.exactpoly import LEHMER, IntPolynomial, cyclotomic, gn
from parrylab.rootfinder import (
    PrecisionContext,
    find_roots,
    house_and_height,
    mahler_measure,
    pierce_delta,
    squarefree_decomposition,
)

x = sp.symbols("x")


def test_golden_roots():
    r = sorted(find_roots(IntPolynomial([-1, -1, 1])).values(), key=lambda z: z.real)
    assert abs(r[1] - (1 + mpmath.sqrt(5)) / 2) < 1e-60
    assert abs(r[0] - (1 - mpmath.sqrt(5)) / 2) < 1e-60


def test_g12_moduli_window_and_sector_count():
    rs = find_roots(gn(12))
    mods = [abs(z) for z in rs.values()]
    assert len(mods) == 12
    assert all(1 - 2 * math.log(12) / 12 <= m <= 1 + 2 * math.log(2) / 12 for m in mods)
    assert sum(1 for z in rs.values() if z.real > 0.5) == 1 + 2 * (12 // 6)


def test_roots_against_sympy_nroots():
    # oracle: sympy's independent root finder
    ref = sorted(sp.Poly(list(reversed(LEHMER.coeffs)), x).nroots(n=40), key=lambda z: (float(sp.re(z)), float(sp.im(z))))
    got = sorted(find_roots(LEHMER).values(), key=lambda z: (float(z.real), float(z.imag)))
    for a, b in zip(ref, got):
        assert abs(complex(a) - complex(b)) < 1e-30


def test_multiple_roots_detected():
    p = IntPolynomial([-1, 1]) ** 3 * IntPolynomial([1, 1])
    rs = find_roots(p)
    assert sorted(r.multiplicity for r in rs.roots) == [1, 3]
    assert len(rs) == 4


def test_zero_root_stripped():
    rs = find_roots(IntPolynomial([0, 0, -2, 1]))
    assert any(r.value == 0 and r.multiplicity == 2 for r in rs.roots)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=12).filter(lambda c: c[-1] != 0 and any(c[:-1])))
def test_vieta_sum(cs):
    p = IntPolynomial(cs)
    rs = find_roots(p, PrecisionContext(128))
    s = sum(rs.values())
    assert abs(s + mpmath.mpf(cs[-2]) / cs[-1]) < 1e-20


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=10).filter(lambda c: c[-1] != 0 and c[0] != 0))
def test_mahler_matches_polyroots(cs):
    # oracle: mpmath Durand-Kerner with large extra precision; double-precision roots
    # lose about eps^(1/m) at an m-fold root on the circle, too much for this check
    p = IntPolynomial(cs)
    zs = mpmath.polyroots(list(reversed(cs)), maxsteps=800, extraprec=1200)
    ref = abs(cs[-1]) * mpmath.fprod(max(1, abs(z)) for z in zs)
    assert abs(mahler_measure(p, PrecisionContext(128)).value - ref) < 1e-12 * ref


def test_mahler_examples():
    assert abs(mahler_measure(IntPolynomial([-1, -1, 1])).value - (1 + mpmath.sqrt(5)) / 2) < 1e-60
    assert abs(mahler_measure(LEHMER).value - mpmath.mpf("1.17628081825991750654")) < 1e-19
    assert mahler_measure(cyclotomic(7) * cyclotomic(12)).value == pytest.approx(1.0, abs=1e-30)
    assert mahler_measure(IntPolynomial([0, 0, 0, 1])).value == 1


def test_house_and_height():
    h = house_and_height(IntPolynomial([-1, -1, 1]))
    assert abs(h.weil_height - mpmath.log((1 + mpmath.sqrt(5)) / 2) / 2) < 1e-60
    assert abs(h.weil_height - mpmath.mpf("0.2406059")) < 1e-7
    hl = house_and_height(LEHMER)
    assert abs(hl.house - hl.mahler) < 1e-60
    h1 = house_and_height(IntPolynomial([-1, 1]))
    assert h1.house == 1 and h1.weil_height == 0


def test_pierce_small():
    assert pierce_delta(IntPolynomial([-2, 1]), 3) == 7
    assert pierce_delta(LEHMER, 1) == LEHMER(1) * (-1) ** LEHMER.degree


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=6).map(lambda c: c + [1]), st.integers(1, 12))
def test_pierce_equals_resultant(cs, n):
    # oracle: sympy resultant up to sign, sign and value from a high-precision root product
    p = IntPolynomial(cs)
    res = sp.resultant(sp.Poly(list(reversed(cs)), x), sp.Poly(x**n - 1, x))
    d = pierce_delta(p, n)
    assert abs(d) == abs(res)
    zs = mpmath.polyroots(list(reversed(cs)), maxsteps=800, extraprec=1200)
    approx = mpmath.fprod(z**n - 1 for z in zs)
    assert abs(approx - d) < 1e-12 * max(1, abs(d))


def test_pierce_requires_monic():
    with pytest.raises(Exception):
        pierce_delta(IntPolynomial([1, 2]), 3)


def test_squarefree_decomposition_product():
    p = IntPolynomial([-1, 1]) ** 2 * IntPolynomial([1, 0, 1]) * LEHMER ** 3
    prod = IntPolynomial([1])
    for s, m in squarefree_decomposition(p):
        prod = prod * s ** m
    assert prod == p or prod == -p
