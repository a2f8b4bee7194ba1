from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mpf

from parrylab.betadynamics import (
    AlgebraicReal,
    BetaError,
    FloatBeta,
    OrbitRing,
    OrbitState,
    admissible,
    classify_blanchard,
    dyg,
    float_expansion,
    format_pattern,
    gap_structure_ok,
    orbit_step,
    parse_pattern,
    parry_polynomial,
    renyi_expansion,
    theta_minpoly,
    theta_perron,
)
from parrylab.exactpoly import LEHMER, IntPolynomial, gn_star

GOLDEN = IntPolynomial([-1, -1, 1])
SALEM_8 = IntPolynomial([1, 0, 0, -1, -1, -1, 0, 0, 1])  # 1.280638, degree 8


def test_salem_8_value():
    assert abs(AlgebraicReal.largest_real_root(SALEM_8).value() - mpf("1.280638")) < 1e-6


# algebraic reals


def test_enclosure_contains_value():
    b = AlgebraicReal.largest_real_root(LEHMER)
    lo, hi = b.enclosure(200)
    v = b.value(256)
    assert lo / mpf(2) ** 200 <= v <= hi / mpf(2) ** 200
    assert hi - lo <= 2


def test_root_in_rejects_empty_interval():
    with pytest.raises(Exception):
        AlgebraicReal.root_in(GOLDEN, Fraction(2), Fraction(3))


# orbit


def test_orbit_step_plastic():
    b = theta_perron(5)
    ring = OrbitRing(b)
    d, s = orbit_step(ring, OrbitState(ring.one()))
    assert d == 1
    # next state represents beta - 1
    assert s.vec[:2] == (-1, 1)


@pytest.mark.parametrize("n", [2, 3, 5, 6, 9, 14])
def test_perron_orbit_is_powers_then_zero(n):
    # T^j(1) = theta_n^(n - j) for 1 <= j < n, and T^n(1) = 0
    b = theta_perron(n)
    ring = OrbitRing(b)
    s = OrbitState(ring.one())
    v = b.value()
    for j in range(1, n + 1):
        _, s = orbit_step(ring, s)
        x = sum(c * v**k for k, c in enumerate(s.vec))
        if j < n:
            assert abs(x - v ** (-(n - j))) < mpf(10) ** -60
        else:
            assert all(c == 0 for c in s.vec)


# expansions


def test_expansion_examples():
    assert format_pattern(renyi_expansion(AlgebraicReal.largest_real_root(LEHMER))) == \
        "0.1(0^10 1 0^18 1 0^12 1 0^18 1 0^12)^w"
    e12 = renyi_expansion(theta_perron(12))
    assert e12.kind == "simple" and format_pattern(e12) == "0.1 0^10 1"
    assert format_pattern(renyi_expansion(AlgebraicReal.largest_real_root(SALEM_8))) == "0.1(0^5 1 0^5 1 0^7)^w"
    g = renyi_expansion(AlgebraicReal.largest_real_root(GOLDEN))
    assert g.digits == (1, 1) and g.kind == "simple"


def test_float_expansion_agrees_with_exact():
    b = AlgebraicReal.largest_real_root(LEHMER)
    fe = float_expansion(FloatBeta(b.value(512), 512), 600)
    assert fe.digits[:600] == tuple(renyi_expansion(b).unroll(600))


@given(st.lists(st.integers(0, 14), min_size=1, max_size=4), st.integers(3, 12))
def test_pattern_roundtrip(runs, head):
    body = " ".join(f"0^{k} 1" if k else "1" for k in runs)
    text = f"0.1 0^{head} 1({body} 0^{head + 2})^w"
    e = parse_pattern(text)
    assert parse_pattern(format_pattern(e)) == e


def test_parse_variants():
    a = parse_pattern("0.1(0^4 1 0^6)^w")
    assert parse_pattern("0.1(0^{4} 1 0^{6})^ω") == a
    assert parse_pattern("0.1(0^4 1 0^6)^\\omega") == a
    with pytest.raises(BetaError):
        parse_pattern("1.01")


# admissibility


def test_admissible_examples():
    assert admissible([1, 0, 0, 1])
    assert not admissible([1, 1, 1, 1], period=4)
    assert not admissible([1, 0, 1, 1])


@pytest.mark.parametrize("poly", [LEHMER, SALEM_8, gn_star(7), gn_star(13)])
def test_expansions_are_self_admissible(poly):
    e = renyi_expansion(AlgebraicReal.largest_real_root(poly if poly.lc > 0 else -poly))
    assert admissible(e.digits, period=e.period if e.kind == "eventually_periodic" else None)


# Parry polynomials


def test_parry_polynomial_examples():
    e = renyi_expansion(AlgebraicReal.largest_real_root(LEHMER))
    assert parry_polynomial(e, LEHMER).parry.degree == 75
    e8 = renyi_expansion(AlgebraicReal.largest_real_root(SALEM_8))
    assert parry_polynomial(e8).parry == IntPolynomial.from_terms({20: 1, 19: -1, 13: -1, 7: -1, 1: -1, 0: 1})
    e10 = parse_pattern("0.1(0^5 1 0^7)^w")
    assert parry_polynomial(e10).parry.degree == 14


@pytest.mark.parametrize("n", [6, 7, 8, 9, 10, 12, 13])
def test_parry_polynomial_of_perron_is_trinomial(n):
    b = theta_perron(n)
    pp = parry_polynomial(renyi_expansion(b), b.minpoly)
    assert pp.parry == -gn_star(n)
    assert pp.complementary == IntPolynomial([1])


def test_theta_perron_examples():
    assert theta_perron(5).minpoly == IntPolynomial([-1, -1, 0, 1])
    assert abs(theta_perron(5).value() - mpf("1.324717957244746")) < 1e-15
    assert abs(theta_perron(12).value() - mpf("1.172950")) < 1e-6 and theta_minpoly(12).degree == 12
    assert theta_minpoly(11).degree == 9


# dyg


def test_dyg_examples():
    assert dyg(AlgebraicReal.largest_real_root(LEHMER)) == 12
    assert dyg(AlgebraicReal.largest_real_root(GOLDEN)) == 2
    t31 = theta_perron(31).value(300)
    assert dyg(FloatBeta(t31 + mpf(10) ** -40, 300)) == 31
    assert dyg(FloatBeta(t31 - mpf(10) ** -40, 300)) == 32


@given(st.integers(3, 60))
def test_dyg_of_perron_numbers(n):
    assert dyg(theta_perron(n)) == n


@given(st.integers(3, 200), st.floats(0.01, 0.99))
def test_dyg_inside_interval(n, frac):
    lo = theta_perron(n).value(200)
    hi = theta_perron(n - 1).value(200)
    assert dyg(FloatBeta(lo + (hi - lo) * frac, 200)) == n


def test_dyg_rejects_large_beta():
    with pytest.raises(BetaError):
        dyg(FloatBeta(mpf(2), 64))


# classification and gap structure


def test_classification():
    assert classify_blanchard(theta_perron(6)).label == "C1"
    assert classify_blanchard(AlgebraicReal.largest_real_root(LEHMER)).label == "C2"
    # period 60 is not reached within a budget of 5 digits
    assert classify_blanchard(AlgebraicReal.largest_real_root(LEHMER), budget=5).label == "undetermined(C3-C5)"


@pytest.mark.parametrize("poly", [LEHMER, SALEM_8])
def test_gap_structure(poly):
    b = AlgebraicReal.largest_real_root(poly)
    assert gap_structure_ok(renyi_expansion(b).unroll(500), dyg(b))
