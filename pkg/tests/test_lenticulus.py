import json
import math

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from parrylab.betadynamics import FloatBeta, dyg, theta_perron
from parrylab.exactpoly import LEHMER, IntPolynomial
from parrylab.lenticulus import (
    LenticulusError,
    bounds_suite,
    dobrowolski_minorant,
    external_contour,
    find_amax,
    j_asymptotic,
    kappa,
    kappa1,
    lenticular_indices,
    lenticular_measure,
    limit_constants,
    locate_lenticulus,
    rouche_first_root,
    rouche_verify,
    thresholds,
)
from parrylab.rootfinder import PrecisionContext, mahler_measure
from parrylab.trinomial import trinomial_root

CTX300 = PrecisionContext(300)


# kappa and the optimal opening


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(1.5, 20))
def test_kappa_decreasing_in_x(x1, x2, a):
    lo, hi = sorted((x1, x2))
    assert kappa(lo, a) >= kappa(hi, a) - mpf(10) ** -60


@given(st.floats(1, 50))
def test_kappa1_closed_form_and_maximum(a):
    assert abs(kappa(1, a) - kappa1(a)) < mpf(10) ** -60
    assert kappa1(a) <= find_amax().kappa + mpf(10) ** -60


def test_kappa_domain():
    with pytest.raises(ValueError):
        kappa(2, 3)
    with pytest.raises(ValueError):
        kappa(0, 0.5)


def test_constants():
    C = find_amax()
    assert abs(C.kappa - (3 - 2 * mpmath.sqrt(2))) < 1e-10
    assert abs(C.kappa**2 - 6 * C.kappa + 1) < 1e-10
    assert abs(C.a_max - mpf("5.87433")) < 1e-4
    assert abs(C.S - mpf("0.171784")) < 1e-6
    # S solves 4 sin^2(x/2) - 12 sin(x/2) + 1 = 0
    s = mpmath.sin(C.S / 2)
    assert abs(4 * s**2 - 12 * s + 1) < mpf(10) ** -60
    assert abs(C.c - mpf("1.76274")) < 1e-5
    assert abs(C.ratio_c - mpf("0.0355344")) < 1e-6
    # the numerical maximiser lands near the closed form
    assert abs(C.a_golden - float(C.a_max)) < 1e-4


def test_limit_constants():
    C = find_amax()
    assert abs(C.Lambda_r - mpf("1.16302")) < 1e-5
    assert abs(C.mu_r - mpf("0.992337")) < 1e-5
    assert abs(C.dobrowolski_floor - mpf("1.15411")) < 1e-5
    assert abs(C.slope - mpf("0.0315536")) < 1e-6
    assert abs(C.Lambda_r / C.mu_r - mpf("1.172")) < 5e-4


def test_limit_constants_stable_in_split():
    a = limit_constants(256, delta=1e-3)
    b = limit_constants(256, delta=1e-2)
    assert abs(a[0] - b[0]) < mpf(10) ** -30 and abs(a[1] - b[1]) < mpf(10) ** -30


def test_lambda_r_by_plain_quadrature():
    # oracle: mpmath tanh-sinh handles the log endpoint directly
    C = find_amax()
    top = 2 * mpmath.asin(C.kappa / 2)
    val = mpmath.exp(-mpmath.quad(lambda x: mpmath.log(2 * mpmath.sin(x / 2)), [0, top]) / mpmath.pi)
    assert abs(val - C.Lambda_r) < mpf(10) ** -20


# lenticular indices


@pytest.mark.parametrize("n,J", [(260, 7), (300, 8), (615, 17), (1000, 27), (5000, 136)])
def test_j_numeric(n, J):
    idx = lenticular_indices(n)
    assert idx.J_n == J
    assert abs(idx.J_asym - J) <= 1


def test_615_indices():
    idx = lenticular_indices(615)
    assert (idx.J_n, idx.H_n) == (17, 12)
    assert set(idx.a_jn) == set(range(1, 18))


def test_c_n_and_arg_h_limits():
    C = find_amax()
    idx = lenticular_indices(5000)
    assert abs(idx.c_n - C.c) < 0.01
    assert abs(mpmath.arg(trinomial_root(5000, idx.H_n)[0]) - mpf("0.13625")) < 0.005


def test_j_definition_by_brute_force():
    # oracle: count roots directly with the numeric criterion
    k = find_amax().kappa
    n = 400
    cnt = 0
    for j in range(1, n // 6 + 1):
        z = trinomial_root(n, j)[0]
        if abs(-1 + z) / abs(z) <= k:
            cnt += 1
        else:
            break
    assert lenticular_indices(n).J_n == cnt


def test_indices_need_large_n():
    with pytest.raises(LenticulusError):
        lenticular_indices(100)
    assert j_asymptotic(615, find_amax().kappa) > 16


# Rouche


def test_rouche_615_all_circles():
    for j in range(1, 18):
        r = rouche_verify(615, j)
        assert r.passed and r.margin > 0


def test_rouche_first_root_range():
    assert all(rouche_first_root(n).passed for n in range(32, 201))
    with pytest.raises(LenticulusError):
        rouche_first_root(31)


def test_first_root_threshold():
    k = find_amax().kappa
    t = (math.log(32) - math.log(math.log(32))) / 32
    assert abs(t - 0.0694628) < 1e-7
    assert abs(k / (1 + k) - mpf("0.146447")) < 1e-6
    assert t < k / (1 + k)


def test_external_contour_300():
    r = external_contour(300)
    assert r.passed and r.samples > 1000
    with pytest.raises(LenticulusError):
        external_contour(200)


# lenticulus location


def test_lenticulus_perron_300():
    b = theta_perron(300)
    L = locate_lenticulus(b, minpoly=b.minpoly)
    assert L.n == 300 and len(L.certified) == L.J_n + 1 == 9
    for e in L.entries[1:]:
        assert abs(e.omega - e.z) < 1e-12
        assert e.conjugate_ok and e.inner_radius_ok
    doc = json.loads(L.to_json())
    assert doc["schema"] == "parry-lab/1" and len(doc["entries"]) == 9
    m = lenticular_measure(L)
    assert m.M_r >= dobrowolski_minorant(300)
    assert m.M_r >= mpmath.exp(m.L_r) - mpf(10) ** -20


def test_first_root_lenticulus_40():
    b = theta_perron(40)
    L = locate_lenticulus(b, first_root_only=True, minpoly=b.minpoly)
    e = L.entries[1]
    assert e.certified and e.conjugate_ok
    assert abs(e.omega - trinomial_root(40, 1)[0]) < 1e-12
    assert abs(e.omega) < 1 and e.omega.imag > 0
    with pytest.raises(LenticulusError):
        locate_lenticulus(theta_perron(20), first_root_only=True)


def test_float_beta_lenticulus():
    with mp.workprec(300):
        lo = theta_perron(300).value(300)
        hi = theta_perron(299).value(300)
        b = FloatBeta((lo + hi) / 2, 300)
    L = locate_lenticulus(b, CTX300)
    assert L.n == 300 and not L.exact_digits
    assert len(L.certified) == 9


def _mr_sides(n_minus_1, eps):
    with mp.workprec(300):
        t = theta_perron(n_minus_1).value(300)
        out = []
        for s in (-1, 1):
            b = FloatBeta(t + s * mpf(eps), 300)
            out.append(lenticular_measure(locate_lenticulus(b, CTX300), CTX300).M_r)
    return out


# a probe at distance eps agrees with the limit digits for about Log(1/eps)/Log(beta)
# places, so the one-sided value carries an error near |z|^that; 1e-8 gives ~1e-4
PROBES = [("1e-8", 1e-3), ("1e-20", 1e-6)]


@pytest.mark.parametrize("eps,tol", PROBES)
def test_jump_at_index_step(eps, tol):
    # J_286 = 8 = J_285 + 1: the ratio of one-sided limits is |z_{J,285}|^-2
    assert lenticular_indices(286).J_n == lenticular_indices(285).J_n + 1 == 8
    below, above = _mr_sides(285, eps)
    jump = abs(trinomial_root(285, 8)[0]) ** -2
    assert jump - 1 > 10 * tol
    assert abs(below / above - jump) < tol


@pytest.mark.parametrize("eps,tol", PROBES)
def test_no_jump_without_index_step(eps, tol):
    # J_300 = J_299, so the same number of discs sits on both sides
    assert lenticular_indices(300).J_n == lenticular_indices(299).J_n
    below, above = _mr_sides(299, eps)
    assert abs(below / above - 1) < tol


def test_continuity_inside_interval():
    with mp.workprec(300):
        lo = theta_perron(300).value(300)
        hi = theta_perron(299).value(300)
        vals = []
        for k in range(1, 6):
            b = FloatBeta(lo + (hi - lo) * k / 6, 300)
            vals.append(lenticular_measure(locate_lenticulus(b, CTX300), CTX300).M_r)
    steps = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert max(steps) <= 10 * (min(steps) + 1e-12)


# bounds


def test_bounds_lehmer():
    r = bounds_suite(LEHMER)
    assert r.lehmer_ok and r.sz_ok and r.salem_profile and r.salem_ok
    assert r.dyg == 12 and abs(r.house - mpf("1.17628")) < 1e-5
    assert abs(r.salem_gap_constant - mpf("0.0927512")) < 1e-7


def test_bounds_smallest_pisot():
    p = IntPolynomial([-1, -1, 0, 1])
    r = bounds_suite(p)
    assert abs(r.M - mpf("1.324717957")) < 1e-9
    assert r.lehmer_ok and r.sz_ok and not r.salem_profile
    assert r.M == mahler_measure(p).value or abs(r.M - mahler_measure(p).value) < mpf(10) ** -50


def test_bounds_totally_real_and_cyclotomic():
    r = bounds_suite(IntPolynomial([-1, -1, 1]))
    assert r.bogomolov_applicable and r.bogomolov_ok and r.dyg == 2
    assert bounds_suite(IntPolynomial([1, 1, 1])).root_of_unity
    with pytest.raises(ValueError):
        bounds_suite(IntPolynomial([1, 2]))


def test_thresholds():
    t = thresholds()
    assert abs(t.theta31_inv - mpf("1.0854496")) < 1e-7
    assert abs(t.theta259_inv - mpf("1.016126")) < 1e-6
    assert abs(t.bogomolov - mpf("0.020498")) < 1e-6
    assert dyg(theta_perron(31)) == 31


def test_dobrowolski_minorant_increases():
    assert dobrowolski_minorant(260) < dobrowolski_minorant(1000) < find_amax().dobrowolski_floor
