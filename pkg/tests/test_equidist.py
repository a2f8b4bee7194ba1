import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parrylab.equidist import (
    AngularProfile,
    belotserkovski_bound,
    circle_discrepancy,
    discrepancy_csv,
    fitted_constant,
    modulus_spread,
    profile_discrepancy,
)
from parrylab.exactpoly import IntPolynomial, gn
from parrylab.rootfinder import find_roots


def brute_discrepancy(phis):
    # oracle: every arc with endpoints at 0, 2pi or a root argument, closed and open
    m = len(phis)
    x = sorted(p / (2 * math.pi) for p in phis)
    ends = [0.0] + x + [1.0]
    best = 0.0
    for a in ends:
        for b in ends:
            if b < a:
                continue
            closed = sum(1 for t in x if a <= t <= b)
            opened = sum(1 for t in x if a < t < b)
            best = max(best, abs(closed / m - (b - a)), abs(opened / m - (b - a)))
    return min(best, 1.0)


angles = st.floats(0, 2 * math.pi, exclude_max=True, allow_nan=False)


@given(st.lists(angles, min_size=1, max_size=12))
def test_discrepancy_matches_brute_force(phis):
    P = AngularProfile.from_roots(np.exp(1j * np.array(phis)))
    assert abs(profile_discrepancy(P) - brute_discrepancy(list(P.phi))) < 1e-12


@given(st.lists(angles, min_size=2, max_size=30), st.floats(0, 2 * math.pi))
def test_rotation_changes_little(phis, t):
    # rotating moves at most the wrap point, which costs at most 2 arcs worth
    a = profile_discrepancy(AngularProfile.from_roots(np.exp(1j * np.array(phis))))
    b = profile_discrepancy(AngularProfile.from_roots(np.exp(1j * (np.array(phis) + t))))
    assert abs(a - b) <= a + 1e-12 and b <= 2 * a + 1e-12


@pytest.mark.parametrize("m", [1, 2, 7, 24])
def test_roots_of_unity(m):
    p = IntPolynomial([-1] + [0] * (m - 1) + [1])
    assert abs(circle_discrepancy(find_roots(p)) - 1 / m) < 1e-12


def test_single_root():
    assert circle_discrepancy(find_roots(IntPolynomial([-2, 1]))) == 1.0


def test_multiplicities_counted():
    P = AngularProfile.from_roots([1j, -1j], [3, 1])
    assert P.m == 4


def test_gn_discrepancy_shape():
    ds = []
    for n in (100, 400, 1600):
        d = circle_discrepancy(find_roots(gn(n)))
        assert d <= 8 * math.log(n) / math.sqrt(n)
        ds.append(d)
    assert ds[0] >= ds[1] >= ds[2]


def test_belotserkovski_examples():
    assert abs(belotserkovski_bound(100, 0.05, 0) - 0.4615) < 1e-4
    assert belotserkovski_bound(100, 0, 0) == math.log(101) / 10
    assert belotserkovski_bound(10**12, 0, 0) < 1e-4
    for bad in [(100, -0.1, 0), (100, 0.6, 0), (100, 0, 0.51), (0, 0, 0)]:
        with pytest.raises(ValueError):
            belotserkovski_bound(*bad)


def test_fitted_constant_and_spread():
    assert fitted_constant([(0.1, 0.5), (0.3, 0.5)]) == pytest.approx(0.6)
    P = AngularProfile.from_roots([0.5, 2j])
    assert modulus_spread(P) == pytest.approx(1.0)


def test_csv_header():
    text = discrepancy_csv([(100, 0.1, 0.2)])
    assert text.splitlines()[0] == "n,discrepancy,bound"
    assert text.splitlines()[1].startswith("100,0.1,")
