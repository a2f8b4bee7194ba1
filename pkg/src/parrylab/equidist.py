"""Angular discrepancy of root sets on the unit circle."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .rootfinder import RootSet


@dataclass(frozen=True)
class AngularProfile:
    m: int
    phi: np.ndarray  # sorted arguments in [0, 2pi)
    r: np.ndarray  # moduli in the same order

    @classmethod
    def from_roots(cls, roots: Iterable[complex], multiplicities: Optional[Sequence[int]] = None) -> "AngularProfile":
        z = np.asarray(list(roots), dtype=np.complex128)
        if multiplicities is not None:
            z = np.repeat(z, np.asarray(multiplicities, dtype=int))
        phi = np.mod(np.angle(z), 2 * np.pi)
        order = np.argsort(phi, kind="stable")
        return cls(len(z), phi[order], np.abs(z)[order])

    @classmethod
    def from_rootset(cls, R: RootSet) -> "AngularProfile":
        return cls.from_roots([complex(r.value) for r in R.roots], [r.multiplicity for r in R.roots])


def profile_discrepancy(P: AngularProfile) -> float:
    """sup over 0 <= phi <= psi <= 2pi of |N(phi, psi)/m - (psi - phi)/2pi|.

    With x_i the sorted arguments over 2pi and g_i = x_i - i/m, closed arcs
    [x_i, x_j] give 1/m - (g_j - g_i), open arcs give 1/m + (g_j - g_i), and
    the arcs touching 0 or 2pi give g_j and 1/m - g_j.
    """
    m = P.m
    if m == 0:
        raise ValueError("empty root set")
    x = P.phi / (2 * np.pi)
    g = x - np.arange(m) / m
    inv = 1.0 / m
    run_max = np.maximum.accumulate(g)
    run_min = np.minimum.accumulate(g)
    over = inv + float(np.max(run_max - g))  # max over i <= j of g_i - g_j
    gaps = g[1:] - run_min[:-1]
    under = inv + float(np.max(gaps)) if m > 1 else 0.0
    ends = max(float(np.max(g)), inv - float(np.min(g)))
    return min(1.0, max(over, under, ends))


def circle_discrepancy(R: RootSet) -> float:
    return profile_discrepancy(AngularProfile.from_rootset(R))


def belotserkovski_bound(m: int, epsilon: float, delta: float) -> float:
    """sigma_dis = max(m^-1/2 Log(m+1), sqrt(-eps Log eps), sqrt(-delta Log delta))."""
    if m < 1:
        raise ValueError("m >= 1")
    for v in (epsilon, delta):
        if not 0 <= v <= 0.5:
            raise ValueError("epsilon and delta must lie in [0, 1/2]")

    def h(v: float) -> float:
        return math.sqrt(-v * math.log(v)) if v > 0 else 0.0

    return max(math.log(m + 1) / math.sqrt(m), h(epsilon), h(delta))


def fitted_constant(rows: Iterable[tuple[float, float]]) -> float:
    """Smallest C with discrepancy <= C sigma over a corpus of (discrepancy, sigma) pairs."""
    return max(d / s for d, s in rows)


def modulus_spread(P: AngularProfile) -> float:
    """max_k | r_k - 1 |, the epsilon of the bound for a given root set."""
    return float(np.max(np.abs(P.r - 1)))


def discrepancy_csv(rows: Iterable[tuple[int, float, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "discrepancy", "bound"])
    for n, d, b in rows:
        w.writerow([n, repr(float(d)), repr(float(b))])
    return buf.getvalue()
