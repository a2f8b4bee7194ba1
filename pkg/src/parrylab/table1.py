"""The bundled table of small Salem and Perron Parry numbers, and its re-derivation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import mpmath
from mpmath import mp

from .betadynamics import (
    AlgebraicReal,
    ParryExpansion,
    dyg,
    format_pattern,
    parse_pattern,
    parry_polynomial,
    renyi_expansion,
)
from .exactpoly import IntPolynomial, structure_flags


@dataclass(frozen=True)
class Table1Entry:
    dyg: int
    degree: int
    beta_decimal: str
    parry_degree: Optional[int]
    parry_irreducible: bool
    expansion_pattern: str
    minpoly: Optional[IntPolynomial]
    erratum: Optional[dict] = None

    @property
    def label(self) -> str:
        return f"{self.beta_decimal} (deg {self.degree})"

    @property
    def is_salem(self) -> bool:
        return self.minpoly is not None and structure_flags(self.minpoly).reciprocal


def load_table1() -> list[Table1Entry]:
    raw = json.loads(resources.files("parrylab").joinpath("data/table1.json").read_text())
    out = []
    for r in raw["rows"]:
        mp_ = IntPolynomial(r["minpoly"]) if r["minpoly"] is not None else None
        out.append(Table1Entry(r["dyg"], r["degree"], r["beta_decimal"], r["parry_degree"],
                               r["parry_irreducible"], r["expansion_pattern"], mp_, r["erratum"]))
    return out


def _same_expansion(a: ParryExpansion, b: ParryExpansion) -> bool:
    return (a.kind, a.digits, a.preperiod, a.period) == (b.kind, b.digits, b.preperiod, b.period)


@dataclass
class RowCheck:
    entry: Table1Entry
    derived_pattern: Optional[str] = None
    derived_dyg: Optional[int] = None
    derived_parry_degree: Optional[int] = None
    derived_irreducible: Optional[bool] = None
    derived_beta: Optional[str] = None
    mismatches: list[str] = field(default_factory=list)
    erratum_consistent: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        e = self.entry
        return {"beta": e.beta_decimal, "degree": e.degree, "ok": self.ok, "mismatches": self.mismatches,
                "derived": {"pattern": self.derived_pattern, "dyg": self.derived_dyg,
                            "parry_degree": self.derived_parry_degree, "irreducible": self.derived_irreducible,
                            "beta": self.derived_beta},
                "erratum": e.erratum, "erratum_consistent": self.erratum_consistent}


def verify_row(e: Table1Entry, budget: int = 100000) -> RowCheck:
    """Re-derive expansion, dyg, Parry degree and irreducibility from the minimal polynomial."""
    rc = RowCheck(e)
    if e.minpoly is None:
        rc.mismatches.append("no minimal polynomial recoverable from the printed row")
        return rc
    beta = AlgebraicReal.largest_real_root(e.minpoly)
    with mp.workprec(64):
        v = beta.value(64)
        rc.derived_beta = mpmath.nstr(v, 12)
        places = len(e.beta_decimal.split(".")[1])
        if abs(v - mpmath.mpf(e.beta_decimal)) > mpmath.mpf(10) ** -places:
            rc.mismatches.append(f"beta {rc.derived_beta} vs printed {e.beta_decimal}")
    if e.minpoly.degree != e.degree:
        rc.mismatches.append(f"degree {e.minpoly.degree} vs printed {e.degree}")
    ex = renyi_expansion(beta, budget)
    rc.derived_pattern = format_pattern(ex)
    rc.derived_dyg = dyg(beta)
    pp = parry_polynomial(ex, e.minpoly)
    rc.derived_parry_degree = pp.parry.degree
    rc.derived_irreducible = pp.complementary is not None and pp.complementary.degree == 0
    if not _same_expansion(ex, parse_pattern(e.expansion_pattern)):
        rc.mismatches.append(f"pattern {rc.derived_pattern} vs printed {e.expansion_pattern}")
    if rc.derived_dyg != e.dyg:
        rc.mismatches.append(f"dyg {rc.derived_dyg} vs printed {e.dyg}")
    if e.parry_degree is None:
        rc.mismatches.append(f"Parry degree {rc.derived_parry_degree} vs printed '..'")
    elif rc.derived_parry_degree != e.parry_degree:
        rc.mismatches.append(f"Parry degree {rc.derived_parry_degree} vs printed {e.parry_degree}")
    if rc.derived_irreducible != e.parry_irreducible:
        rc.mismatches.append(f"irreducible {rc.derived_irreducible} vs printed {e.parry_irreducible}")
    if e.erratum:
        ok = True
        if e.erratum.get("pattern"):
            ok &= _same_expansion(ex, parse_pattern(e.erratum["pattern"]))
        if e.erratum.get("parry_degree") is not None:
            ok &= rc.derived_parry_degree == e.erratum["parry_degree"]
        rc.erratum_consistent = bool(ok)
    return rc


def verify_table1(budget: int = 100000) -> list[RowCheck]:
    return [verify_row(e, budget) for e in load_table1()]
