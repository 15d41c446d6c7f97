"""Bundled verification runs shared by the command line and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

import mpmath

from .ktheory import VerificationReport, verify_theorem1
from .lattice import LatticePresentation, determinant, enumerate_roots, smith_normal_form
from .oracle import beta_agreement, catalog_integrand_specs, numeric_psi_check
from .periods import (
    catalog_cycles,
    coxeter_order,
    cycle,
    intersection,
    monodromy,
    monodromy_label,
    psi,
    simple_root_basis,
)
from .rootdata import normalize_family, singularity_data

FULL_RANGES = {"A": range(1, 13), "D": range(4, 11), "E6": [6], "E7": [7], "E8": [8]}
ORACLE_RANGES = {"A": range(1, 7), "D": range(4, 7), "E6": [6], "E7": [7], "E8": [8]}
ORACLE_LAMBDAS = (Fraction(1, 2), Fraction(1), Fraction(2))
SCOPES = ("theorem1", "roots", "monodromy", "oracle")


def expected_root_count(family: str, rank: Optional[int] = None) -> int:
    fam, n = normalize_family(family, rank)
    return {"A": n * (n + 1), "D": 2 * n * (n - 1), "E6": 72, "E7": 126, "E8": 240}[fam]


def targets(scope: str, family: Optional[str], rank: Optional[int]) -> list[tuple[str, int]]:
    """Family/rank pairs a scope runs over when no explicit rank is given."""
    ranges = ORACLE_RANGES if scope == "oracle" else FULL_RANGES
    families = [normalize_family(family, rank)[0]] if family else list(ranges)
    out = []
    for fam in families:
        if rank is not None or fam.startswith("E"):
            out.append(normalize_family(fam, rank))
        else:
            out.extend((fam, n) for n in ranges[fam])
    return out


def verify_roots(family: str, rank: Optional[int] = None) -> VerificationReport:
    fam, n = normalize_family(family, rank)
    report = VerificationReport(fam, n)
    lat = LatticePresentation.from_basis(simple_root_basis(fam, n))
    g = lat.gram
    roots = enumerate_roots(lat)
    want = expected_root_count(fam, n)
    report.add(f"{len(roots)} vectors of norm 2 (expected {want})", len(roots) == want, {"count": len(roots)})
    diag, _, _ = smith_normal_form(g)
    det = determinant(g)
    report.add("Gram determinant equals the product of the Smith invariants",
               det == _product(diag), {"determinant": str(det), "smith": [str(d) for d in diag]})
    return report


def _product(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def verify_monodromy(family: str, rank: Optional[int] = None) -> VerificationReport:
    """Isometry, the tabulated action on labels, and the order on the root lattice."""
    fam, n = normalize_family(family, rank)
    report = VerificationReport(fam, n)
    data = singularity_data(fam, n)
    basis = simple_root_basis(fam, n)
    moved = [monodromy(v) for v in basis]
    bad = [
        (i + 1, j + 1)
        for i in range(n)
        for j in range(n)
        if intersection(moved[i], moved[j]) != intersection(basis[i], basis[j])
    ]
    report.add("monodromy preserves the intersection form", not bad, {"pairs": bad[:5]} if bad else None)
    mismatched = []
    if fam == "D":
        v_n = psi(cycle(fam, n, n, kind="v"))
        for k in range(n - 2):
            lhs = monodromy(psi(cycle(fam, n, k)))
            if lhs != psi(cycle(fam, n, k + 1)) + v_n * 2:
                mismatched.append(f"alpha_{k}")
        rule = "sigma(alpha_k) = alpha_(k+1) + 2 v_N"
    else:
        for lbl in catalog_cycles(fam, n):
            sign, image = monodromy_label(lbl)
            if monodromy(psi(lbl)) != psi(image) * sign:
                mismatched.append(str(lbl))
        rule = "sigma(alpha_{k,a}) = alpha_{k+1,a}" if fam == "A" else "sigma(alpha_{k,a}) = -alpha_{k+1,a+1}"
    report.add(f"monodromy follows {rule}", not mismatched, {"cycles": mismatched} if mismatched else None)
    order = coxeter_order(fam, n)
    report.add(f"monodromy has order h = {data.coxeter_number}", order == data.coxeter_number, {"order": order})
    return report


def oracle_labels(family: str, rank: Optional[int] = None) -> list:
    fam, n = normalize_family(family, rank)
    labels = list(catalog_cycles(fam, n))
    if fam == "D":
        labels = [cycle(fam, n, 0)] + labels
    return labels


def verify_oracle(family: str, rank: Optional[int] = None, digits: int = 50, tol: float = 1e-10) -> VerificationReport:
    fam, n = normalize_family(family, rank)
    report = VerificationReport(fam, n)
    worst = mpmath.mpf(0)
    for spec in catalog_integrand_specs(fam, n):
        worst = max(worst, beta_agreement(spec, digits))
    report.add("quadrature agrees with the Beta closed forms", worst < tol,
               {"max_relative_deviation": mpmath.nstr(worst, 5)})
    for lam in ORACLE_LAMBDAS:
        worst = mpmath.mpf(0)
        where = None
        for lbl in oracle_labels(fam, n):
            dev = numeric_psi_check(fam, n, lbl, digits, lam).max_deviation
            if dev >= worst:
                worst, where = dev, str(lbl)
        report.add(f"numerical Psi matches the exact vectors at lambda = {lam}", worst < tol,
                   {"max_deviation": mpmath.nstr(worst, 5), "worst_cycle": where})
    return report


def run_scope(scope: str, family: str, rank: Optional[int], digits: int = 50) -> VerificationReport:
    if scope == "theorem1":
        return verify_theorem1(family, rank)
    if scope == "roots":
        return verify_roots(family, rank)
    if scope == "monodromy":
        return verify_monodromy(family, rank)
    if scope == "oracle":
        return verify_oracle(family, rank, digits)
    raise ValueError(f"unknown scope {scope!r}")
