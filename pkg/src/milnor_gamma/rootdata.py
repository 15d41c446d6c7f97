"""Catalog data for the five simple singularity families.

Each family is given by a three-variable invertible polynomial ``f`` (the
square ``x3^2`` is the suspension variable).  From the exponent matrix we
derive the weights, the top degree ``D = 1 - 2/h`` and the eigenvalues
``theta_i = D/2 - deg(phi_i)`` of the grading operator.  The residue pairing,
the phi-basis and the gauge constants are tabulated per family.

The dual side (the transposed polynomial ``f^T`` and its maximal diagonal
symmetry group ``G^T``) is described by :class:`DualGroupData`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm
from typing import Optional

from .exactnum import GammaMonomial

F = Fraction
FAMILIES = ("A", "D", "E6", "E7", "E8")
FIXED_RANKS = {"E6": 6, "E7": 7, "E8": 8}

__all__ = [
    "FAMILIES",
    "CatalogError",
    "PhiMonomial",
    "SingularityData",
    "Sector",
    "DualGroupData",
    "normalize_family",
    "singularity_data",
    "dual_group_data",
    "fermat_exponents",
]


class CatalogError(ValueError):
    """Unknown family or a rank outside the family's range."""


def normalize_family(family: str, rank: Optional[int] = None) -> tuple[str, int]:
    """Validate a (family, rank) pair; E-types accept ``None`` for the rank."""
    fam = str(family).upper()
    if fam not in FAMILIES:
        raise CatalogError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if fam in FIXED_RANKS:
        if rank is not None and int(rank) != FIXED_RANKS[fam]:
            raise CatalogError(f"{fam} has rank {FIXED_RANKS[fam]}, not {rank}")
        return fam, FIXED_RANKS[fam]
    if rank is None:
        raise CatalogError(f"family {fam} needs an explicit rank")
    rank = int(rank)
    if fam == "A" and rank < 1:
        raise CatalogError("A_N needs N >= 1")
    if fam == "D" and rank < 4:
        raise CatalogError("D_N needs N >= 4")
    return fam, rank


@dataclass(frozen=True)
class PhiMonomial:
    """A basis element ``scalar * x1^m1 x2^m2 x3^m3`` of the Milnor ring."""

    scalar: Fraction
    exponents: tuple[int, int, int]

    def degree(self, weights) -> Fraction:
        return sum((F(m) * w for m, w in zip(self.exponents, weights)), F(0))

    def __str__(self):
        factors = []
        for j, m in enumerate(self.exponents, start=1):
            if m == 1:
                factors.append(f"x{j}")
            elif m > 1:
                factors.append(f"x{j}^{m}")
        body = "*".join(factors) or "1"
        return body if self.scalar == 1 else f"{self.scalar}*{body}"


@dataclass(frozen=True)
class SingularityData:
    family: str
    rank: int
    polynomial: str
    exponent_matrix: tuple[tuple[int, int, int], ...]
    weights: tuple[Fraction, Fraction, Fraction]
    coxeter_number: int
    top_degree: Fraction
    phi_basis: tuple[PhiMonomial, ...]
    theta: tuple[Fraction, ...]
    residue_pairing: tuple[tuple[Fraction, ...], ...]
    gauges: tuple[GammaMonomial, ...]
    cyclotomic_order: int

    @property
    def name(self) -> str:
        return self.family if self.family.startswith("E") else f"{self.family}{self.rank}"

    def partner(self, i: int) -> int:
        """The slot paired with slot ``i`` (0-based) by the residue pairing."""
        row = self.residue_pairing[i]
        hits = [j for j, v in enumerate(row) if v]
        if len(hits) != 1:
            raise AssertionError("residue pairing is expected to be a signed permutation")
        return hits[0]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "polynomial": self.polynomial,
            "weights": [str(w) for w in self.weights],
            "coxeter_number": self.coxeter_number,
            "top_degree": str(self.top_degree),
            "phi_basis": [str(p) for p in self.phi_basis],
            "theta": [str(t) for t in self.theta],
            "residue_pairing": [[str(v) for v in row] for row in self.residue_pairing],
            "gauges": [g.to_json() for g in self.gauges],
            "cyclotomic_order": self.cyclotomic_order,
        }


def _solve3(a, b):
    """Solve a 3x3 rational system by Cramer's rule."""
    def det(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    d = det(a)
    out = []
    for c in range(3):
        m = [[(b[r] if k == c else a[r][k]) for k in range(3)] for r in range(3)]
        out.append(F(det(m)) / d)
    return tuple(out)


def _exponent_matrix(fam: str, n: int) -> tuple[tuple[int, int, int], ...]:
    if fam == "A":
        return ((n + 1, 0, 0), (0, 2, 0), (0, 0, 2))
    if fam == "D":
        return ((2, 1, 0), (0, n - 1, 0), (0, 0, 2))
    if fam == "E6":
        return ((3, 0, 0), (0, 4, 0), (0, 0, 2))
    if fam == "E7":
        return ((3, 0, 0), (1, 3, 0), (0, 0, 2))
    return ((3, 0, 0), (0, 5, 0), (0, 0, 2))


def _polynomial_text(matrix) -> str:
    terms = []
    for row in matrix:
        terms.append(str(PhiMonomial(F(1), tuple(row))))
    return " + ".join(terms)


def _phi_basis(fam: str, n: int) -> tuple[PhiMonomial, ...]:
    def mono(m1, m2, scalar=1):
        return PhiMonomial(F(scalar), (m1, m2, 0))

    if fam == "A":
        return tuple(mono(i, 0) for i in range(n))
    if fam == "D":
        return tuple(mono(0, i) for i in range(n - 1)) + (mono(1, 0, 2),)
    if fam == "E6":
        return tuple(mono(0, i) for i in range(3)) + tuple(mono(1, i) for i in range(3))
    if fam == "E7":
        return (
            tuple(mono(i, 0) for i in range(3))
            + tuple(mono(i, 1) for i in range(3))
            + (mono(0, 2),)
        )
    return tuple(mono(0, i) for i in range(4)) + tuple(mono(1, i) for i in range(4))


def _residue_pairing(fam: str, n: int, h: int) -> list[list[Fraction]]:
    r = [[F(0)] * n for _ in range(n)]
    if fam == "A":
        for i in range(1, n + 1):
            r[i - 1][h - i - 1] = F(1, 4 * h)
    elif fam == "D":
        for i in range(1, n):
            r[i - 1][n - i - 1] = F(1, 2 * h)
        r[n - 1][n - 1] = F(-1)
    elif fam == "E6":
        for i in range(1, 7):
            r[i - 1][7 - i - 1] = F(1, 2 * h)
    elif fam == "E7":
        for i in range(1, 7):
            r[i - 1][7 - i - 1] = F(1, h)
        r[6][6] = F(-1, 6)
    else:
        for i in range(1, 9):
            r[i - 1][9 - i - 1] = F(1, h)
    return r


def _gauges(fam: str, n: int, h: int) -> tuple[GammaMonomial, ...]:
    G = GammaMonomial
    if fam == "A":
        return tuple(G(2, 0, [(1 - F(i, h), 1)]) for i in range(1, n + 1))
    if fam == "D":
        # slot N-i carries Gamma(m_i/h) with m_i = 2i - 1
        out = [None] * n
        for i in range(1, n):
            out[n - i - 1] = G(2, 0, [(F(2 * i - 1, h), 1)])
        out[n - 1] = G(1, 1)
        return tuple(out)
    if fam in ("E6", "E8"):
        q = 4 if fam == "E6" else 5
        half = q - 1
        low = [G(1, -1, [(1 - F(i, q), 1), (F(2, 3), 1)]) for i in range(1, half + 1)]
        high = [G(1, -1, [(1 - F(i, q), 1), (F(1, 3), 1)]) for i in range(1, half + 1)]
        return tuple(low + high)
    low = [G(1, -1, [(F(3 - i, 3) + F(1, 9), 1), (F(2, 3), 1)]) for i in range(1, 4)]
    high = [G(1, -1, [(F(7 - i, 3) - F(1, 9), 1), (F(1, 3), 1)]) for i in range(4, 7)]
    return tuple(low + high + [G(2, 1)])


def _cyclotomic_order(fam: str, n: int, h: int) -> int:
    if fam == "A":
        return lcm(2, n + 1)
    if fam == "D":
        return lcm(2 * h, 4)
    return {"E6": 24, "E7": 36, "E8": 60}[fam]


@lru_cache(maxsize=None)
def _build(fam: str, n: int) -> SingularityData:
    matrix = _exponent_matrix(fam, n)
    weights = _solve3(matrix, (1, 1, 1))
    top = 3 - 2 * sum(weights)
    h_frac = 2 / (1 - top)
    if h_frac.denominator != 1:
        raise AssertionError("Coxeter number must be an integer")
    h = int(h_frac)
    basis = _phi_basis(fam, n)
    theta = tuple(top / 2 - phi.degree(weights) for phi in basis)
    return SingularityData(
        family=fam,
        rank=n,
        polynomial=_polynomial_text(matrix),
        exponent_matrix=matrix,
        weights=weights,
        coxeter_number=h,
        top_degree=top,
        phi_basis=basis,
        theta=theta,
        residue_pairing=tuple(tuple(row) for row in _residue_pairing(fam, n, h)),
        gauges=_gauges(fam, n, h),
        cyclotomic_order=_cyclotomic_order(fam, n, h),
    )


def singularity_data(family: str, rank: Optional[int] = None) -> SingularityData:
    """Catalog entry for ``family`` (``A``, ``D``, ``E6``, ``E7``, ``E8``) at ``rank``."""
    fam, n = normalize_family(family, rank)
    return _build(fam, n)


def fermat_exponents(family: str, rank: Optional[int] = None) -> Optional[tuple[int, int, int]]:
    """``(a1, a2, a3)`` when f is of Fermat type, otherwise ``None``."""
    fam, n = normalize_family(family, rank)
    if fam == "A":
        return (n + 1, 2, 2)
    if fam == "E6":
        return (3, 4, 2)
    if fam == "E8":
        return (3, 5, 2)
    return None


# ---------------------------------------------------------------------------
# Dual group and sectors
# ---------------------------------------------------------------------------

Phases = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class Sector:
    """A twisted sector ``g`` of G^T with non-zero relative cohomology.

    ``phases`` gives ``g = (exp(2 pi i p1), exp(2 pi i p2), exp(2 pi i p3))``
    with every ``p`` in [0, 1).  Point sectors sit in degree 0, broad ones in
    degree 2.
    """

    label: str
    index: tuple[int, ...]
    phases: Phases
    kind: str
    degree: int

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "index": list(self.index),
            "phases": [str(p) for p in self.phases],
            "kind": self.kind,
            "degree": self.degree,
        }


@dataclass(frozen=True)
class DualGroupData:
    family: str
    rank: int
    exponent_matrix: tuple[tuple[int, int, int], ...]
    generators: tuple[Phases, ...]
    elements: tuple[Phases, ...]
    sectors: tuple[Sector, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def sector(self, label: str) -> Sector:
        for s in self.sectors:
            if s.label == label:
                return s
        raise KeyError(label)

    def sector_position(self, label: str) -> int:
        for pos, s in enumerate(self.sectors):
            if s.label == label:
                return pos
        raise KeyError(label)

    def element_of_monomial(self, exponents) -> Phases:
        """The group element rho_1^(m1+1) rho_2^(m2+1) rho_3^(m3+1)."""
        acc = [F(0)] * 3
        for gen, m in zip(self.generators, exponents):
            for j in range(3):
                acc[j] += gen[j] * (m + 1)
        return tuple(x % 1 for x in acc)

    def sector_of_phases(self, phases) -> Optional[Sector]:
        target = tuple(F(p) % 1 for p in phases)
        for s in self.sectors:
            if s.phases == target:
                return s
        return None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "transposed_exponents": [list(r) for r in self.exponent_matrix],
            "generators": [[str(p) for p in g] for g in self.generators],
            "order": self.order,
            "sectors": [s.to_json() for s in self.sectors],
        }


def _inverse3(m):
    cols = [_solve3(m, tuple(int(r == c) for r in range(3))) for c in range(3)]
    return tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))


@lru_cache(maxsize=None)
def _build_dual(fam: str, n: int) -> DualGroupData:
    a = _exponent_matrix(fam, n)
    inv = _inverse3(a)
    gens = tuple(tuple(x % 1 for x in row) for row in inv)
    transposed = tuple(tuple(a[c][r] for c in range(3)) for r in range(3))

    seen = {(F(0), F(0), F(0))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                cand = tuple((x + y) % 1 for x, y in zip(el, g))
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    elements = tuple(sorted(seen))

    sectors: list[Sector] = []
    fermat = fermat_exponents(fam, n)
    if fermat is not None:
        for ks in product(*(range(1, ai) for ai in fermat)):
            phases = tuple(F(k, ai) for k, ai in zip(ks, fermat))
            label = "e_{" + ",".join(str(k) for k in ks) + "}"
            sectors.append(Sector(label, ks, phases, "point", 0))
    elif fam == "D":
        h = 2 * n - 2
        for idx in range(1, n):
            phases = (F(1, 2), F(2 * idx - 1, h), F(1, 2))
            sectors.append(Sector(f"e_{idx}", (idx,), phases, "point", 0))
        sectors.append(Sector("e_broad", (n,), (F(0), F(0), F(1, 2)), "broad", 2))
    else:  # E7, g = (eta^(3i-r), eta3^r, -1) with eta = exp(2 pi i / 9)
        point = []
        for i in range(1, 4):
            for r in (1, 2):
                idx = 3 * i - r
                phases = (F(idx, 9), F(r, 3), F(1, 2))
                point.append(Sector(f"e_{idx}", (idx,), phases, "point", 0))
        sectors.extend(sorted(point, key=lambda s: s.index))
        sectors.append(Sector("e_broad", (7,), (F(0), F(0), F(1, 2)), "broad", 2))

    for s in sectors:
        if s.phases not in seen:
            raise AssertionError(f"sector {s.label} is not an element of G^T")
    return DualGroupData(fam, n, transposed, gens, elements, tuple(sectors))


def dual_group_data(family: str, rank: Optional[int] = None) -> DualGroupData:
    """The dual group G^T, its generators and its non-zero sectors."""
    fam, n = normalize_family(family, rank)
    return _build_dual(fam, n)
