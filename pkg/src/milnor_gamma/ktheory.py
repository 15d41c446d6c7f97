"""Equivariant relative K-theory of the dual singularity and its Gamma-modified Chern character.

Basis classes are modelled by their Koszul-type complexes of equivariant line
bundles.  A line bundle ``L1^e1 L2^e2 L3^e3`` restricts to a point sector
``g`` as the character ``g^(-e)`` (the involution iota* inverts ``g``), so the
point-sector part of ``ch_Gamma`` is

    (1 / 2 pi) * prod_j Gamma(1 - phase_j(g)) * chi_E(g^-1)

with ``chi_E`` the alternating sum over the complex.  Complexes whose
differentials involve ``x^n`` in the broad direction restrict on the broad
sector ``g = (1, 1, -1)`` to ``P^n`` minus ``P^-n`` style pairs; their Chern
character there is ``-2n`` times the broad class, giving

    (1 / 2 pi) * Gamma(1/2) * (2 pi i) * (-2n).

Each sector coefficient is rescaled onto the gauge of the Milnor-ring slot
that the mir map sends to that sector, and the rescaling factor must be
rational; a non-rational factor raises :class:`GaugeMismatchError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from .exactnum import CyclotomicNumber, GammaMonomial, GaugedVector, imag_unit
from .lattice import lattice_equal, matrix_to_json
from .periods import MilnorVector, catalog_cycles, cycle, psi, simple_root_basis
from .rootdata import (
    DualGroupData,
    dual_group_data,
    fermat_exponents,
    normalize_family,
    singularity_data,
)

F = Fraction

__all__ = [
    "GaugeMismatchError",
    "KComplex",
    "KClass",
    "SectorVector",
    "MirMap",
    "CheckResult",
    "VerificationReport",
    "k_basis",
    "k_basis_labels",
    "k_complexes",
    "fermat_class",
    "reduce_monomial_action",
    "ch_gamma",
    "mir_map",
    "verify_theorem1",
]


class GaugeMismatchError(ArithmeticError):
    """A ch_Gamma coefficient is not a rational multiple of the sector gauge."""


# ---------------------------------------------------------------------------
# Complexes and classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KComplex:
    """A complex of equivariant line bundles, ``terms[d]`` listing degree-``d`` summands.

    ``broad_power`` is the exponent ``n`` of the coordinate that appears as
    ``x^n`` in the differentials along the broad direction; it is 0 when the
    family has no broad sector.
    """

    name: str
    terms: tuple[tuple[tuple[int, int, int], ...], ...]
    broad_power: int = 0

    def character(self) -> dict[tuple[int, int, int], int]:
        out: dict[tuple[int, int, int], int] = {}
        for degree, bundles in enumerate(self.terms):
            sign = -1 if degree % 2 else 1
            for e in bundles:
                out[e] = out.get(e, 0) + sign
        return {e: c for e, c in out.items() if c}


def _fermat_basis_exponents(a: tuple[int, int, int]) -> list[tuple[int, int, int]]:
    return list(product(*(range(ai - 1) for ai in a)))


def _koszul_fermat(m: tuple[int, int, int]) -> KComplex:
    """``L^m (L1 - 1)(L2 - 1)(L3 - 1)`` written as a three-term complex."""
    terms: list[list[tuple[int, int, int]]] = [[], [], [], []]
    for bits in product((1, 0), repeat=3):
        degree = 3 - sum(bits)
        terms[degree].append(tuple(mi + b for mi, b in zip(m, bits)))
    name = "A_{" + ",".join(map(str, m)) + "}"
    return KComplex(name, tuple(tuple(t) for t in terms))


@lru_cache(maxsize=None)
def _complexes(fam: str, n: int) -> tuple[KComplex, ...]:
    a = fermat_exponents(fam, n)
    if a is not None:
        return tuple(_koszul_fermat(m) for m in _fermat_basis_exponents(a))
    out = []
    if fam == "D":
        for i in range(1, n):
            e = i - 1
            out.append(
                KComplex(
                    f"E_{i}",
                    (((1, e, 1),), ((1, e, 0), (0, e, 1)), ((0, e, 0),)),
                    broad_power=1,
                )
            )
        out.append(KComplex(f"E_{n}", (((0, 0, 1),), ((0, 0, 0), (0, 0, 1)), ((0, 0, 0),)), broad_power=2))
        return tuple(out)
    for i in range(1, 7):  # E7
        e = i - 1
        out.append(
            KComplex(
                f"E_{i}",
                (((e, 0, -1),), ((e, 0, 0), (e, 1, -1)), ((e, 1, 0),)),
                broad_power=1,
            )
        )
    out.append(KComplex("E_7", (((0, 0, 1),), ((0, 0, 0), (0, 0, 1)), ((0, 0, 0),)), broad_power=3))
    return tuple(out)


def k_complexes(family: str, rank: Optional[int] = None) -> tuple[KComplex, ...]:
    fam, n = normalize_family(family, rank)
    return _complexes(fam, n)


def k_basis_labels(family: str, rank: Optional[int] = None) -> list[str]:
    return [c.name for c in k_complexes(family, rank)]


@dataclass(frozen=True)
class KClass:
    """Integer coordinates over the catalog K-basis of the family."""

    family: str
    rank: int
    coords: tuple[int, ...]

    def __post_init__(self):
        fam, n = normalize_family(self.family, self.rank)
        if len(self.coords) != n:
            raise ValueError(f"K-classes of {fam} need {n} coordinates")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def _check(self, other: "KClass"):
        if (self.family, self.rank) != (other.family, other.rank):
            raise ValueError("K-classes of different families")

    def __add__(self, other: "KClass") -> "KClass":
        self._check(other)
        return KClass(self.family, self.rank, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def __neg__(self) -> "KClass":
        return KClass(self.family, self.rank, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "KClass":
        return KClass(self.family, self.rank, tuple(int(k) * a for a in self.coords))

    __rmul__ = __mul__


def k_basis(family: str, rank: Optional[int] = None) -> list[KClass]:
    fam, n = normalize_family(family, rank)
    return [KClass(fam, n, tuple(int(i == j) for j in range(n))) for i in range(n)]


def _reduce_coordinate(m: int, a: int) -> dict[int, int]:
    """``L^m (L - 1)`` in Z[L]/(L^a - 1) over the basis ``L^j (L - 1)``, 0 <= j <= a - 2."""
    m %= a
    if m <= a - 2:
        return {m: 1}
    return {j: -1 for j in range(a - 1)}


def reduce_monomial_action(c: KClass, exps: Sequence[int]) -> KClass:
    """Multiply a Fermat-type class by ``L1^e1 L2^e2 L3^e3`` and re-expand over the basis."""
    a = fermat_exponents(c.family, c.rank)
    if a is None:
        raise ValueError(f"{c.family} is not of Fermat type")
    basis = _fermat_basis_exponents(a)
    position = {m: i for i, m in enumerate(basis)}
    out = [0] * len(basis)
    for m, coeff in zip(basis, c.coords):
        if not coeff:
            continue
        parts = [_reduce_coordinate(mi + int(ei), ai) for mi, ei, ai in zip(m, exps, a)]
        for combo in product(*(p.items() for p in parts)):
            target = tuple(j for j, _ in combo)
            weight = coeff
            for _, w in combo:
                weight *= w
            out[position[target]] += weight
    return KClass(c.family, c.rank, tuple(out))


def fermat_class(family: str, rank: Optional[int], m: Sequence[int]) -> KClass:
    """The class of ``L^m (L1-1)(L2-1)(L3-1)`` for any integer exponents ``m``."""
    fam, n = normalize_family(family, rank)
    origin = KClass(fam, n, tuple(int(i == 0) for i in range(n)))
    return reduce_monomial_action(origin, m)


# ---------------------------------------------------------------------------
# Mir maps and sector vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MirMap:
    """``phi_i -> scalar_i * e_{sector_i}``, one assignment per Milnor-ring slot."""

    family: str
    rank: int
    assignments: tuple[tuple[str, Fraction], ...]

    def sector_gauges(self) -> tuple[GammaMonomial, ...]:
        """Gauge of each sector (in catalog sector order): that of its mir-matched slot."""
        data = singularity_data(self.family, self.rank)
        dual = dual_group_data(self.family, self.rank)
        gauges: list[Optional[GammaMonomial]] = [None] * len(dual.sectors)
        for slot, (label, _) in enumerate(self.assignments):
            gauges[dual.sector_position(label)] = data.gauges[slot]
        if any(g is None for g in gauges):
            raise AssertionError("mir map does not reach every sector")
        return tuple(gauges)  # type: ignore[arg-type]

    def apply(self, v: MilnorVector) -> "SectorVector":
        if (v.family, v.rank) != (self.family, self.rank):
            raise ValueError("mir map applied to a vector of another family")
        dual = dual_group_data(self.family, self.rank)
        coeffs = [CyclotomicNumber.zero()] * len(dual.sectors)
        for slot, (label, scalar) in enumerate(self.assignments):
            coeffs[dual.sector_position(label)] = v.coeffs[slot].scale(scalar)
        return SectorVector(self.family, self.rank, coeffs)

    def to_json(self) -> dict:
        data = singularity_data(self.family, self.rank)
        return {
            "family": self.family,
            "rank": self.rank,
            "assignments": [
                {"phi": str(phi), "sector": label, "scalar": str(s)}
                for phi, (label, s) in zip(data.phi_basis, self.assignments)
            ],
        }


@lru_cache(maxsize=None)
def _mir(fam: str, n: int) -> MirMap:
    one = F(1)
    if fam == "A":
        table = [(f"e_{{{i},1,1}}", one) for i in range(1, n + 1)]
    elif fam in ("E6", "E8"):
        q = 4 if fam == "E6" else 5
        table = [(f"e_{{1,{i},1}}", one) for i in range(1, q)]
        table += [(f"e_{{2,{i},1}}", one) for i in range(1, q)]
    elif fam == "D":
        table = [(f"e_{j}", one) for j in range(1, n)] + [("e_broad", F(2))]
    else:
        table = [(f"e_{3 * i - 1}", one) for i in range(1, 4)]
        table += [(f"e_{3 * j - 2}", one) for j in range(1, 4)]
        table += [("e_broad", F(-1))]
    return MirMap(fam, n, tuple(table))


def mir_map(family: str, rank: Optional[int] = None) -> MirMap:
    fam, n = normalize_family(family, rank)
    return _mir(fam, n)


class SectorVector(GaugedVector):
    """An element of relative orbifold cohomology, one coefficient per non-zero sector."""

    __slots__ = ("family", "rank")

    def __init__(self, family: str, rank: int, coeffs):
        fam, n = normalize_family(family, rank)
        gauges = mir_map(fam, n).sector_gauges()
        super().__init__(
            [c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.rational(c) for c in coeffs],
            gauges,
        )
        self.family = fam
        self.rank = n

    def space(self):
        return ("sector", self.family, self.rank)

    def _with_coeffs(self, coeffs):
        return SectorVector(self.family, self.rank, coeffs)

    def first_difference(self, other: "SectorVector") -> Optional[str]:
        dual = dual_group_data(self.family, self.rank)
        for s, a, b in zip(dual.sectors, self.coeffs, other.coeffs):
            if a != b:
                return s.label
        return None

    def to_json(self) -> dict:
        dual = dual_group_data(self.family, self.rank)
        return {
            "family": self.family,
            "rank": self.rank,
            "sectors": [
                {"sector": s.label, "coeff": c.to_json(), "gauge": g.to_json()}
                for s, c, g in zip(dual.sectors, self.coeffs, self.gauges)
            ],
        }

    def __repr__(self):
        return f"SectorVector({self.family}, {self.rank}, [{'; '.join(map(str, self.coeffs))}])"


# ---------------------------------------------------------------------------
# ch_Gamma
# ---------------------------------------------------------------------------


def _gamma_class(phases) -> GammaMonomial:
    return GammaMonomial(1, 0, [(1 - p, 1) for p in phases if p])


def _character_at_inverse(chi: dict, phases) -> CyclotomicNumber:
    total = CyclotomicNumber.zero()
    for e, c in chi.items():
        angle = -sum((F(ej) * p for ej, p in zip(e, phases)), F(0))
        total = total + CyclotomicNumber.root_of_unity(angle.denominator, angle.numerator).scale(c)
    return total


def _rescale(coeff: CyclotomicNumber, raw: GammaMonomial, target: GammaMonomial, where: str) -> CyclotomicNumber:
    ratio = raw / target
    if not ratio.is_rational():
        raise GaugeMismatchError(f"{where}: {raw} is not a rational multiple of {target}")
    return coeff.scale(ratio.rational)


@lru_cache(maxsize=None)
def _ch_basis(fam: str, n: int) -> tuple[SectorVector, ...]:
    dual: DualGroupData = dual_group_data(fam, n)
    gauges = mir_map(fam, n).sector_gauges()
    order = singularity_data(fam, n).cyclotomic_order
    half_over_pi = GammaMonomial(F(1, 2), -2)
    out = []
    for cx in _complexes(fam, n):
        chi = cx.character()
        coeffs = []
        for s, target in zip(dual.sectors, gauges):
            gclass = _gamma_class(s.phases)
            if s.kind == "point":
                raw = half_over_pi * gclass
                value = _character_at_inverse(chi, s.phases)
            else:
                # (1 / 2 pi) Gamma-class (2 pi i) ch, with ch = -2n times the broad class
                raw = gclass
                value = imag_unit().scale(-2 * cx.broad_power)
            where = f"{cx.name} on {s.label}"
            coeffs.append(_rescale(value, raw, target, where).lift(order) if value else CyclotomicNumber.zero(order))
        out.append(SectorVector(fam, n, coeffs))
    return tuple(out)


def ch_gamma(c: KClass) -> SectorVector:
    """The Gamma-modified Chern character of a K-class, as an exact sector vector."""
    basis = _ch_basis(c.family, c.rank)
    order = singularity_data(c.family, c.rank).cyclotomic_order
    coeffs = [CyclotomicNumber.zero(order)] * len(basis[0].coeffs)
    for k, vec in zip(c.coords, basis):
        if k:
            coeffs = [x + y.scale(k) for x, y in zip(coeffs, vec.coeffs)]
    return SectorVector(c.family, c.rank, coeffs)


# ---------------------------------------------------------------------------
# Lattice identity check
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "witness": self.witness}


@dataclass
class VerificationReport:
    family: str
    rank: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness=None) -> None:
        self.checks.append(CheckResult(name, bool(passed), witness))

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _compare(report: VerificationReport, name: str, left: SectorVector, right: SectorVector) -> None:
    diff = left.first_difference(right)
    report.add(name, diff is None, None if diff is None else {"first_differing_sector": diff})


def _mir_invariants(report: VerificationReport, fam: str, n: int) -> None:
    data = singularity_data(fam, n)
    dual = dual_group_data(fam, n)
    mir = mir_map(fam, n)
    labels = [label for label, _ in mir.assignments]
    report.add("mir is a bijection onto the sectors",
               sorted(labels) == sorted(s.label for s in dual.sectors))
    report.add("mir scalars are rational and non-zero",
               all(isinstance(s, Fraction) and s != 0 for _, s in mir.assignments))
    bad = []
    for phi, (label, _) in zip(data.phi_basis, mir.assignments):
        if dual.element_of_monomial(phi.exponents) != dual.sector(label).phases:
            bad.append(str(phi))
    report.add("mir respects the rho^(m+1) sector rule", not bad, {"violations": bad} if bad else None)


def verify_theorem1(family: str, rank: Optional[int] = None) -> VerificationReport:
    """Exact check that mir o Psi and ch_Gamma give the same lattice.

    Failures are recorded in the report rather than raised.
    """
    fam, n = normalize_family(family, rank)
    report = VerificationReport(fam, n)
    _mir_invariants(report, fam, n)
    mir = mir_map(fam, n)
    basis = k_basis(fam, n)
    try:
        images = [ch_gamma(c) for c in basis]
    except GaugeMismatchError as exc:
        report.add("ch_Gamma gauges match the mir-matched slot gauges", False, str(exc))
        return report
    report.add("ch_Gamma gauges match the mir-matched slot gauges", True)

    def mpsi(label):
        return mir.apply(psi(label))

    if fam == "A":
        for lbl in catalog_cycles(fam, n):
            target = ch_gamma(fermat_class(fam, n, (lbl.k, 0, lbl.a)))
            _compare(report, f"mir Psi({lbl}) = ch_Gamma(A_{{{lbl.k},0,{lbl.a}}})", mpsi(lbl), target)
    elif fam in ("E6", "E8"):
        for lbl in catalog_cycles(fam, n):
            target = -ch_gamma(fermat_class(fam, n, (lbl.a, lbl.k, 0)))
            _compare(report, f"mir Psi({lbl}) = -ch_Gamma(A_{{{lbl.a},{lbl.k},0}})", mpsi(lbl), target)
    elif fam == "D":
        for k in range(1, n):
            lbl = cycle(fam, n, k - 1)
            _compare(report, f"mir Psi({lbl}) = ch_Gamma(E_{k})", mpsi(lbl), images[k - 1])
        h = 2 * n - 2
        closed = SectorVector(fam, n, [CyclotomicNumber.zero()] * (n - 1) + [imag_unit().scale(-4)])
        _compare(report, "ch_Gamma(E_N) = -4 i Gamma(1/2) e_N", images[n - 1], closed)
        for i in range(1, n):
            coeffs = [
                CyclotomicNumber.root_of_unity(h, -(2 * a - 1) * (i - 1))
                for a in range(1, n)
            ] + [imag_unit().scale(-2)]
            closed_i = SectorVector(fam, n, coeffs)
            _compare(report, f"ch_Gamma(E_{i}) matches its closed form", images[i - 1], closed_i)
    else:  # E7
        for l in range(1, 7):
            m, k = divmod(l - 1, 3)
            lbl = cycle(fam, n, k, -m)
            _compare(report, f"mir Psi({lbl}) = ch_Gamma(E_{l})", mpsi(lbl), images[l - 1])
        for k in range(3):
            total = psi(cycle(fam, n, k, 0)) + psi(cycle(fam, n, k, 1)) + psi(cycle(fam, n, k, 2))
            _compare(report, f"mir Psi(alpha_{{{k},0}}+alpha_{{{k},1}}+alpha_{{{k},2}}) = ch_Gamma(E_7)",
                     mir.apply(total), images[6])

    lhs = [mir.apply(v) for v in simple_root_basis(fam, n)]
    eq = lattice_equal(lhs, images)
    report.add(
        "mir Psi(simple roots) and ch_Gamma(K-basis) span the same lattice",
        eq.equal,
        {"change_of_basis": matrix_to_json(eq.change_of_basis)} if eq.equal else {"reason": eq.reason},
    )
    return report
