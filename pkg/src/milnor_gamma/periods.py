"""Period vectors of vanishing cycles, classical monodromy and the intersection form.

A period vector is stored as a :class:`MilnorVector`: slot ``i`` holds an
exact cyclotomic coefficient and the catalog gauge constant of that slot is
implied.  Cycles are named by :class:`Cycle` labels:

* ``A_N``: ``alpha_{k,a}`` with ``k`` mod ``N+1`` and ``a`` mod 2;
* ``D_N``: ``alpha_k`` for ``0 <= k <= N-1`` together with the auxiliary
  orthonormal vectors ``v_1..v_N`` and the simple roots ``beta_1..beta_N``;
* ``E6``/``E7``/``E8``: ``alpha_{k,a}`` with ``k`` mod 4, 3, 5 and ``a`` mod 3.

For E7 the label ``k`` is only defined mod 3 through ``alpha_{k+3,a} =
alpha_{k,a-1}``, which is applied during normalization.  ``alpha_0`` of D_N is
the cycle over the branch point ``eta^0`` obtained by putting ``k = 0`` in the
closed formula; it equals ``-beta_N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exactnum import (
    CyclotomicNumber,
    GammaMonomial,
    GaugedVector,
    cos_pi,
    gamma_reflect,
    imag_unit,
    sqrt3,
)
from .rootdata import CatalogError, normalize_family, singularity_data

F = Fraction

__all__ = [
    "Cycle",
    "MilnorVector",
    "PairingReductionError",
    "cycle",
    "catalog_cycles",
    "psi",
    "monodromy",
    "monodromy_factors",
    "monodromy_label",
    "intersection",
    "pairing_form",
    "simple_root_labels",
    "simple_root_basis",
    "coxeter_order",
]


class PairingReductionError(ArithmeticError):
    """The intersection pairing did not reduce to a rational number."""


def _z(n: int, p: int) -> CyclotomicNumber:
    return CyclotomicNumber.root_of_unity(n, p)


_CYCLIC = {"A": None, "E6": 4, "E7": 3, "E8": 5}


@dataclass(frozen=True)
class Cycle:
    """A named cycle of the Milnor lattice; build instances with :func:`cycle`."""

    family: str
    rank: int
    kind: str
    k: int
    a: Optional[int] = None

    def __str__(self):
        if self.kind == "alpha" and self.a is not None:
            return f"alpha_{{{self.k},{self.a}}}"
        return f"{self.kind}_{self.k}"


def cycle(family: str, rank: Optional[int], k: int, a: Optional[int] = None, kind: str = "alpha") -> Cycle:
    """Validated and normalized cycle label."""
    fam, n = normalize_family(family, rank)
    k = int(k)
    if fam == "D":
        if kind == "alpha":
            if a is not None or not 0 <= k <= n - 1:
                raise CatalogError(f"D_{n} cycles alpha_k need 0 <= k <= {n - 1}")
        elif kind in ("v", "beta"):
            if a is not None or not 1 <= k <= n:
                raise CatalogError(f"D_{n} labels {kind}_k need 1 <= k <= {n}")
        else:
            raise CatalogError(f"unknown D_{n} label kind {kind!r}")
        return Cycle(fam, n, kind, k, None)
    if kind != "alpha" or a is None:
        raise CatalogError(f"{fam} cycles are labelled alpha_{{k,a}}")
    a = int(a)
    if fam == "A":
        return Cycle(fam, n, kind, k % (n + 1), a % 2)
    if fam == "E7":
        q, k = divmod(k, 3)
        return Cycle(fam, n, kind, k, (a - q) % 3)
    return Cycle(fam, n, kind, k % _CYCLIC[fam], a % 3)


def catalog_cycles(family: str, rank: Optional[int] = None) -> list[Cycle]:
    """Every labelled cycle of the family's catalog, in a fixed order."""
    fam, n = normalize_family(family, rank)
    if fam == "A":
        return [cycle(fam, n, k, a) for a in (0, 1) for k in range(n + 1)]
    if fam == "D":
        return (
            [cycle(fam, n, k) for k in range(1, n)]
            + [cycle(fam, n, k, kind="v") for k in range(1, n + 1)]
            + [cycle(fam, n, k, kind="beta") for k in range(1, n + 1)]
        )
    return [cycle(fam, n, k, a) for a in range(3) for k in range(_CYCLIC[fam])]


class MilnorVector(GaugedVector):
    """An element of the Milnor ring written in the catalog phi-basis."""

    __slots__ = ("family", "rank")

    def __init__(self, family: str, rank: int, coeffs):
        data = singularity_data(family, rank)
        order = data.cyclotomic_order
        super().__init__([c.lift(order) if isinstance(c, CyclotomicNumber)
                          else CyclotomicNumber.rational(c, order) for c in coeffs], data.gauges)
        if len(self.coeffs) != data.rank:
            raise ValueError(f"{data.name} vectors have {data.rank} slots")
        self.family = data.family
        self.rank = data.rank

    def space(self):
        return ("milnor", self.family, self.rank)

    def _with_coeffs(self, coeffs):
        return MilnorVector(self.family, self.rank, coeffs)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "coeffs": [c.to_json() for c in self.coeffs],
            "gauges": [g.to_json() for g in self.gauges],
        }

    def __repr__(self):
        return f"MilnorVector({self.family}, {self.rank}, [{'; '.join(map(str, self.coeffs))}])"


# ---------------------------------------------------------------------------
# Closed-form period vectors
# ---------------------------------------------------------------------------


def _psi_a(n: int, k: int, a: int) -> list[CyclotomicNumber]:
    h = n + 1
    sign = -1 if a % 2 else 1
    return [(_z(h, -k * i) * (_z(h, -i) - 1)).scale(sign) for i in range(1, n + 1)]


def _d_point_part(n: int, k: int) -> list[CyclotomicNumber]:
    h = 2 * n - 2
    out = [CyclotomicNumber.zero()] * n
    for i in range(1, n):
        out[n - i - 1] = _z(h, (2 * i - 1) * k)
    return out


def _psi_d(n: int, kind: str, k: int) -> list[CyclotomicNumber]:
    if kind == "alpha":
        coeffs = _d_point_part(n, k)
        coeffs[-1] = -imag_unit()
        return coeffs
    if kind == "v":
        if k == n:
            return [CyclotomicNumber.zero()] * (n - 1) + [imag_unit()]
        return _d_point_part(n, k)
    # beta
    def v(j):
        return _psi_d(n, "v", j)

    if k <= n - 2:
        left, right, sign = v(k), v(k + 1), -1
    elif k == n - 1:
        left, right, sign = v(n - 1), v(n), -1
    else:
        left, right, sign = v(n - 1), v(n), 1
    return [x + y.scale(sign) for x, y in zip(left, right)]


def _psi_e68(q: int, k: int, a: int) -> list[CyclotomicNumber]:
    s3 = sqrt3()
    up = s3 * _z(12, 1) * _z(3, 2 * a)
    down = s3 * _z(12, -1) * _z(3, a)
    low = [up * _z(q, -k * i) * (1 - _z(q, -i)) for i in range(1, q)]
    high = [down * _z(q, -k * j) * (1 - _z(q, -j)) for j in range(1, q)]
    return low + high


def _psi_e7(k: int, a: int) -> list[CyclotomicNumber]:
    s3 = sqrt3()
    up = -(s3 * _z(12, 1))
    down = -(s3 * _z(12, -1))
    low = [up * _z(9, k * (1 - 3 * i) - 3 * a) for i in range(1, 4)]
    high = [down * _z(9, k * (11 - 3 * i) - 6 * a) for i in range(4, 7)]
    return low + high + [imag_unit()]


@lru_cache(maxsize=None)
def _psi_cached(label: Cycle) -> MilnorVector:
    fam, n = label.family, label.rank
    if fam == "A":
        coeffs = _psi_a(n, label.k, label.a)
    elif fam == "D":
        coeffs = _psi_d(n, label.kind, label.k)
    elif fam == "E7":
        coeffs = _psi_e7(label.k, label.a)
    else:
        coeffs = _psi_e68(4 if fam == "E6" else 5, label.k, label.a)
    return MilnorVector(fam, n, coeffs)


def psi(label: Cycle) -> MilnorVector:
    """The period vector Psi of a labelled cycle."""
    if not isinstance(label, Cycle):
        raise TypeError("psi expects a Cycle label; build one with cycle()")
    return _psi_cached(label)


# ---------------------------------------------------------------------------
# Monodromy
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _monodromy_factors(fam: str, n: int) -> tuple[CyclotomicNumber, ...]:
    data = singularity_data(fam, n)
    order = data.cyclotomic_order
    return tuple((-_z(t.denominator, t.numerator)).lift(order) for t in data.theta)


def monodromy_factors(family: str, rank: Optional[int] = None) -> tuple[CyclotomicNumber, ...]:
    """The slot multipliers ``-exp(2 pi i theta_i)`` of the classical monodromy."""
    fam, n = normalize_family(family, rank)
    return _monodromy_factors(fam, n)


def monodromy(v: MilnorVector) -> MilnorVector:
    """Apply the classical monodromy slot by slot."""
    factors = _monodromy_factors(v.family, v.rank)
    return MilnorVector(v.family, v.rank, [c * f for c, f in zip(v.coeffs, factors)])


def monodromy_label(label: Cycle) -> tuple[int, Cycle]:
    """The tabulated action on labels, as ``(sign, image)``; not defined for D_N."""
    if label.family == "D":
        raise CatalogError("D_N monodromy has no label permutation")
    if label.family == "A":
        return 1, cycle("A", label.rank, label.k + 1, label.a)
    return -1, cycle(label.family, label.rank, label.k + 1, label.a + 1)


# ---------------------------------------------------------------------------
# Intersection pairing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pairing_form(fam: str, n: int) -> tuple[tuple[int, int, CyclotomicNumber], ...]:
    data = singularity_data(fam, n)
    inv_pi = GammaMonomial.pi_power(-2)
    entries = []
    for i in range(n):
        for j in range(n):
            r = data.residue_pairing[i][j]
            if not r:
                continue
            reduced, alg = gamma_reflect(data.gauges[i] * data.gauges[j] * inv_pi)
            if not reduced.is_rational():
                raise PairingReductionError(
                    f"{data.name}: gauge product of slots {i + 1},{j + 1} left {reduced}"
                )
            value = (alg * cos_pi(data.theta[j])).scale(r * reduced.rational)
            entries.append((i, j, value))
    return tuple(entries)


def pairing_form(family: str, rank: Optional[int] = None):
    """Non-zero entries ``(i, j, P_ij)`` with ``(a|b) = sum a_i P_ij b_j`` on coefficients."""
    fam, n = normalize_family(family, rank)
    return _pairing_form(fam, n)


def intersection(a: MilnorVector, b: MilnorVector) -> Fraction:
    """The intersection pairing ``(1/pi) (Psi(a), cos(pi theta) Psi(b))`` as an exact rational."""
    if a.space() != b.space():
        raise ValueError("intersection needs two vectors of the same family and rank")
    total = CyclotomicNumber.zero(a.coeffs[0].order)
    for i, j, p in _pairing_form(a.family, a.rank):
        ai, bj = a.coeffs[i], b.coeffs[j]
        if ai.is_zero() or bj.is_zero():
            continue
        total = total + ai * p * bj
    if not total.is_rational():
        raise PairingReductionError(f"pairing value {total} is not rational")
    return total.to_fraction()


# ---------------------------------------------------------------------------
# Simple roots
# ---------------------------------------------------------------------------


def simple_root_labels(family: str, rank: Optional[int] = None, convention: str = "matrix") -> list[Cycle]:
    """Labels of the simple-root basis, in the order of the tabulated Gram matrices.

    For E6 and E8 the default ``convention="matrix"`` uses ``alpha_{k,-a}`` at
    position ``(q-1)(a-1) + k``; that is the ordering whose Gram matrix is the
    tabulated one.  ``convention="literal"`` uses ``alpha_{k,a}`` at the same
    position, which produces the same matrix with its off-diagonal blocks
    transposed.
    """
    fam, n = normalize_family(family, rank)
    if convention not in ("matrix", "literal"):
        raise ValueError("convention must be 'matrix' or 'literal'")
    if fam == "A":
        return [cycle(fam, n, k, 1) for k in range(1, n + 1)]
    if fam == "D":
        return [cycle(fam, n, k, kind="beta") for k in range(1, n + 1)]
    if fam == "E7":
        labels = []
        for a in (1, 2, 3):
            for k in (0, 1, 2):
                labels.append(cycle(fam, n, k, a % 3))
        return labels[:7]
    q = _CYCLIC[fam]
    sign = 1 if convention == "literal" else -1
    return [cycle(fam, n, k, sign * a) for a in (1, 2) for k in range(1, q)]


def simple_root_basis(family: str, rank: Optional[int] = None, convention: str = "matrix") -> list[MilnorVector]:
    return [psi(lbl) for lbl in simple_root_labels(family, rank, convention)]


def coxeter_order(family: str, rank: Optional[int] = None, limit: int = 1000) -> int:
    """Smallest n >= 1 with monodromy^n fixing every simple root."""
    basis = simple_root_basis(family, rank)
    current = list(basis)
    for step in range(1, limit + 1):
        current = [monodromy(v) for v in current]
        if all(c == b for c, b in zip(current, basis)):
            return step
    raise ArithmeticError("monodromy order exceeds the search limit")
