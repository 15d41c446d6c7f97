"""Integer lattice algebra for the Milnor lattice images.

Matrices are plain ``list[list[int]]``.  The routines here are exact:
Bareiss elimination for determinants, Smith and Hermite normal forms with
unimodular transforms, Fincke-Pohst style enumeration of norm-2 vectors, and
a certificate of lattice equality for two bases of period vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt, lcm
from typing import Optional, Sequence, Union

from .exactnum import GaugedVector
from .periods import intersection

IntMatrix = list[list[int]]

__all__ = [
    "IntMatrix",
    "LatticeError",
    "NonIntegralPairingError",
    "SingularBasisError",
    "LatticePresentation",
    "LatticeEquality",
    "identity",
    "matmul",
    "gram",
    "determinant",
    "smith_normal_form",
    "hermite_normal_form",
    "ldl_decomposition",
    "enumerate_roots",
    "lattice_equal",
    "matrix_to_json",
    "matrix_from_json",
]


class LatticeError(ValueError):
    pass


class NonIntegralPairingError(LatticeError):
    pass


class SingularBasisError(LatticeError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise LatticeError("shape mismatch in matrix product")
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def _check_rect(m: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise LatticeError("ragged matrix")
    return rows, cols


def matrix_to_json(m: Sequence[Sequence[int]]) -> list[list[str]]:
    return [[str(int(x)) for x in row] for row in m]


def matrix_from_json(data) -> IntMatrix:
    return [[int(x) for x in row] for row in data]


# ---------------------------------------------------------------------------
# Gram matrices and determinants
# ---------------------------------------------------------------------------


def gram(basis: Sequence[GaugedVector]) -> IntMatrix:
    """Integer matrix of intersection numbers of ``basis``."""
    out: IntMatrix = []
    values = {}
    for i, x in enumerate(basis):
        row = []
        for j, y in enumerate(basis):
            if (j, i) in values:
                v = values[(j, i)]
            else:
                v = intersection(x, y)
                values[(i, j)] = v
            if v.denominator != 1:
                raise NonIntegralPairingError(f"pairing ({i + 1}|{j + 1}) = {v} is not an integer")
            row.append(int(v))
        out.append(row)
    return out


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    rows, cols = _check_rect(m)
    if rows != cols:
        raise LatticeError("determinant of a non-square matrix")
    n = rows
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], IntMatrix, IntMatrix]:
    """``(diag, left, right)`` with ``left * m * right`` diagonal, ``d_1 | d_2 | ...``.

    ``left`` and ``right`` are unimodular; the diagonal entries are
    non-negative and ``diag`` has ``min(rows, cols)`` entries.
    """
    rows, cols = _check_rect(m)
    a = [list(map(int, r)) for r in m]
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in a:
            r[dst] += q * r[src]
        for r in right:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    clean = clean and a[t][j] == 0
            if not clean:
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, ci, cj = min(cands)
                if ci != t:
                    swap_rows(t, ci)
                else:
                    swap_cols(t, cj)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, left, right


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form ``(h, u)`` with ``u * m = h`` and ``u`` unimodular.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``; zero rows sit at the bottom.
    """
    rows, cols = _check_rect(m)
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [(abs(a[i][c]), i) for i in range(r, rows) if a[i][c]]
            if not nz:
                break
            _, p = min(nz)
            a[r], a[p] = a[p], a[r]
            u[r], u[p] = u[p], u[r]
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    done = done and a[i][c] == 0
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u


# ---------------------------------------------------------------------------
# Root enumeration
# ---------------------------------------------------------------------------


@dataclass
class LatticePresentation:
    """A basis of period vectors together with its Gram matrix."""

    family: str
    rank: int
    basis: list = field(repr=False)
    gram: IntMatrix = field(default_factory=list)

    @classmethod
    def from_basis(cls, basis: Sequence[GaugedVector]) -> "LatticePresentation":
        basis = list(basis)
        if not basis:
            raise LatticeError("empty basis")
        first = basis[0]
        return cls(getattr(first, "family", "?"), getattr(first, "rank", len(first)), basis, gram(basis))


def ldl_decomposition(g: Sequence[Sequence[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``(d, q)`` with ``x^T g x = sum_i d_i (x_i + sum_{j>i} q[i][j] x_j)^2``.

    Raises :class:`LatticeError` when ``g`` is not positive definite.
    """
    n, cols = _check_rect(g)
    if n != cols:
        raise LatticeError("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise LatticeError("Gram matrix must be symmetric")
    a = [[Fraction(x) for x in row] for row in g]
    d = [Fraction(0)] * n
    q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[i][j] = a[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                a[k][l] -= q[i][k] * q[i][l] * d[i]
                a[l][k] = a[k][l]
    return d, q


def _floor_center_plus_root(c: Fraction, s: Fraction) -> int:
    """floor(c + sqrt(s)) for rationals c and s >= 0, exactly."""
    x = floor(c + Fraction(isqrt(s.numerator * s.denominator), s.denominator))
    # (x - c)^2 <= s with x >= c certifies x <= c + sqrt(s)
    while x + 1 <= c or (x + 1 - c) ** 2 <= s:
        x += 1
    while x > c and (x - c) ** 2 > s:
        x -= 1
    return x


def enumerate_roots(lat: Union[LatticePresentation, Sequence[Sequence[int]]], norm: int = 2) -> list[tuple[int, ...]]:
    """All integer vectors ``x`` with ``x^T G x == norm``, sorted.

    The search walks the coordinates from last to first and bounds each one
    through the rational LDL decomposition of ``G``, so no coefficient box
    has to be guessed.
    """
    g = lat.gram if isinstance(lat, LatticePresentation) else [list(r) for r in lat]
    n = len(g)
    if n == 0:
        return []
    d, q = ldl_decomposition(g)
    bound = Fraction(norm)
    x = [0] * n
    found: list[tuple[int, ...]] = []

    def search(i: int, budget: Fraction):
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        s = budget / d[i]
        hi = _floor_center_plus_root(center, s)
        lo = -_floor_center_plus_root(-center, s)
        for xi in range(lo, hi + 1):
            rest = budget - d[i] * (xi - center) ** 2
            if rest < 0:
                continue
            x[i] = xi
            if i == 0:
                if rest == 0:
                    found.append(tuple(x))
            else:
                search(i - 1, rest)
        x[i] = 0

    search(n - 1, bound)
    return sorted(found)


# ---------------------------------------------------------------------------
# Lattice equality
# ---------------------------------------------------------------------------


@dataclass
class LatticeEquality:
    """Outcome of :func:`lattice_equal`.

    ``change_of_basis`` is the integer matrix ``M`` with ``basis2[j] =
    sum_i M[i][j] basis1[i]`` when the lattices agree.  ``rational_matrix``
    is the solution over Q whenever ``basis2`` lies in the rational span of
    ``basis1`` (``None`` otherwise).
    """

    equal: bool
    change_of_basis: Optional[IntMatrix]
    rational_matrix: Optional[list[list[Fraction]]]
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "change_of_basis": matrix_to_json(self.change_of_basis) if self.change_of_basis else None,
            "reason": self.reason,
        }


def _rational_coordinates(vectors: Sequence[GaugedVector], order: int) -> list[list[Fraction]]:
    out = []
    for v in vectors:
        coords: list[Fraction] = []
        for c in v.coeffs:
            coords.extend(c.lift(order).coeffs)
        out.append(coords)
    return out


def lattice_equal(basis1: Sequence[GaugedVector], basis2: Sequence[GaugedVector]) -> LatticeEquality:
    """Decide whether two bases span the same lattice.

    Every coefficient is expanded over Q in the power basis of a common
    cyclotomic field, so the slot-wise equations ``basis2 = basis1 * M``
    become a rational linear system.  The lattices agree iff the solution
    ``M`` is integral with determinant +-1.
    """
    b1, b2 = list(basis1), list(basis2)
    n = len(b1)
    if n != len(b2):
        raise LatticeError("bases must have the same cardinality")
    if n == 0:
        return LatticeEquality(True, [], [], "empty")
    space = b1[0].space()
    if any(v.space() != space for v in b1 + b2):
        raise LatticeError("all vectors must live in the same space")
    order = 1
    for v in b1 + b2:
        for c in v.coeffs:
            order = lcm(order, c.order)
    cols1 = _rational_coordinates(b1, order)
    cols2 = _rational_coordinates(b2, order)
    dim = len(cols1[0])
    # augmented rows: [basis1 coordinates | basis2 coordinates]
    rows = [[cols1[j][r] for j in range(n)] + [cols2[j][r] for j in range(n)] for r in range(dim)]
    rows = [r for r in rows if any(r)]
    pivot_row = 0
    for c in range(n):
        piv = next((r for r in range(pivot_row, len(rows)) if rows[r][c]), None)
        if piv is None:
            raise SingularBasisError("the first basis is not linearly independent")
        rows[pivot_row], rows[piv] = rows[piv], rows[pivot_row]
        pr = rows[pivot_row]
        inv = 1 / pr[c]
        rows[pivot_row] = pr = [x * inv for x in pr]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], pr)]
        pivot_row += 1
    if any(any(r[n:]) for r in rows[n:]):
        return LatticeEquality(False, None, None, "second basis leaves the rational span of the first")
    m = [rows[i][n:] for i in range(n)]
    if any(x.denominator != 1 for row in m for x in row):
        return LatticeEquality(False, None, m, "change of basis is not integral")
    mi = [[int(x) for x in row] for row in m]
    det = determinant(mi)
    if abs(det) != 1:
        return LatticeEquality(False, None, m, f"change of basis has determinant {det}")
    return LatticeEquality(True, mi, m, "unimodular")
