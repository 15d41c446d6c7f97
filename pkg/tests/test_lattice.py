import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from closed_forms import d_cartan
from milnor_gamma.lattice import (
    LatticePresentation,
    NonIntegralPairingError,
    determinant,
    enumerate_roots,
    gram,
    hermite_normal_form,
    identity,
    lattice_equal,
    ldl_decomposition,
    matmul,
    matrix_from_json,
    matrix_to_json,
    smith_normal_form,
)
from milnor_gamma.periods import cycle, psi, simple_root_basis

A2 = [[2, -1], [-1, 2]]


def cofactor_det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def box_roots(g, bound):
    n = len(g)
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if sum(v[i] * g[i][j] * v[j] for i in range(n) for j in range(n)) == 2:
            out.append(v)
    return sorted(out)


square = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))
rect = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda rc: st.lists(st.lists(st.integers(-9, 9), min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


@settings(max_examples=60, deadline=None)
@given(square)
def test_determinant_matches_cofactor_expansion(m):
    assert determinant(m) == cofactor_det(m)


@settings(max_examples=60, deadline=None)
@given(rect)
def test_smith_normal_form(m):
    diag, left, right = smith_normal_form(m)
    d = matmul(matmul(left, m), right)
    rows, cols = len(m), len(m[0])
    for i in range(rows):
        for j in range(cols):
            assert d[i][j] == (diag[i] if i == j else 0)
    assert abs(determinant(left)) == 1 and abs(determinant(right)) == 1
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)


@settings(max_examples=60, deadline=None)
@given(rect)
def test_hermite_normal_form(m):
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    assert abs(determinant(u)) == 1
    last_pivot = -1
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        assert p > last_pivot and row[p] > 0
        for other in h[: h.index(row)]:
            assert 0 <= other[p] < row[p]
        last_pivot = p


def test_snf_examples():
    assert smith_normal_form(A2)[0] == [1, 3]
    assert smith_normal_form(d_cartan(4))[0] == [1, 1, 2, 2]
    assert smith_normal_form(d_cartan(5))[0] == [1, 1, 1, 1, 4]


def test_ldl():
    d, q = ldl_decomposition(A2)
    assert d == [F(2), F(3, 2)]
    with pytest.raises(Exception):
        ldl_decomposition([[1, 2], [2, 1]])


@pytest.mark.parametrize("g,bound,count", [(A2, 2, 6), (d_cartan(4), 2, 24)])
def test_roots_against_box_search(g, bound, count):
    roots = enumerate_roots(g)
    assert roots == box_roots(g, bound)
    assert len(roots) == count


def test_e6_roots_against_box_search():
    g = gram(simple_root_basis("E6"))
    assert enumerate_roots(g) == box_roots(g, 3)


@pytest.mark.parametrize("norm,count", [(4, 0), (6, 6), (8, 6), (14, 12)])
def test_enumerate_other_norms(norm, count):
    # a^2 - ab + b^2 = norm/2 counts Eisenstein integers of that norm
    found = enumerate_roots(A2, norm=norm)
    brute = [v for v in itertools.product(range(-5, 6), repeat=2)
             if 2 * v[0] ** 2 - 2 * v[0] * v[1] + 2 * v[1] ** 2 == norm]
    assert found == sorted(brute)
    assert len(found) == count


def test_lattice_equal_basics():
    basis = simple_root_basis("D", 5)
    perm = [-basis[3], basis[0], basis[4] + basis[1], basis[1], basis[2]]
    eq = lattice_equal(basis, perm)
    assert eq.equal
    m = eq.change_of_basis
    assert abs(determinant(m)) == 1
    for j, target in enumerate(perm):
        acc = basis[0] * 0
        for i, b in enumerate(basis):
            acc = acc + b * m[i][j]
        assert acc == target
    assert lattice_equal(perm, basis).equal

    doubled = [b * 2 for b in basis]
    neq = lattice_equal(basis, doubled)
    assert not neq.equal and "32" in neq.reason
    assert not lattice_equal(doubled, basis).equal

    halves = [b * F(1, 2) for b in basis]
    assert not lattice_equal(basis, halves).equal


def test_lattice_equal_detects_other_span():
    basis = simple_root_basis("A", 3)
    other = [basis[0], basis[1], basis[0] + basis[1]]
    res = lattice_equal(basis, other)
    assert not res.equal


def test_gram_rejects_non_integral():
    v = psi(cycle("D", 4, 4, kind="v"))
    with pytest.raises(NonIntegralPairingError):
        gram([v * F(1, 2), v])


def test_presentation_and_json():
    lat = LatticePresentation.from_basis(simple_root_basis("E7"))
    assert determinant(lat.gram) == 2
    assert matrix_from_json(matrix_to_json(lat.gram)) == lat.gram
    assert matrix_to_json(identity(2)) == [["1", "0"], ["0", "1"]]
    assert len(enumerate_roots(lat)) == 126
