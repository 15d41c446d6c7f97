"""Acceptance criteria, one test per criterion.

Timed criteria clear every memo cache of the package first, so the timings
are cold-start numbers.  Run under pytest for the summary lines (see
conftest.py), or directly with ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from closed_forms import REFERENCE_GRAMS, closed_pairing, d_cartan  # noqa: E402

import milnor_gamma  # noqa: E402
from milnor_gamma import checks  # noqa: E402
from milnor_gamma.ktheory import verify_theorem1  # noqa: E402
from milnor_gamma.lattice import determinant, enumerate_roots, gram, smith_normal_form  # noqa: E402
from milnor_gamma.periods import catalog_cycles, cycle, intersection, psi, simple_root_basis  # noqa: E402


def cold():
    """Drop every functools cache in the package."""
    for mod in list(sys.modules.values()):
        if getattr(mod, "__name__", "").startswith("milnor_gamma"):
            for obj in vars(mod).values():
                clear = getattr(obj, "cache_clear", None)
                if callable(clear):
                    clear()


def timed(fn):
    cold()
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_1_reference_matrices():
    def run():
        return {fam: gram(simple_root_basis(fam)) for fam in ("E6", "E7", "E8")}

    grams, elapsed = timed(run)
    for fam, det in (("E6", 3), ("E7", 2), ("E8", 1)):
        assert grams[fam] == REFERENCE_GRAMS[fam], fam
        assert determinant(grams[fam]) == det
    assert elapsed < 1.0, f"{elapsed:.2f} s"


def test_criterion_2_a_series_law():
    for n in range(1, 13):
        h = n + 1
        basis = [psi(cycle("A", n, k, 1)) for k in range(1, n + 1)]
        g = gram(basis)
        for k in range(1, n + 1):
            for l in range(1, n + 1):
                d = (l - k) % h
                assert g[k - 1][l - 1] == 2 * (d == 0) - (d == 1) - (d == n)
        assert determinant(g) == n + 1


def test_criterion_3_d_series_structure():
    for n in range(4, 11):
        v = [psi(cycle("D", n, k, kind="v")) for k in range(1, n + 1)]
        assert gram(v) == [[int(i == j) for j in range(n)] for i in range(n)]
        for k in range(1, n):
            assert psi(cycle("D", n, k)) == v[k - 1] - v[n - 1]
        g = gram(simple_root_basis("D", n))
        assert g == d_cartan(n)
        diag, _, _ = smith_normal_form(g)
        # discriminant group Z/2 x Z/2 for even N, Z/4 for odd N
        tail = [2, 2] if n % 2 == 0 else [1, 4]
        assert diag == [1] * (n - 2) + tail
        assert determinant(g) == 4


def test_criterion_4_monodromy():
    for fam, n in checks.targets("monodromy", None, None):
        report = checks.verify_monodromy(fam, n)
        assert report.passed, (fam, n, [c.to_json() for c in report.failures()])


def test_criterion_5_root_counts():
    for fam, n in checks.targets("roots", None, None):
        if fam == "E8":
            continue
        assert len(enumerate_roots(gram(simple_root_basis(fam, n)))) == checks.expected_root_count(fam, n)

    roots, elapsed = timed(lambda: enumerate_roots(gram(simple_root_basis("E8"))))
    assert len(roots) == 240
    assert elapsed < 10.0, f"{elapsed:.2f} s"


def test_criterion_6_theorem1():
    def run():
        return [verify_theorem1(fam, n) for fam, n in checks.targets("theorem1", None, None)]

    reports, elapsed = timed(run)
    for rep in reports:
        assert rep.passed, (rep.family, rep.rank, [c.to_json() for c in rep.failures()])
        names = [c.name for c in rep.checks]
        if rep.family == "E7":
            assert any("E_7" in s for s in names)
        if rep.family == "D":
            assert "ch_Gamma(E_N) = -4 i Gamma(1/2) e_N" in names
    assert len(reports) == 12 + 7 + 3
    assert elapsed < 5.0, f"{elapsed:.2f} s"


def test_criterion_7_pairing_reduction():
    rng = random.Random(20261015)
    pools = {}
    for fam, n in checks.targets("theorem1", None, None):
        labels = list(catalog_cycles(fam, n))
        if fam == "D":
            alphas = [cycle(fam, n, k) for k in range(n)]
            vs = [c for c in labels if c.kind == "v"]
            pools[(fam, n)] = [alphas, vs]
        else:
            pools[(fam, n)] = [labels]
    keys = sorted(pools)
    for _ in range(1000):
        pool = rng.choice(pools[rng.choice(keys)])
        x, y = rng.choice(pool), rng.choice(pool)
        value = intersection(psi(x), psi(y))
        assert value.denominator == 1
        assert value == closed_pairing(x, y), (x, y)


def test_criterion_8_numerical_oracle():
    def run():
        return [checks.verify_oracle(fam, n, 50) for fam, n in checks.targets("oracle", None, None)]

    reports, elapsed = timed(run)
    for rep in reports:
        assert rep.passed, (rep.family, rep.rank, [c.to_json() for c in rep.failures()])
        assert len(rep.checks) == 1 + len(checks.ORACLE_LAMBDAS)
    assert elapsed < 60.0, f"{elapsed:.2f} s"


CRITERIA = [
    test_criterion_1_reference_matrices,
    test_criterion_2_a_series_law,
    test_criterion_3_d_series_structure,
    test_criterion_4_monodromy,
    test_criterion_5_root_counts,
    test_criterion_6_theorem1,
    test_criterion_7_pairing_reduction,
    test_criterion_8_numerical_oracle,
]


if __name__ == "__main__":
    failed = 0
    for test in CRITERIA:
        start = time.perf_counter()
        try:
            test()
            status = "PASS"
        except AssertionError as exc:
            status = f"FAIL ({exc})"
            failed += 1
        label = test.__name__.removeprefix("test_").replace("_", " ")
        print(f"{label}: {status} [{time.perf_counter() - start:.2f} s]")
    print(f"milnor_gamma {milnor_gamma.__version__}: {len(CRITERIA) - failed}/{len(CRITERIA)} criteria pass")
    sys.exit(1 if failed else 0)
