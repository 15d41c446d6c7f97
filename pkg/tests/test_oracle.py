from fractions import Fraction as F

import mpmath
import pytest

from milnor_gamma.oracle import (
    IntegrandSpec,
    QuadratureError,
    ResidueSpec,
    beta_agreement,
    beta_value,
    catalog_integrand_specs,
    default_digits,
    gamma_value,
    integrand_specs,
    numeric_psi_check,
    quadrature,
    suspension_kernel,
    tanh_sinh,
)
from milnor_gamma.periods import cycle, psi
from milnor_gamma.rootdata import singularity_data

TINY = mpmath.mpf(10) ** -35


def test_gamma_and_beta_values():
    with mpmath.workdps(50):
        assert abs(gamma_value(F(1, 2)) ** 2 - mpmath.pi) < TINY
        assert abs(beta_value(F(1, 2), F(1, 2)) - mpmath.pi) < TINY
    with pytest.raises(ValueError):
        gamma_value(-2)
    with pytest.raises(ValueError):
        beta_value(0, 1)


@pytest.mark.parametrize("p,q,r", [(F(1, 9), F(1, 3), 1), (F(1, 2), F(1, 2), 1), (F(7, 2), F(1, 2), 5), (2, 3, 1)])
def test_quadrature_matches_beta(p, q, r):
    spec = IntegrandSpec("A", 1, 1, cycle("A", 1, 0, 0), F(p), F(q), r, None)
    assert beta_agreement(spec, 50) < mpmath.mpf(10) ** -40


def test_elementary_integrals():
    with mpmath.workdps(50):
        # int_0^1 t^(-1/2) dt = 2 and int_0^1 (1-t)^(-1/3) dt = 3/2
        assert abs(tanh_sinh(lambda t, tc: t ** (-mpmath.mpf(1) / 2), 50) - 2) < TINY
        assert abs(tanh_sinh(lambda t, tc: tc ** (-mpmath.mpf(1) / 3), 50, F(2, 3)) - mpmath.mpf(3) / 2) < TINY
        assert abs(tanh_sinh(lambda t, tc: mpmath.log(t), 50) + 1) < TINY


def test_non_convergence_is_reported():
    with pytest.raises(QuadratureError):
        tanh_sinh(lambda t, tc: 1 if t < mpmath.mpf(1) / 3 else 0, 50, max_level=5)


def test_kernel_homogeneity():
    e = F(-5, 12)
    with mpmath.workdps(50):
        k1 = suspension_kernel(e, 1)
        for lam in (F(1, 2), F(2), F(7, 3)):
            scale = (mpmath.mpf(lam.numerator) / lam.denominator) ** (mpmath.mpf(e.numerator) / e.denominator + 0.5)
            assert abs(suspension_kernel(e, lam) - k1 * scale) < TINY
        # closed form 1/2 B(1/2, e + 1)
        assert abs(k1 - beta_value(F(1, 2), e + 1) / 2) < TINY


def test_spec_shapes():
    specs = integrand_specs(cycle("D", 5, 2))
    assert [s.slot for s in specs] == [1, 2, 3, 4, 5]
    assert isinstance(specs[-1], ResidueSpec)
    assert isinstance(integrand_specs(cycle("E7", None, 0, 0))[-1], ResidueSpec)
    assert all(isinstance(s, IntegrandSpec) for s in integrand_specs(cycle("E8", None, 1, 2)))
    with pytest.raises(ValueError):
        integrand_specs(cycle("D", 5, 2, kind="v"))
    assert len(catalog_integrand_specs("E6")) == 12 * 6


def test_quadrature_is_cached_by_exponents():
    a, b = catalog_integrand_specs("A", 3)[:2]
    assert quadrature(a, 40) is quadrature(a, 40)


@pytest.mark.parametrize(
    "fam,n,label",
    [("A", 1, (0, 0)), ("A", 4, (2, 1)), ("D", 4, (0,)), ("E6", None, (1, 2)), ("E7", None, (2, 1)),
     ("E8", None, (3, 0))],
)
def test_numeric_psi_check(fam, n, label):
    lbl = cycle(fam, n, *label)
    for lam in (F(1, 2), 1, 2):
        report = numeric_psi_check(fam, n, lbl, 50, lam)
        assert report.passed()
        assert report.max_deviation < mpmath.mpf(10) ** -30


def test_d_auxiliary_labels():
    for kind, k in [("v", 1), ("v", 5), ("beta", 3), ("beta", 5)]:
        report = numeric_psi_check("D", 5, cycle("D", 5, k, kind=kind), 40)
        assert report.passed(), (kind, k)


def test_check_is_sensitive():
    report = numeric_psi_check("E6", None, cycle("E6", None, 1, 1), 40)
    other = psi(cycle("E6", None, 1, 2)).values(50)
    assert max(abs(a - b) for a, b in zip(report.actual, other)) > 1e-3
    js = report.to_json()
    assert js["label"] == "alpha_{1,1}" and len(js["slots"]) == 6


def test_default_digits(monkeypatch):
    monkeypatch.delenv("MILNOR_GAMMA_DIGITS", raising=False)
    assert default_digits() == 50
    monkeypatch.setenv("MILNOR_GAMMA_DIGITS", "60")
    assert default_digits() == 60
    monkeypatch.setenv("MILNOR_GAMMA_DIGITS", "12")
    with pytest.raises(ValueError):
        default_digits()


def test_label_of_other_family_rejected():
    with pytest.raises(ValueError):
        numeric_psi_check("A", 2, cycle("A", 3, 0, 0))
    with pytest.raises(ValueError):
        numeric_psi_check("A", 3, cycle("A", 3, 0, 0), lam=0)
    assert singularity_data("A", 3).rank == 3
